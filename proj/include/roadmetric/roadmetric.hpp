#pragma once

#include "roadmetric/analysis.hpp"
#include "roadmetric/dijkstra.hpp"
#include "roadmetric/eps_graph.hpp"
#include "roadmetric/geometry.hpp"
#include "roadmetric/parallel.hpp"
#include "roadmetric/report.hpp"
#include "roadmetric/rng.hpp"
#include "roadmetric/sampler.hpp"
#include "roadmetric/scene_io.hpp"
#include "roadmetric/solver.hpp"
#include "roadmetric/stats.hpp"
#include "roadmetric/svg.hpp"
