// fragnet.hpp — convenience umbrella include.

#pragma once

#include "fragnet/correlation.hpp"
#include "fragnet/curvature.hpp"
#include "fragnet/date.hpp"
#include "fragnet/market_graph.hpp"
#include "fragnet/mds.hpp"
#include "fragnet/network_build.hpp"
#include "fragnet/network_measures.hpp"
#include "fragnet/panel.hpp"
#include "fragnet/pipeline.hpp"
#include "fragnet/planarity.hpp"
#include "fragnet/portfolio.hpp"
#include "fragnet/shortest_paths.hpp"
#include "fragnet/wasserstein.hpp"
