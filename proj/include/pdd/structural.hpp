#pragma once

#include "pdd/structural/cluster.hpp"
#include "pdd/structural/cocluster.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/flow.hpp"
#include "pdd/structural/hitting_set.hpp"
#include "pdd/structural/knapsack.hpp"
#include "pdd/structural/min_cost_flow.hpp"
#include "pdd/structural/modulator.hpp"
#include "pdd/structural/outforest.hpp"
#include "pdd/structural/tree_decomposition.hpp"
#include "pdd/structural/treewidth.hpp"
