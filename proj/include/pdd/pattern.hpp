#pragma once

#include "pdd/pattern/pattern_tree.hpp"
#include "pdd/pattern/reductions.hpp"
#include "pdd/pattern/solver.hpp"
