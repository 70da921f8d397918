#pragma once

#include "pdd/core/diversity.hpp"
#include "pdd/core/errors.hpp"
#include "pdd/core/food_web.hpp"
#include "pdd/core/instance.hpp"
#include "pdd/core/phylo_tree.hpp"
#include "pdd/core/taxon_set.hpp"
#include "pdd/core/viability.hpp"
