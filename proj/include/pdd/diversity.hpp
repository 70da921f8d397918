#pragma once

#include "pdd/diversity/d_colored.hpp"
#include "pdd/diversity/edge_colors.hpp"
