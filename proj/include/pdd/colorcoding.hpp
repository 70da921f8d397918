#pragma once

#include "pdd/colorcoding/families.hpp"
#include "pdd/colorcoding/k_colored.hpp"
