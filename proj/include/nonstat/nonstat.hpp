// Umbrella header.

#pragma once

#include "nonstat/classical.hpp"
#include "nonstat/compare.hpp"
#include "nonstat/dataset.hpp"
#include "nonstat/errors.hpp"
#include "nonstat/expr.hpp"
#include "nonstat/parse.hpp"
#include "nonstat/rng.hpp"
#include "nonstat/stats.hpp"
#include "nonstat/substitution.hpp"
