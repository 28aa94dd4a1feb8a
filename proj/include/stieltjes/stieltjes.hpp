#pragma once

// Umbrella header for the whole library.

#include "classify.hpp"
#include "error.hpp"
#include "expr.hpp"
#include "function.hpp"
#include "grid.hpp"
#include "hausdorff.hpp"
#include "io.hpp"
#include "jet.hpp"
#include "measure.hpp"
#include "operators.hpp"
#include "real.hpp"
