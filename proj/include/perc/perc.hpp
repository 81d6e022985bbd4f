#pragma once

#include "perc/bigint.hpp"
#include "perc/error.hpp"
#include "perc/exact_count.hpp"
#include "perc/lattice.hpp"
#include "perc/mc.hpp"
#include "perc/patch.hpp"
#include "perc/rng.hpp"
#include "perc/symbolic.hpp"
#include "perc/threshold.hpp"
#include "perc/union_find.hpp"

namespace perc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace perc
