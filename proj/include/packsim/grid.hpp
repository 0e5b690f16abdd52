#pragma once

#include <cmath>
#include <cstdint>

#include "packsim/fraction.hpp"

namespace packsim {

/// Job sizes live on a fixed 12-decimal grid: a size is an integer count of
/// grid units with 10^12 units per unit of (normalized) server capacity.
/// All packing feasibility checks are therefore exact integer arithmetic;
/// residuals cannot drift.
using Units = std::int64_t;

inline constexpr Units kUnitScale = 1'000'000'000'000;

inline Units to_units(double x) { return static_cast<Units>(std::llround(x * static_cast<double>(kUnitScale))); }

inline double to_real(Units u) { return static_cast<double>(u) / static_cast<double>(kUnitScale); }

inline Frac units_to_frac(Units u) { return Frac(u, kUnitScale); }

/// Exact only when the fraction lies on the grid (denominator divides 10^12).
inline bool frac_on_grid(const Frac& f) { return kUnitScale % f.den == 0; }

inline Units frac_to_units(const Frac& f) { return f.num * (kUnitScale / f.den); }

}  // namespace packsim
