#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packsim/fraction.hpp"
#include "packsim/grid.hpp"

namespace packsim {

/// Half-open interval (lo, hi] with exact endpoints.
struct Interval {
    Frac lo;
    Frac hi;

    bool contains(const Frac& x) const { return lo < x && x <= hi; }
    bool contained_in(const Interval& other) const { return other.lo <= lo && hi <= other.hi; }
    bool empty() const { return !(lo < hi); }
};

enum class PartitionKind { universal, intervals };

enum class RoundingMode { upper, lower };

/// A finite partition of (0,1] into typed half-open intervals. Subsets are
/// ordered descending (type 0 contains 1.0), so the type index never
/// increases as the size grows. When the smallest lo is positive, the
/// leftover (0, lo] is not a subset of its own: sizes landing there map to
/// the last type and are rounded up to that lo.
struct PartitionSpec {
    PartitionKind kind = PartitionKind::intervals;
    int levels = 0;  // J for the universal partition, 0 otherwise
    std::vector<Interval> subsets;
    int collapsed_intervals = 0;  // degenerate quantile intervals dropped

    int type_count() const { return static_cast<int>(subsets.size()); }
    const Frac& residual_bound() const { return subsets.back().lo; }
    bool has_residual() const { return !subsets.back().lo.is_zero(); }

    std::string to_json() const;
};

struct TypedSize {
    int type = -1;
    Frac rounded;
};

/// The geometric 2J-interval partition of (2^-J, 1]: subset 2m is
/// ((2/3)2^-m, 2^-m], subset 2m+1 is ((1/2)2^-m, (2/3)2^-m]. Sizes in
/// (0, 2^-J] map to type 2J-1 rounded up to 2^-J. J in [2, 12]; the upper
/// bound keeps 2^-J exactly representable on the size grid.
PartitionSpec universal_partition(int j_levels);

/// Total on (0,1]: unique type plus the rounded size.
TypedSize type_of(const Frac& size, const PartitionSpec& spec);

/// Grid variant used on the simulation path.
struct TypedUnits {
    int type = -1;
    Units rounded = 0;
};
TypedUnits type_of_units(Units size, const PartitionSpec& spec);

struct JChoice {
    int j_levels = 2;
    bool capped = false;  // cdf mass near 0 never fell below epsilon
};

/// Smallest J >= 2 with cdf(2^-J) < epsilon, capped at j_max.
JChoice choose_j(const std::function<double(double)>& cdf, double epsilon, int j_max = 12);

/// 2^(n+1) quantile intervals of a continuous cdf; interior breakpoints are
/// found by bisection (leftmost solution) to 1e-12 and snapped to the size
/// grid. Adjacent identical quantiles collapse and are counted.
PartitionSpec quantile_partition(const std::function<double(double)>& cdf, int n);

/// Splits subsets at the given interior breakpoints; every subset of the
/// result is contained in a subset of the input.
PartitionSpec refine(const PartitionSpec& spec, const std::vector<Frac>& breakpoints);

/// True when every subset of `fine` is contained in some subset of `coarse`
/// and the residual treatment matches.
bool is_refinement_of(const PartitionSpec& fine, const PartitionSpec& coarse);

}  // namespace packsim
