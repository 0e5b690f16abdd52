#include "packsim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace packsim {

namespace {

Frac pow2_frac(int m) {  // 2^-m
    return Frac(1, std::int64_t{1} << m);
}

std::string decimal12(const Frac& f) {
    // 12-decimal rendering for inspection; exact form is emitted alongside.
    double v = f.to_double();
    std::ostringstream os;
    os.precision(12);
    os << std::fixed << v;
    std::string s = os.str();
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace

PartitionSpec universal_partition(int j_levels) {
    if (j_levels < 2) throw std::invalid_argument("universal_partition: J must be at least 2");
    if (j_levels > 12)
        throw std::invalid_argument("universal_partition: J above 12 leaves 2^-J off the size grid");
    PartitionSpec spec;
    spec.kind = PartitionKind::universal;
    spec.levels = j_levels;
    spec.subsets.reserve(2 * j_levels);
    for (int m = 0; m < j_levels; ++m) {
        Frac top = pow2_frac(m);
        Frac two_thirds = Frac(2, 3) * top;
        Frac half = Frac(1, 2) * top;
        spec.subsets.push_back(Interval{two_thirds, top});   // type 2m
        spec.subsets.push_back(Interval{half, two_thirds});  // type 2m+1
    }
    return spec;
}

TypedSize type_of(const Frac& size, const PartitionSpec& spec) {
    if (!(Frac(0, 1) < size && size <= Frac(1, 1)))
        throw std::invalid_argument("type_of: size must lie in (0,1]");
    // Subsets are contiguous and descending; binary search on lo.
    int n = spec.type_count();
    int lo_idx = 0, hi_idx = n;  // first subset whose lo < size
    while (lo_idx < hi_idx) {
        int mid = (lo_idx + hi_idx) / 2;
        if (spec.subsets[mid].lo < size)
            hi_idx = mid;
        else
            lo_idx = mid + 1;
    }
    if (lo_idx < n && spec.subsets[lo_idx].contains(size)) return TypedSize{lo_idx, size};
    // Below every subset: residual interval, rounded up.
    if (spec.has_residual() && size <= spec.residual_bound())
        return TypedSize{n - 1, spec.residual_bound()};
    throw std::logic_error("type_of: partition does not cover (0,1]");
}

TypedUnits type_of_units(Units size, const PartitionSpec& spec) {
    TypedSize t = type_of(units_to_frac(size), spec);
    if (t.rounded == units_to_frac(size)) return TypedUnits{t.type, size};
    if (!frac_on_grid(t.rounded))
        throw std::logic_error("type_of_units: rounded size off the grid");
    return TypedUnits{t.type, frac_to_units(t.rounded)};
}

JChoice choose_j(const std::function<double(double)>& cdf, double epsilon, int j_max) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("choose_j: epsilon in (0,1)");
    if (j_max < 2) throw std::invalid_argument("choose_j: j_max must be at least 2");
    for (int j = 2; j <= j_max; ++j) {
        if (cdf(std::ldexp(1.0, -j)) < epsilon) return JChoice{j, false};
    }
    return JChoice{j_max, true};
}

PartitionSpec quantile_partition(const std::function<double(double)>& cdf, int n) {
    if (n < 0) throw std::invalid_argument("quantile_partition: n must be non-negative");
    const int pieces = 1 << (n + 1);
    std::vector<Frac> cuts;
    cuts.push_back(Frac(0, 1));
    for (int i = 1; i < pieces; ++i) {
        double target = static_cast<double>(i) / static_cast<double>(pieces);
        // Leftmost x with cdf(x) >= target.
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-12) {
            double mid = 0.5 * (lo + hi);
            if (cdf(mid) >= target)
                hi = mid;
            else
                lo = mid;
        }
        cuts.push_back(units_to_frac(to_units(hi)));
    }
    cuts.push_back(Frac(1, 1));

    PartitionSpec spec;
    spec.kind = PartitionKind::intervals;
    for (int i = pieces; i >= 1; --i) {
        Interval iv{cuts[i - 1], cuts[i]};
        if (iv.empty()) {
            ++spec.collapsed_intervals;
            continue;
        }
        spec.subsets.push_back(iv);
    }
    if (spec.subsets.empty()) throw std::runtime_error("quantile_partition: all intervals collapsed");
    return spec;
}

PartitionSpec refine(const PartitionSpec& spec, const std::vector<Frac>& breakpoints) {
    for (const Frac& b : breakpoints)
        if (!(Frac(0, 1) < b && b < Frac(1, 1)))
            throw std::invalid_argument("refine: breakpoints must lie in (0,1)");
    std::vector<Frac> sorted = breakpoints;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    PartitionSpec out;
    out.kind = PartitionKind::intervals;
    out.levels = spec.levels;
    out.collapsed_intervals = spec.collapsed_intervals;
    for (const Interval& iv : spec.subsets) {
        std::vector<Frac> inner;
        for (const Frac& b : sorted)
            if (iv.lo < b && b < iv.hi) inner.push_back(b);
        // Descending pieces of (lo, hi].
        Frac hi = iv.hi;
        for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
            out.subsets.push_back(Interval{*it, hi});
            hi = *it;
        }
        out.subsets.push_back(Interval{iv.lo, hi});
    }
    return out;
}

bool is_refinement_of(const PartitionSpec& fine, const PartitionSpec& coarse) {
    for (const Interval& f : fine.subsets) {
        bool covered = false;
        for (const Interval& c : coarse.subsets)
            if (f.contained_in(c)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return fine.residual_bound() == coarse.residual_bound();
}

std::string PartitionSpec::to_json() const {
    std::ostringstream os;
    os << "{\"kind\":\"" << (kind == PartitionKind::universal ? "universal" : "intervals") << "\"";
    if (kind == PartitionKind::universal) os << ",\"J\":" << levels;
    if (collapsed_intervals > 0) os << ",\"collapsed_intervals\":" << collapsed_intervals;
    os << ",\"subsets\":[";
    for (int i = 0; i < type_count(); ++i) {
        if (i) os << ",";
        os << "{\"type\":" << i << ",\"lo\":\"" << decimal12(subsets[i].lo) << "\",\"hi\":\""
           << decimal12(subsets[i].hi) << "\",\"lo_exact\":\"" << subsets[i].lo.str()
           << "\",\"hi_exact\":\"" << subsets[i].hi.str() << "\"}";
    }
    os << "]";
    if (has_residual()) {
        os << ",\"residual\":{\"hi\":\"" << decimal12(residual_bound()) << "\",\"maps_to\":"
           << (type_count() - 1) << ",\"rounds_to\":\"" << residual_bound().str() << "\"}";
    }
    os << "}";
    return os.str();
}

}  // namespace packsim
