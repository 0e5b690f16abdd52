#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "packsim/rational.hpp"

namespace packsim {

/// Integer job counts per type that fit together in one unit-capacity server.
using Configuration = std::vector<std::int32_t>;

/// A finite-type system: per-type sizes in (0,1] and, when used for workload
/// questions, per-type arrival probabilities summing to one.
struct TypedSystem {
    std::vector<Rational> sizes;
    std::vector<Rational> probs;  // may be empty for pure packing uses

    int type_count() const { return static_cast<int>(sizes.size()); }
    void validate() const;
};

struct EnumerationBudgetExceeded : std::runtime_error {
    explicit EnumerationBudgetExceeded(std::int64_t budget)
        : std::runtime_error("configuration enumeration exceeded budget of " +
                             std::to_string(budget) + " visited nodes") {}
};

inline constexpr std::int64_t kDefaultEnumerationBudget = 2'000'000;

/// All maximal feasible configurations (no coordinate can be incremented),
/// sorted lexicographically. Throws EnumerationBudgetExceeded when the DFS
/// visits more nodes than the budget.
std::vector<Configuration> enumerate_maximal(const std::vector<Rational>& sizes,
                                             std::int64_t budget = kDefaultEnumerationBudget);

/// The 4J-4 reduced configurations over the 2J universal types, in canonical
/// order: the four families with m ascending within each.
///   2^m e_{2m}                     m = 0..J-1
///   3*2^(m-1) e_{2m+1}             m = 1..J-1
///   e_1 + floor(2^m/3) e_{2m}      m = 2..J-1
///   e_1 + 2^(m-1) e_{2m+1}         m = 1..J-1
std::vector<Configuration> reduced_configurations(int j_levels);

/// Inner product <k, Q>.
std::int64_t weight(const Configuration& k, const std::vector<std::int64_t>& queue_sizes);

struct MaxWeightResult {
    int index = -1;
    std::int64_t value = 0;
};

/// Maximizer of <k, Q> over the list; ties go to the lowest index.
MaxWeightResult max_weight(const std::vector<Configuration>& configs,
                           const std::vector<std::int64_t>& queue_sizes);

std::string configuration_str(const Configuration& k);

}  // namespace packsim
