#pragma once

#include <optional>
#include <vector>

#include "packsim/config_space.hpp"
#include "packsim/fraction.hpp"
#include "packsim/partition.hpp"
#include "packsim/rational.hpp"
#include "packsim/workload.hpp"

namespace packsim {

/// Exact maximum-supportable-workload question: a typed system, the server
/// count, and optionally a restriction to a fixed configuration list
/// (otherwise all maximal feasible configurations are mixed).
struct WorkloadProblem {
    TypedSystem system;
    int servers = 1;
    std::optional<std::vector<Configuration>> restriction;
    std::int64_t enumeration_budget = kDefaultEnumerationBudget;
};

struct WorkloadResult {
    Rational rho_star;
    std::vector<Configuration> configs;  // configuration set the LP mixed over
    std::vector<Rational> mixture;       // optimal weights, one per config
};

/// The closed-LP optimum of: maximize rho subject to rho*P <= L * sum_k p_k k,
/// sum p_k = 1, p >= 0 over the maximal (or restricted) configurations. The
/// supremum over strict inequalities equals this closed optimum.
WorkloadResult max_supportable_workload(const WorkloadProblem& problem);

struct RoundedBounds {
    Rational upper_rounded;           // workload cap when sizes round up to sup
    std::optional<Rational> lower_rounded;  // nullopt: every type rounded to zero
    bool lower_unbounded() const { return !lower_rounded.has_value(); }
};

/// Workload caps of the upper- and lower-rounded systems induced by a
/// partition and a size law. Lower-rounded types with inf = 0 are dropped
/// and their probability mass excluded.
RoundedBounds rounded_workload_bounds(const PartitionSpec& partition, const SizeLaw& law,
                                      int servers,
                                      std::int64_t budget = kDefaultEnumerationBudget);

/// L / mean size: no workload above this is supportable.
Rational workload_outer_bound(int servers, const Frac& mean_size);

struct ReducedWeightCheck {
    bool holds = false;
    Configuration witness;            // best reduced configuration
    std::int64_t reduced_weight = 0;  // its weight
    std::int64_t refined_weight = 0;  // max weight over the refinement's configurations
    Rational ratio;                   // reduced / refined (1 when the refined max is 0)
};

/// Checks that some reduced configuration carries at least 2/3 of the best
/// weight achievable by any upper-rounded feasible configuration of a
/// refinement of the universal partition, for the given multiset of job
/// sizes in (2^-J, 1].
ReducedWeightCheck reduced_weight_check(int j_levels, const std::vector<Frac>& job_sizes,
                                        const PartitionSpec& refinement,
                                        std::int64_t budget = kDefaultEnumerationBudget);

struct ReducedWeightCampaign {
    int trials = 0;
    int violations = 0;
    Rational min_ratio = 1;  // smallest reduced/refined ratio seen
};

/// Seeded randomized campaign over reduced_weight_check: random refinements
/// of the universal partition and random job multisets of up to
/// max_jobs sizes in (2^-J, 1]. Any violation is a finding, not noise.
ReducedWeightCampaign reduced_weight_campaign(int j_levels, int trials, std::uint64_t seed,
                                              int max_jobs = 40,
                                              std::int64_t budget = kDefaultEnumerationBudget);

struct GapInstance {
    WorkloadProblem unrestricted;  // rho* = 2
    WorkloadProblem restricted;    // best oblivious configuration pair, optimum 4/3
};

/// The two-size instance (1/2 - eps, 1/2 + eps) whose oblivious restriction
/// {(2,0),(0,1)} caps the workload at 2/3 of the true optimum. Requires
/// eps in (0, 1/3) with both sizes interior to distinct subsets of the
/// universal partition at J = 2.
GapInstance rounding_gap_instance(const Frac& epsilon);

}  // namespace packsim
