#include "packsim/capacity.hpp"

#include <algorithm>
#include <stdexcept>

#include "packsim/lp.hpp"
#include "packsim/rng.hpp"

namespace packsim {

namespace {

// P(lo < R <= hi) exactly.
Rational interval_prob(const SizeLaw& law, const Frac& lo, const Frac& hi) {
    switch (law.kind) {
        case SizeLawKind::discrete: {
            Rational p = 0;
            for (std::size_t i = 0; i < law.values.size(); ++i)
                if (lo < law.values[i] && law.values[i] <= hi) p += to_rational(law.probs[i]);
            return p;
        }
        case SizeLawKind::uniform: {
            Frac clo = std::max(lo, law.a, [](const Frac& x, const Frac& y) { return x < y; });
            Frac chi = std::min(hi, law.b, [](const Frac& x, const Frac& y) { return x < y; });
            if (!(clo < chi)) return Rational(0);
            return (to_rational(chi) - to_rational(clo)) / (to_rational(law.b) - to_rational(law.a));
        }
        case SizeLawKind::empirical: {
            std::int64_t n = 0;
            for (Units s : law.samples) {
                Frac f = units_to_frac(s);
                if (lo < f && f <= hi) ++n;
            }
            return Rational(n, static_cast<std::int64_t>(law.samples.size()));
        }
    }
    return Rational(0);
}

WorkloadResult solve_workload(const std::vector<Rational>& sizes, const std::vector<Rational>& probs,
                              int servers, const std::optional<std::vector<Configuration>>& restriction,
                              std::int64_t budget, bool require_unit_mass) {
    const int n = static_cast<int>(sizes.size());
    if (n == 0) throw std::invalid_argument("workload: no types");
    if (static_cast<int>(probs.size()) != n)
        throw std::invalid_argument("workload: probs/sizes length mismatch");
    if (servers < 1) throw std::invalid_argument("workload: need at least one server");
    for (const Rational& r : sizes)
        if (r > 1)
            throw std::invalid_argument(
                "workload: a type is larger than the server capacity; no feasible configuration");
    Rational mass = 0;
    for (const Rational& p : probs) {
        if (p < 0) throw std::invalid_argument("workload: negative probability");
        mass += p;
    }
    if (require_unit_mass && mass != 1)
        throw std::invalid_argument("workload: probabilities must sum to 1");
    if (mass == 0) throw std::invalid_argument("workload: no probability mass");

    // Types with zero probability do not constrain the optimum; dropping
    // them keeps the enumeration small. Restriction configurations project.
    std::vector<int> kept;
    for (int j = 0; j < n; ++j)
        if (probs[static_cast<std::size_t>(j)] > 0) kept.push_back(j);

    std::vector<Rational> sz, pr;
    for (int j : kept) {
        sz.push_back(sizes[static_cast<std::size_t>(j)]);
        pr.push_back(probs[static_cast<std::size_t>(j)]);
    }

    std::vector<Configuration> configs;
    if (restriction.has_value()) {
        if (restriction->empty()) throw std::invalid_argument("workload: empty restriction");
        for (const Configuration& k : *restriction) {
            if (static_cast<int>(k.size()) != n)
                throw std::invalid_argument("workload: restriction dimension mismatch");
            Rational used = 0;
            for (int j = 0; j < n; ++j) used += Rational(k[static_cast<std::size_t>(j)]) * sizes[static_cast<std::size_t>(j)];
            if (used > 1) throw std::invalid_argument("workload: restriction configuration infeasible");
            Configuration proj;
            for (int j : kept) proj.push_back(k[static_cast<std::size_t>(j)]);
            configs.push_back(proj);
        }
    } else {
        configs = enumerate_maximal(sz, budget);
    }

    // maximize rho:  P_j * rho - L * sum_k k_j p_k <= 0,  sum_k p_k = 1
    const int m = static_cast<int>(kept.size());
    const int vars = 1 + static_cast<int>(configs.size());
    LpProblem lp;
    lp.c.assign(static_cast<std::size_t>(vars), Rational(0));
    lp.c[0] = 1;
    for (int j = 0; j < m; ++j) {
        std::vector<Rational> row(static_cast<std::size_t>(vars), Rational(0));
        row[0] = pr[static_cast<std::size_t>(j)];
        for (std::size_t kidx = 0; kidx < configs.size(); ++kidx)
            row[1 + kidx] = Rational(-servers) * Rational(configs[kidx][static_cast<std::size_t>(j)]);
        lp.a.push_back(std::move(row));
        lp.b.push_back(Rational(0));
        lp.senses.push_back(LpSense::le);
    }
    {
        std::vector<Rational> row(static_cast<std::size_t>(vars), Rational(1));
        row[0] = 0;
        lp.a.push_back(std::move(row));
        lp.b.push_back(Rational(1));
        lp.senses.push_back(LpSense::eq);
    }

    LpSolution sol = solve_lp_max(lp);
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error("workload: LP did not reach an optimum");

    WorkloadResult out;
    out.rho_star = sol.value;
    out.mixture.assign(configs.size(), Rational(0));
    for (std::size_t kidx = 0; kidx < configs.size(); ++kidx) out.mixture[kidx] = sol.x[1 + kidx];
    if (restriction.has_value()) {
        out.configs = *restriction;
    } else {
        // re-inflate enumerated configurations to the full type dimension
        for (const Configuration& k : configs) {
            Configuration full(static_cast<std::size_t>(n), 0);
            for (std::size_t i = 0; i < kept.size(); ++i)
                full[static_cast<std::size_t>(kept[i])] = k[i];
            out.configs.push_back(full);
        }
    }
    return out;
}

}  // namespace

WorkloadResult max_supportable_workload(const WorkloadProblem& problem) {
    problem.system.validate();
    if (problem.system.probs.empty())
        throw std::invalid_argument("workload: system carries no probabilities");
    return solve_workload(problem.system.sizes, problem.system.probs, problem.servers,
                          problem.restriction, problem.enumeration_budget, true);
}

RoundedBounds rounded_workload_bounds(const PartitionSpec& partition, const SizeLaw& law, int servers,
                                      std::int64_t budget) {
    // Effective tiling of (0,1]: the subsets plus, when present, the
    // residual interval as a type of its own whose jobs are exactly the
    // rounding bound in the upper system and vanish in the lower one.
    struct Piece {
        Frac lo, hi;
        Rational upper_size;
    };
    std::vector<Piece> pieces;
    for (const Interval& iv : partition.subsets)
        pieces.push_back(Piece{iv.lo, iv.hi, to_rational(iv.hi)});
    if (partition.has_residual()) {
        const Frac& bound = partition.residual_bound();
        pieces.push_back(Piece{Frac(0, 1), bound, to_rational(bound)});
    }

    std::vector<Rational> up_sizes, up_probs, lo_sizes, lo_probs;
    for (const Piece& p : pieces) {
        Rational prob = interval_prob(law, p.lo, p.hi);
        up_sizes.push_back(p.upper_size);
        up_probs.push_back(prob);
        if (!p.lo.is_zero()) {  // inf = 0 types drop, mass excluded
            lo_sizes.push_back(to_rational(p.lo));
            lo_probs.push_back(prob);
        }
    }

    RoundedBounds out;
    out.upper_rounded =
        solve_workload(up_sizes, up_probs, servers, std::nullopt, budget, false).rho_star;
    Rational lower_mass = 0;
    for (const Rational& p : lo_probs) lower_mass += p;
    if (lower_mass == 0) return out;  // everything rounds to zero: unbounded
    out.lower_rounded =
        solve_workload(lo_sizes, lo_probs, servers, std::nullopt, budget, false).rho_star;
    return out;
}

Rational workload_outer_bound(int servers, const Frac& mean_size) {
    if (!(Frac(0, 1) < mean_size)) throw std::invalid_argument("outer bound: mean size must be positive");
    return Rational(servers) / to_rational(mean_size);
}

ReducedWeightCheck reduced_weight_check(int j_levels, const std::vector<Frac>& job_sizes,
                                        const PartitionSpec& refinement, std::int64_t budget) {
    PartitionSpec universal = universal_partition(j_levels);
    if (!is_refinement_of(refinement, universal))
        throw std::invalid_argument("reduced_weight_check: partition does not refine the universal one");
    const Frac floor = universal.residual_bound();
    std::vector<std::int64_t> q_universal(static_cast<std::size_t>(universal.type_count()), 0);
    std::vector<std::int64_t> q_refined(static_cast<std::size_t>(refinement.type_count()), 0);
    for (const Frac& s : job_sizes) {
        if (!(floor < s && s <= Frac(1, 1)))
            throw std::invalid_argument("reduced_weight_check: job size outside (2^-J, 1]");
        q_universal[static_cast<std::size_t>(type_of(s, universal).type)] += 1;
        q_refined[static_cast<std::size_t>(type_of(s, refinement).type)] += 1;
    }

    ReducedWeightCheck out;

    // Max weight over every feasible upper-rounded configuration of the
    // refinement. Only types with queued jobs matter: zero-weight types
    // never help, so the maximum over maximal configurations of the
    // populated types equals the maximum over all feasible configurations.
    std::vector<Rational> sizes;
    std::vector<std::int64_t> weights;
    for (int j = 0; j < refinement.type_count(); ++j) {
        if (q_refined[static_cast<std::size_t>(j)] == 0) continue;
        sizes.push_back(to_rational(refinement.subsets[static_cast<std::size_t>(j)].hi));
        weights.push_back(q_refined[static_cast<std::size_t>(j)]);
    }
    if (!sizes.empty()) {
        for (const Configuration& k : enumerate_maximal(sizes, budget)) {
            std::int64_t w = weight(k, weights);
            if (w > out.refined_weight) out.refined_weight = w;
        }
    }

    const std::vector<Configuration> reduced = reduced_configurations(j_levels);
    MaxWeightResult best = max_weight(reduced, q_universal);
    out.witness = reduced[static_cast<std::size_t>(best.index)];
    out.reduced_weight = best.value;
    out.holds = 3 * out.reduced_weight >= 2 * out.refined_weight;
    out.ratio = out.refined_weight == 0
                    ? Rational(1)
                    : Rational(out.reduced_weight) / Rational(out.refined_weight);
    return out;
}

ReducedWeightCampaign reduced_weight_campaign(int j_levels, int trials, std::uint64_t seed,
                                              int max_jobs, std::int64_t budget) {
    if (trials < 1) throw std::invalid_argument("campaign: trials must be positive");
    PartitionSpec universal = universal_partition(j_levels);
    ReducedWeightCampaign out;
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t counter = 0;
        auto next = [&]() {
            return rng::to_unit_double(rng::draw(seed, rng::Stream::aux,
                                                 static_cast<std::uint64_t>(trial), counter++));
        };
        // Random refinement: each universal subset splits at 0-2 interior
        // grid points.
        std::vector<Frac> cuts;
        for (const Interval& iv : universal.subsets) {
            int extra = static_cast<int>(next() * 3.0);  // 0, 1 or 2
            for (int c = 0; c < extra; ++c) {
                double lo = iv.lo.to_double(), hi = iv.hi.to_double();
                Units u = to_units(lo + next() * (hi - lo));
                Frac cut = units_to_frac(u);
                if (iv.lo < cut && cut < iv.hi) cuts.push_back(cut);
            }
        }
        PartitionSpec refinement = refine(universal, cuts);

        const Units floor_units = frac_to_units(universal.residual_bound());
        const int jobs = 1 + static_cast<int>(next() * static_cast<double>(max_jobs));
        std::vector<Frac> sizes;
        for (int i = 0; i < std::min(jobs, max_jobs); ++i) {
            Units u = floor_units +
                      static_cast<Units>(next() * static_cast<double>(kUnitScale - floor_units));
            if (u <= floor_units) u = floor_units + 1;
            if (u > kUnitScale) u = kUnitScale;
            sizes.push_back(units_to_frac(u));
        }

        ReducedWeightCheck check = reduced_weight_check(j_levels, sizes, refinement, budget);
        ++out.trials;
        if (!check.holds) ++out.violations;
        if (check.ratio < out.min_ratio) out.min_ratio = check.ratio;
    }
    return out;
}

GapInstance rounding_gap_instance(const Frac& epsilon) {
    if (!(Frac(0, 1) < epsilon && epsilon < Frac(1, 3)))
        throw std::invalid_argument("gap instance: epsilon must lie in (0, 1/3)");
    const Frac small = Frac(1, 2) - epsilon;
    const Frac large = Frac(1, 2) + epsilon;
    PartitionSpec universal = universal_partition(2);
    TypedSize ts = type_of(small, universal);
    TypedSize tl = type_of(large, universal);
    auto interior = [&](const Frac& x, int type) {
        const Interval& iv = universal.subsets[static_cast<std::size_t>(type)];
        return iv.lo < x && x < iv.hi;
    };
    if (ts.type == tl.type || !interior(small, ts.type) || !interior(large, tl.type))
        throw std::invalid_argument(
            "gap instance: both sizes must be interior to distinct universal subsets");

    GapInstance out;
    out.unrestricted.system.sizes = {to_rational(small), to_rational(large)};
    out.unrestricted.system.probs = {Rational(1, 2), Rational(1, 2)};
    out.unrestricted.servers = 1;
    out.restricted = out.unrestricted;
    out.restricted.restriction = std::vector<Configuration>{{2, 0}, {0, 1}};
    return out;
}

}  // namespace packsim
