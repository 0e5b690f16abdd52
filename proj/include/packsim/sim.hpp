#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "packsim/core.hpp"
#include "packsim/schedulers.hpp"
#include "packsim/workload.hpp"

namespace packsim {

enum class Verdict { stable, unstable, inconclusive };
const char* verdict_name(Verdict v);

struct ArrivalSpec {
    enum class Kind { poisson, trace };
    Kind kind = Kind::poisson;
    double lambda = 0.0;  // jobs per slot
};

struct ServiceSpec {
    enum class Kind { geometric, deterministic, trace };
    Kind kind = Kind::geometric;
    double mu = 0.01;                 // per-slot departure probability
    std::int32_t duration_slots = 1;  // deterministic service
};

/// Full experiment description. Sizes are already normalized to unit
/// capacity. A zero j_levels means the virtual-queue policies pick J
/// through the size cdf and epsilon.
struct Scenario {
    std::string name = "run";
    int servers = 1;
    Policy policy = Policy::bf_js;
    int j_levels = 0;
    double epsilon = 0.05;
    ArrivalSpec arrival;
    SizeLaw sizes;
    ServiceSpec service;
    std::vector<PreparedJob> trace;
    std::int64_t horizon = 1000;
    std::uint64_t seed = 1;
    std::int64_t sample_every = 1000;
    double theta = 0.05;          // slope threshold factor for the verdict
    double burn_in = 0.2;         // fraction of samples discarded before the fit
    double verdict_window = 0.1;  // first/last window fraction for the verdict
    double tail_window = 0.25;    // fraction of samples behind the summary mean

    void validate() const;
    int effective_j() const;  // resolved J for virtual-queue policies
};

struct MetricsSample {
    std::int64_t slot = 0;
    std::int64_t queue_total = 0;
    Units busy_capacity = 0;
    std::int64_t arrivals_cum = 0;
    std::int64_t departures_cum = 0;
    std::vector<std::int64_t> vq_sizes;
};

struct StabilityReport {
    Verdict verdict = Verdict::inconclusive;
    double slope = 0.0;  // jobs per slot
    double first_window_mean = 0.0;
    double last_window_mean = 0.0;
};

struct RunMetrics {
    std::string policy;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    int vq_count = 0;
    double lambda_effective = 0.0;
    std::vector<MetricsSample> samples;
    std::int64_t arrivals_total = 0;
    std::int64_t departures_total = 0;
    double tail_mean_queue = 0.0;
    StabilityReport stability;
};

/// Called after scheduling, before departures, every slot.
using SlotObserver =
    std::function<void(std::int64_t slot, const JobPool&, const QueueState&,
                       const std::vector<ServerState>&)>;

/// One seeded run: per slot, arrivals then the policy step then departures.
/// Identical (scenario, seed) pairs give bit-identical metrics.
RunMetrics run(const Scenario& scenario, const SlotObserver& observer = {});

/// n replications; replication i derives its seed by mixing the base seed
/// with i, so results are ordered and independent of execution order.
std::vector<RunMetrics> replicate(const Scenario& scenario, int n);

/// Least-squares drift of the sampled queue sizes after burn-in. Unstable
/// needs slope above theta*lambda and a final window more than three times
/// the first; stable needs the slope within the threshold and comparable
/// windows; anything else is inconclusive.
StabilityReport stability_verdict(const std::vector<MetricsSample>& samples, double lambda,
                                  double theta = 0.05, double burn_in = 0.2, double window = 0.1);

}  // namespace packsim
