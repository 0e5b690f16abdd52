#include "packsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "packsim/rng.hpp"

namespace packsim {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::unstable: return "unstable";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

void Scenario::validate() const {
    if (servers < 1) throw std::invalid_argument("scenario: servers must be at least 1");
    if (horizon < 1) throw std::invalid_argument("scenario: horizon must be at least 1");
    if (sample_every < 1) throw std::invalid_argument("scenario: sample_every must be at least 1");
    if (arrival.kind == ArrivalSpec::Kind::poisson) {
        if (arrival.lambda < 0) throw std::invalid_argument("scenario: lambda must be non-negative");
        sizes.validate();
    } else {
        if (trace.empty()) throw std::invalid_argument("scenario: trace arrivals need trace jobs");
    }
    switch (service.kind) {
        case ServiceSpec::Kind::geometric:
            if (!(service.mu > 0.0 && service.mu <= 1.0))
                throw std::invalid_argument("scenario: mu must lie in (0,1]");
            break;
        case ServiceSpec::Kind::deterministic:
            if (service.duration_slots < 1)
                throw std::invalid_argument("scenario: deterministic duration must be at least 1 slot");
            break;
        case ServiceSpec::Kind::trace:
            if (arrival.kind != ArrivalSpec::Kind::trace)
                throw std::invalid_argument("scenario: trace service needs trace arrivals");
            break;
    }
    if (j_levels != 0 && j_levels < 2) throw std::invalid_argument("scenario: J must be 0 (auto) or >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("scenario: epsilon in (0,1)");
    if (!(burn_in >= 0.0 && burn_in < 1.0) || !(verdict_window > 0.0 && verdict_window < 1.0) ||
        !(tail_window > 0.0 && tail_window <= 1.0) || !(theta > 0.0))
        throw std::invalid_argument("scenario: bad verdict parameters");
}

int Scenario::effective_j() const {
    if (j_levels >= 2) return j_levels;
    if (arrival.kind == ArrivalSpec::Kind::trace) {
        std::vector<Units> sz;
        sz.reserve(trace.size());
        for (const PreparedJob& j : trace) sz.push_back(j.size);
        SizeLaw law = empirical_cdf(sz);
        return choose_j([&law](double x) { return law.cdf(x); }, epsilon).j_levels;
    }
    const SizeLaw& law = sizes;
    return choose_j([&law](double x) { return law.cdf(x); }, epsilon).j_levels;
}

namespace {

struct Runner {
    const Scenario& sc;
    std::uint64_t wseed;
    const SlotObserver& observer;

    JobPool pool;
    QueueState queue;
    std::vector<ServerState> servers;
    SchedulerState st;
    PartitionSpec partition;
    bool partitioned = false;

    std::vector<std::int64_t> start_slot;  // per job id
    std::size_t next_trace = 0;

    RunMetrics metrics;
    std::int64_t in_service = 0;

    Runner(const Scenario& s, std::uint64_t seed, const SlotObserver& obs)
        : sc(s), wseed(seed), observer(obs), queue(0) {
        int j = 0;
        if (s.policy == Policy::vqs || s.policy == Policy::vqs_bf) {
            j = s.effective_j();
            partition = universal_partition(j);
            partitioned = true;
        }
        st = SchedulerState::make(s.policy, s.servers, j);
        queue = QueueState(partitioned ? partition.type_count() : 0);
        servers.resize(static_cast<std::size_t>(s.servers));
        for (int i = 0; i < s.servers; ++i) servers[static_cast<std::size_t>(i)].index = i;
        metrics.policy = policy_name(s.policy);
        metrics.seed = seed;
        metrics.horizon = s.horizon;
        metrics.vq_count = partitioned ? partition.type_count() : 0;
    }

    void admit(Units size, std::int64_t slot, std::int32_t duration) {
        Job job = make_job(size, slot, duration, partitioned ? &partition : nullptr);
        std::int64_t id = pool.add(job);
        start_slot.push_back(-1);
        queue.admit(pool[id]);
        ++metrics.arrivals_total;
    }

    std::vector<std::int64_t> arrivals_for(std::int64_t t) {
        std::vector<std::int64_t> ids;
        const std::int64_t first = pool.count();
        if (sc.arrival.kind == ArrivalSpec::Kind::poisson) {
            double u = rng::to_unit_double(rng::draw(wseed, rng::Stream::arrival_count,
                                                     static_cast<std::uint64_t>(t)));
            int a = rng::poisson_draw(sc.arrival.lambda, u);
            for (int i = 0; i < a; ++i) {
                std::int64_t id = pool.count();
                Units size = sc.sizes.draw_units(
                    rng::draw(wseed, rng::Stream::job_size, static_cast<std::uint64_t>(id)));
                std::int32_t dur = sc.service.kind == ServiceSpec::Kind::deterministic
                                       ? sc.service.duration_slots
                                       : -1;
                admit(size, t, dur);
            }
        } else {
            while (next_trace < sc.trace.size() && sc.trace[next_trace].slot == t) {
                const PreparedJob& j = sc.trace[next_trace++];
                std::int32_t dur = sc.service.kind == ServiceSpec::Kind::geometric
                                       ? -1
                                       : j.duration_slots;
                admit(j.size, t, dur);
            }
        }
        for (std::int64_t id = first; id < pool.count(); ++id) ids.push_back(id);
        return ids;
    }

    std::vector<Placement> schedule(std::int64_t t, const std::vector<std::int64_t>& arrivals) {
        (void)t;
        switch (sc.policy) {
            case Policy::fifo_ff: return fifo_ff_step(pool, queue, servers);
            case Policy::bf_js: return bf_js_step(st, pool, arrivals, queue, servers);
            case Policy::vqs: return vqs_step(st, pool, queue, servers);
            case Policy::vqs_bf: return vqs_bf_step(st, pool, queue, servers);
        }
        return {};
    }

    void departures(std::int64_t t) {
        std::vector<std::int64_t> leaving;
        for (ServerState& server : servers) {
            leaving.clear();
            for (std::int64_t id : server.resident) {
                const Job& job = pool[id];
                const std::int64_t elapsed = t - start_slot[static_cast<std::size_t>(id)];
                bool done;
                if (job.duration_slots >= 0) {
                    done = elapsed + 1 >= job.duration_slots;
                } else {
                    double coin = rng::to_unit_double(
                        rng::draw(wseed, rng::Stream::service_coin, static_cast<std::uint64_t>(id),
                                  static_cast<std::uint64_t>(elapsed)));
                    done = coin < sc.service.mu;
                }
                if (done) leaving.push_back(id);
            }
            st.had_departure[static_cast<std::size_t>(server.index)] = leaving.empty() ? 0 : 1;
            server.departed_last_slot = !leaving.empty();
            for (std::int64_t id : leaving) {
                server.remove(pool[id]);
                --in_service;
                ++metrics.departures_total;
            }
        }
    }

    void audit() const {
        Units busy = 0;
        std::int64_t resident = 0;
        for (const ServerState& server : servers) {
            if (server.recompute_occupied(pool) != server.occupied)
                throw std::logic_error("audit: server occupancy drifted");
            if (server.occupied > server.capacity) throw std::logic_error("audit: capacity exceeded");
            busy += server.occupied;
            resident += static_cast<std::int64_t>(server.resident.size());
        }
        if (resident != in_service) throw std::logic_error("audit: in-service count drifted");
        if (metrics.arrivals_total != queue.size() + in_service + metrics.departures_total)
            throw std::logic_error("audit: flow conservation violated");
    }

    void sample(std::int64_t t) {
        MetricsSample s;
        s.slot = t;
        s.queue_total = queue.size();
        for (const ServerState& server : servers) s.busy_capacity += server.occupied;
        s.arrivals_cum = metrics.arrivals_total;
        s.departures_cum = metrics.departures_total;
        if (partitioned) s.vq_sizes = queue.vq_sizes();
        if (s.arrivals_cum != s.queue_total + in_service + s.departures_cum)
            throw std::logic_error("sample: flow conservation violated");
        metrics.samples.push_back(std::move(s));
    }

    RunMetrics finish() {
        metrics.lambda_effective = sc.arrival.kind == ArrivalSpec::Kind::poisson
                                       ? sc.arrival.lambda
                                       : static_cast<double>(metrics.arrivals_total) /
                                             static_cast<double>(sc.horizon);
        const std::size_t n = metrics.samples.size();
        const std::size_t tail =
            std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(n) * sc.tail_window));
        double sum = 0.0;
        for (std::size_t i = n - tail; i < n; ++i)
            sum += static_cast<double>(metrics.samples[i].queue_total);
        metrics.tail_mean_queue = sum / static_cast<double>(tail);
        metrics.stability = stability_verdict(metrics.samples, metrics.lambda_effective, sc.theta,
                                              sc.burn_in, sc.verdict_window);
        return std::move(metrics);
    }

    RunMetrics go() {
        for (std::int64_t t = 0; t < sc.horizon; ++t) {
            std::vector<std::int64_t> arrived = arrivals_for(t);
            std::vector<Placement> placed = schedule(t, arrived);
            for (const Placement& p : placed) {
                start_slot[static_cast<std::size_t>(p.job_id)] = t;
                ++in_service;
            }
            if (observer) observer(t, pool, queue, servers);
            departures(t);
#ifndef NDEBUG
            audit();
#else
            if (t % 10000 == 0) audit();
#endif
            if (t % sc.sample_every == 0 || t + 1 == sc.horizon) sample(t);
        }
        return finish();
    }
};

}  // namespace

RunMetrics run(const Scenario& scenario, const SlotObserver& observer) {
    scenario.validate();
    Runner r(scenario, rng::substream_seed(scenario.seed, 0), observer);
    return r.go();
}

std::vector<RunMetrics> replicate(const Scenario& scenario, int n) {
    if (n < 1) throw std::invalid_argument("replicate: n must be at least 1");
    scenario.validate();
    std::vector<RunMetrics> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Runner r(scenario, rng::substream_seed(scenario.seed, static_cast<std::uint64_t>(i)), {});
        out.push_back(r.go());
    }
    return out;
}

StabilityReport stability_verdict(const std::vector<MetricsSample>& samples, double lambda,
                                  double theta, double burn_in, double window) {
    const std::size_t n = samples.size();
    const std::size_t start = static_cast<std::size_t>(static_cast<double>(n) * burn_in);
    if (n < start || n - start < 10)
        throw std::invalid_argument("stability_verdict: fewer than 10 samples after burn-in");
    const std::size_t m = n - start;

    double mean_t = 0.0, mean_q = 0.0;
    for (std::size_t i = start; i < n; ++i) {
        mean_t += static_cast<double>(samples[i].slot);
        mean_q += static_cast<double>(samples[i].queue_total);
    }
    mean_t /= static_cast<double>(m);
    mean_q /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < n; ++i) {
        const double dt = static_cast<double>(samples[i].slot) - mean_t;
        const double dq = static_cast<double>(samples[i].queue_total) - mean_q;
        sxx += dt * dt;
        sxy += dt * dq;
    }

    StabilityReport rep;
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;

    const std::size_t wlen = std::max<std::size_t>(
        1, static_cast<std::size_t>(static_cast<double>(m) * window));
    double first = 0.0, last = 0.0;
    for (std::size_t i = start; i < start + wlen; ++i)
        first += static_cast<double>(samples[i].queue_total);
    for (std::size_t i = n - wlen; i < n; ++i) last += static_cast<double>(samples[i].queue_total);
    first /= static_cast<double>(wlen);
    last /= static_cast<double>(wlen);
    rep.first_window_mean = first;
    rep.last_window_mean = last;

    const double threshold = theta * lambda;
    const bool grew = first > 0.0 ? last > 3.0 * first : last > 0.0;
    if (rep.slope > threshold && grew)
        rep.verdict = Verdict::unstable;
    else if (std::abs(rep.slope) <= threshold && !grew)
        rep.verdict = Verdict::stable;
    else
        rep.verdict = Verdict::inconclusive;
    return rep;
}

}  // namespace packsim
