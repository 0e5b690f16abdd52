#include <doctest.h>

#include "packsim/core.hpp"

using namespace packsim;

namespace {

struct Rig {
    JobPool pool;
    QueueState queue;
    std::vector<ServerState> servers;

    explicit Rig(int n_servers = 1, int types = 0) : queue(types) {
        servers.resize(static_cast<std::size_t>(n_servers));
        for (int i = 0; i < n_servers; ++i) servers[static_cast<std::size_t>(i)].index = i;
    }

    std::int64_t fresh(double size, std::int64_t slot = 0, const PartitionSpec* part = nullptr) {
        return pool.add(make_job(to_units(size), slot, -1, part));
    }

    std::int64_t queued(double size, std::int64_t slot = 0, const PartitionSpec* part = nullptr) {
        std::int64_t id = fresh(size, slot, part);
        queue.admit(pool[id]);
        return id;
    }
};

}  // namespace

TEST_CASE("queue balance across a slot") {
    Rig rig(2);
    // Q(t) = 5
    std::vector<std::int64_t> initial;
    for (int i = 0; i < 5; ++i) initial.push_back(rig.queued(0.1));
    // A(t) = 2, D(t) = 3
    std::vector<std::int64_t> arrivals = {rig.fresh(0.1), rig.fresh(0.1)};
    std::vector<Placement> scheduled = {{initial[0], 0}, {initial[1], 0}, {initial[2], 1}};
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, arrivals, scheduled, {});
    CHECK(rig.queue.size() == 4);
    CHECK(rig.servers[0].resident.size() == 2);
    CHECK(rig.servers[1].resident.size() == 1);
}

TEST_CASE("empty slot leaves everything unchanged") {
    Rig rig(1);
    rig.queued(0.5);
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {}, {});
    CHECK(rig.queue.size() == 1);
    CHECK(rig.servers[0].resident.empty());
    CHECK(rig.servers[0].occupied == 0);
}

TEST_CASE("packing two jobs to exactly full") {
    Rig rig(1);
    std::int64_t a = rig.queued(0.4);
    std::int64_t b = rig.queued(0.6);
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {{a, 0}, {b, 0}}, {});
    CHECK(rig.queue.size() == 0);
    CHECK(rig.servers[0].residual() == 0);
    // and the departures release it exactly
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {}, {{a, 0}, {b, 0}});
    CHECK(rig.servers[0].occupied == 0);
}

TEST_CASE("capacity violations are hard faults") {
    Rig rig(1);
    std::int64_t a = rig.queued(0.7);
    std::int64_t b = rig.queued(0.7);
    CHECK_THROWS_AS(
        apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {{a, 0}, {b, 0}}, {}),
        CapacityViolation);
}

TEST_CASE("scheduling a job that is not queued is a fault") {
    Rig rig(1);
    std::int64_t a = rig.fresh(0.5);  // never admitted
    CHECK_THROWS_AS(apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {{a, 0}}, {}),
                    std::logic_error);
}

TEST_CASE("normalize_workload") {
    SUBCASE("capacity 10 with sizes 2 and 5") {
        NormalizedWorkload n = normalize_workload(10.0, {2.0, 5.0});
        REQUIRE(n.sizes.size() == 2);
        CHECK(n.sizes[0] == doctest::Approx(0.2));
        CHECK(n.sizes[1] == doctest::Approx(0.5));
        CHECK(n.rejected.empty());
    }
    SUBCASE("unit capacity is the identity") {
        NormalizedWorkload n = normalize_workload(1.0, {0.4, 0.6});
        CHECK(n.sizes == std::vector<double>{0.4, 0.6});
    }
    SUBCASE("oversized jobs are rejected and reported") {
        NormalizedWorkload n = normalize_workload(10.0, {2.0, 11.0});
        CHECK(n.sizes.size() == 1);
        REQUIRE(n.rejected.size() == 1);
        CHECK(n.rejected[0] == 1);
    }
    CHECK_THROWS(normalize_workload(0.0, {1.0}));
    CHECK_THROWS(normalize_workload(1.0, {-0.5}));
}

TEST_CASE("queue order and largest-fitting queries") {
    Rig rig(1);
    std::int64_t a = rig.queued(0.5, 0);
    std::int64_t b = rig.queued(0.45, 1);
    std::int64_t c = rig.queued(0.3, 2);
    std::int64_t d = rig.queued(0.45, 3);

    CHECK(rig.queue.head_of_line() == a);
    CHECK(rig.queue.largest_fitting(kUnitScale) == a);
    CHECK(rig.queue.largest_fitting(to_units(0.46)) == b);  // earliest of the two 0.45s
    CHECK(rig.queue.largest_fitting(to_units(0.2)) == std::nullopt);

    rig.queue.remove(rig.pool[a]);
    CHECK(rig.queue.head_of_line() == b);
    rig.queue.remove(rig.pool[b]);
    CHECK(rig.queue.largest_fitting(to_units(0.46)) == d);
    CHECK(rig.queue.size() == 2);
    CHECK(rig.queue.waiting(c));
    CHECK_THROWS_AS(rig.queue.remove(rig.pool[a]), std::logic_error);
}

TEST_CASE("virtual queues track membership when a partition is active") {
    PartitionSpec spec = universal_partition(2);
    Rig rig(1, spec.type_count());
    std::int64_t t1 = rig.queued(0.6, 0, &spec);
    std::int64_t t2a = rig.queued(0.4, 1, &spec);
    std::int64_t t2b = rig.queued(0.45, 2, &spec);
    std::int64_t t3 = rig.queued(0.2, 3, &spec);  // rounded to 0.25

    CHECK(rig.queue.vq_sizes() == std::vector<std::int64_t>{0, 1, 2, 1});
    CHECK(rig.queue.vq_head(1) == t1);
    CHECK(rig.queue.vq_head(2) == t2a);
    CHECK(rig.queue.vq_head(0) == std::nullopt);
    CHECK(rig.queue.vq_largest_fitting(2, to_units(0.46)) == t2b);
    CHECK(rig.pool[t3].rounded_size == to_units(0.25));
    CHECK(rig.pool[t3].size == to_units(0.2));

    // every waiting job sits in exactly one virtual queue
    std::int64_t total = 0;
    for (std::int64_t q : rig.queue.vq_sizes()) total += q;
    CHECK(total == rig.queue.size());
}

TEST_CASE("server occupancy recompute matches the running sum") {
    Rig rig(1);
    std::int64_t a = rig.queued(0.31);
    std::int64_t b = rig.queued(0.27);
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {{a, 0}, {b, 0}}, {});
    CHECK(rig.servers[0].recompute_occupied(rig.pool) == rig.servers[0].occupied);
    apply_slot_accounting(rig.pool, rig.queue, rig.servers, {}, {}, {{a, 0}});
    CHECK(rig.servers[0].recompute_occupied(rig.pool) == rig.servers[0].occupied);
    CHECK(rig.servers[0].occupied == to_units(0.27));
}
