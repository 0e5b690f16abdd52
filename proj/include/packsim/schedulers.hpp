#pragma once

#include <optional>
#include <vector>

#include "packsim/config_space.hpp"
#include "packsim/core.hpp"
#include "packsim/partition.hpp"

namespace packsim {

enum class Policy { fifo_ff, bf_js, vqs, vqs_bf };

const char* policy_name(Policy p);
std::optional<Policy> policy_from_name(const std::string& name);

/// Per-run scheduler state. The virtual-queue policies carry the partition,
/// the reduced configuration set and one active configuration per server,
/// renewed only on slots where the server is empty. BF-J/S carries the set
/// of servers that saw departures in the previous slot.
struct SchedulerState {
    Policy policy = Policy::fifo_ff;
    PartitionSpec partition;  // meaningful for vqs / vqs_bf
    std::vector<Configuration> reduced;
    std::vector<int> active;  // per server, index into reduced; -1 before first renewal
    std::vector<std::uint8_t> had_departure;  // per server, previous slot

    static SchedulerState make(Policy policy, int servers, int j_levels);
};

/// Strict FIFO with First-Fit: repeatedly the head-of-line job goes to the
/// lowest-indexed server it fits; the first head job that fits nowhere
/// blocks the rest of the slot.
std::vector<Placement> fifo_ff_step(const JobPool& pool, QueueState& queue,
                                    std::vector<ServerState>& servers);

/// Best-Fit from the job's perspective: each listed job (arrival order) goes
/// to the feasible server with least residual capacity, ties to the lowest
/// index; jobs that fit nowhere stay queued.
std::vector<Placement> bf_j_step(const JobPool& pool, const std::vector<std::int64_t>& job_ids,
                                 QueueState& queue, std::vector<ServerState>& servers);

/// Best-Fit from the server's perspective: each listed server repeatedly
/// takes the largest queued job that fits (ties to earliest arrival) until
/// nothing fits.
std::vector<Placement> bf_s_step(const JobPool& pool, const std::vector<int>& server_indices,
                                 QueueState& queue, std::vector<ServerState>& servers);

/// BF-S over last slot's departure servers, then BF-J over the new arrivals
/// that step one did not place.
std::vector<Placement> bf_js_step(SchedulerState& state, const JobPool& pool,
                                  const std::vector<std::int64_t>& new_arrivals, QueueState& queue,
                                  std::vector<ServerState>& servers);

/// Max-weight configuration scheduling over the reduced set: empty servers
/// (index order, queues re-read after each server) renew their active
/// configuration; every server then schedules per the active configuration —
/// a 2/3 capacity reservation for one type-1 job when k1 = 1, and
/// head-of-line filling from the single other virtual queue until the head
/// does not fit. Rounded sizes govern every fit test.
std::vector<Placement> vqs_step(SchedulerState& state, const JobPool& pool, QueueState& queue,
                                std::vector<ServerState>& servers);

/// Same renewal as vqs_step; scheduling swaps head-of-line order for
/// largest-fitting, reserves only what a scheduled type-1 job actually
/// needs, caps the other queue at its configured count, then runs BF-S over
/// the whole remaining queue.
std::vector<Placement> vqs_bf_step(SchedulerState& state, const JobPool& pool, QueueState& queue,
                                   std::vector<ServerState>& servers);

}  // namespace packsim
