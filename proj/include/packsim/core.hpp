#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "packsim/grid.hpp"
#include "packsim/partition.hpp"

namespace packsim {

/// One unit of work. Sizes are grid units of normalized capacity;
/// rounded_size == size unless the job landed in a partition's residual
/// interval, in which case it is rounded up to that bound and packing uses
/// the rounded value.
struct Job {
    std::int64_t id = -1;
    Units size = 0;
    Units rounded_size = 0;
    std::int64_t arrival_slot = 0;
    std::int32_t duration_slots = -1;  // -1: geometric service, coins drawn per slot
    std::int16_t type = -1;            // virtual-queue index when a partition is active
};

class JobPool {
public:
    std::int64_t add(Job job) {
        job.id = static_cast<std::int64_t>(jobs_.size());
        jobs_.push_back(job);
        return job.id;
    }
    const Job& operator[](std::int64_t id) const { return jobs_[static_cast<std::size_t>(id)]; }
    std::int64_t count() const { return static_cast<std::int64_t>(jobs_.size()); }

private:
    std::vector<Job> jobs_;
};

/// Thrown when a scheduler hands over a placement that does not fit; this is
/// a scheduler bug, never a recoverable condition.
struct CapacityViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ServerState {
    int index = 0;
    Units capacity = kUnitScale;
    std::vector<std::int64_t> resident;
    Units occupied = 0;  // sum of resident rounded sizes
    bool departed_last_slot = false;

    Units residual() const { return capacity - occupied; }

    void place(const Job& job) {
        if (job.rounded_size > residual())
            throw CapacityViolation("server " + std::to_string(index) + ": job " +
                                    std::to_string(job.id) + " exceeds residual capacity");
        resident.push_back(job.id);
        occupied += job.rounded_size;
    }

    void remove(const Job& job) {
        for (std::size_t i = 0; i < resident.size(); ++i) {
            if (resident[i] == job.id) {
                resident[i] = resident.back();
                resident.pop_back();
                occupied -= job.rounded_size;
                return;
            }
        }
        throw std::logic_error("server remove: job not resident");
    }

    /// Exact recomputation of the occupied sum; cross-checked periodically.
    Units recompute_occupied(const JobPool& pool) const {
        Units sum = 0;
        for (std::int64_t id : resident) sum += pool[id].rounded_size;
        return sum;
    }
};

/// Waiting jobs in arrival order, plus per-type virtual queues when a
/// partition is active and a size-ordered index for largest-fitting queries.
class QueueState {
public:
    explicit QueueState(int type_count = 0)
        : vq_fifo_(static_cast<std::size_t>(type_count)),
          vq_by_size_(static_cast<std::size_t>(type_count)),
          vq_count_(static_cast<std::size_t>(type_count), 0) {}

    void admit(const Job& job);
    void remove(const Job& job);
    bool waiting(std::int64_t id) const {
        return id >= 0 && id < static_cast<std::int64_t>(waiting_.size()) &&
               waiting_[static_cast<std::size_t>(id)];
    }

    std::int64_t size() const { return count_; }
    int type_count() const { return static_cast<int>(vq_fifo_.size()); }
    std::int64_t vq_size(int type) const { return vq_count_[static_cast<std::size_t>(type)]; }
    std::vector<std::int64_t> vq_sizes() const { return vq_count_; }

    std::optional<std::int64_t> head_of_line() const;
    std::optional<std::int64_t> vq_head(int type) const;
    /// Largest rounded size <= residual; ties to the earliest arrival.
    std::optional<std::int64_t> largest_fitting(Units residual) const;
    std::optional<std::int64_t> vq_largest_fitting(int type, Units residual) const;

private:
    using SizeKey = std::pair<Units, std::int64_t>;
    static std::optional<std::int64_t> largest_in(const std::multiset<SizeKey>& index, Units residual);

    std::vector<std::uint8_t> waiting_;
    mutable std::deque<std::int64_t> fifo_;
    mutable std::vector<std::deque<std::int64_t>> vq_fifo_;
    std::multiset<SizeKey> by_size_;
    std::vector<std::multiset<SizeKey>> vq_by_size_;
    std::vector<std::int64_t> vq_count_;
    std::int64_t count_ = 0;
};

struct Placement {
    std::int64_t job_id = -1;
    int server = -1;
};

/// One slot of bookkeeping: admit arrivals, move scheduled jobs into servers,
/// remove departures. Verifies the queue balance Q' = Q + A - D exactly and
/// faults on any capacity violation.
void apply_slot_accounting(const JobPool& pool, QueueState& queue, std::vector<ServerState>& servers,
                           const std::vector<std::int64_t>& arrivals,
                           const std::vector<Placement>& scheduled,
                           const std::vector<Placement>& departures);

struct NormalizedWorkload {
    std::vector<double> sizes;       // divided by capacity, rejected entries omitted
    std::vector<int> rejected;       // indices with size > capacity
};

NormalizedWorkload normalize_workload(double capacity, const std::vector<double>& sizes);

/// Builds a job, classifying it against the partition when one is active.
Job make_job(Units size, std::int64_t arrival_slot, std::int32_t duration_slots,
             const PartitionSpec* partition);

}  // namespace packsim
