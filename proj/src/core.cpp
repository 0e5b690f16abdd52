#include "packsim/core.hpp"

#include <limits>

namespace packsim {

void QueueState::admit(const Job& job) {
    if (job.id < 0) throw std::invalid_argument("queue admit: job has no id");
    if (static_cast<std::int64_t>(waiting_.size()) <= job.id)
        waiting_.resize(static_cast<std::size_t>(job.id) + 1, 0);
    if (waiting_[static_cast<std::size_t>(job.id)]) throw std::logic_error("queue admit: duplicate job");
    waiting_[static_cast<std::size_t>(job.id)] = 1;
    fifo_.push_back(job.id);
    by_size_.insert({job.rounded_size, job.id});
    if (type_count() > 0) {
        if (job.type < 0 || job.type >= type_count())
            throw std::logic_error("queue admit: job missing virtual-queue type");
        vq_fifo_[static_cast<std::size_t>(job.type)].push_back(job.id);
        vq_by_size_[static_cast<std::size_t>(job.type)].insert({job.rounded_size, job.id});
        ++vq_count_[static_cast<std::size_t>(job.type)];
    }
    ++count_;
}

void QueueState::remove(const Job& job) {
    if (!waiting(job.id)) throw std::logic_error("queue remove: job not waiting");
    waiting_[static_cast<std::size_t>(job.id)] = 0;
    by_size_.erase(by_size_.find({job.rounded_size, job.id}));
    if (type_count() > 0) {
        vq_by_size_[static_cast<std::size_t>(job.type)].erase(
            vq_by_size_[static_cast<std::size_t>(job.type)].find({job.rounded_size, job.id}));
        --vq_count_[static_cast<std::size_t>(job.type)];
    }
    --count_;
    // fifo_ entries are dropped lazily when they reach the front
}

std::optional<std::int64_t> QueueState::head_of_line() const {
    while (!fifo_.empty() && !waiting(fifo_.front())) fifo_.pop_front();
    if (fifo_.empty()) return std::nullopt;
    return fifo_.front();
}

std::optional<std::int64_t> QueueState::vq_head(int type) const {
    auto& dq = vq_fifo_[static_cast<std::size_t>(type)];
    while (!dq.empty() && !waiting(dq.front())) dq.pop_front();
    if (dq.empty()) return std::nullopt;
    return dq.front();
}

std::optional<std::int64_t> QueueState::largest_in(const std::multiset<SizeKey>& index, Units residual) {
    auto it = index.lower_bound({residual + 1, std::numeric_limits<std::int64_t>::min()});
    if (it == index.begin()) return std::nullopt;
    --it;
    // earliest arrival among jobs of that size
    auto first = index.lower_bound({it->first, std::numeric_limits<std::int64_t>::min()});
    return first->second;
}

std::optional<std::int64_t> QueueState::largest_fitting(Units residual) const {
    return largest_in(by_size_, residual);
}

std::optional<std::int64_t> QueueState::vq_largest_fitting(int type, Units residual) const {
    return largest_in(vq_by_size_[static_cast<std::size_t>(type)], residual);
}

void apply_slot_accounting(const JobPool& pool, QueueState& queue, std::vector<ServerState>& servers,
                           const std::vector<std::int64_t>& arrivals,
                           const std::vector<Placement>& scheduled,
                           const std::vector<Placement>& departures) {
    const std::int64_t q_before = queue.size();
    for (std::int64_t id : arrivals) queue.admit(pool[id]);
    for (const Placement& p : scheduled) {
        const Job& job = pool[p.job_id];
        if (!queue.waiting(job.id))
            throw std::logic_error("slot accounting: scheduled job is not in the queue");
        servers[static_cast<std::size_t>(p.server)].place(job);  // capacity fault if it cannot fit
        queue.remove(job);
    }
    for (const Placement& p : departures)
        servers[static_cast<std::size_t>(p.server)].remove(pool[p.job_id]);
    const std::int64_t expected = q_before + static_cast<std::int64_t>(arrivals.size()) -
                                  static_cast<std::int64_t>(scheduled.size());
    if (queue.size() != expected) throw std::logic_error("slot accounting: queue balance violated");
}

NormalizedWorkload normalize_workload(double capacity, const std::vector<double>& sizes) {
    if (!(capacity > 0)) throw std::invalid_argument("normalize_workload: capacity must be positive");
    NormalizedWorkload out;
    out.sizes.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(sizes[i] > 0)) throw std::invalid_argument("normalize_workload: sizes must be positive");
        if (sizes[i] > capacity) {
            out.rejected.push_back(static_cast<int>(i));
            continue;
        }
        out.sizes.push_back(sizes[i] / capacity);
    }
    return out;
}

Job make_job(Units size, std::int64_t arrival_slot, std::int32_t duration_slots,
             const PartitionSpec* partition) {
    Job job;
    job.size = size;
    job.rounded_size = size;
    job.arrival_slot = arrival_slot;
    job.duration_slots = duration_slots;
    if (partition != nullptr) {
        TypedUnits t = type_of_units(size, *partition);
        job.type = static_cast<std::int16_t>(t.type);
        job.rounded_size = t.rounded;
    }
    return job;
}

}  // namespace packsim
