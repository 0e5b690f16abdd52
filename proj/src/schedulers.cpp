#include "packsim/schedulers.hpp"

#include <string>

namespace packsim {

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::fifo_ff: return "fifo-ff";
        case Policy::bf_js: return "bf-js";
        case Policy::vqs: return "vqs";
        case Policy::vqs_bf: return "vqs-bf";
    }
    return "?";
}

std::optional<Policy> policy_from_name(const std::string& name) {
    if (name == "fifo-ff") return Policy::fifo_ff;
    if (name == "bf-js") return Policy::bf_js;
    if (name == "vqs") return Policy::vqs;
    if (name == "vqs-bf") return Policy::vqs_bf;
    return std::nullopt;
}

SchedulerState SchedulerState::make(Policy policy, int servers, int j_levels) {
    SchedulerState st;
    st.policy = policy;
    st.had_departure.assign(static_cast<std::size_t>(servers), 0);
    if (policy == Policy::vqs || policy == Policy::vqs_bf) {
        st.partition = universal_partition(j_levels);
        st.reduced = reduced_configurations(j_levels);
        st.active.assign(static_cast<std::size_t>(servers), -1);
    }
    return st;
}

namespace {

void place(const JobPool& pool, QueueState& queue, ServerState& server, std::int64_t id,
           std::vector<Placement>& out) {
    const Job& job = pool[id];
    server.place(job);
    queue.remove(job);
    out.push_back(Placement{id, server.index});
}

// Fills one server greedily with the largest fitting queued jobs.
void best_fit_server(const JobPool& pool, QueueState& queue, ServerState& server,
                     std::vector<Placement>& out) {
    for (;;) {
        auto id = queue.largest_fitting(server.residual());
        if (!id) return;
        place(pool, queue, server, *id, out);
    }
}

// The unique type other than 1 with a positive count; every reduced
// configuration has exactly one.
int companion_type(const Configuration& k) {
    for (int j = 0; j < static_cast<int>(k.size()); ++j)
        if (j != 1 && k[j] > 0) return j;
    return -1;
}

struct ResidentView {
    bool has_type1 = false;
    Units type1_rounded = 0;
    int companion_count = 0;

    static ResidentView scan(const JobPool& pool, const ServerState& server, int companion) {
        ResidentView v;
        for (std::int64_t id : server.resident) {
            const Job& job = pool[id];
            if (job.type == 1) {
                v.has_type1 = true;
                v.type1_rounded = job.rounded_size;
            }
            if (job.type == companion) ++v.companion_count;
        }
        return v;
    }
};

void renew_if_empty(SchedulerState& state, const QueueState& queue, const ServerState& server) {
    if (!server.resident.empty()) return;
    state.active[static_cast<std::size_t>(server.index)] =
        max_weight(state.reduced, queue.vq_sizes()).index;
}

}  // namespace

std::vector<Placement> fifo_ff_step(const JobPool& pool, QueueState& queue,
                                    std::vector<ServerState>& servers) {
    std::vector<Placement> out;
    for (;;) {
        auto head = queue.head_of_line();
        if (!head) return out;
        const Job& job = pool[*head];
        int target = -1;
        for (const ServerState& s : servers) {
            if (job.rounded_size <= s.residual()) {
                target = s.index;
                break;
            }
        }
        if (target < 0) return out;  // head-of-line blocking
        place(pool, queue, servers[static_cast<std::size_t>(target)], *head, out);
    }
}

std::vector<Placement> bf_j_step(const JobPool& pool, const std::vector<std::int64_t>& job_ids,
                                 QueueState& queue, std::vector<ServerState>& servers) {
    std::vector<Placement> out;
    for (std::int64_t id : job_ids) {
        if (!queue.waiting(id)) continue;
        const Job& job = pool[id];
        int target = -1;
        Units best = 0;
        for (const ServerState& s : servers) {
            Units r = s.residual();
            if (job.rounded_size > r) continue;
            if (target < 0 || r < best) {
                target = s.index;
                best = r;
            }
        }
        if (target >= 0) place(pool, queue, servers[static_cast<std::size_t>(target)], id, out);
    }
    return out;
}

std::vector<Placement> bf_s_step(const JobPool& pool, const std::vector<int>& server_indices,
                                 QueueState& queue, std::vector<ServerState>& servers) {
    std::vector<Placement> out;
    for (int idx : server_indices)
        best_fit_server(pool, queue, servers[static_cast<std::size_t>(idx)], out);
    return out;
}

std::vector<Placement> bf_js_step(SchedulerState& state, const JobPool& pool,
                                  const std::vector<std::int64_t>& new_arrivals, QueueState& queue,
                                  std::vector<ServerState>& servers) {
    std::vector<int> departed;
    for (int i = 0; i < static_cast<int>(servers.size()); ++i)
        if (state.had_departure[static_cast<std::size_t>(i)]) departed.push_back(i);
    std::vector<Placement> out = bf_s_step(pool, departed, queue, servers);
    std::vector<Placement> second = bf_j_step(pool, new_arrivals, queue, servers);
    out.insert(out.end(), second.begin(), second.end());
    return out;
}

std::vector<Placement> vqs_step(SchedulerState& state, const JobPool& pool, QueueState& queue,
                                std::vector<ServerState>& servers) {
    std::vector<Placement> out;
    for (ServerState& server : servers) {
        renew_if_empty(state, queue, server);
        const int cfg = state.active[static_cast<std::size_t>(server.index)];
        if (cfg < 0) continue;
        const Configuration& k = state.reduced[static_cast<std::size_t>(cfg)];
        const bool reserve = k[1] == 1;
        const int companion = companion_type(k);
        ResidentView view = ResidentView::scan(pool, server, companion);

        if (reserve && !view.has_type1) {
            if (auto id = queue.vq_head(1)) {
                // Type-1 rounded sizes are at most 2/3, so the reserved
                // slice always accommodates the head job.
                place(pool, queue, server, *id, out);
                view.has_type1 = true;
                view.type1_rounded = pool[*id].rounded_size;
            }
        }
        if (companion < 0) continue;
        // Companion jobs fill the unreserved capacity in head-of-line order;
        // the first head that does not fit stops the slot. While k1 = 1 the
        // 2/3 reservation holds whether or not a type-1 job is present.
        Units companion_occupied = server.occupied - (view.has_type1 ? view.type1_rounded : 0);
        for (;;) {
            auto id = queue.vq_head(companion);
            if (!id) break;
            const Units rounded = pool[*id].rounded_size;
            if (reserve) {
                if (3 * (companion_occupied + rounded) > server.capacity) break;
            } else {
                if (rounded > server.residual()) break;
            }
            place(pool, queue, server, *id, out);
            companion_occupied += rounded;
        }
    }
    return out;
}

std::vector<Placement> vqs_bf_step(SchedulerState& state, const JobPool& pool, QueueState& queue,
                                   std::vector<ServerState>& servers) {
    std::vector<Placement> out;
    for (ServerState& server : servers) {
        renew_if_empty(state, queue, server);
        const int cfg = state.active[static_cast<std::size_t>(server.index)];
        if (cfg < 0) continue;
        const Configuration& k = state.reduced[static_cast<std::size_t>(cfg)];
        const int companion = companion_type(k);
        ResidentView view = ResidentView::scan(pool, server, companion);

        if (k[1] == 1 && !view.has_type1) {
            // Largest type-1 job that actually fits; only its own size is
            // held, nothing is reserved beyond it.
            if (auto id = queue.vq_largest_fitting(1, server.residual()))
                place(pool, queue, server, *id, out);
        }
        if (companion >= 0) {
            int count = view.companion_count;
            while (count < k[static_cast<std::size_t>(companion)]) {
                auto id = queue.vq_largest_fitting(companion, server.residual());
                if (!id) break;
                place(pool, queue, server, *id, out);
                ++count;
            }
        }
        best_fit_server(pool, queue, server, out);
    }
    return out;
}

}  // namespace packsim
