#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "packsim/sim.hpp"

namespace packsim {

/// A scenario document: one base scenario plus the policies to run it under
/// and the replication count. Policies share the workload realization.
struct ScenarioFile {
    Scenario base;
    std::vector<Policy> policies;
    int replications = 1;
};

ScenarioFile parse_scenario_file(const std::string& path);
ScenarioFile parse_scenario_json(const std::string& text, const std::string& base_dir);

void metrics_to_csv(std::ostream& out, const RunMetrics& metrics);
std::string summary_json(const RunMetrics& metrics);

struct RunArtifacts {
    std::vector<std::string> csv_paths;
    std::vector<std::string> summary_paths;
};

/// Runs every policy of the file for the configured replications and writes
/// <name>_<policy>_rep<i>.csv plus a per-policy summary JSON into out_dir.
/// Nothing is written until the whole document validates.
RunArtifacts run_scenario_file(const std::string& path, const std::string& out_dir,
                               std::optional<std::uint64_t> seed_override = std::nullopt);

enum class SweepParameter { alpha, trace_scaling };

/// A grid experiment over traffic intensity (lambda = alpha * mu * L / mean
/// size) or trace scaling, crossed with policies and replications.
struct SweepSpec {
    std::string name = "sweep";
    Scenario base;
    SweepParameter parameter = SweepParameter::alpha;
    std::vector<double> grid;
    std::vector<Policy> policies;
    int replications = 1;
    // raw trace inputs for scaling sweeps
    std::string raw_trace_path;
    std::int64_t slot_ms = 100;
};

SweepSpec parse_sweep_file(const std::string& path);

struct SweepCell {
    double value = 0.0;
    Policy policy = Policy::bf_js;
    bool failed = false;
    std::string error;
    double tail_mean_median = 0.0;
    double slope_median = 0.0;
    Verdict verdict = Verdict::inconclusive;  // majority across replications
};

std::vector<SweepCell> sweep(const SweepSpec& spec);

void sweep_to_csv(std::ostream& out, const std::vector<SweepCell>& cells);

/// Writes sweep.csv (byte-stable across re-runs) and a run_info.json sidecar
/// carrying the timestamp.
void run_sweep_file(const std::string& path, const std::string& out_dir);

}  // namespace packsim
