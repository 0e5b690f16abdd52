#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "packsim/capacity.hpp"
#include "packsim/report.hpp"

namespace {

using nlohmann::json;
using namespace packsim;

std::vector<Frac> parse_frac_list(const std::string& text) {
    std::vector<Frac> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_frac(item));
    return out;
}

json configuration_json(const Configuration& k) {
    json arr = json::array();
    for (std::int32_t c : k) arr.push_back(c);
    return arr;
}

int cmd_oracle(const std::string& sizes_text, const std::string& probs_text, int servers,
               int upper_rounded_j, int restrict_kred_j) {
    std::vector<Frac> raw_sizes = parse_frac_list(sizes_text);
    std::vector<Frac> raw_probs = parse_frac_list(probs_text);
    if (raw_sizes.size() != raw_probs.size()) {
        std::cerr << "oracle: sizes and probs must have the same length\n";
        return 2;
    }
    WorkloadProblem problem;
    problem.servers = servers;
    if (upper_rounded_j > 0) {
        // Map raw sizes through the universal partition: types become the
        // 2J upper-rounded sizes, probabilities accumulate per type.
        PartitionSpec spec = universal_partition(upper_rounded_j);
        std::vector<Rational> probs(static_cast<std::size_t>(spec.type_count()), Rational(0));
        for (std::size_t i = 0; i < raw_sizes.size(); ++i) {
            TypedSize t = type_of(raw_sizes[i], spec);
            probs[static_cast<std::size_t>(t.type)] += to_rational(raw_probs[i]);
        }
        for (int j = 0; j < spec.type_count(); ++j)
            problem.system.sizes.push_back(to_rational(spec.subsets[static_cast<std::size_t>(j)].hi));
        problem.system.probs = probs;
    } else {
        for (const Frac& s : raw_sizes) problem.system.sizes.push_back(to_rational(s));
        for (const Frac& p : raw_probs) problem.system.probs.push_back(to_rational(p));
    }
    if (restrict_kred_j > 0) problem.restriction = reduced_configurations(restrict_kred_j);

    WorkloadResult result = max_supportable_workload(problem);
    json out;
    out["rho_star"] = rational_str(result.rho_star);
    out["rho_star_decimal"] = rational_to_double(result.rho_star);
    out["servers"] = servers;
    json mix = json::array();
    for (std::size_t i = 0; i < result.configs.size(); ++i) {
        if (result.mixture[i] == 0) continue;
        json entry;
        entry["config"] = configuration_json(result.configs[i]);
        entry["weight"] = rational_str(result.mixture[i]);
        mix.push_back(entry);
    }
    out["mixture"] = mix;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_kred(int j_levels) {
    json out;
    out["J"] = j_levels;
    json arr = json::array();
    for (const Configuration& k : reduced_configurations(j_levels)) arr.push_back(configuration_json(k));
    out["configs"] = arr;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_prop1(int j_levels, int trials, std::uint64_t seed) {
    ReducedWeightCampaign campaign = reduced_weight_campaign(j_levels, trials, seed);
    json out;
    out["J"] = j_levels;
    out["trials"] = campaign.trials;
    out["violations"] = campaign.violations;
    out["min_ratio"] = rational_str(campaign.min_ratio);
    out["min_ratio_decimal"] = rational_to_double(campaign.min_ratio);
    out["pass"] = campaign.violations == 0;
    std::cout << out.dump(2) << "\n";
    return campaign.violations == 0 ? 0 : 1;
}

int cmd_bounds(const std::string& law_kind, const std::string& a_text, const std::string& b_text,
               const std::string& sizes_text, const std::string& probs_text, int n_max, int servers,
               const std::string& format) {
    SizeLaw law;
    if (law_kind == "uniform") {
        law = SizeLaw::uniform(parse_frac(a_text), parse_frac(b_text));
    } else if (law_kind == "discrete") {
        law = SizeLaw::discrete(parse_frac_list(sizes_text), parse_frac_list(probs_text));
    } else {
        std::cerr << "bounds: unknown law '" << law_kind << "'\n";
        return 2;
    }
    auto cdf = [&law](double x) { return law.cdf(x); };
    json rows = json::array();
    std::ostringstream csv;
    csv << "n,types,upper_rounded,lower_rounded\n";
    for (int n = 0; n <= n_max; ++n) {
        PartitionSpec part = quantile_partition(cdf, n);
        RoundedBounds bounds = rounded_workload_bounds(part, law, servers);
        json row;
        row["n"] = n;
        row["types"] = part.type_count();
        row["upper_rounded"] = rational_str(bounds.upper_rounded);
        row["upper_rounded_decimal"] = rational_to_double(bounds.upper_rounded);
        if (bounds.lower_unbounded()) {
            row["lower_rounded"] = "unbounded";
            csv << n << "," << part.type_count() << "," << rational_str(bounds.upper_rounded)
                << ",unbounded\n";
        } else {
            row["lower_rounded"] = rational_str(*bounds.lower_rounded);
            row["lower_rounded_decimal"] = rational_to_double(*bounds.lower_rounded);
            csv << n << "," << part.type_count() << "," << rational_str(bounds.upper_rounded) << ","
                << rational_str(*bounds.lower_rounded) << "\n";
        }
        rows.push_back(row);
    }
    if (format == "csv") {
        std::cout << csv.str();
    } else {
        json out;
        out["servers"] = servers;
        out["rows"] = rows;
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_trace_prep(const std::string& input, std::int64_t slot_ms, const std::string& scaling,
                   const std::string& out_prefix) {
    std::ifstream in(input);
    if (!in) {
        std::cerr << "trace-prep: cannot open " << input << "\n";
        return 2;
    }
    PreparedTrace prepared = trace_prepare(in, slot_ms, parse_frac(scaling));
    {
        std::ofstream out(out_prefix + ".csv", std::ios::binary);
        if (!out) {
            std::cerr << "trace-prep: cannot write " << out_prefix << ".csv\n";
            return 2;
        }
        write_prepared_trace(out, prepared.jobs);
    }
    {
        std::ofstream out(out_prefix + "_report.json", std::ios::binary);
        out << prepared.report.to_json() << "\n";
    }
    std::cout << prepared.report.to_json() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster scheduling simulator and throughput analysis toolkit"};
    app.require_subcommand(1);

    std::string out_dir = "packsim_out";
    std::string format = "json";
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "csv or json")->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a scenario file");
    std::string scenario_path;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    simulate->add_option("file", scenario_path, "scenario JSON")->required();
    simulate->add_option("--seed", seed_override, "override the scenario seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep file");
    std::string sweep_path;
    sweep_cmd->add_option("file", sweep_path, "sweep JSON")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact maximum supportable workload");
    std::string sizes_text, probs_text;
    int servers = 1, restrict_kred = 0, upper_rounded = 0;
    oracle->add_option("--sizes", sizes_text, "comma list of type sizes (decimals or fractions)")
        ->required();
    oracle->add_option("--probs", probs_text, "comma list of type probabilities")->required();
    oracle->add_option("--servers", servers, "server count")->capture_default_str();
    oracle->add_option("--restrict-kred", restrict_kred,
                       "restrict mixing to the reduced configuration set for this J");
    oracle->add_option("--upper-rounded", upper_rounded,
                       "map sizes through the universal partition at this J first");

    // kred
    auto* kred = app.add_subcommand("kred", "emit the reduced configuration set");
    int kred_j = 2;
    kred->add_option("--j,--J", kred_j, "partition levels")->required();

    // prop1
    auto* prop1 = app.add_subcommand("prop1", "randomized reduced-weight property campaign");
    int prop1_j = 2, prop1_trials = 200;
    std::uint64_t prop1_seed = 1;
    prop1->add_option("--j,--J", prop1_j, "partition levels")->required();
    prop1->add_option("--trials", prop1_trials, "instances to test")->capture_default_str();
    prop1->add_option("--seed", prop1_seed, "campaign seed")->capture_default_str();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "rounded workload bounds over quantile partitions");
    std::string law_kind = "uniform", a_text = "0", b_text = "1";
    std::string bl_sizes, bl_probs;
    int n_max = 3, bounds_servers = 1;
    bounds->add_option("--law", law_kind, "uniform or discrete")->capture_default_str();
    bounds->add_option("--a", a_text, "uniform lower endpoint")->capture_default_str();
    bounds->add_option("--b", b_text, "uniform upper endpoint")->capture_default_str();
    bounds->add_option("--values", bl_sizes, "discrete atom sizes");
    bounds->add_option("--probs", bl_probs, "discrete atom probabilities");
    bounds->add_option("--n-max", n_max, "largest quantile level")->capture_default_str();
    bounds->add_option("--servers", bounds_servers, "server count")->capture_default_str();

    // trace-prep
    auto* trace = app.add_subcommand("trace-prep", "prepare a raw trace for replay");
    std::string trace_input, trace_scaling = "1", trace_prefix = "trace_prepared";
    std::int64_t slot_ms = 100;
    trace->add_option("file", trace_input, "raw CSV (arrival_time_us,duration_us,cpu,mem)")
        ->required();
    trace->add_option("--slot-ms", slot_ms, "slot length in milliseconds")->capture_default_str();
    trace->add_option("--scaling", trace_scaling, "traffic scaling (arrival times divide by this)")
        ->capture_default_str();
    trace->add_option("--out-prefix", trace_prefix, "output prefix")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            RunArtifacts artifacts = run_scenario_file(
                scenario_path, out_dir,
                seed_set ? std::optional<std::uint64_t>(seed_override) : std::nullopt);
            for (const std::string& p : artifacts.csv_paths) std::cout << p << "\n";
            for (const std::string& p : artifacts.summary_paths) std::cout << p << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) {
            run_sweep_file(sweep_path, out_dir);
            std::cout << out_dir << "\n";
            return 0;
        }
        if (oracle->parsed())
            return cmd_oracle(sizes_text, probs_text, servers, upper_rounded, restrict_kred);
        if (kred->parsed()) return cmd_kred(kred_j);
        if (prop1->parsed()) return cmd_prop1(prop1_j, prop1_trials, prop1_seed);
        if (bounds->parsed())
            return cmd_bounds(law_kind, a_text, b_text, bl_sizes, bl_probs, n_max, bounds_servers,
                              format);
        if (trace->parsed()) return cmd_trace_prep(trace_input, slot_ms, trace_scaling, trace_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
