#include "packsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace packsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Frac frac_from_json(const json& v, const char* field) {
    if (v.is_string()) return parse_frac(v.get<std::string>());
    if (v.is_number_integer()) return Frac::of(v.get<std::int64_t>());
    if (v.is_number_float()) {
        // numbers snap to the 12-decimal size grid
        return units_to_frac(to_units(v.get<double>()));
    }
    throw std::invalid_argument(std::string("scenario: field '") + field +
                                "' must be a number or a fraction string");
}

std::vector<Policy> parse_policies(const json& doc) {
    std::vector<Policy> out;
    auto add = [&out](const std::string& name) {
        auto p = policy_from_name(name);
        if (!p) throw std::invalid_argument("scenario: unknown policy '" + name + "'");
        out.push_back(*p);
    };
    if (doc.contains("policies")) {
        for (const auto& v : doc.at("policies")) add(v.get<std::string>());
    } else if (doc.contains("policy")) {
        add(doc.at("policy").get<std::string>());
    } else {
        throw std::invalid_argument("scenario: missing 'policy' or 'policies'");
    }
    if (out.empty()) throw std::invalid_argument("scenario: empty policy list");
    return out;
}

SizeLaw parse_size_law(const json& doc, const Frac& capacity) {
    const std::string kind = doc.value("sizes", "discrete");
    if (kind == "discrete") {
        if (!doc.contains("size_values") || !doc.contains("size_probs"))
            throw std::invalid_argument("scenario: discrete sizes need size_values and size_probs");
        std::vector<Frac> values, probs;
        for (const auto& v : doc.at("size_values")) {
            Frac raw = frac_from_json(v, "size_values");
            if (raw > capacity)
                throw std::invalid_argument("scenario: size " + raw.str() +
                                            " exceeds capacity " + capacity.str());
            values.push_back(raw / capacity);
        }
        for (const auto& v : doc.at("size_probs")) probs.push_back(frac_from_json(v, "size_probs"));
        return SizeLaw::discrete(std::move(values), std::move(probs));
    }
    if (kind == "uniform") {
        Frac a = frac_from_json(doc.at("size_a"), "size_a");
        Frac b = frac_from_json(doc.at("size_b"), "size_b");
        if (b > capacity) throw std::invalid_argument("scenario: size_b exceeds capacity");
        return SizeLaw::uniform(a / capacity, b / capacity);
    }
    throw std::invalid_argument("scenario: unknown size law '" + kind + "'");
}

Scenario parse_base(const json& doc, const std::string& base_dir, bool defer_trace = false) {
    Scenario sc;
    sc.name = doc.value("name", "run");
    sc.servers = doc.value("servers", 1);
    const Frac capacity =
        doc.contains("capacity") ? frac_from_json(doc.at("capacity"), "capacity") : Frac(1, 1);
    if (!(Frac(0, 1) < capacity)) throw std::invalid_argument("scenario: capacity must be positive");

    if (doc.contains("J")) {
        const auto& j = doc.at("J");
        if (j.is_string()) {
            if (j.get<std::string>() != "auto")
                throw std::invalid_argument("scenario: J must be an integer or \"auto\"");
        } else {
            sc.j_levels = j.get<int>();
        }
    }
    sc.epsilon = doc.value("epsilon", 0.05);

    const std::string arrival = doc.value("arrival", "poisson");
    if (arrival == "poisson") {
        sc.arrival.kind = ArrivalSpec::Kind::poisson;
        if (!doc.contains("lambda")) throw std::invalid_argument("scenario: poisson arrivals need lambda");
        sc.arrival.lambda = doc.at("lambda").get<double>();
        sc.sizes = parse_size_law(doc, capacity);
    } else if (arrival == "trace") {
        sc.arrival.kind = ArrivalSpec::Kind::trace;
        if (!defer_trace) {
            if (!doc.contains("trace"))
                throw std::invalid_argument("scenario: trace arrivals need a path");
            fs::path p = fs::path(doc.at("trace").get<std::string>());
            if (p.is_relative()) p = fs::path(base_dir) / p;
            std::ifstream in(p);
            if (!in) throw std::runtime_error("scenario: cannot open trace " + p.string());
            sc.trace = read_prepared_trace(in);
        }
    } else {
        throw std::invalid_argument("scenario: unknown arrival kind '" + arrival + "'");
    }

    const std::string service = doc.value("service", "geometric");
    if (service == "geometric") {
        sc.service.kind = ServiceSpec::Kind::geometric;
        sc.service.mu = doc.value("mu", 0.01);
    } else if (service == "deterministic") {
        sc.service.kind = ServiceSpec::Kind::deterministic;
        if (!doc.contains("duration_slots"))
            throw std::invalid_argument("scenario: deterministic service needs duration_slots");
        sc.service.duration_slots = doc.at("duration_slots").get<std::int32_t>();
    } else if (service == "trace") {
        sc.service.kind = ServiceSpec::Kind::trace;
    } else {
        throw std::invalid_argument("scenario: unknown service kind '" + service + "'");
    }

    if (!doc.contains("horizon")) throw std::invalid_argument("scenario: missing horizon");
    sc.horizon = doc.at("horizon").get<std::int64_t>();
    sc.seed = doc.value("seed", std::uint64_t{1});
    sc.sample_every = doc.value("sample_every", std::int64_t{1000});
    sc.theta = doc.value("theta", 0.05);
    sc.burn_in = doc.value("burn_in", 0.2);
    sc.verdict_window = doc.value("verdict_window", 0.1);
    sc.tail_window = doc.value("tail_window", 0.25);
    return sc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Verdict majority(const std::vector<Verdict>& vs) {
    int counts[3] = {0, 0, 0};
    for (Verdict v : vs) ++counts[static_cast<int>(v)];
    if (counts[static_cast<int>(Verdict::stable)] > static_cast<int>(vs.size()) / 2)
        return Verdict::stable;
    if (counts[static_cast<int>(Verdict::unstable)] > static_cast<int>(vs.size()) / 2)
        return Verdict::unstable;
    return Verdict::inconclusive;
}

}  // namespace

ScenarioFile parse_scenario_json(const std::string& text, const std::string& base_dir) {
    json doc = json::parse(text);  // parse errors carry byte positions
    ScenarioFile file;
    file.base = parse_base(doc, base_dir);
    file.policies = parse_policies(doc);
    file.replications = doc.value("replications", 1);
    if (file.replications < 1) throw std::invalid_argument("scenario: replications must be >= 1");
    for (Policy p : file.policies) {
        Scenario probe = file.base;
        probe.policy = p;
        probe.validate();
    }
    return file;
}

ScenarioFile parse_scenario_file(const std::string& path) {
    return parse_scenario_json(read_file(path), fs::path(path).parent_path().string());
}

void metrics_to_csv(std::ostream& out, const RunMetrics& metrics) {
    out << "slot,q_total,busy_capacity,arrivals_cum,departures_cum";
    for (int j = 0; j < metrics.vq_count; ++j) out << ",vq_" << j;
    out << "\n";
    for (const MetricsSample& s : metrics.samples) {
        out << s.slot << "," << s.queue_total << "," << fmt_double(to_real(s.busy_capacity)) << ","
            << s.arrivals_cum << "," << s.departures_cum;
        for (std::int64_t q : s.vq_sizes) out << "," << q;
        out << "\n";
    }
}

std::string summary_json(const RunMetrics& metrics) {
    json j;
    j["policy"] = metrics.policy;
    j["seed"] = metrics.seed;
    j["horizon"] = metrics.horizon;
    j["lambda"] = metrics.lambda_effective;
    j["arrivals"] = metrics.arrivals_total;
    j["departures"] = metrics.departures_total;
    j["tail_mean_queue"] = metrics.tail_mean_queue;
    j["verdict"] = verdict_name(metrics.stability.verdict);
    j["slope"] = metrics.stability.slope;
    j["first_window_mean"] = metrics.stability.first_window_mean;
    j["last_window_mean"] = metrics.stability.last_window_mean;
    return j.dump(2);
}

RunArtifacts run_scenario_file(const std::string& path, const std::string& out_dir,
                               std::optional<std::uint64_t> seed_override) {
    ScenarioFile file = parse_scenario_file(path);
    if (seed_override) file.base.seed = *seed_override;
    fs::create_directories(out_dir);
    RunArtifacts artifacts;
    for (Policy p : file.policies) {
        Scenario sc = file.base;
        sc.policy = p;
        std::vector<RunMetrics> reps = replicate(sc, file.replications);
        json summaries = json::array();
        for (int i = 0; i < file.replications; ++i) {
            fs::path csv = fs::path(out_dir) /
                           (sc.name + "_" + policy_name(p) + "_rep" + std::to_string(i) + ".csv");
            std::ofstream out(csv, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + csv.string());
            metrics_to_csv(out, reps[static_cast<std::size_t>(i)]);
            artifacts.csv_paths.push_back(csv.string());
            summaries.push_back(json::parse(summary_json(reps[static_cast<std::size_t>(i)])));
        }
        fs::path sum = fs::path(out_dir) / (sc.name + "_" + policy_name(p) + ".json");
        std::ofstream out(sum, std::ios::binary);
        out << summaries.dump(2) << "\n";
        artifacts.summary_paths.push_back(sum.string());
    }
    return artifacts;
}

SweepSpec parse_sweep_file(const std::string& path) {
    json doc = json::parse(read_file(path));
    SweepSpec spec;
    spec.name = doc.value("name", "sweep");
    const std::string parameter = doc.value("parameter", "alpha");
    if (parameter == "alpha") {
        spec.parameter = SweepParameter::alpha;
        spec.base = parse_base(doc, fs::path(path).parent_path().string());
        if (spec.base.arrival.kind != ArrivalSpec::Kind::poisson)
            throw std::invalid_argument("sweep: alpha sweeps need poisson arrivals");
    } else if (parameter == "scaling") {
        spec.parameter = SweepParameter::trace_scaling;
        if (!doc.contains("trace_raw"))
            throw std::invalid_argument("sweep: scaling sweeps need trace_raw");
        fs::path p = fs::path(doc.at("trace_raw").get<std::string>());
        if (p.is_relative()) p = fs::path(path).parent_path() / p;
        spec.raw_trace_path = p.string();
        spec.slot_ms = doc.value("slot_ms", std::int64_t{100});
        json probe = doc;
        probe["arrival"] = "trace";
        spec.base = parse_base(probe, fs::path(path).parent_path().string(),
                               /*defer_trace=*/true);  // cells prepare per grid value
    } else {
        throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");
    }
    if (!doc.contains("grid")) throw std::invalid_argument("sweep: missing grid");
    for (const auto& v : doc.at("grid")) spec.grid.push_back(v.get<double>());
    if (spec.grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (double v : spec.grid)
        if (!(v > 0)) throw std::invalid_argument("sweep: grid values must be positive");
    spec.policies = parse_policies(doc);
    spec.replications = doc.value("replications", 1);
    if (spec.replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");
    return spec;
}

std::vector<SweepCell> sweep(const SweepSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::vector<SweepCell> cells;
    for (double value : spec.grid) {
        for (Policy p : spec.policies) {
            SweepCell cell;
            cell.value = value;
            cell.policy = p;
            try {
                Scenario sc = spec.base;
                sc.policy = p;
                if (spec.parameter == SweepParameter::alpha) {
                    // lambda = alpha * mu * L / mean size, so rho = alpha * L / mean
                    const double mean = mean_size(sc.sizes);
                    sc.arrival.lambda = value * sc.service.mu * static_cast<double>(sc.servers) / mean;
                } else {
                    std::ifstream in(spec.raw_trace_path);
                    if (!in) throw std::runtime_error("cannot open " + spec.raw_trace_path);
                    Frac scaling = parse_frac(fmt_double(value));
                    PreparedTrace prepared = trace_prepare(in, spec.slot_ms, scaling);
                    sc.trace = std::move(prepared.jobs);
                    std::int64_t last_slot = sc.trace.empty() ? 0 : sc.trace.back().slot;
                    if (sc.horizon <= last_slot) sc.horizon = last_slot + 1;
                }
                std::vector<RunMetrics> reps = replicate(sc, spec.replications);
                std::vector<double> tails, slopes;
                std::vector<Verdict> verdicts;
                for (const RunMetrics& m : reps) {
                    tails.push_back(m.tail_mean_queue);
                    slopes.push_back(m.stability.slope);
                    verdicts.push_back(m.stability.verdict);
                }
                cell.tail_mean_median = median(tails);
                cell.slope_median = median(slopes);
                cell.verdict = majority(verdicts);
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void sweep_to_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "value,policy,tail_mean_median,slope_median,verdict\n";
    for (const SweepCell& c : cells) {
        out << fmt_double(c.value) << "," << policy_name(c.policy) << ",";
        if (c.failed) {
            out << ",,failed\n";
            continue;
        }
        out << fmt_double(c.tail_mean_median) << "," << fmt_double(c.slope_median) << ","
            << verdict_name(c.verdict) << "\n";
    }
}

void run_sweep_file(const std::string& path, const std::string& out_dir) {
    SweepSpec spec = parse_sweep_file(path);
    std::vector<SweepCell> cells = sweep(spec);
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / (spec.name + "_sweep.csv"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write sweep csv");
        sweep_to_csv(out, cells);
    }
    {
        json info;
        info["spec"] = path;
        info["completed_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        std::ofstream out(fs::path(out_dir) / (spec.name + "_run_info.json"), std::ios::binary);
        out << info.dump(2) << "\n";
    }
}

}  // namespace packsim
