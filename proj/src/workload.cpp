#include "packsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "packsim/rng.hpp"

namespace packsim {

SizeLaw SizeLaw::discrete(std::vector<Frac> values, std::vector<Frac> probs) {
    SizeLaw law;
    law.kind = SizeLawKind::discrete;
    // keep atoms sorted, probabilities following
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
    for (std::size_t i : order) {
        law.values.push_back(values[i]);
        law.probs.push_back(probs[i]);
    }
    law.validate();
    return law;
}

SizeLaw SizeLaw::uniform(Frac a, Frac b) {
    SizeLaw law;
    law.kind = SizeLawKind::uniform;
    law.a = a;
    law.b = b;
    law.validate();
    return law;
}

SizeLaw SizeLaw::empirical(std::vector<Units> samples) {
    SizeLaw law;
    law.kind = SizeLawKind::empirical;
    std::sort(samples.begin(), samples.end());
    law.samples = std::move(samples);
    law.validate();
    return law;
}

void SizeLaw::validate() const {
    const Frac zero(0, 1), one(1, 1);
    switch (kind) {
        case SizeLawKind::discrete: {
            if (values.empty() || values.size() != probs.size())
                throw std::invalid_argument("size law: discrete values/probs mismatch");
            Frac sum(0, 1);
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!(zero < values[i] && values[i] <= one))
                    throw std::invalid_argument("size law: atom outside (0,1]");
                if (probs[i] < zero) throw std::invalid_argument("size law: negative probability");
                sum = sum + probs[i];
            }
            if (sum != one) throw std::invalid_argument("size law: probabilities must sum to 1");
            break;
        }
        case SizeLawKind::uniform:
            if (!(zero <= a && a < b && b <= one))
                throw std::invalid_argument("size law: uniform needs 0 <= a < b <= 1");
            break;
        case SizeLawKind::empirical:
            if (samples.empty()) throw std::invalid_argument("size law: empty sample");
            for (Units s : samples)
                if (s <= 0 || s > kUnitScale)
                    throw std::invalid_argument("size law: sample outside (0,1]");
            break;
    }
}

double SizeLaw::cdf(double x) const {
    switch (kind) {
        case SizeLawKind::discrete: {
            double cum = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (values[i].to_double() <= x) cum += probs[i].to_double();
            }
            return cum;
        }
        case SizeLawKind::uniform: {
            double lo = a.to_double(), hi = b.to_double();
            if (x <= lo) return 0.0;
            if (x >= hi) return 1.0;
            return (x - lo) / (hi - lo);
        }
        case SizeLawKind::empirical: {
            auto it = std::upper_bound(samples.begin(), samples.end(), x,
                                       [](double v, Units s) { return v < to_real(s); });
            return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
        }
    }
    return 0.0;
}

double SizeLaw::min_support() const {
    switch (kind) {
        case SizeLawKind::discrete: return values.front().to_double();
        case SizeLawKind::uniform: return a.to_double();
        case SizeLawKind::empirical: return to_real(samples.front());
    }
    return 0.0;
}

Units SizeLaw::draw_units(std::uint64_t word) const {
    switch (kind) {
        case SizeLawKind::discrete: {
            double u = rng::to_unit_double(word);
            double cum = 0.0;
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                cum += probs[i].to_double();
                if (u < cum) return to_units(values[i].to_double());
            }
            return to_units(values.back().to_double());
        }
        case SizeLawKind::uniform: {
            double u = rng::to_positive_unit_double(word);  // (0,1] keeps the support half-open
            double x = a.to_double() + u * (b.to_double() - a.to_double());
            Units s = to_units(x);
            return s > 0 ? std::min(s, kUnitScale) : 1;
        }
        case SizeLawKind::empirical: {
            double u = rng::to_unit_double(word);
            std::size_t i = static_cast<std::size_t>(u * static_cast<double>(samples.size()));
            if (i >= samples.size()) i = samples.size() - 1;
            return samples[i];
        }
    }
    return 0;
}

Frac mean_size_exact(const SizeLaw& law) {
    switch (law.kind) {
        case SizeLawKind::discrete: {
            Frac sum(0, 1);
            for (std::size_t i = 0; i < law.values.size(); ++i)
                sum = sum + law.values[i] * law.probs[i];
            return sum;
        }
        case SizeLawKind::uniform:
            return (law.a + law.b) * Frac(1, 2);
        case SizeLawKind::empirical: {
            __int128 total = 0;
            for (Units s : law.samples) total += s;
            return Frac::from128(total, static_cast<__int128>(law.samples.size()) * kUnitScale);
        }
    }
    return Frac(0, 1);
}

double mean_size(const SizeLaw& law) { return mean_size_exact(law).to_double(); }

SizeLaw empirical_cdf(const std::vector<Units>& sizes) { return SizeLaw::empirical(sizes); }

namespace {

std::string format_size(Units u) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), to_real(u));
    return std::string(buf, res.ptr);
}

bool parse_fields(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields.size() == 4;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

PreparedTrace trace_prepare(std::istream& csv, std::int64_t slot_ms, const Frac& traffic_scaling) {
    if (slot_ms <= 0) throw std::invalid_argument("trace_prepare: slot_ms must be positive");
    if (!(Frac(0, 1) < traffic_scaling))
        throw std::invalid_argument("trace_prepare: traffic scaling must be positive");
    const std::int64_t slot_us = slot_ms * 1000;

    PreparedTrace out;
    std::string line;
    if (!std::getline(csv, line)) throw std::runtime_error("trace_prepare: empty input");
    // header row required
    if (line.find("arrival_time_us") == std::string::npos)
        throw std::runtime_error("trace_prepare: missing header row");

    std::vector<std::string> fields;
    std::int64_t row = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++row;
        ++out.report.rows_total;
        std::int64_t arrival_us = 0, duration_us = 0;
        double cpu = 0, mem = 0;
        if (!parse_fields(line, fields) || !parse_int64(fields[0], arrival_us) ||
            !parse_int64(fields[1], duration_us) || !parse_double(fields[2], cpu) ||
            !parse_double(fields[3], mem) || arrival_us < 0 || duration_us <= 0) {
            out.report.malformed_rows.push_back(row);
            continue;
        }
        const double size = std::max(cpu, mem);
        if (!(size > 0.0) || size > 1.0) {
            out.report.dropped_size_rows.push_back(row);
            continue;
        }
        // arrival times divided by the scaling: floor(arrival * den / num)
        __int128 scaled = static_cast<__int128>(arrival_us) * traffic_scaling.den / traffic_scaling.num;
        PreparedJob job;
        job.slot = static_cast<std::int64_t>(scaled / slot_us);
        job.size = to_units(size);
        job.duration_slots = static_cast<std::int32_t>((duration_us + slot_us - 1) / slot_us);
        out.jobs.push_back(job);
        ++out.report.rows_kept;
    }
    if (out.report.rows_total == 0) throw std::runtime_error("trace_prepare: no data rows");
    if (out.report.rows_kept == 0) throw std::runtime_error("trace_prepare: every row was dropped");
    std::stable_sort(out.jobs.begin(), out.jobs.end(),
                     [](const PreparedJob& x, const PreparedJob& y) { return x.slot < y.slot; });
    return out;
}

std::string TracePrepareReport::to_json() const {
    std::ostringstream os;
    os << "{\"rows_total\":" << rows_total << ",\"rows_kept\":" << rows_kept
       << ",\"malformed_rows\":[";
    for (std::size_t i = 0; i < malformed_rows.size(); ++i)
        os << (i ? "," : "") << malformed_rows[i];
    os << "],\"dropped_size_rows\":[";
    for (std::size_t i = 0; i < dropped_size_rows.size(); ++i)
        os << (i ? "," : "") << dropped_size_rows[i];
    os << "]}";
    return os.str();
}

void write_prepared_trace(std::ostream& out, const std::vector<PreparedJob>& jobs) {
    out << "slot,size,duration_slots\n";
    for (const PreparedJob& j : jobs)
        out << j.slot << "," << format_size(j.size) << "," << j.duration_slots << "\n";
}

std::vector<PreparedJob> read_prepared_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("slot,", 0) != 0)
        throw std::runtime_error("prepared trace: missing header");
    std::vector<PreparedJob> jobs;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        fields.clear();
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 3) throw std::runtime_error("prepared trace: bad row");
        PreparedJob j;
        if (!parse_int64(fields[0], j.slot)) throw std::runtime_error("prepared trace: bad slot");
        double size = 0;
        if (!parse_double(fields[1], size)) throw std::runtime_error("prepared trace: bad size");
        j.size = to_units(size);
        std::int64_t d = 0;
        if (!parse_int64(fields[2], d)) throw std::runtime_error("prepared trace: bad duration");
        j.duration_slots = static_cast<std::int32_t>(d);
        jobs.push_back(j);
    }
    return jobs;
}

}  // namespace packsim
