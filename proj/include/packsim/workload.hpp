#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "packsim/fraction.hpp"
#include "packsim/grid.hpp"

namespace packsim {

enum class SizeLawKind { discrete, uniform, empirical };

/// Job-size distribution on (0,1]. Parameters are exact fractions so the
/// oracle side can compute interval probabilities without rounding; draws
/// land on the size grid.
struct SizeLaw {
    SizeLawKind kind = SizeLawKind::discrete;

    // discrete: atoms sorted ascending
    std::vector<Frac> values;
    std::vector<Frac> probs;

    // uniform on (a, b], 0 <= a < b <= 1
    Frac a, b;

    // empirical: sorted grid sizes
    std::vector<Units> samples;

    static SizeLaw discrete(std::vector<Frac> values, std::vector<Frac> probs);
    static SizeLaw uniform(Frac a, Frac b);
    static SizeLaw empirical(std::vector<Units> samples);

    void validate() const;
    double cdf(double x) const;
    double min_support() const;
    Units draw_units(std::uint64_t word) const;
};

/// E(R); exact arithmetic internally for discrete and uniform laws, sample
/// mean for empirical ones.
Frac mean_size_exact(const SizeLaw& law);
double mean_size(const SizeLaw& law);

/// Right-continuous step cdf from observed sizes.
SizeLaw empirical_cdf(const std::vector<Units>& sizes);

/// One job of a prepared trace stream.
struct PreparedJob {
    std::int64_t slot = 0;
    Units size = 0;
    std::int32_t duration_slots = 1;
};

struct TracePrepareReport {
    std::int64_t rows_total = 0;
    std::int64_t rows_kept = 0;
    std::vector<std::int64_t> malformed_rows;     // 1-based data-row numbers
    std::vector<std::int64_t> dropped_size_rows;  // max(cpu, mem) outside (0,1]

    std::string to_json() const;
};

struct PreparedTrace {
    std::vector<PreparedJob> jobs;
    TracePrepareReport report;
};

/// Ingests "arrival_time_us,duration_us,cpu,mem" rows (header required):
/// size = max(cpu, mem), rows outside (0,1] dropped and counted; arrival
/// times divided by the traffic scaling (exact rational arithmetic, so a
/// scaling of 1.6 maps 1.6s to slot 10 at 100ms slots); durations become
/// ceil(duration / slot) slots, at least 1, and are not scaled. Output is
/// sorted by slot, stable on input order.
PreparedTrace trace_prepare(std::istream& csv, std::int64_t slot_ms, const Frac& traffic_scaling);

void write_prepared_trace(std::ostream& out, const std::vector<PreparedJob>& jobs);
std::vector<PreparedJob> read_prepared_trace(std::istream& in);

}  // namespace packsim
