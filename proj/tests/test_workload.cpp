#include <doctest.h>

#include <sstream>

#include "packsim/rng.hpp"
#include "packsim/workload.hpp"

using namespace packsim;

TEST_CASE("mean sizes are exact") {
    CHECK(mean_size_exact(SizeLaw::uniform(parse_frac("0.01"), parse_frac("0.19"))) == Frac(1, 10));
    CHECK(mean_size_exact(SizeLaw::uniform(parse_frac("0.1"), parse_frac("0.9"))) == Frac(1, 2));
    CHECK(mean_size_exact(SizeLaw::discrete({parse_frac("0.4"), parse_frac("0.6")},
                                            {Frac(1, 2), Frac(1, 2)})) == Frac(1, 2));
    CHECK(mean_size(SizeLaw::empirical({to_units(0.25), to_units(0.75)})) == doctest::Approx(0.5));
}

TEST_CASE("size law validation") {
    CHECK_THROWS(SizeLaw::discrete({parse_frac("0.4")}, {Frac(1, 3)}));      // mass != 1
    CHECK_THROWS(SizeLaw::discrete({parse_frac("1.5")}, {Frac(1, 1)}));      // atom > 1
    CHECK_THROWS(SizeLaw::uniform(parse_frac("0.9"), parse_frac("0.1")));    // a >= b
    CHECK_THROWS(SizeLaw::empirical({}));
    CHECK_THROWS(SizeLaw::empirical({0}));
}

TEST_CASE("empirical cdf is a right-continuous step function") {
    SUBCASE("single atom") {
        SizeLaw law = empirical_cdf({to_units(0.5)});
        CHECK(law.cdf(0.49) == 0.0);
        CHECK(law.cdf(0.5) == 1.0);
        CHECK(law.cdf(0.51) == 1.0);
    }
    SUBCASE("two atoms") {
        SizeLaw law = empirical_cdf({to_units(0.25), to_units(0.75)});
        CHECK(law.cdf(0.5) == 0.5);
        CHECK(law.cdf(0.25) == 0.5);
        CHECK(law.cdf(0.2) == 0.0);
        CHECK(law.cdf(1.0) == 1.0);
    }
    SUBCASE("nondecreasing and reaching one") {
        SizeLaw law = empirical_cdf({to_units(0.1), to_units(0.4), to_units(0.4), to_units(0.9)});
        double prev = 0.0;
        for (double x = 0.0; x <= 1.0; x += 0.01) {
            CHECK(law.cdf(x) >= prev);
            prev = law.cdf(x);
        }
        CHECK(law.cdf(1.0) == 1.0);
    }
}

TEST_CASE("discrete draw frequencies converge to probabilities") {
    SizeLaw law = SizeLaw::discrete({parse_frac("0.4"), parse_frac("0.6")},
                                    {parse_frac("0.3"), parse_frac("0.7")});
    const int n = 20000;
    int small = 0;
    for (int i = 0; i < n; ++i)
        if (law.draw_units(rng::draw(5, rng::Stream::job_size, static_cast<std::uint64_t>(i))) ==
            to_units(0.4))
            ++small;
    // 3-sigma binomial band around 0.3
    double phat = static_cast<double>(small) / n;
    double sigma = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(phat - 0.3) < 3.0 * sigma);
}

TEST_CASE("uniform draws stay inside the half-open support") {
    SizeLaw law = SizeLaw::uniform(parse_frac("0.1"), parse_frac("0.9"));
    for (int i = 0; i < 2000; ++i) {
        Units u = law.draw_units(rng::draw(6, rng::Stream::job_size, static_cast<std::uint64_t>(i)));
        CHECK(u > to_units(0.1) - 1);
        CHECK(u <= to_units(0.9));
    }
}

namespace {

const char* kRawHeader = "arrival_time_us,duration_us,cpu,mem\n";

PreparedTrace prep(const std::string& body, std::int64_t slot_ms = 100,
                   const Frac& scaling = Frac(1, 1)) {
    std::istringstream in(std::string(kRawHeader) + body);
    return trace_prepare(in, slot_ms, scaling);
}

}  // namespace

TEST_CASE("trace rows map to slots, sizes and durations") {
    PreparedTrace t = prep("0,250000,0.2,0.5\n");
    REQUIRE(t.jobs.size() == 1);
    CHECK(t.jobs[0].slot == 0);
    CHECK(t.jobs[0].size == to_units(0.5));  // max of the two requirements
    CHECK(t.jobs[0].duration_slots == 3);    // ceil(250ms / 100ms)
}

TEST_CASE("traffic scaling divides arrival times exactly") {
    PreparedTrace t = prep("1600000,100000,0.3,0.1\n", 100, parse_frac("1.6"));
    REQUIRE(t.jobs.size() == 1);
    CHECK(t.jobs[0].slot == 10);  // 1.6s / 1.6 = 1.0s = slot 10
    CHECK(t.jobs[0].duration_slots == 1);  // durations are not scaled
}

TEST_CASE("degenerate and malformed rows are dropped and counted") {
    PreparedTrace t = prep(
        "0,100000,0,0\n"          // zero size
        "100000,100000,0.5,0.2\n"
        "200000,100000,0.2,1.5\n"  // size above capacity
        "bad,row,x,y\n"
        "300000,0,0.1,0.1\n");     // non-positive duration
    CHECK(t.report.rows_total == 5);
    CHECK(t.report.rows_kept == 1);
    CHECK(t.report.dropped_size_rows == std::vector<std::int64_t>{1, 3});
    CHECK(t.report.malformed_rows == std::vector<std::int64_t>{4, 5});
    std::string js = t.report.to_json();
    CHECK(js.find("\"rows_kept\":1") != std::string::npos);
}

TEST_CASE("all rows dropped is an error") {
    CHECK_THROWS(prep("0,100000,0,0\n"));
    std::istringstream empty("arrival_time_us,duration_us,cpu,mem\n");
    CHECK_THROWS(trace_prepare(empty, 100, Frac(1, 1)));
    std::istringstream headerless("1,2,0.5,0.5\n");
    CHECK_THROWS(trace_prepare(headerless, 100, Frac(1, 1)));
}

TEST_CASE("prepared output is sorted by slot, stable on input order") {
    PreparedTrace t = prep(
        "500000,100000,0.5,0.1\n"
        "100000,100000,0.3,0.1\n"
        "120000,100000,0.4,0.1\n");
    REQUIRE(t.jobs.size() == 3);
    CHECK(t.jobs[0].slot == 1);
    CHECK(t.jobs[0].size == to_units(0.3));
    CHECK(t.jobs[1].slot == 1);
    CHECK(t.jobs[1].size == to_units(0.4));  // same slot keeps input order
    CHECK(t.jobs[2].slot == 5);
}

TEST_CASE("prepared trace round-trips through its csv form") {
    PreparedTrace t = prep(
        "0,250000,0.2,0.5\n"
        "100000,100000,0.3,0.1\n");
    std::ostringstream out;
    write_prepared_trace(out, t.jobs);
    std::istringstream in(out.str());
    std::vector<PreparedJob> back = read_prepared_trace(in);
    REQUIRE(back.size() == t.jobs.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].slot == t.jobs[i].slot);
        CHECK(back[i].size == t.jobs[i].size);
        CHECK(back[i].duration_slots == t.jobs[i].duration_slots);
    }
    // writing again produces identical bytes
    std::ostringstream again;
    write_prepared_trace(again, back);
    CHECK(again.str() == out.str());
}
