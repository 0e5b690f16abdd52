#include <doctest.h>

#include <cmath>

#include "packsim/partition.hpp"
#include "packsim/rng.hpp"
#include "packsim/workload.hpp"

using namespace packsim;

TEST_CASE("universal partition intervals at J=2 and J=3") {
    PartitionSpec p2 = universal_partition(2);
    REQUIRE(p2.type_count() == 4);
    CHECK(p2.subsets[0].lo == Frac(2, 3));
    CHECK(p2.subsets[0].hi == Frac(1, 1));
    CHECK(p2.subsets[1].lo == Frac(1, 2));
    CHECK(p2.subsets[1].hi == Frac(2, 3));
    CHECK(p2.subsets[2].lo == Frac(1, 3));
    CHECK(p2.subsets[2].hi == Frac(1, 2));
    CHECK(p2.subsets[3].lo == Frac(1, 4));
    CHECK(p2.subsets[3].hi == Frac(1, 3));

    PartitionSpec p3 = universal_partition(3);
    REQUIRE(p3.type_count() == 6);
    CHECK(p3.subsets[4].lo == Frac(1, 6));
    CHECK(p3.subsets[4].hi == Frac(1, 4));
    CHECK(p3.subsets[5].lo == Frac(1, 8));
    CHECK(p3.subsets[5].hi == Frac(1, 6));

    CHECK_THROWS_AS(universal_partition(1), std::invalid_argument);
}

TEST_CASE("universal endpoints are exact") {
    for (int j = 2; j <= 8 && j <= 12; ++j) {
        PartitionSpec spec = universal_partition(std::min(j, 12));
        for (int m = 0; m < spec.levels; ++m) {
            CHECK(spec.subsets[static_cast<std::size_t>(2 * m)].hi ==
                  Frac(1, std::int64_t{1} << m));
            CHECK(spec.subsets[static_cast<std::size_t>(2 * m + 1)].hi ==
                  Frac(2, 3 * (std::int64_t{1} << m)));
        }
    }
}

TEST_CASE("type_of classifies and rounds") {
    PartitionSpec spec = universal_partition(2);
    SUBCASE("0.6 is type 1, unrounded") {
        TypedSize t = type_of(parse_frac("0.6"), spec);
        CHECK(t.type == 1);
        CHECK(t.rounded == Frac(3, 5));
    }
    SUBCASE("0.4 is type 2, unrounded") {
        TypedSize t = type_of(parse_frac("0.4"), spec);
        CHECK(t.type == 2);
        CHECK(t.rounded == Frac(2, 5));
    }
    SUBCASE("0.2 falls below the partition and rounds to 1/4") {
        TypedSize t = type_of(parse_frac("0.2"), spec);
        CHECK(t.type == 3);
        CHECK(t.rounded == Frac(1, 4));
    }
    SUBCASE("boundaries stick to the lower interval") {
        CHECK(type_of(Frac(1, 2), spec).type == 2);
        CHECK(type_of(Frac(2, 3), spec).type == 1);
        CHECK(type_of(Frac(1, 1), spec).type == 0);
    }
    SUBCASE("grid variant matches") {
        TypedUnits t = type_of_units(to_units(0.2), spec);
        CHECK(t.type == 3);
        CHECK(t.rounded == to_units(0.25));
    }
    CHECK_THROWS(type_of(Frac(0, 1), spec));
    CHECK_THROWS(type_of(Frac(3, 2), spec));
}

TEST_CASE("type index never increases with size") {
    for (int j : {2, 3, 5}) {
        PartitionSpec spec = universal_partition(j);
        int prev_type = spec.type_count();
        for (Units u = kUnitScale / 100; u <= kUnitScale; u += kUnitScale / 100) {
            int t = type_of_units(u, spec).type;
            CHECK(t <= prev_type);
            prev_type = t;
        }
    }
}

TEST_CASE("choose_j on the spec cdfs") {
    SizeLaw two_atoms = SizeLaw::discrete({parse_frac("0.4"), parse_frac("0.6")},
                                          {Frac(1, 2), Frac(1, 2)});
    auto cdf1 = [&](double x) { return two_atoms.cdf(x); };
    CHECK(choose_j(cdf1, 0.05).j_levels == 2);

    SizeLaw uni = SizeLaw::uniform(parse_frac("0.1"), parse_frac("0.9"));
    auto cdf2 = [&](double x) { return uni.cdf(x); };
    JChoice c = choose_j(cdf2, 0.01);
    CHECK(c.j_levels == 4);
    CHECK(!c.capped);

    SizeLaw high = SizeLaw::discrete({parse_frac("0.7"), parse_frac("0.9")},
                                     {Frac(1, 2), Frac(1, 2)});
    auto cdf3 = [&](double x) { return high.cdf(x); };
    CHECK(choose_j(cdf3, 0.5).j_levels == 2);  // floor at J=2

    // mass arbitrarily close to zero: capped at j_max
    auto heavy_tail = [](double x) { return x > 0 ? 0.5 : 0.0; };
    JChoice capped = choose_j(heavy_tail, 0.25, 6);
    CHECK(capped.j_levels == 6);
    CHECK(capped.capped);
}

TEST_CASE("choose_j minimality") {
    SizeLaw uni = SizeLaw::uniform(parse_frac("0.1"), parse_frac("0.9"));
    auto cdf = [&](double x) { return uni.cdf(x); };
    for (double eps : {0.3, 0.1, 0.01, 0.001}) {
        JChoice c = choose_j(cdf, eps);
        CHECK(cdf(std::ldexp(1.0, -c.j_levels)) < eps);
        if (c.j_levels > 2) CHECK(cdf(std::ldexp(1.0, -(c.j_levels - 1))) >= eps);
    }
}

TEST_CASE("quantile partitions of the uniform law") {
    auto cdf = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
    SUBCASE("n=0 splits at one half") {
        PartitionSpec p = quantile_partition(cdf, 0);
        REQUIRE(p.type_count() == 2);
        CHECK(p.subsets[0].lo == Frac(1, 2));
        CHECK(p.subsets[0].hi == Frac(1, 1));
        CHECK(p.subsets[1].lo == Frac(0, 1));
        CHECK(p.subsets[1].hi == Frac(1, 2));
        CHECK(!p.has_residual());
    }
    SUBCASE("n=1 splits at quarters") {
        PartitionSpec p = quantile_partition(cdf, 1);
        REQUIRE(p.type_count() == 4);
        CHECK(p.subsets[0].lo == Frac(3, 4));
        CHECK(p.subsets[2].lo == Frac(1, 4));
        CHECK(p.subsets[3].lo == Frac(0, 1));
    }
    SUBCASE("atom-heavy cdf collapses duplicate quantiles") {
        auto step = [](double x) { return x >= 0.5 ? 1.0 : 0.0; };
        PartitionSpec p = quantile_partition(step, 1);
        CHECK(p.collapsed_intervals > 0);
        CHECK(p.type_count() + p.collapsed_intervals == 4);
    }
}

TEST_CASE("refinement splits and containment") {
    PartitionSpec base = universal_partition(2);
    SUBCASE("splitting I2 at 0.4") {
        PartitionSpec fine = refine(base, {parse_frac("0.4")});
        CHECK(fine.type_count() == 5);
        CHECK(is_refinement_of(fine, base));
        // the split pieces
        bool found_low = false, found_high = false;
        for (const Interval& iv : fine.subsets) {
            if (iv.lo == Frac(1, 3) && iv.hi == Frac(2, 5)) found_low = true;
            if (iv.lo == Frac(2, 5) && iv.hi == Frac(1, 2)) found_high = true;
        }
        CHECK(found_low);
        CHECK(found_high);
    }
    SUBCASE("refining by an existing breakpoint is a no-op") {
        PartitionSpec same = refine(base, {Frac(1, 2)});
        CHECK(same.type_count() == base.type_count());
        CHECK(is_refinement_of(same, base));
    }
    SUBCASE("quantile n=1 refined by the J=2 breakpoints contains them all") {
        auto cdf = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
        PartitionSpec q = quantile_partition(cdf, 1);
        PartitionSpec fine = refine(q, {Frac(1, 2), Frac(2, 3), Frac(1, 3), Frac(1, 4)});
        for (const Frac& b : {Frac(1, 2), Frac(2, 3), Frac(1, 3), Frac(1, 4)}) {
            bool is_endpoint = false;
            for (const Interval& iv : fine.subsets)
                if (iv.lo == b || iv.hi == b) is_endpoint = true;
            CHECK(is_endpoint);
        }
        CHECK(is_refinement_of(fine, q));
    }
    SUBCASE("random refinements stay refinements") {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<Frac> cuts;
            for (int c = 0; c < 4; ++c) {
                Units u = 1 + static_cast<Units>(
                                  rng::to_unit_double(rng::draw(7, rng::Stream::aux,
                                                                static_cast<std::uint64_t>(trial), c)) *
                                  (kUnitScale - 2));
                cuts.push_back(units_to_frac(u));
            }
            PartitionSpec fine = refine(base, cuts);
            CHECK(is_refinement_of(fine, base));
        }
    }
    CHECK_THROWS(refine(base, {Frac(0, 1)}));
}

TEST_CASE("partition json carries breakpoints") {
    std::string js = universal_partition(2).to_json();
    CHECK(js.find("\"kind\":\"universal\"") != std::string::npos);
    CHECK(js.find("0.666666666667") != std::string::npos);
    CHECK(js.find("\"rounds_to\":\"1/4\"") != std::string::npos);
}
