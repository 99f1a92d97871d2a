/* SPDX-License-Identifier: Apache-2.0 */

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace arithdyn;

namespace {

const Ambient P1 = Ambient::projective(1);

std::set<std::string> found_set(const SearchReport &r) {
    std::set<std::string> s;
    for (const auto &fp : r.found)
        s.insert(fp.point.to_string());
    return s;
}

// Quadratic points of P^1 of height <= b, counted from integer quadratics and a numeric Mahler measure.
std::size_t quadratic_count_oracle(double b) {
    const double mmax = std::exp(2 * b);
    const long box = static_cast<long>(std::floor(2 * mmax + 1e-9));
    std::size_t n = 0;
    for (long a = 1; a <= box; ++a)
        for (long bb = -box; bb <= box; ++bb)
            for (long c = -box; c <= box; ++c) {
                if (c == 0 || std::gcd(std::gcd(a, std::labs(bb)), std::labs(c)) != 1)
                    continue;
                long disc = bb * bb - 4 * a * c;
                long s = std::lround(std::sqrt(static_cast<double>(std::labs(disc))));
                if (disc >= 0 && s * s == disc)
                    continue;
                std::complex<double> sd = std::sqrt(std::complex<double>(static_cast<double>(disc)));
                std::complex<double> r1 = (-double(bb) + sd) / (2.0 * a), r2 = (-double(bb) - sd) / (2.0 * a);
                double m = a * std::max(1.0, std::abs(r1)) * std::max(1.0, std::abs(r2));
                if (m <= mmax * (1 + 1e-12))
                    n += 2;
            }
    return n;
}

} // namespace

TEST(Orbit, Examples) {
    auto f = parse_map("P1:[x^2 - y^2, y^2]");
    auto o = orbit(f, parse_point("0:1", P1));
    EXPECT_EQ(o.status, OrbitStatus::Cycle);
    EXPECT_EQ(o.tail_length, 0u);
    EXPECT_EQ(*o.cycle_length, 2u);
    ASSERT_EQ(o.points.size(), 3u);
    EXPECT_EQ(o.points[1].to_string(), "1:-1");

    auto one = orbit(f, parse_point("1:1", P1));
    EXPECT_EQ(one.tail_length, 1u);
    EXPECT_EQ(*one.cycle_length, 2u);

    OrbitOptions cut;
    cut.height_cutoff = 5;
    auto esc = orbit(f, parse_point("2:1", P1), cut);
    EXPECT_EQ(esc.status, OrbitStatus::Escaped);
    EXPECT_GT(esc.height_trace.back().value, 5);

    OrbitOptions small;
    small.max_steps = 3;
    auto b = orbit(f, parse_point("2:1", P1), small);
    EXPECT_EQ(b.status, OrbitStatus::Budget);
    EXPECT_EQ(b.points.size(), 4u);
}

TEST(Preperiodic, Examples) {
    auto f = parse_map("P1:[x^2 - y^2, y^2]");
    EXPECT_EQ(is_preperiodic(f, parse_point("1:0", P1)).verdict, Certainty::Preperiodic);
    auto w = is_preperiodic(f, parse_point("1:2", P1));
    EXPECT_EQ(w.verdict, Certainty::NotPreperiodic);
    EXPECT_GT(w.hhat_lower_bound, 0.0);
    // i -> -2 -> 3 -> 8 wanders.
    EXPECT_EQ(is_preperiodic(f, ProjPoint::canonicalize(P1, {{AlgNum(1), AlgNum::sqrt_of(-1)}})).verdict,
              Certainty::NotPreperiodic);
    EXPECT_EQ(is_preperiodic(parse_map("P1:[x^2, y^2]"), parse_point("1:i", P1)).verdict, Certainty::Preperiodic);

    auto prod = parse_map("P1xP1:[x^2, y^2];[x^2 - y^2, y^2]");
    Ambient pp = Ambient::product({1, 1});
    EXPECT_EQ(is_preperiodic(prod, parse_point("1:1;0:1", pp)).verdict, Certainty::Preperiodic);
    EXPECT_EQ(is_preperiodic(prod, parse_point("1:1;1:3", pp)).verdict, Certainty::NotPreperiodic);
}

TEST(Preperiodic, LowerBoundIsBelowCanonicalHeight) {
    for (const char *m : {"P1:[x^2 - y^2, y^2]", "P1:[2*x^2 - 3*y^2, x*y]", "P1:[x^3 - x*y^2 + y^3, y^3]"}) {
        auto f = parse_map(m);
        for (const auto &s : oracle::rational_points_p1(12)) {
            auto p = parse_point(s, P1);
            auto c = is_preperiodic(f, p);
            ASSERT_NE(c.verdict, Certainty::Unknown) << m << " " << s;
            if (c.verdict != Certainty::NotPreperiodic)
                continue;
            auto h = canonical_height(f, p, 1e-6);
            EXPECT_LE(c.hhat_lower_bound, h.height.value + h.height.error) << m << " " << s;
        }
    }
}

TEST(Enumerate, RationalPoints) {
    auto h0 = enumerate_points(P1, 1, 0.0);
    std::set<std::string> got;
    for (const auto &p : h0)
        got.insert(p.to_string());
    EXPECT_EQ(got, (std::set<std::string>{"0:1", "1:0", "1:1", "1:-1"}));

    for (long m : {2L, 7L, 20L}) {
        std::set<std::string> e;
        for (const auto &p : enumerate_points(P1, 1, std::log(double(m))))
            e.insert(p.to_string());
        EXPECT_EQ(e, oracle::rational_points_p1(m)) << m;
    }
}

TEST(Enumerate, QuadraticPoints) {
    auto z = enumerate_points(P1, 2, 0.0);
    EXPECT_EQ(z.size(), 10u);
    for (double b : {std::log(2.0), std::log(3.0) / 2, std::log(3.0)}) {
        auto pts = enumerate_points(P1, 2, b);
        std::size_t quad = 0, rat = 0;
        for (const auto &p : pts) {
            (p.field() == 0 ? rat : quad)++;
            EXPECT_LE(point_height(p).value, b + 1e-9);
        }
        EXPECT_EQ(quad, quadratic_count_oracle(b)) << b;
        EXPECT_EQ(rat, enumerate_points(P1, 1, b).size());
    }
}

TEST(Enumerate, ProductBox) {
    Ambient pp = Ambient::product({1, 1});
    auto pts = enumerate_points(pp, 1, std::log(2.0));
    // Pairs (P, Q) with h(P) + h(Q) <= log 2: 4 * 4 height-zero pairs plus 2 * 4 * 4 with one factor at log 2.
    EXPECT_EQ(pts.size(), 16u + 2 * 4 * 4);
    EXPECT_THROW(enumerate_points(pp, 2, 1.0), Unsupported);
}

TEST(Search, Examples) {
    auto sq = zf_d_search(parse_map("P1:[x^2, y^2]"), 1, std::log(100.0));
    EXPECT_EQ(found_set(sq), (std::set<std::string>{"0:1", "1:0", "1:1", "1:-1"}));
    EXPECT_TRUE(sq.complete);
    EXPECT_EQ(sq.unknown, 0u);
    for (const auto &fp : sq.found)
        EXPECT_EQ(fp.hhat.value, 0.0);

    auto sq2 = zf_d_search(parse_map("P1:[x^2, y^2]"), 2, std::log(2.0));
    EXPECT_EQ(sq2.found.size(), 10u);
    EXPECT_EQ(sq2.counts_per_field.at(0), 4u);
    EXPECT_EQ(sq2.counts_per_field.at(-1), 2u);
    EXPECT_EQ(sq2.counts_per_field.at(-3), 4u);

    auto m2 = zf_d_search(parse_map("P1:[x^2 - 2*y^2, y^2]"), 1, 10.0);
    EXPECT_EQ(found_set(m2), (std::set<std::string>{"1:0", "0:1", "1:1", "1:-1", "1:1/2", "1:-1/2"}));

    EXPECT_THROW(zf_d_search(parse_map("P1xP1:[x^2, y^2];[x^2, y^2]"), 1, 1.0), Unsupported);
}

TEST(Search, CompleteAgainstOrbitOracle) {
    // Every rational point of height <= log 20, orbit-checked independently.
    const auto box = oracle::rational_points_p1(20);
    for (const char *m : {"P1:[x^2 - y^2, y^2]", "P1:[16*x^2 - 21*y^2, 16*y^2]", "P1:[4*x^2 - 3*y^2, 4*y^2]",
                          "P1:[x^2 - x*y, y^2]", "P1:[x^3 - 3*x*y^2, y^3]", "P1:[2*x^2 - y^2, x*y]"}) {
        auto f = parse_map(m);
        std::set<std::string> want;
        for (const auto &s : box)
            if (oracle::orbit_repeat(f, parse_point(s, P1), 60.0))
                want.insert(s);
        auto rep = zf_d_search(f, 1, std::log(20.0));
        EXPECT_EQ(rep.unknown, 0u);
        std::set<std::string> got = found_set(rep);
        if (rep.complete) {
            EXPECT_EQ(got, want) << m;
        } else {
            for (const auto &s : got)
                EXPECT_TRUE(want.count(s)) << m << " " << s;
        }
    }
}

TEST(Search, ClassicQuadraticCounts) {
    struct Case {
        const char *map;
        std::size_t count;
    } cases[] = {
        {"P1:[x^2, y^2]", 4},
        {"P1:[x^2 - y^2, y^2]", 4},
        {"P1:[x^2 - 2*y^2, y^2]", 6},
        {"P1:[4*x^2 - 3*y^2, 4*y^2]", 5},
        {"P1:[16*x^2 - 21*y^2, 16*y^2]", 9},
        {"P1:[16*x^2 - 29*y^2, 16*y^2]", 9},
    };
    for (const auto &c : cases) {
        auto rep = zf_d_search(parse_map(c.map), 1, 20.0);
        EXPECT_TRUE(rep.complete) << c.map;
        EXPECT_EQ(rep.found.size(), c.count) << c.map;
    }
}

TEST(Search, GaloisStableAndMonotone) {
    for (const char *m : {"P1:[x^2, y^2]", "P1:[x^2 + y^2, y^2]", "P1:[x^2 - y^2, y^2]"}) {
        auto f = parse_map(m);
        auto big = zf_d_search(f, 2, std::log(3.0));
        auto small = zf_d_search(f, 2, std::log(2.0));
        auto s = found_set(big);
        for (const auto &fp : big.found)
            EXPECT_TRUE(s.count(galois_conjugate(fp.point).to_string())) << m << " " << fp.point.to_string();
        for (const auto &t : found_set(small))
            EXPECT_TRUE(s.count(t)) << m << " " << t;
    }
}

TEST(Search, IterateHasTheSamePreperiodicPoints) {
    for (const char *m : {"P1:[x^2 - y^2, y^2]", "P1:[4*x^2 - 3*y^2, 4*y^2]", "P1:[2*x^2 - y^2, x*y]"}) {
        auto f = parse_map(m);
        auto a = zf_d_search(f, 1, 20.0);
        auto b = zf_d_search(iterate(f, 2), 1, 20.0);
        ASSERT_TRUE(a.complete && b.complete) << m;
        EXPECT_EQ(found_set(a), found_set(b)) << m;
    }
}

TEST(Search, ReportedCyclesCloseExactly) {
    auto rep = zf_d_search(parse_map("P1:[16*x^2 - 21*y^2, 16*y^2]"), 1, 20.0);
    for (const auto &fp : rep.found) {
        auto o = oracle::orbit_repeat(parse_map("P1:[16*x^2 - 21*y^2, 16*y^2]"), fp.point, 60.0);
        ASSERT_TRUE(o.has_value());
        EXPECT_EQ(o->first, fp.orbit.tail_length);
        EXPECT_EQ(o->second, *fp.orbit.cycle_length);
    }
}

TEST(Search, CertificatesNeverContradictTheOrbitOracle) {
    for (int k = 0; k < 30; ++k) {
        const int r = 2 + k % 2;
        Poly a(2), b(2);
        for (int j = 0; j <= r; ++j) {
            a.add_term({r - j, j}, Int(oracle::uniform(-4, 4)));
            b.add_term({r - j, j}, Int(oracle::uniform(-4, 4)));
        }
        if (a.total_degree() != r || b.total_degree() != r)
            continue;
        auto f = PolyEndo::make(P1, {{a, b}});
        if (morphism_check(f) != MorphismStatus::Morphism)
            continue;
        for (const auto &s : oracle::rational_points_p1(6)) {
            auto p = parse_point(s, P1);
            auto c = is_preperiodic(f, p);
            auto o = oracle::orbit_repeat(f, p, 400.0, 200);
            if (c.verdict == Certainty::Preperiodic) {
                EXPECT_TRUE(o.has_value()) << f.to_string() << " " << s;
            } else if (c.verdict == Certainty::NotPreperiodic) {
                EXPECT_FALSE(o.has_value()) << f.to_string() << " " << s;
            }
        }
    }
}

TEST(Family, ExamplesAndSkips) {
    MapFamily fam{"x^2 + c", "c"};
    std::vector<FamilyMember> members;
    for (const char *c : {"0", "-1", "-2", "-3/4", "1/4"})
        members.push_back({c, fam.at(parse_algnum(c).as_rat())});
    members.push_back({"bad", parse_map("P1:[x*y, y^2]")});
    members.push_back({"linear", parse_map("P1:[2*x + y, y]")});
    auto rep = family_ubc_experiment(members, 1, 20.0);
    ASSERT_EQ(rep.entries.size(), 7u);
    EXPECT_EQ(*rep.entries[0].count, 4u);
    EXPECT_EQ(*rep.entries[1].count, 4u);
    EXPECT_EQ(*rep.entries[2].count, 6u);
    EXPECT_EQ(*rep.entries[3].count, 5u);
    // x^2 + 1/4: the parabolic fixed point 1/2, its preimage -1/2, and infinity.
    EXPECT_EQ(*rep.entries[4].count, 3u);
    EXPECT_FALSE(rep.entries[5].count);
    EXPECT_EQ(rep.entries[5].diagnostic.rfind("skipped", 0), 0u);
    EXPECT_FALSE(rep.entries[6].count);
    EXPECT_EQ(rep.max_count, 6u);
    EXPECT_EQ(rep.argmax, std::vector<std::string>{"-2"});
    EXPECT_EQ(rep.histogram.at(4), 2u);
}

TEST(Family, OutputIndependentOfWorkerCount) {
    MapFamily fam{"x^2 + c", "c"};
    std::vector<FamilyMember> members;
    for (const auto &c : parse_parameter_values("frac:4"))
        members.push_back({c.to_string(), fam.at(c)});
    SearchOptions one, four;
    four.workers = 4;
    auto a = family_ubc_experiment(members, 1, std::log(100.0), one);
    auto b = family_ubc_experiment(members, 1, std::log(100.0), four);
    EXPECT_EQ(family_csv(a), family_csv(b));
    EXPECT_EQ(family_summary(a), family_summary(b));

    auto s1 = zf_d_search(parse_map("P1:[x^2 - y^2, y^2]"), 2, std::log(3.0), one);
    auto s4 = zf_d_search(parse_map("P1:[x^2 - y^2, y^2]"), 2, std::log(3.0), four);
    EXPECT_EQ(search_csv(s1), search_csv(s4));
}
