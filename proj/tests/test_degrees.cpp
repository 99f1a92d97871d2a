/* SPDX-License-Identifier: Apache-2.0 */

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

using namespace arithdyn;

namespace {

IntMatrix random_matrix(std::size_t n, long box) {
    IntMatrix m(n, std::vector<Int>(n));
    for (auto &row : m)
        for (auto &c : row)
            c = oracle::uniform(-box, box);
    return m;
}

double eigen_radius(const IntMatrix &m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
    return Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues().cwiseAbs().maxCoeff();
}

PolyEndo with_ns(const char *text, IntMatrix ns) {
    ParsedMapOptions o;
    o.ns_matrix = std::move(ns);
    return parse_map(text, o);
}

const Ambient PP = Ambient::product({1, 1});

} // namespace

TEST(SpectralRadius, Examples) {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    struct Case {
        IntMatrix m;
        double rho;
    } cases[] = {
        {{{2, 0}, {0, 3}}, 3.0},
        {{{1, 1}, {1, 0}}, phi},
        {{{2, 1}, {1, 1}}, phi * phi},
        {{{0, 1}, {0, 0}}, 0.0},
        {{{0, -1}, {1, 0}}, 1.0},
        {{{5}}, 5.0},
        {{{-4}}, 4.0},
    };
    for (const auto &c : cases) {
        auto r = spectral_radius(c.m);
        EXPECT_NEAR(r.value, c.rho, 1e-12);
        EXPECT_LE(r.error, 1e-12);
        EXPECT_LE(std::fabs(r.value - c.rho), r.error + 1e-15);
    }
    EXPECT_THROW(spectral_radius({{1, 2}}), Unsupported);
}

TEST(SpectralRadius, MatchesFloatingEigenvalues) {
    for (std::size_t n = 1; n <= 4; ++n)
        for (int k = 0; k < 40; ++k) {
            IntMatrix m = random_matrix(n, 6);
            auto r = spectral_radius(m);
            // Eigen is only accurate to a few ulps of the largest entry when eigenvalues are defective.
            EXPECT_NEAR(r.value, eigen_radius(m), 1e-6) << n;
            EXPECT_LE(r.error, 1e-9);
        }
}

TEST(SpectralRadius, PowersAndNilpotents) {
    for (int k = 0; k < 30; ++k) {
        IntMatrix m = random_matrix(3, 4);
        auto r = spectral_radius(m);
        for (unsigned e = 2; e <= 4; ++e) {
            auto re = spectral_radius(mat_pow(m, e));
            EXPECT_NEAR(re.value, std::pow(r.value, e), 1e-8 * std::max(1.0, re.value));
        }
    }
    EXPECT_EQ(spectral_radius({{0, 1, 5}, {0, 0, 2}, {0, 0, 0}}).value, 0.0);
    EXPECT_NEAR(spectral_radius({{1, 1}, {0, 1}}).value, 1.0, 1e-12);
}

TEST(DynDegree, Examples) {
    auto sq = dyn_degree(parse_map("P1:[x^2, y^2]"));
    EXPECT_EQ(sq.value, 2.0);
    EXPECT_EQ(sq.source, DegreeSource::Polarized);

    auto prod = dyn_degree(parse_map("P1xP1:[x^2, y^2];[x^3, y^3]"));
    EXPECT_EQ(prod.value, 3.0);
    EXPECT_EQ(prod.source, DegreeSource::ProductRule);

    auto pw = dyn_degree_power(parse_map("P1:[x^2 + y^2, y^2]"), 3);
    EXPECT_EQ(pw.value, 8.0);
    EXPECT_EQ(pw.source, DegreeSource::PowerRule);

    auto ns = dyn_degree(with_ns("P1:[x^2, y^2]", {{2, 0}, {0, 3}}));
    EXPECT_NEAR(ns.value, 3.0, 1e-12);
    EXPECT_EQ(ns.source, DegreeSource::SpectralRadius);

    EXPECT_THROW(dyn_degree(parse_map("P3:[x^2, y^2, z^2, w^2]")), Unresolvable);
    ParsedMapOptions pol;
    pol.polarization = 2;
    EXPECT_EQ(dyn_degree(parse_map("P3:[x^2, y^2, z^2, w^2]", pol)).value, 2.0);
    EXPECT_THROW(dyn_degree(parse_map("P1:[x*y, y^2]")), NotAMorphism);
}

TEST(DynDegree, ProductRuleMatchesIterateDegreeGrowth) {
    // deg(f^n)^{1/n} on each block, maximized, is exactly the product rule value.
    for (const char *m : {"P1xP1:[x^2, y^2];[x^3 + y^3, y^3]", "P1xP1:[x^2 + x*y, y^2];[x^2 - y^2, y^2]",
                          "P1xP2:[x^3, y^3];[x^2, y^2, z^2]"}) {
        auto f = parse_map(m);
        const double delta = dyn_degree(f).value;
        for (unsigned n = 1; n <= 4; ++n) {
            auto fn = iterate(f, n);
            int best = 0;
            for (std::size_t i = 0; i < fn.ambient().num_factors(); ++i)
                best = std::max(best, fn.block_degree(i));
            EXPECT_NEAR(std::pow(best, 1.0 / n), delta, 1e-12) << m;
            EXPECT_NEAR(dyn_degree(fn).value, dyn_degree_power(f, n).value, 1e-9) << m;
        }
    }
}

TEST(ArithDegree, Examples) {
    auto prod = parse_map("P1xP1:[x^2, y^2];[x^3, y^3]");
    auto a = arith_degree_estimate(prod, parse_point("1:2;1:2", PP), 20);
    EXPECT_EQ(a.verdict, ArithVerdict::EqualsDelta_Certified);
    EXPECT_EQ(a.estimate, 3.0);

    auto b = arith_degree_estimate(prod, parse_point("1:2;1:1", PP), 20);
    EXPECT_EQ(b.verdict, ArithVerdict::FactorMax_Certified);
    EXPECT_EQ(b.estimate, 2.0);

    auto c = arith_degree_estimate(prod, parse_point("1:1;0:1", PP), 20);
    EXPECT_EQ(c.verdict, ArithVerdict::ExactOne_Preperiodic);
    EXPECT_EQ(c.estimate, 1.0);

    auto x2 = arith_degree_estimate(parse_map("P1:[x^2 + y^2, y^2]"), parse_point("1:1", Ambient::projective(1)), 20);
    EXPECT_EQ(x2.verdict, ArithVerdict::EqualsDelta_Certified);
    EXPECT_EQ(x2.estimate, 2.0);

    EXPECT_THROW(arith_degree_estimate(prod, parse_point("1:2;1:2", PP), 3), Unsupported);
}

TEST(ArithDegree, TraceEstimateConverges) {
    // No rigorous height bound on P2, so only the ratio trace is available.
    auto f = parse_map("P2:[x^2 + y^2, y^2 - z^2, z^2]");
    auto e = arith_degree_estimate(f, parse_point("2:3:1", Ambient::projective(2)), 14);
    EXPECT_EQ(e.verdict, ArithVerdict::Estimate);
    EXPECT_NEAR(e.estimate, 2.0, 1e-2);
    ASSERT_FALSE(e.ratio_trace.empty());
    EXPECT_NEAR(e.ratio_trace.back(), 2.0, 1e-3);
}

TEST(ArithDegree, NeverExceedsDynamicalDegree) {
    for (const char *m : {"P1xP1:[x^2 - y^2, y^2];[x^3, y^3]", "P1xP1:[x^2, y^2];[x^2 + x*y, y^2]",
                          "P1:[x^3 - 2*y^3, y^3]", "P2:[x^2, y^2 + x*z, z^2 + x*y]"}) {
        auto f = parse_map(m);
        const double delta = dyn_degree(f).value;
        for (int k = 0; k < 8; ++k) {
            std::string s;
            for (std::size_t i = 0; i < f.ambient().num_factors(); ++i) {
                if (i)
                    s += ";";
                for (int j = 0; j <= f.ambient().dims[i]; ++j)
                    s += (j ? ":" : "") + std::to_string(oracle::uniform(1, 9));
            }
            auto est = arith_degree_estimate(f, parse_point(s, f.ambient()), 12);
            EXPECT_LE(est.estimate, delta + 2e-2) << m << " at " << s;
            EXPECT_GE(est.estimate, 1.0);
        }
    }
}

TEST(ArithDegree, PowerAndHeightChoiceInvariance) {
    auto f = parse_map("P1xP1:[x^2, y^2];[x^3 - y^3, y^3]");
    auto f2 = iterate(f, 2);
    ArithDegreeOptions maxh;
    maxh.height = HeightChoice::MaxOfFactors;
    for (const char *s : {"1:2;1:2", "1:3;1:1", "1:1;1:2", "1:1;0:1", "1:5;1:-1"}) {
        auto p = parse_point(s, PP);
        auto a = arith_degree_estimate(f, p, 16);
        auto b = arith_degree_estimate(f2, p, 16);
        auto c = arith_degree_estimate(f, p, 16, maxh);
        EXPECT_NE(a.verdict, ArithVerdict::Estimate) << s;
        EXPECT_NEAR(b.estimate, a.estimate * a.estimate, 1e-12) << s;
        EXPECT_EQ(c.estimate, a.estimate) << s;
    }
}

TEST(Classify, Examples) {
    const Ambient p1 = Ambient::projective(1);
    auto f = parse_map("P1:[x^2 - y^2, y^2]");
    EXPECT_EQ(classify_point_polarized(f, parse_point("0:1", p1)), PointClass::Preperiodic);
    EXPECT_EQ(classify_point_polarized(f, parse_point("1:0", p1)), PointClass::Preperiodic);
    EXPECT_EQ(classify_point_polarized(f, parse_point("1:2", p1)), PointClass::MaxDegree);
    EXPECT_EQ(classify_point_polarized(parse_map("P1:[x^2, y^2]"), parse_point("2:1", p1)), PointClass::MaxDegree);
    EXPECT_THROW(classify_point_polarized(parse_map("P1xP1:[x^2, y^2];[x^3, y^3]"), parse_point("1:1;1:1", PP)),
                 Unsupported);
}

TEST(Classify, AgreesWithOrbitOracle) {
    auto f = parse_map("P1:[x^2 - 2*y^2, y^2]");
    // Preperiodic rational points of x^2 - 2 lie in [-2, 2]; anything taller wanders.
    const double escape = 20.0;
    for (const auto &s : oracle::rational_points_p1(25)) {
        auto p = parse_point(s, Ambient::projective(1));
        bool prep = oracle::orbit_repeat(f, p, escape).has_value();
        EXPECT_EQ(classify_point_polarized(f, p), prep ? PointClass::Preperiodic : PointClass::MaxDegree) << s;
    }
}
