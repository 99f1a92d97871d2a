/* SPDX-License-Identifier: Apache-2.0 */

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace arithdyn;

TEST(Rational, NormalizeExamples) {
    EXPECT_EQ(rat_normalize(2, 4).to_string(), "1/2");
    Rat z = rat_normalize(0, 5);
    EXPECT_EQ(z.num(), 0);
    EXPECT_EQ(z.den(), 1);
    EXPECT_EQ(rat_normalize(-3, -6).to_string(), "1/2");
    EXPECT_EQ(rat_normalize(3, -6).to_string(), "-1/2");
    EXPECT_THROW(rat_normalize(1, 0), DivisionByZero);
    EXPECT_THROW(Rat(1) / Rat(0), DivisionByZero);
}

TEST(Rational, HeightIsLogMax) {
    for (int k = 0; k < 200; ++k) {
        Rat r = oracle::random_rat(5000);
        double want = std::log(std::max(std::fabs(r.num().get_d()), r.den().get_d()));
        if (r.is_zero())
            want = 0;
        EXPECT_NEAR(abs_height_alg(AlgNum(r)).value, want, 1e-12);
    }
    EXPECT_NEAR(abs_height_alg(AlgNum(Rat::normalize(1, 2))).value, std::log(2.0), 1e-12);
    EXPECT_EQ(abs_height_alg(AlgNum(0)).value, 0.0);
}

TEST(Quadratic, ReduceExamples) {
    AlgNum x = quad_reduce(1, 1, 8);
    EXPECT_EQ(x.disc(), 2);
    EXPECT_EQ(x.a(), Rat(1));
    EXPECT_EQ(x.b(), Rat(2));
    AlgNum r = quad_reduce(3, 0, 5);
    EXPECT_TRUE(r.is_rational());
    EXPECT_EQ(r.as_rat(), Rat(3));
    AlgNum u = quad_reduce(Rat::normalize(1, 2), Rat::normalize(1, 3), 5);
    EXPECT_EQ(u.disc(), 5);
    EXPECT_EQ(u.a(), Rat::normalize(1, 2));
    EXPECT_EQ(u.b(), Rat::normalize(1, 3));
    EXPECT_TRUE(quad_reduce(2, 3, 1).is_rational());
    EXPECT_EQ(quad_reduce(2, 3, 1).as_rat(), Rat(5));
    EXPECT_EQ(quad_reduce(0, 1, -12), quad_reduce(0, 2, -3));
}

TEST(Quadratic, ReduceIsIdempotent) {
    for (long D : {-20L, -12L, -3L, 8L, 18L, 50L}) {
        AlgNum x = quad_reduce(oracle::random_rat(30), oracle::random_rat(30), D);
        if (x.is_rational())
            continue;
        EXPECT_EQ(quad_reduce(x.a(), x.b(), x.disc()), x);
    }
}

TEST(Quadratic, MixingFieldsIsRejected) {
    AlgNum a = AlgNum::sqrt_of(2), b = AlgNum::sqrt_of(3);
    EXPECT_THROW(a + b, FieldMismatch);
    EXPECT_THROW(a * b, FieldMismatch);
    EXPECT_NO_THROW(a + AlgNum(Rat::normalize(1, 3)));
}

TEST(Quadratic, FieldAxioms) {
    for (long D : {-7L, -1L, 2L, 5L, 13L}) {
        for (int k = 0; k < 40; ++k) {
            AlgNum x = oracle::random_quad(D, 12), y = oracle::random_quad(D, 12), z = oracle::random_quad(D, 12);
            EXPECT_EQ((x + y) + z, x + (y + z));
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * (y + z), x * y + x * z);
            EXPECT_EQ(x + y, y + x);
            EXPECT_EQ(x * y, y * x);
            if (!x.is_zero()) {
                EXPECT_EQ(x * x.inverse(), AlgNum(1));
                EXPECT_EQ((y / x) * x, y);
            }
        }
    }
}

TEST(MinPoly, Examples) {
    EXPECT_EQ(min_poly(AlgNum(Rat::normalize(1, 2))).coeffs, (std::vector<Int>{-1, 2}));
    EXPECT_EQ(min_poly(AlgNum::sqrt_of(2)).coeffs, (std::vector<Int>{-2, 0, 1}));
    // (x - a)(x - a') for a = (1 + sqrt 5)/2 expands to x^2 - x - 1.
    AlgNum phi = (AlgNum(1) + AlgNum::sqrt_of(5)) / AlgNum(2);
    EXPECT_EQ(min_poly(phi).coeffs, (std::vector<Int>{-1, -1, 1}));
    EXPECT_EQ(min_poly(phi).to_string(), "x^2 - x - 1");
}

TEST(MinPoly, VanishesAtTheNumber) {
    for (long D : {-5L, -3L, 3L, 7L, 10L})
        for (int k = 0; k < 30; ++k) {
            AlgNum x = oracle::random_quad(D, 20);
            IntPoly p = min_poly(x);
            AlgNum acc(0);
            for (int i = p.degree(); i >= 0; --i)
                acc = acc * x + AlgNum(p.coeffs[static_cast<std::size_t>(i)]);
            EXPECT_TRUE(acc.is_zero()) << x.to_string();
            EXPECT_GT(p.leading(), 0);
            Int g = 0;
            for (const auto &c : p.coeffs)
                g = int_gcd(g, c);
            EXPECT_EQ(g, 1);
        }
}

TEST(Height, GoldenRatio) {
    AlgNum phi = (AlgNum(1) + AlgNum::sqrt_of(5)) / AlgNum(2);
    EXPECT_NEAR(abs_height_alg(phi).value, 0.5 * std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
    EXPECT_LE(abs_height_alg(phi).error, 1e-12);
}

TEST(Height, MatchesNumericMahlerMeasure) {
    for (long D : {-11L, -2L, -1L, 2L, 3L, 6L, 17L})
        for (int k = 0; k < 60; ++k) {
            AlgNum x = oracle::random_quad(D, 40);
            auto h = abs_height_alg(x);
            EXPECT_NEAR(h.value, oracle::mahler_height(x), 1e-10) << x.to_string();
            EXPECT_LE(h.error, 1e-12);
        }
}

TEST(Height, GaloisInvariantExactly) {
    for (long D : {-3L, 2L, 5L})
        for (int k = 0; k < 50; ++k) {
            AlgNum x = oracle::random_quad(D, 50);
            EXPECT_EQ(abs_height_alg(x).value, abs_height_alg(x.conj()).value);
        }
}

TEST(Height, CancellationHeavyUnit) {
    // 1 + sqrt 2 to a high power is a unit; its small conjugate must not lose precision.
    AlgNum u = (AlgNum(1) + AlgNum::sqrt_of(2)).pow(40);
    EXPECT_NEAR(abs_height_alg(u).value, 20 * std::log(1 + std::sqrt(2.0)), 1e-10);
}

TEST(AlgNum, PrintParseRoundTrip) {
    for (long D : {-3L, 5L})
        for (int k = 0; k < 20; ++k) {
            AlgNum x = oracle::random_quad(D, 30);
            EXPECT_EQ(parse_algnum(x.to_string()), x);
        }
    EXPECT_EQ(parse_algnum("i^2"), AlgNum(-1));
    EXPECT_EQ(parse_algnum("(1+sqrt(5))/2"), (AlgNum(1) + AlgNum::sqrt_of(5)) / AlgNum(2));
    EXPECT_EQ(parse_algnum("2^-2"), AlgNum(Rat::normalize(1, 4)));
    EXPECT_THROW(parse_algnum("1/(sqrt(4)-2)"), ParseError);
    EXPECT_THROW(parse_algnum("sqrt(2)+sqrt(3)"), FieldMismatch);
}
