/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Canonical heights.
 *
 * For a polarized map f of degree r with |h(f(P)) - r h(P)| <= C, telescoping
 * gives |hhat(P) - h(f^n P) / r^n| <= C / (r^n (r - 1)). On P^1 both sides of
 * the bound are explicit:
 *
 *   upper  h(f(P)) <= r h(P) + log(m * |f|_inf)      (triangle inequality)
 *   lower  h(f(P)) >= r h(P) - log K                 (Sylvester cofactors)
 *
 * where A_i F + B_i G = D_i * (x^{2r-1}, y^{2r-1}) with D_i the least positive
 * integer admitting integral cofactors (D_i divides Res(F, G)), and K is the
 * largest of |A_i|_1 + |B_i|_1. D_i cancels against the product formula, so
 * the lower bound holds over every number field.
 */

#include "elliptic.hpp"
#include "projective.hpp"

#include <cmath>
#include <unordered_set>

namespace arithdyn {

struct TransformBound {
    double upper = 0.0;                ///< C+ : h(f P) <= r h(P) + C+
    std::optional<double> lower;       ///< C- : h(f P) >= r h(P) - C-
    bool rigorous = false;             ///< both sides available
};

namespace detail {

/// log K from the two cofactor identities of a P^1 block.
inline double cofactor_lower_constant(const PolyEndo &f, std::size_t block) {
    const int r = f.block_degree(block);
    IntMatrix s = sylvester(binary_form_coeffs(f.block(block)[0], r), binary_form_coeffs(f.block(block)[1], r));
    const Int res = bareiss_det(s);
    if (res == 0)
        throw NotAMorphism("resultant vanishes on block " + std::to_string(block));
    const std::size_t n = s.size();
    RatMatrix st(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            st[i][j] = Rat(s[j][i]);
    Int k = 0;
    for (std::size_t target : {std::size_t{0}, n - 1}) {
        // Smallest D with integral cofactors for D x^{2r-1} (resp. D y^{2r-1}).
        std::vector<Rat> rhs(n);
        rhs[target] = Rat(1);
        auto u = solve_rational(st, rhs);
        if (!u)
            throw InvariantViolation("Sylvester system unexpectedly inconsistent");
        Int d = 1;
        for (const auto &c : *u)
            d = int_lcm(d, c.den());
        Int sum = 0;
        for (const auto &c : *u)
            sum += int_abs(c.num() * (d / c.den()));
        k = std::max(k, sum);
    }
    return log_abs(k);
}

} // namespace detail

/// Explicit constants for |h(f P) - r h(P)|; blockwise sums on products.
inline TransformBound height_difference_bound(const PolyEndo &f) {
    TransformBound tb;
    double lower = 0.0;
    bool have_lower = true;
    for (std::size_t i = 0; i < f.ambient().num_factors(); ++i) {
        Int scale = Int(static_cast<unsigned long>(f.max_monomials(i))) * f.max_coefficient(i);
        tb.upper += log_abs(scale);
        if (f.ambient().dims[i] == 1)
            lower += detail::cofactor_lower_constant(f, i);
        else
            have_lower = false;
    }
    if (have_lower)
        tb.lower = lower;
    tb.rigorous = have_lower;
    return tb;
}

struct CanonicalHeightOptions {
    int max_iterations = 64;
    std::size_t max_bits = std::size_t{1} << 16; ///< coordinate bit budget before stopping
};

struct CanonicalHeightResult {
    HeightValue height;
    int iterations = 0;            ///< n at which h(f^n P)/r^n was taken
    bool budget_exceeded = false;  ///< stopped by the bit budget before reaching tol
    bool cycle_found = false;      ///< exact preperiodicity observed; height is exactly 0
};

inline CanonicalHeightResult canonical_height(const PolyEndo &f, const ProjPoint &p, double tol,
                                              const TransformBound &bound,
                                              const CanonicalHeightOptions &opt = {}) {
    if (!(tol > 0))
        throw Unsupported("tolerance must be positive");
    const int r = f.polarization_degree();
    // hhat(P) - h(f^n P)/r^n lies in [-C-, C+] / (r^n (r - 1)); report the midpoint.
    const double lo = bound.rigorous ? *bound.lower : 0.0;
    const double hi = bound.upper;

    std::unordered_set<ProjPoint> seen;
    ProjPoint q = p;
    seen.insert(q);
    double scale = 1.0; // r^n
    double prev = 0.0;
    CanonicalHeightResult res;
    for (int n = 0;; ++n) {
        HeightValue h = point_height(q);
        double value = h.value / scale;
        double numeric = h.error / scale;
        double tail = (hi + lo) / (2 * scale * (r - 1));
        double diff = n == 0 ? INFINITY : std::fabs(value - prev);
        prev = value;
        bool converged = diff < tol && (!bound.rigorous || tail <= tol);
        bool out_of_budget = q.max_bits() > opt.max_bits;
        if (converged || n >= opt.max_iterations || out_of_budget) {
            res.iterations = n;
            res.budget_exceeded = !converged && out_of_budget;
            res.height.value = value;
            if (bound.rigorous) {
                res.height.value += (hi - lo) / (2 * scale * (r - 1));
                res.height.error = tail + numeric;
                res.height.rigorous = true;
            } else {
                res.height.error = (n == 0 ? value : diff) + numeric;
                res.height.rigorous = false;
            }
            if (res.height.value < 0 && -res.height.value <= res.height.error)
                res.height.value = 0;
            return res;
        }
        q = evaluate(f, q);
        scale *= r;
        if (!seen.insert(q).second) {
            res.iterations = n + 1;
            res.cycle_found = true;
            res.height = {0.0, 0.0, true};
            return res;
        }
    }
}

inline CanonicalHeightResult canonical_height(const PolyEndo &f, const ProjPoint &p, double tol,
                                              const CanonicalHeightOptions &opt = {}) {
    return canonical_height(f, p, tol, height_difference_bound(f), opt);
}

// ----------------------------------------------------------- Neron-Tate

/// Doubling orbits are checked for repeats only while coordinates stay below this size;
/// torsion points have bounded height, so their orbits close up long before it.
inline constexpr std::size_t kTorsionTrackBits = 4096;

struct NeronTateOptions {
    int max_iterations = 40;
    std::size_t max_bits = std::size_t{1} << 22;
};

struct NeronTateResult {
    HeightValue height;
    int doublings = 0;
    bool budget_exceeded = false;
    bool torsion = false; ///< the doubling orbit closed up exactly
};

namespace detail {

/// x([2]P) from x(P); nullopt when [2]P = O.
inline std::optional<AlgNum> double_x(const EllipticCurve &e, const AlgNum &x) {
    const AlgNum a(e.a()), b(e.b());
    AlgNum x2 = x * x;
    AlgNum den = AlgNum(4) * (x2 * x + a * x + b);
    if (den.is_zero())
        return std::nullopt;
    AlgNum num = x2 * x2 - AlgNum(2) * a * x2 - AlgNum(8) * b * x + a * a;
    return num / den;
}

/// Integer (X : Z) doubling for rational x, one gcd per step.
inline bool double_xz(const EllipticCurve &e, Int &X, Int &Z) {
    const Int &a = e.a(), &b = e.b();
    Int X2 = X * X, Z2 = Z * Z;
    Int den = 4 * Z * (X2 * X + a * X * Z2 + b * Z2 * Z);
    if (den == 0)
        return false;
    Int num = X2 * X2 - 2 * a * X2 * Z2 - 8 * b * X * Z2 * Z + a * a * Z2 * Z2;
    Int g = int_gcd(num, den);
    mpz_divexact(X.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(Z.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    if (Z < 0) {
        X = -X;
        Z = -Z;
    }
    return true;
}

} // namespace detail

/// hhat(P) = (1/2) lim h(x([2^n] P)) / 4^n, stopped by successive differences.
inline NeronTateResult neron_tate(const EllipticCurve &e, const EllPoint &p, double tol,
                                  const NeronTateOptions &opt = {}) {
    NeronTateResult res;
    if (p.is_identity()) {
        res.torsion = true;
        return res;
    }
    if (!p.lies_on(e))
        throw InvalidPoint(p.to_string() + " is not on the curve");
    const bool rational = p.x().is_rational();
    Int X, Z;
    AlgNum x = p.x();
    if (rational) {
        X = x.as_rat().num();
        Z = x.as_rat().den();
    }
    std::unordered_set<AlgNum> seen{x};
    double scale = 1.0, prev = 0.0;
    for (int n = 0;; ++n) {
        HeightValue hx;
        std::size_t bits;
        if (rational) {
            const Int m = std::max(int_abs(X), Z);
            hx.value = m == 0 ? 0.0 : log_abs(m);
            hx.error = log_error(hx.value);
            bits = bit_length(m);
        } else {
            hx = abs_height_alg(x);
            bits = std::max({bit_length(x.a().num()), bit_length(x.a().den()), bit_length(x.b().num()),
                             bit_length(x.b().den())});
        }
        double value = 0.5 * hx.value / scale;
        double diff = n == 0 ? INFINITY : std::fabs(value - prev);
        prev = value;
        bool converged = n >= 2 && diff < tol;
        bool out_of_budget = bits > opt.max_bits;
        if (converged || n >= opt.max_iterations || out_of_budget) {
            res.doublings = n;
            res.budget_exceeded = !converged && out_of_budget;
            res.height = {value, (n == 0 ? value : diff) + 0.5 * hx.error / scale, false};
            return res;
        }
        bool finite;
        bool track = bits < kTorsionTrackBits;
        if (rational) {
            finite = detail::double_xz(e, X, Z);
            if (finite && track)
                x = AlgNum(Rat::normalize(X, Z));
        } else {
            auto nx = detail::double_x(e, x);
            finite = nx.has_value();
            if (finite)
                x = *nx;
        }
        scale *= 4.0;
        if (!finite || (track && !seen.insert(x).second)) {
            res.doublings = n + 1;
            res.torsion = true;
            res.height = {0.0, 0.0, true};
            return res;
        }
    }
}

} // namespace arithdyn
