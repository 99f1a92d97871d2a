/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Dynamical degrees and arithmetic-degree estimates.
 *
 * spectral_radius certifies rho(M) exactly up to bisection width: with
 * p = charpoly(M), the polynomial r(y) = Res_x(p(x), x^n p(y/x)) has roots
 * lambda_i * lambda_j, all of modulus <= rho^2, and rho^2 = lambda * conj(lambda)
 * is one of them. So rho^2 is the largest real root of r, located with Sturm
 * sequences over exact dyadic rationals.
 */

#include "orbits.hpp"

#include <cmath>

namespace arithdyn {

struct RealWithError {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

/// r(y) = prod_{i,j} (y - lambda_i lambda_j) for monic p of degree n.
inline UPoly pairwise_product_poly(const UPoly &p) {
    const int n = deg(p);
    const int dr = n * n;
    // Binary-form (high to low) coefficient lists for the Sylvester matrix.
    std::vector<Int> ph(p.rbegin(), p.rend());
    std::vector<Rat> xs, ys;
    for (int t = 0; t <= dr; ++t) {
        // q_y(x) = sum_k p_k y^k x^{n-k}; high-to-low in x means index n-k -> position k
        std::vector<Int> qh(static_cast<std::size_t>(n) + 1);
        Int yk = 1;
        for (int k = 0; k <= n; ++k) {
            qh[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] * yk;
            yk *= t;
        }
        // qh currently lists coefficient of x^{n-k} at position k: already high-to-low.
        xs.emplace_back(static_cast<long>(t));
        ys.emplace_back(resultant(ph, qh));
    }
    // Newton interpolation over Q.
    std::vector<Rat> coef = ys;
    for (int j = 1; j <= dr; ++j)
        for (int i = dr; i >= j; --i)
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
    std::vector<Rat> poly(static_cast<std::size_t>(dr) + 1);
    for (int i = dr; i >= 0; --i) {
        // poly = poly * (y - x_i) + coef_i
        std::vector<Rat> next(poly.size());
        for (int k = dr; k >= 1; --k)
            next[k] = poly[k - 1] - poly[k] * xs[i];
        next[0] = Rat(0) - poly[0] * xs[i];
        next[0] += coef[i];
        poly = std::move(next);
    }
    UPoly out;
    for (const auto &c : poly) {
        if (!c.is_integer())
            throw InvariantViolation("non-integral pairwise-product polynomial");
        out.push_back(c.num());
    }
    trim(out);
    if (!out.empty() && out.back() < 0)
        for (auto &c : out)
            c = -c;
    return out;
}

} // namespace detail

/// Largest eigenvalue modulus of an integer matrix, error <= 1e-10.
inline RealWithError spectral_radius(const IntMatrix &m) {
    if (m.empty())
        throw Unsupported("empty matrix");
    for (const auto &row : m)
        if (row.size() != m.size())
            throw Unsupported("matrix must be square");
    const UPoly p = char_poly(m);
    const UPoly r = detail::pairwise_product_poly(p);
    UPoly sqf = upoly_div_exact(r, upoly_gcd(r, derivative(r)));
    if (deg(sqf) < 1)
        return {0.0, 0.0};
    const auto chain = sturm_chain(sqf);
    Rat hi = cauchy_bound(sqf);
    Rat lo(-1);
    if (count_roots(chain, Rat(0), hi) == 0)
        return {0.0, 0.0}; // nilpotent: every product is 0
    lo = Rat(0);
    // Invariant: exactly the largest real root lies in (lo, hi] and nothing lies above hi.
    const Rat two(2);
    for (int it = 0; it < 400; ++it) {
        double h = hi.to_double(), l = lo.to_double();
        if (h - l <= 1e-14 * std::sqrt(std::max(h, 1.0)))
            break;
        Rat mid = (lo + hi) / two;
        if (count_roots(chain, mid, hi) >= 1)
            lo = mid;
        else
            hi = mid;
    }
    const double h = hi.to_double(), l = std::max(0.0, lo.to_double());
    const double rho = std::sqrt(0.5 * (h + l));
    const double err = 0.5 * (std::sqrt(h) - std::sqrt(l)) + 4 * DBL_EPSILON * rho;
    return {rho, err};
}

// ------------------------------------------------------------ dynamical degree

enum class DegreeSource { Polarized, SpectralRadius, ProductRule, PowerRule };

inline const char *to_string(DegreeSource s) {
    switch (s) {
    case DegreeSource::Polarized:
        return "polarized";
    case DegreeSource::SpectralRadius:
        return "spectral-radius";
    case DegreeSource::ProductRule:
        return "product-rule";
    default:
        return "power-rule";
    }
}

struct DynDegree {
    double value = 1.0;
    double error = 0.0;
    DegreeSource source = DegreeSource::Polarized;
};

inline DynDegree dyn_degree(const PolyEndo &f) {
    if (f.declared_polarization())
        return {static_cast<double>(*f.declared_polarization()), 0.0, DegreeSource::Polarized};
    if (f.ns_matrix()) {
        auto rho = spectral_radius(*f.ns_matrix());
        return {rho.value, rho.error, DegreeSource::SpectralRadius};
    }
    const MorphismStatus st = morphism_check(f);
    if (st == MorphismStatus::NotMorphism)
        throw NotAMorphism(f.to_string());
    if (st == MorphismStatus::Unverified)
        throw Unresolvable("well-definedness of " + f.to_string() +
                           " is unverified; declare a polarization or supply an NS matrix");
    if (f.ambient().is_single())
        return {static_cast<double>(f.degree()), 0.0, DegreeSource::Polarized};
    int best = 1;
    for (std::size_t i = 0; i < f.ambient().num_factors(); ++i)
        best = std::max(best, f.block_degree(i));
    return {static_cast<double>(best), 0.0, DegreeSource::ProductRule};
}

/// delta(f^N) = delta(f)^N.
inline DynDegree dyn_degree_power(const PolyEndo &f, unsigned n) {
    DynDegree d = dyn_degree(f);
    double v = std::pow(d.value, n);
    double e = d.error == 0 ? 0.0 : n * std::pow(d.value + d.error, n - 1) * d.error;
    return {v, e, DegreeSource::PowerRule};
}

// ------------------------------------------------------------ arithmetic degree

enum class ArithVerdict { ExactOne_Preperiodic, EqualsDelta_Certified, FactorMax_Certified, Estimate };

inline const char *to_string(ArithVerdict v) {
    switch (v) {
    case ArithVerdict::ExactOne_Preperiodic:
        return "exact-one-preperiodic";
    case ArithVerdict::EqualsDelta_Certified:
        return "equals-delta-certified";
    case ArithVerdict::FactorMax_Certified:
        return "factor-max-certified";
    default:
        return "estimate";
    }
}

enum class HeightChoice { SumOfFactors, MaxOfFactors };

struct ArithDegreeEstimate {
    ProjPoint point;
    std::vector<double> ratio_trace; ///< h(f^{n+1} x) / h(f^n x)
    std::vector<double> root_trace;  ///< h(f^n x)^{1/n}, n >= 1
    double estimate = 1.0;
    ArithVerdict verdict = ArithVerdict::Estimate;
    bool budget_exceeded = false;    ///< traces stopped short of n_max
};

struct ArithDegreeOptions {
    HeightChoice height = HeightChoice::SumOfFactors;
    std::size_t max_bits = std::size_t{1} << 18;
    OrbitOptions certify;
};

namespace detail {

/// Factorwise certified arithmetic degree on P^1 factors: 1 if preperiodic, r_i otherwise.
inline std::optional<double> certified_factor_degree(const PolyEndo &f, const ProjPoint &p, std::size_t i,
                                                     const OrbitOptions &opt) {
    PolyEndo fi = factor_map(f, i);
    if (fi.degree() == 1 || fi.ambient().dims[0] != 1)
        return std::nullopt;
    auto c = is_preperiodic(fi, factor_point(p, i), opt);
    if (c.verdict == Certainty::Preperiodic)
        return 1.0;
    if (c.verdict == Certainty::NotPreperiodic)
        return static_cast<double>(fi.degree());
    return std::nullopt;
}

} // namespace detail

inline ArithDegreeEstimate arith_degree_estimate(const PolyEndo &f, const ProjPoint &p, int n_max,
                                                 const ArithDegreeOptions &opt = {}) {
    if (n_max < 4)
        throw Unsupported("n_max must be at least 4");
    ArithDegreeEstimate est;
    est.point = p;

    OrbitOptions oo;
    oo.max_steps = static_cast<std::size_t>(n_max);
    oo.max_bits = opt.max_bits;
    OrbitRecord rec = orbit(f, p, oo);
    std::vector<double> hs;
    for (std::size_t k = 0; k < rec.points.size(); ++k) {
        double h = opt.height == HeightChoice::SumOfFactors ? rec.height_trace[k].value
                                                            : point_height_max(rec.points[k]).value;
        hs.push_back(1.0 + h); // ample height normalized to be >= 1
    }
    for (std::size_t k = 0; k + 1 < hs.size(); ++k)
        est.ratio_trace.push_back(hs[k + 1] / hs[k]);
    for (std::size_t k = 1; k < hs.size(); ++k)
        est.root_trace.push_back(std::pow(hs[k], 1.0 / static_cast<double>(k)));

    if (rec.status == OrbitStatus::Cycle) {
        est.verdict = ArithVerdict::ExactOne_Preperiodic;
        est.estimate = 1.0;
        return est;
    }
    est.budget_exceeded = rec.points.size() < static_cast<std::size_t>(n_max) + 1;

    // Certified routes.
    if (f.is_polarized()) {
        TransformBound tb = height_difference_bound(f);
        if (tb.rigorous) {
            auto c = detail::certify_polarized(f, p, tb, opt.certify);
            if (c.verdict == Certainty::NotPreperiodic) {
                est.verdict = ArithVerdict::EqualsDelta_Certified;
                est.estimate = f.polarization_degree();
                return est;
            }
            if (c.verdict == Certainty::Preperiodic) {
                est.verdict = ArithVerdict::ExactOne_Preperiodic;
                est.estimate = 1.0;
                return est;
            }
        }
    } else if (f.ambient().num_factors() > 1 && f.ambient().all_lines()) {
        double alpha = 1.0;
        bool decided = true;
        for (std::size_t i = 0; i < f.ambient().num_factors() && decided; ++i) {
            auto a = detail::certified_factor_degree(f, p, i, opt.certify);
            if (!a)
                decided = false;
            else
                alpha = std::max(alpha, *a);
        }
        if (decided) {
            const double delta = dyn_degree(f).value;
            est.estimate = alpha;
            est.verdict = alpha == 1.0   ? ArithVerdict::ExactOne_Preperiodic
                          : alpha == delta ? ArithVerdict::EqualsDelta_Certified
                                           : ArithVerdict::FactorMax_Certified;
            return est;
        }
    }

    // Geometric mean of the last ceil(n_max/2) available ratios.
    const std::size_t want = static_cast<std::size_t>((n_max + 1) / 2);
    const std::size_t take = std::min(want, est.ratio_trace.size());
    if (take == 0) {
        est.estimate = 1.0;
        return est;
    }
    double s = 0.0;
    for (std::size_t k = est.ratio_trace.size() - take; k < est.ratio_trace.size(); ++k)
        s += std::log(est.ratio_trace[k]);
    est.estimate = std::exp(s / static_cast<double>(take));
    return est;
}

// ------------------------------------------------------------ classification

enum class PointClass { Preperiodic, MaxDegree, Unknown };

inline const char *to_string(PointClass c) {
    switch (c) {
    case PointClass::Preperiodic:
        return "preperiodic";
    case PointClass::MaxDegree:
        return "max-degree";
    default:
        return "unknown";
    }
}

/// For polarized f, alpha(P) < delta iff P is preperiodic, so this decides membership in Z_f.
inline PointClass classify_point_polarized(const PolyEndo &f, const ProjPoint &p, const OrbitOptions &opt = {}) {
    if (!f.is_polarized())
        throw Unsupported("classification needs a polarized map");
    auto c = is_preperiodic(f, p, opt);
    switch (c.verdict) {
    case Certainty::Preperiodic:
        return PointClass::Preperiodic;
    case Certainty::NotPreperiodic:
        return PointClass::MaxDegree;
    default:
        return PointClass::Unknown;
    }
}

} // namespace arithdyn
