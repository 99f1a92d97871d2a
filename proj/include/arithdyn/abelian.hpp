/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Dynamics on E^g for integer-matrix isogenies composed with translations.
 *
 * Points of E(Q) that are small combinations of supplied generators plus
 * torsion are carried in lattice coordinates: coordinate i of a tuple is
 * sum_j c_ij G_j + T_i. The map x -> M x + a acts on the coefficient matrix
 * as C -> M C + C_a, and the Neron-Tate height of a coordinate is the
 * quadratic form c^T H c in the generator pairing matrix H. This keeps long
 * orbits exact while heights come from one pairing computation.
 */

#include "degrees.hpp"
#include "elliptic.hpp"
#include "heights.hpp"

#include <map>
#include <optional>

namespace arithdyn {

// ------------------------------------------------------------------- torsion

struct TorsionPoint {
    EllPoint point;
    int order = 1;
};

struct TorsionSubgroup {
    std::vector<TorsionPoint> points; ///< includes O
    std::size_t order() const { return points.size(); }
    /// "Z/n" or "Z/2 x Z/m".
    std::string structure() const {
        int maxo = 1;
        for (const auto &t : points)
            maxo = std::max(maxo, t.order);
        const int n = static_cast<int>(points.size());
        if (maxo == n)
            return "Z/" + std::to_string(n);
        return "Z/" + std::to_string(n / maxo) + " x Z/" + std::to_string(maxo);
    }
};

struct TorsionOptions {
    int order_ceiling = 12;
};

namespace detail {

/// Integer roots of x^3 + a x + c.
inline std::vector<Int> integer_roots_cubic(const Int &a, const Int &c) {
    std::vector<Int> roots;
    auto value = [&](const Int &x) { return Int(x * x * x + a * x + c); };
    if (c == 0) {
        roots.push_back(0);
        if (a < 0 && mpz_perfect_square_p(Int(-a).get_mpz_t())) {
            Int s = sqrt(Int(-a));
            roots.push_back(s);
            roots.push_back(-s);
        }
        return roots;
    }
    // Integer roots divide c.
    Int m = int_abs(c);
    for (Int d = 1; d * d <= m; ++d) {
        if (m % d != 0)
            continue;
        for (const Int &q : {d, Int(m / d)})
            for (const Int &x : {q, Int(-q)})
                if (value(x) == 0 && std::find(roots.begin(), roots.end(), x) == roots.end())
                    roots.push_back(x);
    }
    return roots;
}

/// Positive y with y^2 | n.
inline std::vector<Int> square_divisor_roots(const Int &n) {
    // Factor |n| by trial division; fine for desk-scale discriminants.
    Int m = int_abs(n);
    std::vector<std::pair<Int, int>> fac;
    for (Int p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e)
            fac.emplace_back(p, e);
    }
    if (m > 1)
        fac.emplace_back(m, 1);
    std::vector<Int> ys{Int(1)};
    for (const auto &[p, e] : fac) {
        std::vector<Int> next;
        for (const auto &y : ys) {
            Int pk = 1;
            for (int k = 0; 2 * k <= e; ++k) {
                next.push_back(y * pk);
                pk *= p;
            }
        }
        ys = std::move(next);
    }
    std::sort(ys.begin(), ys.end());
    return ys;
}

/// Order of P if P is torsion of order <= ceiling; non-integral multiples rule torsion out.
inline std::optional<int> torsion_order(const EllipticCurve &e, const EllPoint &p, int ceiling) {
    EllPoint q = p;
    for (int k = 1; k <= ceiling; ++k) {
        if (q.is_identity())
            return k;
        if (!q.is_integral())
            return std::nullopt;
        q = ell_add(e, q, p);
    }
    return std::nullopt;
}

inline bool point_less(const TorsionPoint &a, const TorsionPoint &b) {
    if (a.order != b.order)
        return a.order < b.order;
    if (a.point.is_identity() || b.point.is_identity())
        return a.point.is_identity() && !b.point.is_identity();
    if (a.point.x() != b.point.x())
        return a.point.x().as_rat() < b.point.x().as_rat();
    return a.point.y().as_rat() < b.point.y().as_rat();
}

} // namespace detail

/// Rational torsion via Lutz-Nagell: y = 0 or y^2 | 4a^3 + 27b^2, integral x.
inline TorsionSubgroup torsion_subgroup(const EllipticCurve &e, const TorsionOptions &opt = {}) {
    TorsionSubgroup t;
    t.points.push_back({EllPoint(), 1});
    const Int disc = 4 * e.a() * e.a() * e.a() + 27 * e.b() * e.b();
    auto consider = [&](const Int &x, const Int &y) {
        EllPoint p{AlgNum(x), AlgNum(y)};
        if (!p.lies_on(e))
            return;
        if (auto ord = detail::torsion_order(e, p, opt.order_ceiling))
            t.points.push_back({p, *ord});
    };
    for (const auto &x : detail::integer_roots_cubic(e.a(), e.b()))
        consider(x, Int(0));
    for (const auto &y : detail::square_divisor_roots(disc))
        for (const auto &x : detail::integer_roots_cubic(e.a(), Int(e.b() - y * y))) {
            consider(x, y);
            consider(x, Int(-y));
        }
    std::sort(t.points.begin(), t.points.end(), detail::point_less);
    return t;
}

// ------------------------------------------------------- matrix endomorphisms

struct MatrixEndo {
    IntMatrix matrix;                 ///< g x g
    std::vector<EllPoint> translation; ///< g points (O for a pure isogeny)

    std::size_t dim() const { return matrix.size(); }

    static MatrixEndo make(IntMatrix m, std::vector<EllPoint> translation = {}) {
        const std::size_t g = m.size();
        if (g == 0)
            throw InvalidMap("empty matrix");
        bool nonzero = false;
        for (const auto &row : m) {
            if (row.size() != g)
                throw InvalidMap("matrix endomorphism must be square");
            for (const auto &v : row)
                nonzero = nonzero || v != 0;
        }
        if (!nonzero)
            throw InvalidMap("zero matrix is not dominant");
        if (translation.empty())
            translation.assign(g, EllPoint());
        if (translation.size() != g)
            throw InvalidMap("translation needs one point per factor");
        return {std::move(m), std::move(translation)};
    }
};

using EllTuple = std::vector<EllPoint>;

inline EllTuple matrix_endo_apply(const EllipticCurve &e, const MatrixEndo &f, const EllTuple &p) {
    if (p.size() != f.dim())
        throw InvalidPoint("tuple length differs from the matrix size");
    EllTuple q;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        EllPoint acc = f.translation[i];
        for (std::size_t j = 0; j < f.dim(); ++j)
            if (f.matrix[i][j] != 0)
                acc = ell_add(e, acc, ell_mul(e, p[j], f.matrix[i][j]));
        q.push_back(std::move(acc));
    }
    return q;
}

/// delta = rho(M)^2: Neron-Tate heights are quadratic, so [M] scales them by eigenvalue moduli squared.
inline DynDegree matrix_endo_dyn_degree(const MatrixEndo &f) {
    auto rho = spectral_radius(f.matrix);
    return {rho.value * rho.value, 2 * rho.value * rho.error + rho.error * rho.error, DegreeSource::SpectralRadius};
}

// ---------------------------------------------------------- lattice points

/// Coefficient matrix over the generators plus torsion parts, one row per factor.
struct LatticeTuple {
    std::vector<std::vector<Int>> coeffs; ///< g x k
    std::vector<EllPoint> torsion;        ///< g
};

struct Lattice {
    EllipticCurve curve;
    std::vector<EllPoint> generators;
    TorsionSubgroup torsion;
    std::vector<std::vector<double>> pairing; ///< Neron-Tate pairing of generators
    double pairing_error = 0.0;

    static Lattice build(const EllipticCurve &e, std::vector<EllPoint> gens, double tol = 1e-4,
                         const NeronTateOptions &nt = {}) {
        Lattice l;
        l.curve = e;
        l.torsion = torsion_subgroup(e);
        const std::size_t k = gens.size();
        l.pairing.assign(k, std::vector<double>(k, 0.0));
        std::vector<double> self(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (!gens[j].lies_on(e) || !gens[j].is_rational())
                throw InvalidPoint("generator " + gens[j].to_string() + " is not a rational point of the curve");
            auto h = neron_tate(e, gens[j], tol, nt);
            if (h.torsion)
                throw InsufficientGenerators(gens[j].to_string() + " is torsion");
            self[j] = h.height.value;
            l.pairing[j][j] = self[j];
            l.pairing_error += h.height.error;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                auto h = neron_tate(e, ell_add(e, gens[i], gens[j]), tol, nt);
                double v = 0.5 * (h.height.value - self[i] - self[j]);
                l.pairing[i][j] = l.pairing[j][i] = v;
                l.pairing_error += h.height.error;
            }
        l.generators = std::move(gens);
        return l;
    }

    std::size_t rank() const { return generators.size(); }

    /// c^T H c for one coordinate.
    double height(const std::vector<Int> &c) const {
        // Scale huge coefficients into double range before forming the quadratic form.
        long shift = 0;
        for (const auto &v : c)
            shift = std::max<long>(shift, static_cast<long>(bit_length(v)) - 900);
        std::vector<double> d;
        for (const auto &v : c) {
            Int s = v;
            if (shift > 0)
                s >>= static_cast<unsigned long>(shift);
            d.push_back(s.get_d());
        }
        double q = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                q += d[i] * pairing[i][j] * d[j];
        return shift > 0 ? q * std::pow(2.0, 2.0 * static_cast<double>(shift)) : q;
    }

    /// Sum of factor Neron-Tate heights.
    double height(const LatticeTuple &t) const {
        double s = 0.0;
        for (const auto &c : t.coeffs)
            s += height(c);
        return s;
    }

    EllPoint point(const std::vector<Int> &c, const EllPoint &torsion_part) const {
        EllPoint acc = torsion_part;
        for (std::size_t j = 0; j < c.size(); ++j)
            acc = ell_add(curve, acc, ell_mul(curve, generators[j], c[j]));
        return acc;
    }

    EllTuple points(const LatticeTuple &t) const {
        EllTuple out;
        for (std::size_t i = 0; i < t.coeffs.size(); ++i)
            out.push_back(point(t.coeffs[i], t.torsion[i]));
        return out;
    }

    /// Express a rational point as sum c_j G_j + T with |c_j| <= cmax.
    std::optional<std::pair<std::vector<Int>, EllPoint>> express(const EllPoint &p, long cmax = 6) const {
        const std::size_t k = rank();
        std::vector<long> c(k, -cmax);
        for (;;) {
            std::vector<Int> ci(c.begin(), c.end());
            EllPoint base = point(ci, EllPoint());
            EllPoint diff = ell_add(curve, p, -base);
            for (const auto &t : torsion.points)
                if (t.point == diff)
                    return std::make_pair(ci, t.point);
            std::size_t i = 0;
            while (i < k && c[i] == cmax)
                c[i++] = -cmax;
            if (i == k)
                return std::nullopt;
            ++c[i];
        }
    }
};

/// Translation part in lattice coordinates.
inline LatticeTuple translation_coordinates(const Lattice &l, const MatrixEndo &f) {
    LatticeTuple t;
    for (const auto &a : f.translation) {
        auto ex = l.express(a);
        if (!ex)
            throw InsufficientGenerators("translation point " + a.to_string() +
                                         " is not a small combination of the generators plus torsion");
        t.coeffs.push_back(ex->first);
        t.torsion.push_back(ex->second);
    }
    return t;
}

/// F(x) in lattice coordinates: C -> M C + C_a. Torsion parts are carried exactly.
inline LatticeTuple lattice_apply(const Lattice &l, const MatrixEndo &f, const LatticeTuple &x,
                                  const LatticeTuple &a) {
    const std::size_t g = f.dim(), k = l.rank();
    LatticeTuple y;
    y.coeffs.assign(g, std::vector<Int>(k, Int(0)));
    y.torsion.assign(g, EllPoint());
    for (std::size_t i = 0; i < g; ++i) {
        y.coeffs[i] = a.coeffs[i];
        EllPoint t = a.torsion[i];
        for (std::size_t j = 0; j < g; ++j) {
            if (f.matrix[i][j] == 0)
                continue;
            for (std::size_t c = 0; c < k; ++c)
                y.coeffs[i][c] += f.matrix[i][j] * x.coeffs[j][c];
            t = ell_add(l.curve, t, ell_mul(l.curve, x.torsion[j], f.matrix[i][j]));
        }
        y.torsion[i] = t;
    }
    return y;
}

struct AbelianAlpha {
    std::vector<double> ratio_trace;
    double estimate = 1.0;
};

/// Arithmetic degree from the growth of (sum of Neron-Tate heights + 1) along the orbit.
inline AbelianAlpha abelian_alpha_estimate(const Lattice &l, const MatrixEndo &f, const LatticeTuple &x, int n_max,
                                           bool plus_one = true) {
    LatticeTuple a = translation_coordinates(l, f);
    LatticeTuple cur = x;
    std::vector<double> hs{l.height(cur) + (plus_one ? 1.0 : 0.0)};
    for (int n = 0; n < n_max; ++n) {
        cur = lattice_apply(l, f, cur, a);
        hs.push_back(l.height(cur) + (plus_one ? 1.0 : 0.0));
    }
    AbelianAlpha out;
    for (std::size_t k = 0; k + 1 < hs.size(); ++k)
        out.ratio_trace.push_back(hs[k] > 0 ? hs[k + 1] / hs[k] : 1.0);
    const std::size_t take = static_cast<std::size_t>((n_max + 1) / 2);
    double s = 0.0;
    for (std::size_t k = out.ratio_trace.size() - take; k < out.ratio_trace.size(); ++k)
        s += std::log(out.ratio_trace[k]);
    out.estimate = std::exp(s / static_cast<double>(take));
    return out;
}

struct DegreeCrossCheck {
    double formula = 0.0;       ///< rho(M)^2
    double growth = 0.0;        ///< height-growth estimate
    double relative_error = 0.0;
    bool passed = false;
};

/// Guard on delta = rho(M)^2: compare against Neron-Tate growth over `iterations` steps at generic tuples.
inline DegreeCrossCheck cross_validate_dyn_degree(const Lattice &l, const MatrixEndo &f, int iterations = 20,
                                                  double rel_tol = 1e-2) {
    if (l.rank() == 0)
        throw InsufficientGenerators("height-growth validation needs a non-torsion generator");
    DegreeCrossCheck cc;
    cc.formula = matrix_endo_dyn_degree(f).value;
    const std::size_t g = f.dim(), k = l.rank();
    MatrixEndo iso = MatrixEndo::make(f.matrix);
    std::vector<std::vector<std::size_t>> starts;
    for (std::size_t i = 0; i < g; ++i)
        starts.push_back({i});
    std::vector<std::size_t> all(g);
    std::iota(all.begin(), all.end(), 0);
    starts.push_back(all);
    for (const auto &s : starts) {
        LatticeTuple x;
        x.coeffs.assign(g, std::vector<Int>(k, Int(0)));
        x.torsion.assign(g, EllPoint());
        for (std::size_t i : s)
            x.coeffs[i][0] = static_cast<long>(i + 1);
        auto est = abelian_alpha_estimate(l, iso, x, iterations, false);
        cc.growth = std::max(cc.growth, est.estimate);
    }
    cc.relative_error = std::fabs(cc.growth - cc.formula) / cc.formula;
    cc.passed = cc.relative_error <= rel_tol;
    return cc;
}

// ------------------------------------------------------- Z_f structure check

/// Hypothesized Z_f = B + p + Tor: B spanned by rational columns, p in lattice coordinates.
struct StructureHypothesis {
    RatMatrix subspace;              ///< g x s (s = 0 means B = 0)
    std::vector<std::vector<Rat>> p; ///< g x k
};

/// For g <= 2: B = eigenline of the strictly smaller rational eigenvalue, else 0; p solves
/// (I - M) p - a in B.
inline StructureHypothesis default_hypothesis(const Lattice &l, const MatrixEndo &f) {
    const std::size_t g = f.dim(), k = l.rank();
    StructureHypothesis h;
    h.subspace.assign(g, {});
    if (g == 2) {
        const Int &a = f.matrix[0][0], &b = f.matrix[0][1], &c = f.matrix[1][0], &d = f.matrix[1][1];
        Int tr = a + d, det = a * d - b * c, disc = tr * tr - 4 * det;
        if (disc > 0 && mpz_perfect_square_p(disc.get_mpz_t())) {
            Int s = sqrt(disc);
            Int l1 = (tr - s) / 2, l2 = (tr + s) / 2;
            if (int_abs(l1) != int_abs(l2)) {
                Int small = int_abs(l1) < int_abs(l2) ? l1 : l2;
                // kernel of M - small I
                RatMatrix m{{Rat(a - small), Rat(b)}, {Rat(c), Rat(d - small)}};
                std::vector<Rat> v;
                if (!m[0][0].is_zero() || !m[0][1].is_zero())
                    v = {m[0][1], -m[0][0]};
                else
                    v = {m[1][1], -m[1][0]};
                h.subspace = {{v[0]}, {v[1]}};
            }
        }
    }
    LatticeTuple a = translation_coordinates(l, f);
    const std::size_t s = h.subspace[0].size();
    h.p.assign(g, std::vector<Rat>(k));
    for (std::size_t col = 0; col < k; ++col) {
        RatMatrix sys(g, std::vector<Rat>(g + s));
        std::vector<Rat> rhs(g);
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < g; ++j)
                sys[i][j] = Rat(Int((i == j ? 1 : 0) - f.matrix[i][j]));
            for (std::size_t t = 0; t < s; ++t)
                sys[i][g + t] = -h.subspace[i][t];
            rhs[i] = Rat(a.coeffs[i][col]);
        }
        auto sol = solve_rational(sys, rhs);
        if (!sol)
            throw InvariantViolation("no p with (I - M) p - a in B; the translation leaves no invariant coset");
        for (std::size_t i = 0; i < g; ++i)
            h.p[i][col] = (*sol)[i];
    }
    return h;
}

/// x - p in B (over Q), column by column.
inline bool in_predicted_locus(const StructureHypothesis &h, const LatticeTuple &x) {
    const std::size_t g = x.coeffs.size(), k = x.coeffs.empty() ? 0 : x.coeffs[0].size();
    const std::size_t s = h.subspace.empty() ? 0 : h.subspace[0].size();
    for (std::size_t col = 0; col < k; ++col) {
        RatMatrix sys(g, std::vector<Rat>(s));
        std::vector<Rat> rhs(g);
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t t = 0; t < s; ++t)
                sys[i][t] = h.subspace[i][t];
            rhs[i] = Rat(x.coeffs[i][col]) - h.p[i][col];
        }
        if (s == 0) {
            for (const auto &v : rhs)
                if (!v.is_zero())
                    return false;
            continue;
        }
        if (!solve_rational(sys, rhs))
            return false;
    }
    return true;
}

/// Invariance of the hypothesized locus: M B within B and F(p) - p in B.
inline bool hypothesis_is_invariant(const Lattice &l, const MatrixEndo &f, const StructureHypothesis &h) {
    const std::size_t g = f.dim(), s = h.subspace.empty() ? 0 : h.subspace[0].size();
    RatMatrix basis(g, std::vector<Rat>(s));
    for (std::size_t t = 0; t < s; ++t) {
        std::vector<Rat> img(g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j)
                img[i] += Rat(f.matrix[i][j]) * h.subspace[j][t];
        if (!solve_rational(h.subspace, img))
            return false;
    }
    LatticeTuple a = translation_coordinates(l, f);
    for (std::size_t col = 0; col < l.rank(); ++col) {
        std::vector<Rat> v(g);
        for (std::size_t i = 0; i < g; ++i) {
            Rat fp = Rat(a.coeffs[i][col]);
            for (std::size_t j = 0; j < g; ++j)
                fp += Rat(f.matrix[i][j]) * h.p[j][col];
            v[i] = fp - h.p[i][col];
        }
        bool zero = true;
        for (const auto &x : v)
            zero = zero && x.is_zero();
        if (zero)
            continue;
        if (s == 0 || !solve_rational(h.subspace, v))
            return false;
    }
    return true;
}

struct ProbeResult {
    LatticeTuple lattice;
    EllTuple points;
    double alpha = 1.0;
    bool predicted = false; ///< in B + p + Tor
    bool low = false;       ///< alpha < delta - tol
};

struct StructureReport {
    DynDegree delta;
    std::optional<DegreeCrossCheck> cross_check;
    StructureHypothesis hypothesis;
    bool invariant = false;
    std::vector<ProbeResult> probes;
    std::vector<std::size_t> violations;          ///< low alpha outside the predicted locus
    std::vector<std::size_t> converse_violations; ///< predicted locus but alpha ~ delta
    bool ok() const {
        return invariant && violations.empty() && converse_violations.empty() &&
               (!cross_check || cross_check->passed);
    }
};

struct StructureOptions {
    long coefficient_box = 2; ///< |c_j| <= this for probe coordinates
    double tol = 0.5;
    int n_max = 20;
};

/// Probe coordinates: torsion plus small combinations of generators, naive height h(x) <= B.
inline std::vector<std::pair<std::vector<Int>, EllPoint>> probe_coordinates(const Lattice &l, double b,
                                                                            long box) {
    std::vector<std::pair<std::vector<Int>, EllPoint>> out;
    const std::size_t k = l.rank();
    std::vector<long> c(k, -box);
    for (;;) {
        std::vector<Int> ci(c.begin(), c.end());
        for (const auto &t : l.torsion.points) {
            EllPoint p = l.point(ci, t.point);
            double h = p.is_identity() ? 0.0 : abs_height_alg(p.x()).value;
            if (h <= b + 1e-12)
                out.emplace_back(ci, t.point);
        }
        std::size_t i = 0;
        while (i < k && c[i] == box)
            c[i++] = -box;
        if (i == k)
            break;
        ++c[i];
    }
    return out;
}

inline StructureReport zf_structure_check(const Lattice &l, const MatrixEndo &f, double b,
                                          const StructureOptions &opt = {},
                                          std::optional<StructureHypothesis> hyp = std::nullopt) {
    const std::size_t g = f.dim();
    if (g > 2)
        throw Unsupported("structure checks are implemented for g <= 2");
    StructureReport rep;
    rep.delta = matrix_endo_dyn_degree(f);
    if (rep.delta.value <= 1.0 + rep.delta.error)
        throw Unsupported("structure check needs delta > 1");
    if (l.rank() > 0)
        rep.cross_check = cross_validate_dyn_degree(l, f);
    rep.hypothesis = hyp ? *hyp : default_hypothesis(l, f);
    rep.invariant = hypothesis_is_invariant(l, f, rep.hypothesis);
    auto coords = probe_coordinates(l, b, opt.coefficient_box);
    std::vector<std::size_t> idx(g, 0);
    for (;;) {
        ProbeResult pr;
        for (std::size_t i = 0; i < g; ++i) {
            pr.lattice.coeffs.push_back(coords[idx[i]].first);
            pr.lattice.torsion.push_back(coords[idx[i]].second);
        }
        pr.points = l.points(pr.lattice);
        pr.alpha = abelian_alpha_estimate(l, f, pr.lattice, opt.n_max).estimate;
        pr.predicted = in_predicted_locus(rep.hypothesis, pr.lattice);
        pr.low = pr.alpha < rep.delta.value - opt.tol;
        if (pr.low && !pr.predicted)
            rep.violations.push_back(rep.probes.size());
        if (pr.predicted && !pr.low)
            rep.converse_violations.push_back(rep.probes.size());
        rep.probes.push_back(std::move(pr));
        std::size_t i = 0;
        while (i < g && idx[i] + 1 == coords.size())
            idx[i++] = 0;
        if (i == g)
            break;
        ++idx[i];
    }
    return rep;
}

// ------------------------------------------------------------ torsion sweep

struct TorsionSweepEntry {
    Int a, b;
    std::optional<std::size_t> order;
    std::string structure;
    std::string diagnostic;
};

struct TorsionSweep {
    std::vector<TorsionSweepEntry> entries;
    std::size_t max_order = 0;
    std::map<std::size_t, std::size_t> histogram;
    std::vector<std::size_t> ceiling_violations;
};

inline TorsionSweep torsion_count_ubc(const std::vector<std::pair<Int, Int>> &curves, std::size_t ceiling = 16,
                                      unsigned workers = 1) {
    auto entries = parallel_map(
        curves,
        [](const std::pair<Int, Int> &ab) {
            TorsionSweepEntry e{ab.first, ab.second, std::nullopt, "", ""};
            try {
                EllipticCurve c(ab.first, ab.second);
                auto t = torsion_subgroup(c, TorsionOptions{16});
                e.order = t.order();
                e.structure = t.structure();
            } catch (const SingularCurve &) {
                e.diagnostic = "skipped: singular";
            }
            return e;
        },
        workers);
    TorsionSweep sw;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto &e = entries[i];
        if (e.order) {
            sw.max_order = std::max(sw.max_order, *e.order);
            ++sw.histogram[*e.order];
            if (*e.order > ceiling)
                sw.ceiling_violations.push_back(i);
        }
        sw.entries.push_back(std::move(e));
    }
    return sw;
}

} // namespace arithdyn
