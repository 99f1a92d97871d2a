/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Points of P^n1 x ... x P^nk over Q or a single quadratic field, and
 * block-diagonal endomorphisms given by homogeneous integer polynomials.
 *
 * Canonical form: in every block the leftmost nonzero coordinate is exactly 1.
 * Two points are equal iff their canonical forms are equal, so canonical
 * points double as hash keys for cycle detection.
 */

#include "linalg.hpp"
#include "poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arithdyn {

struct Ambient {
    std::vector<int> dims;

    static Ambient projective(int n) { return Ambient{{n}}; }
    static Ambient product(std::vector<int> dims) { return Ambient{std::move(dims)}; }

    std::size_t num_factors() const { return dims.size(); }
    bool is_single() const { return dims.size() == 1; }
    bool all_lines() const {
        for (int n : dims)
            if (n != 1)
                return false;
        return true;
    }
    friend bool operator==(const Ambient &, const Ambient &) = default;

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < dims.size(); ++i)
            s += (i ? "x" : "") + std::string("P") + std::to_string(dims[i]);
        return s;
    }

    void validate() const {
        if (dims.empty())
            throw InvalidPoint("ambient space needs at least one factor");
        for (int n : dims)
            if (n < 1)
                throw InvalidPoint("projective factor dimension must be >= 1");
    }
};

/// Conventional variable names for a block of P^n.
inline std::vector<std::string> block_variables(int n) {
    static const char *small[] = {"x", "y", "z", "w"};
    std::vector<std::string> v;
    for (int i = 0; i <= n; ++i)
        v.push_back(n <= 3 ? std::string(small[i]) : "x" + std::to_string(i));
    return v;
}

using Block = std::vector<AlgNum>;

class ProjPoint {
  public:
    ProjPoint() = default;

    /// Canonical representative of raw homogeneous coordinates.
    static ProjPoint canonicalize(const Ambient &ambient, std::vector<Block> raw) {
        ambient.validate();
        if (raw.size() != ambient.num_factors())
            throw InvalidPoint("expected " + std::to_string(ambient.num_factors()) + " coordinate blocks");
        ProjPoint p;
        p.ambient_ = ambient;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            Block &b = raw[i];
            if (b.size() != static_cast<std::size_t>(ambient.dims[i] + 1))
                throw InvalidPoint("block " + std::to_string(i) + " needs " + std::to_string(ambient.dims[i] + 1) +
                                   " coordinates");
            std::size_t lead = 0;
            while (lead < b.size() && b[lead].is_zero())
                ++lead;
            if (lead == b.size())
                throw InvalidPoint("all-zero coordinate block");
            AlgNum inv = b[lead].inverse();
            for (std::size_t j = lead; j < b.size(); ++j) {
                b[j] = j == lead ? AlgNum(1) : b[j] * inv;
                if (!b[j].is_rational()) {
                    if (p.field_ != 0 && p.field_ != b[j].disc())
                        throw FieldMismatch("coordinates from two quadratic fields");
                    p.field_ = b[j].disc();
                }
            }
        }
        p.blocks_ = std::move(raw);
        return p;
    }

    static ProjPoint from_ints(const Ambient &ambient, const std::vector<std::vector<long>> &raw) {
        std::vector<Block> blocks;
        for (const auto &r : raw) {
            Block b;
            for (long v : r)
                b.emplace_back(v);
            blocks.push_back(std::move(b));
        }
        return canonicalize(ambient, std::move(blocks));
    }

    const Ambient &ambient() const { return ambient_; }
    const std::vector<Block> &blocks() const { return blocks_; }
    const Block &block(std::size_t i) const { return blocks_[i]; }
    /// 0 for Q, otherwise the squarefree D of Q(sqrt(D)).
    long field() const { return field_; }
    bool is_rational() const { return field_ == 0; }

    friend bool operator==(const ProjPoint &a, const ProjPoint &b) {
        return a.ambient_ == b.ambient_ && a.blocks_ == b.blocks_;
    }

    /// Lexicographic order on the printed form; only used for deterministic sorting.
    friend bool operator<(const ProjPoint &a, const ProjPoint &b) { return a.sort_key() < b.sort_key(); }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (const auto &b : blocks_)
            for (const auto &c : b)
                h = (h ^ c.hash()) * 1099511628211ULL;
        return h;
    }

    /// "c0:c1;c0:c1" with exact coordinates.
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (i)
                s += ";";
            for (std::size_t j = 0; j < blocks_[i].size(); ++j)
                s += (j ? ":" : "") + blocks_[i][j].to_string();
        }
        return s;
    }

    std::size_t max_bits() const {
        std::size_t m = 0;
        for (const auto &b : blocks_)
            for (const auto &c : b)
                m = std::max({m, bit_length(c.a().num()), bit_length(c.a().den()), bit_length(c.b().num()),
                              bit_length(c.b().den())});
        return m;
    }

  private:
    std::pair<std::size_t, std::string> sort_key() const {
        // Height-ish first (bit size), then text, so small points sort first.
        return {max_bits(), to_string()};
    }

    Ambient ambient_;
    std::vector<Block> blocks_;
    long field_ = 0;
};

struct ProjPointHash {
    std::size_t operator()(const ProjPoint &p) const noexcept { return p.hash(); }
};

/// Coprime integer coordinates of a block with rational entries.
inline std::vector<Int> integer_coordinates(const Block &b) {
    Int l = 1;
    for (const auto &c : b)
        l = int_lcm(l, c.as_rat().den());
    std::vector<Int> out;
    out.reserve(b.size());
    for (const auto &c : b)
        out.push_back(c.as_rat().num() * (l / c.as_rat().den()));
    return out;
}

inline bool block_is_rational(const Block &b) {
    for (const auto &c : b)
        if (!c.is_rational())
            return false;
    return true;
}

/// Weil height of one block: log max |coords| over Q, or h(affine coordinate) on P^1 over a quadratic field.
inline HeightValue block_height(const Block &b) {
    if (block_is_rational(b)) {
        Int m = 0;
        for (const auto &c : integer_coordinates(b))
            m = std::max(m, int_abs(c));
        double h = log_abs(m);
        return {h, log_error(h), true};
    }
    if (b.size() != 2)
        throw UnsupportedField("heights over quadratic fields are implemented on P^1 factors only");
    // Canonical block is (1 : beta) or (0 : 1); h(1/beta) = h(beta).
    return b[0].is_zero() ? HeightValue{} : abs_height_alg(b[1]);
}

/// Sum of factor heights (the height attached to the sum of pulled-back hyperplane classes).
inline HeightValue point_height(const ProjPoint &p) {
    HeightValue total;
    if (!p.is_rational() && !p.ambient().all_lines())
        throw UnsupportedField("quadratic points are supported on products of P^1 only");
    for (const auto &b : p.blocks()) {
        HeightValue h = block_height(b);
        total.value += h.value;
        total.error += h.error;
    }
    return total;
}

/// Largest factor height; an alternative ample height on products.
inline HeightValue point_height_max(const ProjPoint &p) {
    HeightValue best;
    for (const auto &b : p.blocks()) {
        HeightValue h = block_height(b);
        if (h.value > best.value)
            best.value = h.value;
        best.error = std::max(best.error, h.error);
    }
    return best;
}

inline ProjPoint galois_conjugate(const ProjPoint &p) {
    if (p.is_rational())
        return p;
    std::vector<Block> blocks = p.blocks();
    for (auto &b : blocks)
        for (auto &c : b)
            c = c.conj();
    return ProjPoint::canonicalize(p.ambient(), std::move(blocks));
}

// ----------------------------------------------------------------- maps

enum class MorphismStatus { Morphism, NotMorphism, Unverified };

inline const char *to_string(MorphismStatus s) {
    switch (s) {
    case MorphismStatus::Morphism:
        return "morphism";
    case MorphismStatus::NotMorphism:
        return "not-a-morphism";
    default:
        return "unverified";
    }
}

class PolyEndo {
  public:
    PolyEndo() = default;

    static PolyEndo make(Ambient ambient, std::vector<std::vector<Poly>> blocks,
                         std::optional<int> declared_polarization = std::nullopt,
                         std::optional<IntMatrix> ns_matrix = std::nullopt) {
        ambient.validate();
        if (blocks.size() != ambient.num_factors())
            throw InvalidMap("expected " + std::to_string(ambient.num_factors()) + " polynomial blocks");
        PolyEndo f;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const std::size_t nv = static_cast<std::size_t>(ambient.dims[i]) + 1;
            if (blocks[i].size() != nv)
                throw InvalidMap("block " + std::to_string(i) + " needs " + std::to_string(nv) + " polynomials");
            int d = -1;
            for (auto &p : blocks[i]) {
                if (p.nvars() > nv)
                    throw InvalidMap("polynomial uses variables outside its block");
                if (p.nvars() < nv) {
                    Poly q(nv);
                    for (const auto &[m, c] : p.terms()) {
                        Monomial mm = m;
                        mm.resize(nv, 0);
                        q.add_term(mm, c);
                    }
                    p = std::move(q);
                }
                if (p.is_zero())
                    continue;
                if (!p.is_homogeneous())
                    throw InvalidMap("polynomial " + p.to_string(block_variables(ambient.dims[i])) +
                                     " is not homogeneous");
                if (d >= 0 && p.total_degree() != d)
                    throw InvalidMap("polynomials in a block must share one degree");
                d = p.total_degree();
            }
            if (d < 1)
                throw InvalidMap("block " + std::to_string(i) + " must have degree >= 1");
            f.degrees_.push_back(d);
        }
        if (declared_polarization) {
            if (*declared_polarization <= 1)
                throw InvalidMap("declared polarization must exceed 1");
            if (ambient.is_single() && *declared_polarization != f.degrees_[0])
                throw InvalidMap("declared polarization differs from the map degree");
        }
        if (ns_matrix) {
            for (const auto &row : *ns_matrix)
                if (row.size() != ns_matrix->size())
                    throw InvalidMap("NS matrix must be square");
        }
        f.ambient_ = std::move(ambient);
        f.blocks_ = std::move(blocks);
        f.polarization_ = declared_polarization;
        f.ns_ = std::move(ns_matrix);
        return f;
    }

    const Ambient &ambient() const { return ambient_; }
    const std::vector<std::vector<Poly>> &blocks() const { return blocks_; }
    const std::vector<Poly> &block(std::size_t i) const { return blocks_[i]; }
    int block_degree(std::size_t i) const { return degrees_[i]; }
    /// Degree of a single-factor map.
    int degree() const { return degrees_.at(0); }
    const std::optional<int> &declared_polarization() const { return polarization_; }
    const std::optional<IntMatrix> &ns_matrix() const { return ns_; }

    /// Polarized for the sum of pulled-back hyperplane classes: every block has the same degree r >= 2.
    bool is_polarized() const {
        for (int d : degrees_)
            if (d != degrees_[0])
                return false;
        return degrees_[0] >= 2;
    }
    /// The common block degree r of a polarized map.
    int polarization_degree() const {
        if (!is_polarized())
            throw Unsupported("map is not polarized (blocks need one common degree >= 2)");
        return degrees_[0];
    }

    /// Max number of monomials in any polynomial of the block.
    std::size_t max_monomials(std::size_t i) const {
        std::size_t m = 0;
        for (const auto &p : blocks_[i])
            m = std::max(m, p.num_terms());
        return m;
    }
    Int max_coefficient(std::size_t i) const {
        Int m = 0;
        for (const auto &p : blocks_[i])
            m = std::max(m, max_abs_coeff(p));
        return m;
    }

    std::string block_to_string(std::size_t i) const {
        auto names = block_variables(ambient_.dims[i]);
        std::string s = "[";
        for (std::size_t j = 0; j < blocks_[i].size(); ++j)
            s += (j ? ", " : "") + blocks_[i][j].to_string(names);
        return s + "]";
    }

    /// Parseable form, e.g. "P1 -> P1 : [x^2, y^2]".
    std::string to_string() const {
        std::string s = ambient_.to_string() + " -> " + ambient_.to_string() + " : ";
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            s += (i ? " ; " : "") + block_to_string(i);
        return s;
    }

  private:
    Ambient ambient_;
    std::vector<std::vector<Poly>> blocks_;
    std::vector<int> degrees_;
    std::optional<int> polarization_;
    std::optional<IntMatrix> ns_;
};

/// Coefficients of a binary form as (x^r, x^{r-1} y, ..., y^r).
inline std::vector<Int> binary_form_coeffs(const Poly &p, int r) {
    std::vector<Int> c(static_cast<std::size_t>(r) + 1, Int(0));
    for (const auto &[m, v] : p.terms())
        c[static_cast<std::size_t>(m[1])] = v;
    return c;
}

/// Resultant of the two binary forms defining a P^1 block.
inline Int binary_resultant(const PolyEndo &f, std::size_t block = 0) {
    if (f.ambient().dims[block] != 1)
        throw Unsupported("binary resultant needs a P^1 block");
    int r = f.block_degree(block);
    return resultant(binary_form_coeffs(f.block(block)[0], r), binary_form_coeffs(f.block(block)[1], r));
}

namespace detail {

// Buchberger over Q in two variables with grevlex order; decides whether an
// ideal is the unit ideal.

using Mono2 = std::pair<int, int>;

inline bool grevlex_less(const Monomial &a, const Monomial &b) {
    int da = a[0] + a[1], db = b[0] + b[1];
    if (da != db)
        return da < db;
    return a[0] < b[0];
}

inline Monomial leading_monomial(const QPoly &p) {
    const Monomial *best = nullptr;
    for (const auto &[m, c] : p.terms())
        if (!best || grevlex_less(*best, m))
            best = &m;
    return *best;
}

inline QPoly make_monic(const QPoly &p) {
    Rat lc = p.terms().at(leading_monomial(p));
    return p.scaled(Rat(1) / lc);
}

inline QPoly monomial_times(const QPoly &p, const Monomial &m, const Rat &c) {
    QPoly r(2);
    for (const auto &[mm, cc] : p.terms())
        r.add_term({mm[0] + m[0], mm[1] + m[1]}, cc * c);
    return r;
}

inline bool divides(const Monomial &a, const Monomial &b) { return a[0] <= b[0] && a[1] <= b[1]; }

inline QPoly normal_form(QPoly p, const std::vector<QPoly> &basis) {
    QPoly rem(2);
    while (!p.is_zero()) {
        Monomial lm = leading_monomial(p);
        Rat lc = p.terms().at(lm);
        bool reduced = false;
        for (const auto &g : basis) {
            Monomial lg = leading_monomial(g);
            if (divides(lg, lm)) {
                p = p - monomial_times(g, {lm[0] - lg[0], lm[1] - lg[1]}, lc);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            rem.add_term(lm, lc);
            QPoly t(2);
            t.add_term(lm, lc);
            p = p - t;
        }
    }
    return rem;
}

inline bool is_unit_ideal(std::vector<QPoly> gens) {
    std::vector<QPoly> basis;
    for (auto &g : gens)
        if (!g.is_zero())
            basis.push_back(make_monic(g));
    if (basis.empty())
        return false;
    auto is_const = [](const QPoly &p) {
        Monomial lm = leading_monomial(p);
        return lm[0] == 0 && lm[1] == 0;
    };
    for (const auto &g : basis)
        if (is_const(g))
            return true;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            pairs.emplace_back(j, i);
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        Monomial a = leading_monomial(basis[i]), b = leading_monomial(basis[j]);
        Monomial l{std::max(a[0], b[0]), std::max(a[1], b[1])};
        if (a[0] + b[0] == l[0] && a[1] + b[1] == l[1])
            continue; // coprime leading terms: S-polynomial reduces to zero
        QPoly s = monomial_times(basis[i], {l[0] - a[0], l[1] - a[1]}, Rat(1)) -
                  monomial_times(basis[j], {l[0] - b[0], l[1] - b[1]}, Rat(1));
        QPoly r = normal_form(s, basis);
        if (r.is_zero())
            continue;
        r = make_monic(r);
        if (is_const(r))
            return true;
        for (std::size_t k = 0; k < basis.size(); ++k)
            pairs.emplace_back(k, basis.size());
        basis.push_back(std::move(r));
    }
    return false;
}

/// Dehomogenize a ternary form by setting variable `chart` to 1.
inline QPoly dehomogenize(const Poly &p, std::size_t chart) {
    QPoly q(2);
    for (const auto &[m, c] : p.terms()) {
        Monomial mm;
        for (std::size_t i = 0; i < 3; ++i)
            if (i != chart)
                mm.push_back(m[i]);
        q.add_term(mm, Rat(c));
    }
    return q;
}

} // namespace detail

/// Exact well-definedness test: no common zero of any block over the algebraic closure.
inline MorphismStatus morphism_check(const PolyEndo &f) {
    bool unverified = false;
    for (std::size_t i = 0; i < f.ambient().num_factors(); ++i) {
        int n = f.ambient().dims[i];
        if (n == 1) {
            if (binary_resultant(f, i) == 0)
                return MorphismStatus::NotMorphism;
        } else if (n == 2) {
            for (std::size_t chart = 0; chart < 3; ++chart) {
                std::vector<QPoly> gens;
                for (const auto &p : f.block(i))
                    gens.push_back(detail::dehomogenize(p, chart));
                if (!detail::is_unit_ideal(gens))
                    return MorphismStatus::NotMorphism;
            }
        } else {
            unverified = true;
        }
    }
    return unverified ? MorphismStatus::Unverified : MorphismStatus::Morphism;
}

/// Image of a point; exact arithmetic, canonical result.
inline ProjPoint evaluate(const PolyEndo &f, const ProjPoint &p) {
    if (!(p.ambient() == f.ambient()))
        throw InvalidPoint("point lives in " + p.ambient().to_string() + ", map acts on " +
                           f.ambient().to_string());
    std::vector<Block> out;
    out.reserve(p.blocks().size());
    for (std::size_t i = 0; i < p.blocks().size(); ++i) {
        const Block &b = p.block(i);
        Block img;
        if (block_is_rational(b)) {
            std::vector<Int> x = integer_coordinates(b);
            for (const auto &poly : f.block(i))
                img.emplace_back(poly.evaluate<Int>(x));
        } else {
            for (const auto &poly : f.block(i))
                img.push_back(poly.evaluate<AlgNum>(b));
        }
        bool zero = true;
        for (const auto &c : img)
            zero = zero && c.is_zero();
        if (zero)
            throw NotAMorphismAtPoint("all image coordinates vanish at " + p.to_string());
        out.push_back(std::move(img));
    }
    return ProjPoint::canonicalize(p.ambient(), std::move(out));
}

/// f o g, blockwise.
inline PolyEndo compose(const PolyEndo &f, const PolyEndo &g) {
    if (!(f.ambient() == g.ambient()))
        throw InvalidMap("cannot compose maps on different ambients");
    std::vector<std::vector<Poly>> blocks;
    for (std::size_t i = 0; i < f.blocks().size(); ++i) {
        std::vector<Poly> b;
        for (const auto &p : f.block(i))
            b.push_back(p.substitute(std::span<const Poly>(g.block(i))));
        blocks.push_back(std::move(b));
    }
    std::optional<int> pol;
    if (f.declared_polarization() && g.declared_polarization())
        pol = *f.declared_polarization() * *g.declared_polarization();
    std::optional<IntMatrix> ns;
    if (f.ns_matrix() && g.ns_matrix())
        ns = mat_mul(*g.ns_matrix(), *f.ns_matrix()); // (f o g)^* = g^* f^*
    return PolyEndo::make(f.ambient(), std::move(blocks), pol, ns);
}

/// f^N.
inline PolyEndo iterate(const PolyEndo &f, unsigned n) {
    if (n == 0)
        throw InvalidMap("iterate count must be positive");
    PolyEndo r = f;
    for (unsigned i = 1; i < n; ++i)
        r = compose(f, r);
    return r;
}

} // namespace arithdyn

template <> struct std::hash<arithdyn::ProjPoint> {
    std::size_t operator()(const arithdyn::ProjPoint &p) const noexcept { return p.hash(); }
};
