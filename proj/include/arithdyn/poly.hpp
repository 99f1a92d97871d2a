/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Sparse multivariate polynomials with integer (Poly) or rational (QPoly)
 * coefficients. Exponent vectors are keys of an ordered map, so iteration
 * order and printing are deterministic.
 */

#include "exact_arith.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace arithdyn {

using Monomial = std::vector<int>;

template <class Coeff> class BasicPoly {
  public:
    BasicPoly() = default;
    explicit BasicPoly(std::size_t nvars) : nvars_(nvars) {}

    static BasicPoly constant(std::size_t nvars, const Coeff &c) {
        BasicPoly p(nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }
    static BasicPoly variable(std::size_t nvars, std::size_t i) {
        BasicPoly p(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        p.add_term(m, Coeff(1));
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const std::map<Monomial, Coeff> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    void add_term(const Monomial &m, const Coeff &c) {
        if (c == Coeff(0))
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second == Coeff(0))
                terms_.erase(it);
        }
    }

    int total_degree() const {
        int d = -1;
        for (const auto &[m, c] : terms_) {
            int s = 0;
            for (int e : m)
                s += e;
            d = std::max(d, s);
        }
        return d;
    }

    bool is_homogeneous() const {
        int d = -1;
        for (const auto &[m, c] : terms_) {
            int s = 0;
            for (int e : m)
                s += e;
            if (d >= 0 && s != d)
                return false;
            d = s;
        }
        return true;
    }

    friend BasicPoly operator+(const BasicPoly &a, const BasicPoly &b) {
        BasicPoly r = a;
        r.nvars_ = std::max(a.nvars_, b.nvars_);
        for (const auto &[m, c] : b.terms_)
            r.add_term(m, c);
        return r;
    }
    BasicPoly operator-() const {
        BasicPoly r(nvars_);
        for (const auto &[m, c] : terms_)
            r.terms_.emplace(m, Coeff(0) - c);
        return r;
    }
    friend BasicPoly operator-(const BasicPoly &a, const BasicPoly &b) { return a + (-b); }
    friend BasicPoly operator*(const BasicPoly &a, const BasicPoly &b) {
        BasicPoly r(std::max(a.nvars_, b.nvars_));
        for (const auto &[ma, ca] : a.terms_)
            for (const auto &[mb, cb] : b.terms_) {
                Monomial m(r.nvars_, 0);
                for (std::size_t i = 0; i < r.nvars_; ++i)
                    m[i] = (i < ma.size() ? ma[i] : 0) + (i < mb.size() ? mb[i] : 0);
                r.add_term(m, ca * cb);
            }
        return r;
    }
    BasicPoly scaled(const Coeff &s) const {
        BasicPoly r(nvars_);
        for (const auto &[m, c] : terms_)
            r.add_term(m, c * s);
        return r;
    }
    BasicPoly pow(unsigned e) const {
        BasicPoly r = constant(nvars_, Coeff(1));
        for (unsigned i = 0; i < e; ++i)
            r = r * *this;
        return r;
    }

    friend bool operator==(const BasicPoly &a, const BasicPoly &b) { return a.terms_ == b.terms_; }

    /// Substitute polynomials for the variables (composition).
    BasicPoly substitute(std::span<const BasicPoly> images) const {
        std::size_t nv = images.empty() ? 0 : images[0].nvars();
        BasicPoly r(nv);
        for (const auto &[m, c] : terms_) {
            BasicPoly t = constant(nv, c);
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] > 0)
                    t = t * images[i].pow(static_cast<unsigned>(m[i]));
            r = r + t;
        }
        return r;
    }

    /// Evaluate at a point in any ring that accepts Coeff via construction.
    template <class T> T evaluate(std::span<const T> x) const {
        int deg = std::max(total_degree(), 0);
        std::vector<std::vector<T>> powers(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) {
            powers[i].reserve(deg + 1);
            powers[i].push_back(T(1));
            for (int k = 1; k <= deg; ++k)
                powers[i].push_back(powers[i].back() * x[i]);
        }
        T acc(0);
        for (const auto &[m, c] : terms_) {
            T t = T(c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (m[i] > 0)
                    t = t * powers[i][m[i]];
            acc = acc + t;
        }
        return acc;
    }

    std::string to_string(std::span<const std::string> names) const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto &[m, c] = *it;
            std::string cs = coeff_str(c);
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg)
                cs.erase(0, 1);
            if (!s.empty())
                s += neg ? " - " : " + ";
            else if (neg)
                s += "-";
            std::string mono;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += names[i];
                if (m[i] > 1)
                    mono += "^" + std::to_string(m[i]);
            }
            if (mono.empty())
                s += cs;
            else if (cs == "1")
                s += mono;
            else
                s += cs + "*" + mono;
        }
        return s;
    }

  private:
    static std::string coeff_str(const Int &c) { return c.get_str(); }
    static std::string coeff_str(const Rat &c) { return c.to_string(); }

    std::size_t nvars_ = 0;
    std::map<Monomial, Coeff> terms_;
};

using Poly = BasicPoly<Int>;
using QPoly = BasicPoly<Rat>;

inline Int max_abs_coeff(const Poly &p) {
    Int m = 0;
    for (const auto &[mono, c] : p.terms())
        m = std::max(m, int_abs(c));
    return m;
}

inline Int l1_norm(const Poly &p) {
    Int s = 0;
    for (const auto &[mono, c] : p.terms())
        s += int_abs(c);
    return s;
}

/// Clear denominators across a family of rational polynomials jointly and strip the common content.
inline std::vector<Poly> clear_denominators(std::span<const QPoly> polys) {
    Int l = 1;
    for (const auto &p : polys)
        for (const auto &[m, c] : p.terms())
            l = int_lcm(l, c.den());
    Int g = 0;
    std::vector<Poly> out;
    for (const auto &p : polys) {
        Poly q(p.nvars());
        for (const auto &[m, c] : p.terms()) {
            Int v = c.num() * (l / c.den());
            g = int_gcd(g, v);
            q.add_term(m, v);
        }
        out.push_back(std::move(q));
    }
    if (g > 1)
        for (auto &q : out) {
            Poly r(q.nvars());
            for (const auto &[m, c] : q.terms())
                r.add_term(m, c / g);
            q = std::move(r);
        }
    return out;
}

inline QPoly to_qpoly(const Poly &p) {
    QPoly q(p.nvars());
    for (const auto &[m, c] : p.terms())
        q.add_term(m, Rat(c));
    return q;
}

} // namespace arithdyn
