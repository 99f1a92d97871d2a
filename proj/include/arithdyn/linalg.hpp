/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Exact dense linear algebra and univariate integer polynomial tools:
 * Bareiss determinants, rational solves, characteristic polynomials,
 * Sylvester resultants of binary forms and Sturm root counting.
 */

#include "exact_arith.hpp"

#include <optional>
#include <vector>

namespace arithdyn {

using IntMatrix = std::vector<std::vector<Int>>;
using RatMatrix = std::vector<std::vector<Rat>>;
using UPoly = std::vector<Int>; // coefficients low to high

inline IntMatrix identity_matrix(std::size_t n) {
    IntMatrix m(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

inline IntMatrix mat_mul(const IntMatrix &a, const IntMatrix &b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMatrix c(n, std::vector<Int>(m, Int(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j)
                    c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline IntMatrix mat_pow(const IntMatrix &a, unsigned e) {
    IntMatrix r = identity_matrix(a.size()), base = a;
    while (e) {
        if (e & 1)
            r = mat_mul(r, base);
        e >>= 1;
        if (e)
            base = mat_mul(base, base);
    }
    return r;
}

/// Fraction-free Gaussian elimination (Bareiss); exact determinant.
inline Int bareiss_det(IntMatrix m) {
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix &m) {
    std::vector<std::size_t> pivots;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c].is_zero())
            ++p;
        if (p == rows)
            continue;
        std::swap(m[r], m[p]);
        Rat inv = Rat(1) / m[r][c];
        for (auto &x : m[r])
            x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero())
                continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

/// One solution of A x = b over Q (free variables set to zero), or nullopt if inconsistent.
inline std::optional<std::vector<Rat>> solve_rational(const RatMatrix &a, const std::vector<Rat> &b) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    RatMatrix aug(rows, std::vector<Rat>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == cols)
        return std::nullopt;
    std::vector<Rat> x(cols);
    for (std::size_t i = 0; i < piv.size(); ++i)
        x[piv[i]] = aug[i][cols];
    return x;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

/// Characteristic polynomial det(xI - M), monic, low to high (Faddeev-LeVerrier over Q).
inline UPoly char_poly(const IntMatrix &m) {
    const std::size_t n = m.size();
    RatMatrix mq(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mq[i][j] = Rat(m[i][j]);
    std::vector<Rat> c(n + 1);
    c[n] = Rat(1);
    RatMatrix mk(n, std::vector<Rat>(n)); // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = M * M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(M M_k) / k
        RatMatrix next(n, std::vector<Rat>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rat s;
                for (std::size_t l = 0; l < n; ++l)
                    if (!mk[l][j].is_zero())
                        s += mq[i][l] * mk[l][j];
                next[i][j] = s;
            }
        for (std::size_t i = 0; i < n; ++i)
            next[i][i] += c[n - k + 1];
        mk = std::move(next);
        Rat tr;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                tr += mq[i][l] * mk[l][i];
        c[n - k] = -tr / Rat(static_cast<long>(k));
    }
    UPoly p;
    for (auto &x : c)
        p.push_back(x.num()); // denominators are 1 for integer matrices
    return p;
}

// ---------------------------------------------------------------- univariate

inline void trim(UPoly &p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline int deg(const UPoly &p) { return static_cast<int>(p.size()) - 1; }

inline UPoly derivative(const UPoly &p) {
    UPoly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

inline Int content(const UPoly &p) {
    Int g = 0;
    for (const auto &c : p)
        g = int_gcd(g, c);
    return g;
}

inline UPoly primitive_part(UPoly p) {
    trim(p);
    Int g = content(p);
    if (g > 1)
        for (auto &c : p)
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return p;
}

/// Pseudo-remainder lc(b)^k * a mod b, with k large enough to stay integral.
inline UPoly pseudo_rem(UPoly a, const UPoly &b, int *steps = nullptr) {
    trim(a);
    int k = 0;
    const int db = deg(b);
    const Int &lb = b.back();
    while (deg(a) >= db && !a.empty()) {
        int shift = deg(a) - db;
        Int la = a.back();
        for (auto &c : a)
            c *= lb;
        for (int i = 0; i <= db; ++i)
            a[i + shift] -= la * b[i];
        trim(a);
        ++k;
    }
    if (steps)
        *steps = k;
    return a;
}

inline UPoly upoly_gcd(UPoly a, UPoly b) {
    a = primitive_part(a);
    b = primitive_part(b);
    while (!b.empty()) {
        UPoly r = primitive_part(pseudo_rem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() < 0)
        for (auto &c : a)
            c = -c;
    return a;
}

/// Exact quotient a / b for b | a over Z[x] up to content.
inline UPoly upoly_div_exact(UPoly a, const UPoly &b) {
    trim(a);
    const int db = deg(b);
    std::vector<Rat> q(std::max(deg(a) - db + 1, 0));
    std::vector<Rat> r(a.begin(), a.end());
    for (int i = deg(a) - db; i >= 0; --i) {
        Rat coef = r[i + db] / Rat(b.back());
        q[i] = coef;
        for (int j = 0; j <= db; ++j)
            r[i + j] -= coef * Rat(b[j]);
    }
    Int l = 1;
    for (auto &c : q)
        l = int_lcm(l, c.den());
    UPoly out;
    for (auto &c : q)
        out.push_back(c.num() * (l / c.den()));
    return primitive_part(out);
}

inline int sign_at(const UPoly &p, const Rat &x) {
    Rat acc;
    for (int i = deg(p); i >= 0; --i)
        acc = acc * x + Rat(p[i]);
    return acc.sign();
}

/// Sturm chain of a squarefree polynomial.
inline std::vector<UPoly> sturm_chain(const UPoly &p) {
    std::vector<UPoly> chain{primitive_part(p), primitive_part(derivative(p))};
    while (!chain.back().empty() && deg(chain.back()) > 0) {
        const UPoly &a = chain[chain.size() - 2];
        const UPoly &b = chain.back();
        // prem = lc(b)^k * rem; the chain needs -rem up to a positive factor.
        int k = 0;
        UPoly r = pseudo_rem(a, b, &k);
        bool flip = !(b.back() < 0 && k % 2 == 1);
        if (flip)
            for (auto &c : r)
                c = -c;
        r = primitive_part(r);
        if (r.empty())
            break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_variations(const std::vector<UPoly> &chain, const Rat &x) {
    int v = 0, last = 0;
    for (const auto &p : chain) {
        int s = sign_at(p, x);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

/// Number of distinct real roots in (lo, hi].
inline int count_roots(const std::vector<UPoly> &chain, const Rat &lo, const Rat &hi) {
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

/// Cauchy bound: every complex root has modulus < 1 + max |a_i / a_n|.
inline Rat cauchy_bound(const UPoly &p) {
    Rat m;
    for (int i = 0; i < deg(p); ++i)
        m = std::max(m, Rat::normalize(int_abs(p[i]), int_abs(p.back())));
    return m + Rat(1);
}

/// Sylvester matrix of two binary forms of degrees dp, dq (coefficients of x^{d-i} y^i).
inline IntMatrix sylvester(const std::vector<Int> &p, const std::vector<Int> &q) {
    const std::size_t dp = p.size() - 1, dq = q.size() - 1, n = dp + dq;
    IntMatrix s(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < dq; ++i)
        for (std::size_t j = 0; j <= dp; ++j)
            s[i][i + j] = p[j];
    for (std::size_t i = 0; i < dp; ++i)
        for (std::size_t j = 0; j <= dq; ++j)
            s[dq + i][i + j] = q[j];
    return s;
}

inline Int resultant(const std::vector<Int> &p, const std::vector<Int> &q) {
    return bareiss_det(sylvester(p, q));
}

} // namespace arithdyn
