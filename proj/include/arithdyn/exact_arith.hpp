/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Exact arithmetic over Q and real/imaginary quadratic fields Q(sqrt(D)).
 *
 * Values are immutable once built. Rat is always in lowest terms with a
 * positive denominator. AlgNum is either rational (disc() == 0) or a genuine
 * quadratic irrationality a + b*sqrt(D) with b != 0 and D squarefree, D != 0, 1.
 * Anything that collapses to b == 0 is demoted back to a rational.
 */

#include "error.hpp"

#include <gmpxx.h>

#include <cfloat>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace arithdyn {

using Int = mpz_class;

/// Natural log of |z| for z != 0, accurate to double precision for any size.
inline double log_abs(const Int &z) {
    if (z == 0)
        throw DivisionByZero("log of zero");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * M_LN2;
}

inline std::size_t bit_length(const Int &z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

inline Int int_gcd(const Int &a, const Int &b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_lcm(const Int &a, const Int &b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int int_abs(const Int &a) { return a < 0 ? Int(-a) : a; }

inline std::size_t hash_int(const Int &z) {
    const mpz_srcptr p = z.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(p->_mp_size) * 0x9e3779b97f4a7c15ULL;
    if (p->_mp_size != 0)
        h ^= static_cast<std::size_t>(mpz_getlimbn(p, 0)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

/// Height estimate with an explicit absolute error bound.
struct HeightValue {
    double value = 0.0;
    double error = 0.0;
    bool rigorous = true;
};

/// Tracked floating error of one log evaluation whose operands have magnitude `mag`.
inline double log_error(double mag) { return 1e-13 + 8.0 * DBL_EPSILON * std::fabs(mag); }

class Rat {
  public:
    Rat() = default;
    Rat(long n) : q_(n) {}
    Rat(const Int &n) : q_(n) {}

    /// Reduced form of num/den; den == 0 raises DivisionByZero.
    static Rat normalize(const Int &num, const Int &den) {
        if (den == 0)
            throw DivisionByZero("zero denominator");
        Rat r;
        r.q_ = mpq_class(num, den);
        r.q_.canonicalize();
        return r;
    }

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }
    const mpq_class &raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    double to_double() const { return q_.get_d(); }

    friend Rat operator+(const Rat &a, const Rat &b) { return from(a.q_ + b.q_); }
    friend Rat operator-(const Rat &a, const Rat &b) { return from(a.q_ - b.q_); }
    friend Rat operator*(const Rat &a, const Rat &b) { return from(a.q_ * b.q_); }
    friend Rat operator/(const Rat &a, const Rat &b) {
        if (b.is_zero())
            throw DivisionByZero("rational division by zero");
        return from(a.q_ / b.q_);
    }
    Rat operator-() const { return from(-q_); }
    Rat &operator+=(const Rat &o) { return *this = *this + o; }
    Rat &operator-=(const Rat &o) { return *this = *this - o; }
    Rat &operator*=(const Rat &o) { return *this = *this * o; }
    Rat &operator/=(const Rat &o) { return *this = *this / o; }

    friend bool operator==(const Rat &a, const Rat &b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rat &a, const Rat &b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rat abs() const { return sign() < 0 ? -*this : *this; }
    Rat pow(unsigned e) const {
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
        mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
        return normalize(n, d);
    }

    /// log max(|p|, q): the absolute logarithmic height of p/q.
    double height() const {
        const Int n = int_abs(num());
        const Int &d = q_.get_den();
        return n > d ? arithdyn::log_abs(n) : arithdyn::log_abs(d);
    }

    /// log |this|, this != 0.
    double log_abs() const { return arithdyn::log_abs(num()) - arithdyn::log_abs(den()); }

    std::string to_string() const { return q_.get_str(); }

    std::size_t hash() const { return hash_int(q_.get_num()) * 31 + hash_int(q_.get_den()); }

  private:
    static Rat from(mpq_class q) {
        Rat r;
        r.q_ = std::move(q);
        return r;
    }
    mpq_class q_;
};

/// Squarefree kernel: D = s^2 * k with k squarefree. Returns {k, s}.
inline std::pair<long, long> squarefree_split(long D) {
    if (D == 0)
        throw DivisionByZero("sqrt(0) does not define a field");
    long sign = D < 0 ? -1 : 1;
    unsigned long m = static_cast<unsigned long>(D < 0 ? -D : D);
    long s = 1, k = 1;
    for (unsigned long p = 2; p * p <= m; ++p) {
        while (m % (p * p) == 0) {
            m /= p * p;
            s *= static_cast<long>(p);
        }
        if (m % p == 0) {
            m /= p;
            k *= static_cast<long>(p);
        }
    }
    k *= static_cast<long>(m);
    return {sign * k, s};
}

/// Element a + b*sqrt(D) of a quadratic field (b != 0, D squarefree, D != 0, 1).
struct QuadExt {
    Rat a;
    Rat b;
    long D = -1;
};

class AlgNum {
  public:
    AlgNum() = default;
    AlgNum(long n) : a_(n) {}
    AlgNum(const Int &n) : a_(n) {}
    AlgNum(const Rat &r) : a_(r) {}
    AlgNum(const QuadExt &q) { *this = reduce(q.a, q.b, q.D); }

    /// a + b*sqrt(D) with D reduced to its squarefree kernel; rational when b == 0 or D is a square.
    static AlgNum reduce(const Rat &a, const Rat &b, long D) {
        auto [k, s] = squarefree_split(D);
        AlgNum r;
        r.a_ = a;
        if (b.is_zero())
            return r;
        Rat bs = b * Rat(s);
        if (k == 1) {
            r.a_ = a + bs;
            return r;
        }
        r.b_ = bs;
        r.d_ = k;
        return r;
    }

    static AlgNum sqrt_of(long D) { return reduce(Rat(0), Rat(1), D); }

    bool is_rational() const { return d_ == 0; }
    /// 0 for rationals, otherwise the squarefree D.
    long disc() const { return d_; }
    const Rat &a() const { return a_; }
    const Rat &b() const { return b_; }
    const Rat &as_rat() const {
        if (!is_rational())
            throw FieldMismatch("quadratic irrational used as a rational");
        return a_;
    }
    QuadExt as_quad() const { return {a_, b_, d_}; }

    bool is_zero() const { return d_ == 0 && a_.is_zero(); }
    bool is_one() const { return d_ == 0 && a_ == Rat(1); }

    AlgNum conj() const {
        AlgNum r = *this;
        r.b_ = -b_;
        return r;
    }
    /// a^2 - D b^2
    Rat norm() const { return a_ * a_ - b_ * b_ * Rat(d_); }
    Rat trace() const { return a_ + a_; }

    friend AlgNum operator+(const AlgNum &x, const AlgNum &y) {
        long d = common(x, y);
        return make(x.a_ + y.a_, x.b_ + y.b_, d);
    }
    friend AlgNum operator-(const AlgNum &x, const AlgNum &y) {
        long d = common(x, y);
        return make(x.a_ - y.a_, x.b_ - y.b_, d);
    }
    friend AlgNum operator*(const AlgNum &x, const AlgNum &y) {
        long d = common(x, y);
        if (d == 0)
            return make(x.a_ * y.a_, Rat(), 0);
        return make(x.a_ * y.a_ + x.b_ * y.b_ * Rat(d), x.a_ * y.b_ + x.b_ * y.a_, d);
    }
    AlgNum inverse() const {
        if (is_zero())
            throw DivisionByZero("inverse of zero");
        if (is_rational())
            return make(Rat(1) / a_, Rat(), 0);
        Rat n = norm();
        return make(a_ / n, -b_ / n, d_);
    }
    friend AlgNum operator/(const AlgNum &x, const AlgNum &y) { return x * y.inverse(); }
    AlgNum operator-() const { return make(-a_, -b_, d_); }
    AlgNum &operator+=(const AlgNum &o) { return *this = *this + o; }
    AlgNum &operator-=(const AlgNum &o) { return *this = *this - o; }
    AlgNum &operator*=(const AlgNum &o) { return *this = *this * o; }

    AlgNum pow(unsigned e) const {
        AlgNum result(1), base = *this;
        while (e) {
            if (e & 1)
                result *= base;
            e >>= 1;
            if (e)
                base *= base;
        }
        return result;
    }

    friend bool operator==(const AlgNum &x, const AlgNum &y) {
        return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

    std::size_t hash() const { return a_.hash() * 1000003u ^ (b_.hash() + static_cast<std::size_t>(d_)); }

    /// Parseable text: "p/q", "sqrt(D)", "a+b*sqrt(D)".
    std::string to_string() const {
        if (is_rational())
            return a_.to_string();
        std::string s;
        if (!a_.is_zero())
            s = a_.to_string();
        std::string root = "sqrt(" + std::to_string(d_) + ")";
        if (b_ == Rat(1))
            s += (s.empty() ? "" : "+") + root;
        else if (b_ == Rat(-1))
            s += "-" + root;
        else if (b_.sign() > 0)
            s += (s.empty() ? "" : "+") + b_.to_string() + "*" + root;
        else
            s += b_.to_string() + "*" + root;
        return s;
    }

  private:
    static long common(const AlgNum &x, const AlgNum &y) {
        if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_)
            throw FieldMismatch("Q(sqrt(" + std::to_string(x.d_) + ")) vs Q(sqrt(" + std::to_string(y.d_) + "))");
        return x.d_ != 0 ? x.d_ : y.d_;
    }
    static AlgNum make(Rat a, Rat b, long d) {
        AlgNum r;
        r.a_ = std::move(a);
        if (d != 0 && !b.is_zero()) {
            r.b_ = std::move(b);
            r.d_ = d;
        }
        return r;
    }

    Rat a_;
    Rat b_;
    long d_ = 0;
};

inline Rat rat_normalize(const Int &num, const Int &den) { return Rat::normalize(num, den); }

inline AlgNum quad_reduce(const Rat &a, const Rat &b, long D) {
    if (D == 0)
        throw DivisionByZero("D = 0");
    return AlgNum::reduce(a, b, D);
}

/// Primitive integer polynomial, coefficients low to high degree, positive leading coefficient.
struct IntPoly {
    std::vector<Int> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const Int &leading() const { return coeffs.back(); }
    friend bool operator==(const IntPoly &, const IntPoly &) = default;

    std::string to_string() const {
        std::string s;
        for (int k = degree(); k >= 0; --k) {
            const Int &c = coeffs[k];
            if (c == 0)
                continue;
            Int m = int_abs(c);
            if (!s.empty())
                s += c < 0 ? " - " : " + ";
            else if (c < 0)
                s += "-";
            if (m != 1 || k == 0)
                s += m.get_str();
            if (k >= 1)
                s += "x";
            if (k >= 2)
                s += "^" + std::to_string(k);
        }
        return s.empty() ? "0" : s;
    }
};

/// Minimal polynomial over Z: degree 1 for rationals, 2 for quadratic irrationals.
inline IntPoly min_poly(const AlgNum &alpha) {
    std::vector<Rat> q;
    if (alpha.is_rational())
        q = {-alpha.a(), Rat(1)};
    else
        q = {alpha.norm(), -alpha.trace(), Rat(1)};
    Int l = 1;
    for (const auto &c : q)
        l = int_lcm(l, c.den());
    IntPoly p;
    Int g = 0;
    for (const auto &c : q) {
        p.coeffs.push_back(c.num() * (l / c.den()));
        g = int_gcd(g, p.coeffs.back());
    }
    for (auto &c : p.coeffs)
        c /= g;
    return p;
}

/// Absolute logarithmic height via the Mahler measure of the minimal polynomial:
/// h = (1/deg) * (log a0 + sum log max(1, |alpha_i|)), conjugate moduli in closed form.
inline HeightValue abs_height_alg(const AlgNum &alpha) {
    if (alpha.is_rational()) {
        if (alpha.is_zero())
            return {0.0, 0.0, true};
        double h = alpha.as_rat().height();
        return {h, log_error(h), true};
    }
    const IntPoly mp = min_poly(alpha);
    double lead = log_abs(mp.leading());
    double mag = std::fabs(lead);
    double sum = lead;
    const Rat N = alpha.norm();
    const long D = alpha.disc();
    if (D < 0) {
        // Both conjugates have modulus sqrt(a^2 - D b^2).
        double l = 0.5 * N.log_abs();
        mag += std::fabs(l);
        if (l > 0)
            sum += 2 * l;
    } else {
        // Large conjugate |a| + |b| sqrt(D) without cancellation; small one is |N| / large.
        double lb = alpha.b().abs().log_abs() + 0.5 * std::log(static_cast<double>(D));
        double big;
        if (alpha.a().is_zero()) {
            big = lb;
        } else {
            double la = alpha.a().abs().log_abs();
            double hi = std::max(la, lb), lo = std::min(la, lb);
            big = hi + std::log1p(std::exp(lo - hi));
        }
        double small = N.log_abs() - big;
        mag += std::fabs(big) + std::fabs(small);
        if (big > 0)
            sum += big;
        if (small > 0)
            sum += small;
    }
    double h = std::max(0.0, sum / 2.0);
    return {h, log_error(mag), true};
}

} // namespace arithdyn

template <> struct std::hash<arithdyn::AlgNum> {
    std::size_t operator()(const arithdyn::AlgNum &a) const noexcept { return a.hash(); }
};
