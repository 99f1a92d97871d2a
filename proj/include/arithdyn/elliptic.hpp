/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Short Weierstrass curves y^2 = x^3 + a x + b with integer coefficients and
 * the exact chord-tangent group law over Q or a quadratic field.
 */

#include "exact_arith.hpp"

#include <optional>
#include <string>

namespace arithdyn {

class EllipticCurve {
  public:
    EllipticCurve() = default;
    EllipticCurve(Int a, Int b) : a_(std::move(a)), b_(std::move(b)) {
        if (discriminant() == 0)
            throw SingularCurve("y^2 = x^3 + " + a_.get_str() + "x + " + b_.get_str() + " has zero discriminant");
    }

    const Int &a() const { return a_; }
    const Int &b() const { return b_; }
    /// -16 (4a^3 + 27b^2)
    Int discriminant() const { return Int(-16) * (4 * a_ * a_ * a_ + 27 * b_ * b_); }

    /// Right-hand side x^3 + a x + b.
    AlgNum rhs(const AlgNum &x) const { return x * x * x + AlgNum(a_) * x + AlgNum(b_); }

    friend bool operator==(const EllipticCurve &, const EllipticCurve &) = default;

    std::string to_string() const { return "E: " + a_.get_str() + " " + b_.get_str(); }

  private:
    Int a_{0};
    Int b_{1};
};

class EllPoint {
  public:
    /// The identity O.
    EllPoint() = default;
    EllPoint(AlgNum x, AlgNum y) : xy_(std::in_place, std::move(x), std::move(y)) {}

    static EllPoint on_curve(const EllipticCurve &e, AlgNum x, AlgNum y) {
        EllPoint p(std::move(x), std::move(y));
        if (!p.lies_on(e))
            throw InvalidPoint(p.to_string() + " is not on " + e.to_string());
        return p;
    }

    bool is_identity() const { return !xy_.has_value(); }
    const AlgNum &x() const { return xy_->first; }
    const AlgNum &y() const { return xy_->second; }

    bool lies_on(const EllipticCurve &e) const { return is_identity() || y() * y() == e.rhs(x()); }

    bool is_rational() const { return is_identity() || (x().is_rational() && y().is_rational()); }
    bool is_integral() const {
        return is_identity() || (x().is_rational() && y().is_rational() && x().as_rat().is_integer() &&
                                 y().as_rat().is_integer());
    }

    EllPoint operator-() const { return is_identity() ? *this : EllPoint(x(), -y()); }

    friend bool operator==(const EllPoint &, const EllPoint &) = default;

    std::size_t hash() const { return is_identity() ? 0 : x().hash() * 31 + y().hash(); }

    std::string to_string() const {
        if (is_identity())
            return "O";
        return "(" + x().to_string() + "," + y().to_string() + ")";
    }

  private:
    std::optional<std::pair<AlgNum, AlgNum>> xy_;
};

inline EllPoint ell_add(const EllipticCurve &e, const EllPoint &p, const EllPoint &q) {
    if (p.is_identity())
        return q;
    if (q.is_identity())
        return p;
    AlgNum lambda;
    if (p.x() == q.x()) {
        if ((p.y() + q.y()).is_zero())
            return EllPoint();
        lambda = (AlgNum(3) * p.x() * p.x() + AlgNum(e.a())) / (AlgNum(2) * p.y());
    } else {
        lambda = (q.y() - p.y()) / (q.x() - p.x());
    }
    AlgNum x3 = lambda * lambda - p.x() - q.x();
    AlgNum y3 = lambda * (p.x() - x3) - p.y();
    return EllPoint(std::move(x3), std::move(y3));
}

inline EllPoint ell_neg(const EllPoint &p) { return -p; }

/// [n]P by double-and-add; negative n allowed.
inline EllPoint ell_mul(const EllipticCurve &e, const EllPoint &p, const Int &n) {
    if (n < 0)
        return ell_mul(e, -p, Int(-n));
    EllPoint result, base = p;
    Int k = n;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            result = ell_add(e, result, base);
        k >>= 1;
        if (k > 0)
            base = ell_add(e, base, base);
    }
    return result;
}

inline EllPoint ell_mul(const EllipticCurve &e, const EllPoint &p, long n) { return ell_mul(e, p, Int(n)); }

} // namespace arithdyn
