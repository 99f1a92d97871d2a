/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Text formats.
 *
 *   numbers   2, -3/4, sqrt(-3), i, (1+sqrt(5))/2, 2^-1
 *   maps      P1 -> P1 : [x^2 - y^2, x*y]
 *             P1xP1 : [x^2, y^2] ; [x^3, y^3]
 *   points    2:1      1:2;1:5      (1+sqrt(5))/2 : 1
 *   curves    E: a b   (y^2 = x^3 + a x + b)
 *   matrices  2,0;0,3  (row-major, rows split by ';')
 *
 * Errors carry 1-based line and column.
 */

#include "abelian.hpp"
#include "projective.hpp"

#include <cctype>
#include <charconv>
#include <functional>

namespace arithdyn {

namespace detail {

inline ParseError parse_error(std::string_view text, std::size_t pos, const std::string &msg) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

/// Recursive-descent arithmetic over a ring V. Identifiers resolve through `ident`.
template <class V> class ExprParser {
  public:
    struct Ops {
        std::function<V(const Rat &)> constant;
        std::function<std::optional<V>(const std::string &)> ident;
        std::function<std::optional<V>(const std::string &, const V &)> call; ///< e.g. sqrt(...)
        std::function<V(const V &, const V &)> divide;
        std::function<V(const V &, long)> power;
    };

    ExprParser(std::string_view text, std::size_t begin, std::size_t end, Ops ops)
        : text_(text), pos_(begin), end_(end), ops_(std::move(ops)) {}

    V parse_all() {
        V v = expr();
        skip();
        if (pos_ != end_)
            throw parse_error(text_, pos_, std::string("unexpected '") + text_[pos_] + "'");
        return v;
    }

  private:
    void skip() {
        while (pos_ < end_ && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < end_ && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw parse_error(text_, pos_, std::string("expected '") + c + "'");
    }

    V expr() {
        skip();
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        V acc = term();
        if (neg)
            acc = ops_.constant(Rat(0)) - acc;
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    V term() {
        V acc = factor();
        for (;;) {
            skip();
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                std::size_t at = pos_;
                V d = factor();
                try {
                    acc = ops_.divide(acc, d);
                } catch (const Error &e) {
                    throw parse_error(text_, at, e.what());
                }
            } else if (pos_ < end_ && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(')) {
                acc = acc * factor(); // implicit product: 2x, 3(x+y)
            } else {
                return acc;
            }
        }
    }

    V factor() {
        V base = atom();
        if (accept('^')) {
            skip();
            std::size_t at = pos_;
            bool neg = accept('-');
            skip();
            std::size_t start = pos_;
            while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                throw parse_error(text_, at, "exponent must be an integer literal");
            long e = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, e);
            if (ec != std::errc() || e > 4096)
                throw parse_error(text_, at, "exponent too large");
            try {
                base = ops_.power(base, neg ? -e : e);
            } catch (const Error &err) {
                throw parse_error(text_, at, err.what());
            }
        }
        return base;
    }

    V atom() {
        skip();
        if (pos_ >= end_)
            throw parse_error(text_, pos_, "unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            V v = expr();
            expect(')');
            return v;
        }
        if (c == '-') {
            ++pos_;
            return ops_.constant(Rat(0)) - factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            Rat r(Int(std::string(text_.substr(start, pos_ - start))));
            if (pos_ < end_ && text_[pos_] == '.') {
                ++pos_;
                std::size_t fs = pos_;
                while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                std::string frac(text_.substr(fs, pos_ - fs));
                if (!frac.empty()) {
                    Int ten = 1;
                    for (std::size_t k = 0; k < frac.size(); ++k)
                        ten *= 10;
                    r = r + Rat::normalize(Int(frac), ten);
                }
            }
            return ops_.constant(r);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            skip();
            if (pos_ < end_ && text_[pos_] == '(' && ops_.call) {
                ++pos_;
                V arg = expr();
                expect(')');
                std::optional<V> r;
                try {
                    r = ops_.call(name, arg);
                } catch (const Error &e) {
                    throw parse_error(text_, start, e.what());
                }
                if (!r)
                    throw parse_error(text_, start, "unknown function '" + name + "'");
                return *r;
            }
            if (auto v = ops_.ident(name))
                return *v;
            throw parse_error(text_, start, "unknown identifier '" + name + "'");
        }
        throw parse_error(text_, pos_, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_, end_;
    Ops ops_;
};

inline typename ExprParser<AlgNum>::Ops algnum_ops() {
    typename ExprParser<AlgNum>::Ops ops;
    ops.constant = [](const Rat &r) { return AlgNum(r); };
    ops.ident = [](const std::string &n) -> std::optional<AlgNum> {
        if (n == "i" || n == "I")
            return AlgNum::sqrt_of(-1);
        return std::nullopt;
    };
    ops.call = [](const std::string &n, const AlgNum &a) -> std::optional<AlgNum> {
        if (n != "sqrt")
            return std::nullopt;
        if (!a.is_rational() || !a.as_rat().is_integer())
            throw Unsupported("sqrt takes an integer argument");
        const Int &d = a.as_rat().num();
        if (d == 0)
            return AlgNum(0);
        if (!d.fits_slong_p())
            throw Unsupported("sqrt argument too large");
        return AlgNum::sqrt_of(d.get_si());
    };
    ops.divide = [](const AlgNum &a, const AlgNum &b) { return a / b; };
    ops.power = [](const AlgNum &a, long e) {
        AlgNum p = a.pow(static_cast<unsigned>(e < 0 ? -e : e));
        return e < 0 ? p.inverse() : p;
    };
    return ops;
}

inline typename ExprParser<QPoly>::Ops qpoly_ops(const std::vector<std::string> &names) {
    const std::size_t nv = names.size();
    typename ExprParser<QPoly>::Ops ops;
    ops.constant = [nv](const Rat &r) { return QPoly::constant(nv, r); };
    ops.ident = [names, nv](const std::string &n) -> std::optional<QPoly> {
        for (std::size_t i = 0; i < nv; ++i)
            if (names[i] == n)
                return QPoly::variable(nv, i);
        return std::nullopt;
    };
    ops.divide = [nv](const QPoly &a, const QPoly &b) {
        if (b.num_terms() != 1 || b.total_degree() != 0)
            throw InvalidMap("division is only allowed by nonzero constants");
        return a.scaled(Rat(1) / b.terms().begin()->second);
    };
    ops.power = [](const QPoly &a, long e) {
        if (e < 0)
            throw InvalidMap("negative exponent in a polynomial");
        return a.pow(static_cast<unsigned>(e));
    };
    return ops;
}

inline std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

/// Split [begin, end) at top-level occurrences of sep (outside brackets).
inline std::vector<std::pair<std::size_t, std::size_t>> split_top(std::string_view text, std::size_t begin,
                                                                  std::size_t end, char sep) {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    int depth = 0;
    std::size_t start = begin;
    for (std::size_t i = begin; i < end; ++i) {
        char c = text[i];
        if (c == '(' || c == '[')
            ++depth;
        else if (c == ')' || c == ']')
            --depth;
        else if (c == sep && depth == 0) {
            parts.emplace_back(start, i);
            start = i + 1;
        }
    }
    parts.emplace_back(start, end);
    return parts;
}

inline bool blank(std::string_view text, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i])))
            return false;
    return true;
}

} // namespace detail

inline AlgNum parse_algnum(std::string_view text) {
    return detail::ExprParser<AlgNum>(text, 0, text.size(), detail::algnum_ops()).parse_all();
}

/// "P1", "P2", "P1xP1", "P1 x P2".
inline Ambient parse_ambient(std::string_view text, std::size_t offset = 0, std::string_view whole = {}) {
    if (whole.empty())
        whole = text;
    Ambient a;
    std::size_t i = 0;
    auto fail = [&](const std::string &m) { return detail::parse_error(whole, offset + i, m); };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    for (;;) {
        skip();
        if (i >= text.size() || (text[i] != 'P' && text[i] != 'p'))
            throw fail("expected a projective space like P1");
        ++i;
        std::size_t s = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            ++i;
        if (s == i)
            throw fail("expected a dimension after P");
        int n = 0;
        std::from_chars(text.data() + s, text.data() + i, n);
        if (n < 1)
            throw fail("dimension must be at least 1");
        a.dims.push_back(n);
        skip();
        if (i >= text.size())
            return a;
        if (text[i] != 'x' && text[i] != 'X' && text[i] != '*')
            throw fail(std::string("unexpected '") + text[i] + "' in ambient space");
        ++i;
    }
}

struct ParsedMapOptions {
    std::optional<int> polarization;
    std::optional<IntMatrix> ns_matrix;
};

/// Map notation; rational coefficients are cleared blockwise.
inline PolyEndo parse_map(std::string_view text, const ParsedMapOptions &opt = {}) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw detail::parse_error(text, text.size(), "expected ':' between the space and the polynomials");
    std::string_view head = text.substr(0, colon);
    Ambient src;
    const std::size_t arrow = head.find("->");
    if (arrow != std::string_view::npos) {
        src = parse_ambient(head.substr(0, arrow), 0, text);
        Ambient dst = parse_ambient(head.substr(arrow + 2), arrow + 2, text);
        if (!(src == dst))
            throw detail::parse_error(text, arrow, "only self-maps are supported");
    } else {
        src = parse_ambient(head, 0, text);
    }
    auto blocks_txt = detail::split_top(text, colon + 1, text.size(), ';');
    if (blocks_txt.size() != src.num_factors())
        throw detail::parse_error(text, colon + 1,
                                  "expected " + std::to_string(src.num_factors()) + " bracketed blocks");
    std::vector<std::vector<Poly>> blocks;
    for (std::size_t bi = 0; bi < blocks_txt.size(); ++bi) {
        auto [b, e] = blocks_txt[bi];
        while (b < e && std::isspace(static_cast<unsigned char>(text[b])))
            ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])))
            --e;
        if (b >= e || text[b] != '[' || text[e - 1] != ']')
            throw detail::parse_error(text, b, "expected a block like [f0, f1]");
        auto names = block_variables(src.dims[bi]);
        std::vector<QPoly> qs;
        for (auto [pb, pe] : detail::split_top(text, b + 1, e - 1, ',')) {
            if (detail::blank(text, pb, pe))
                throw detail::parse_error(text, pb, "empty polynomial");
            qs.push_back(detail::ExprParser<QPoly>(text, pb, pe, detail::qpoly_ops(names)).parse_all());
        }
        blocks.push_back(clear_denominators(qs));
    }
    return PolyEndo::make(src, std::move(blocks), opt.polarization, opt.ns_matrix);
}

/// Coordinates split by ':' within a factor and ';' between factors.
inline ProjPoint parse_point(std::string_view text, const Ambient &ambient) {
    std::vector<Block> raw;
    for (auto [b, e] : detail::split_top(text, 0, text.size(), ';')) {
        Block blk;
        for (auto [cb, ce] : detail::split_top(text, b, e, ':')) {
            if (detail::blank(text, cb, ce))
                throw detail::parse_error(text, cb, "empty coordinate");
            blk.push_back(detail::ExprParser<AlgNum>(text, cb, ce, detail::algnum_ops()).parse_all());
        }
        raw.push_back(std::move(blk));
    }
    if (raw.size() != ambient.num_factors())
        throw detail::parse_error(text, 0, "point has " + std::to_string(raw.size()) + " factors, space " +
                                               ambient.to_string() + " has " +
                                               std::to_string(ambient.num_factors()));
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i].size() != static_cast<std::size_t>(ambient.dims[i]) + 1)
            throw detail::parse_error(text, 0, "factor " + std::to_string(i) + " needs " +
                                                   std::to_string(ambient.dims[i] + 1) + " coordinates");
    return ProjPoint::canonicalize(ambient, std::move(raw));
}

/// "log100", "log(100)", "log 100", or a decimal.
inline double parse_height_bound(std::string_view text) {
    std::string_view t = detail::trim_view(text);
    if (t.substr(0, 3) == "log") {
        std::string_view arg = detail::trim_view(t.substr(3));
        if (!arg.empty() && arg.front() == '(' && arg.back() == ')')
            arg = detail::trim_view(arg.substr(1, arg.size() - 2));
        AlgNum v = parse_algnum(arg);
        if (!v.is_rational() || v.as_rat().sign() <= 0)
            throw detail::parse_error(text, 3, "log needs a positive rational argument");
        return v.as_rat().log_abs();
    }
    AlgNum v = parse_algnum(t);
    if (!v.is_rational())
        throw detail::parse_error(text, 0, "height bound must be real");
    return v.as_rat().to_double();
}

/// Row-major integer matrix "a,b;c,d".
inline IntMatrix parse_matrix(std::string_view text) {
    IntMatrix m;
    for (auto [rb, re] : detail::split_top(text, 0, text.size(), ';')) {
        std::vector<Int> row;
        for (auto [b, e] : detail::split_top(text, rb, re, ',')) {
            AlgNum v = detail::ExprParser<AlgNum>(text, b, e, detail::algnum_ops()).parse_all();
            if (!v.is_rational() || !v.as_rat().is_integer())
                throw detail::parse_error(text, b, "matrix entries must be integers");
            row.push_back(v.as_rat().num());
        }
        m.push_back(std::move(row));
    }
    for (const auto &row : m)
        if (row.size() != m.size())
            throw detail::parse_error(text, 0, "matrix must be square");
    return m;
}

/// "E: a b", "a b" or "a,b".
inline EllipticCurve parse_curve(std::string_view text) {
    std::string s(text);
    std::size_t at = 0;
    if (auto c = s.find(':'); c != std::string::npos)
        at = c + 1;
    for (auto &ch : s)
        if (ch == ',')
            ch = ' ';
    std::vector<std::pair<std::size_t, std::size_t>> words;
    for (std::size_t i = at; i < s.size();) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        std::size_t b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (b < i)
            words.emplace_back(b, i);
    }
    if (words.size() != 2)
        throw detail::parse_error(text, at, "curve needs two integer coefficients a b");
    std::vector<Int> ab;
    for (auto [b, e] : words) {
        AlgNum v = detail::ExprParser<AlgNum>(text, b, e, detail::algnum_ops()).parse_all();
        if (!v.is_rational() || !v.as_rat().is_integer())
            throw detail::parse_error(text, b, "curve coefficients must be integers");
        ab.push_back(v.as_rat().num());
    }
    return EllipticCurve(ab[0], ab[1]);
}

/// "O", "(x,y)" or "x,y"; must lie on the curve.
inline EllPoint parse_ell_point(std::string_view text, const EllipticCurve &e) {
    std::string_view t = detail::trim_view(text);
    std::size_t off = static_cast<std::size_t>(t.data() - text.data());
    if (t == "O" || t == "0" || t == "inf")
        return EllPoint();
    std::size_t b = off, end = off + t.size();
    if (!t.empty() && t.front() == '(' && t.back() == ')') {
        ++b;
        --end;
    }
    auto parts = detail::split_top(text, b, end, ',');
    if (parts.size() != 2)
        throw detail::parse_error(text, b, "expected a point (x,y) or O");
    AlgNum x = detail::ExprParser<AlgNum>(text, parts[0].first, parts[0].second, detail::algnum_ops()).parse_all();
    AlgNum y = detail::ExprParser<AlgNum>(text, parts[1].first, parts[1].second, detail::algnum_ops()).parse_all();
    EllPoint p{x, y};
    if (!p.lies_on(e))
        throw InvalidPoint(p.to_string() + " is not on " + e.to_string());
    return p;
}

/// ';'-separated points.
inline std::vector<EllPoint> parse_ell_tuple(std::string_view text, const EllipticCurve &e) {
    std::vector<EllPoint> out;
    for (auto [b, en] : detail::split_top(text, 0, text.size(), ';'))
        out.push_back(parse_ell_point(text.substr(b, en - b), e));
    return out;
}

/// One-parameter family of P^1 maps: f(x) in x and parameter c, homogenized per value.
struct MapFamily {
    std::string expr;
    std::string param = "c";

    PolyEndo at(const Rat &c) const {
        const std::vector<std::string> names{"x", param};
        std::string_view t = expr;
        QPoly f = detail::ExprParser<QPoly>(t, 0, t.size(), detail::qpoly_ops(names)).parse_all();
        // Substitute c, then homogenize to (y^r f(x/y) : y^r).
        QPoly xonly(2);
        for (const auto &[m, coef] : f.terms()) {
            Rat v = coef;
            for (int k = 0; k < m[1]; ++k)
                v = v * c;
            xonly.add_term({m[0], 0}, v);
        }
        int r = xonly.total_degree();
        if (r < 1)
            throw InvalidMap("family member is constant");
        QPoly num(2), den(2);
        for (const auto &[m, coef] : xonly.terms())
            num.add_term({m[0], r - m[0]}, coef);
        den.add_term({0, r}, Rat(1));
        std::vector<QPoly> qs{num, den};
        return PolyEndo::make(Ambient::projective(1), {clear_denominators(qs)});
    }
};

/// "a..b" (integers), "frac:N" (p/q with |p|, |q| <= N), or a comma list of rationals.
inline std::vector<Rat> parse_parameter_values(std::string_view text) {
    std::string_view t = detail::trim_view(text);
    std::vector<Rat> out;
    if (t.substr(0, 5) == "frac:") {
        AlgNum n = parse_algnum(t.substr(5));
        if (!n.is_rational() || !n.as_rat().is_integer() || n.as_rat().sign() <= 0)
            throw detail::parse_error(text, 5, "frac:N needs a positive integer");
        long m = n.as_rat().num().get_si();
        std::vector<Rat> all;
        for (long q = 1; q <= m; ++q)
            for (long p = -m; p <= m; ++p)
                all.push_back(Rat::normalize(p, q));
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }
    if (auto dots = t.find(".."); dots != std::string_view::npos) {
        AlgNum lo = parse_algnum(t.substr(0, dots)), hi = parse_algnum(t.substr(dots + 2));
        if (!lo.is_rational() || !hi.is_rational() || !lo.as_rat().is_integer() || !hi.as_rat().is_integer())
            throw detail::parse_error(text, 0, "range endpoints must be integers");
        for (Int v = lo.as_rat().num(); v <= hi.as_rat().num(); ++v)
            out.emplace_back(v);
        return out;
    }
    for (auto [b, e] : detail::split_top(text, 0, text.size(), ',')) {
        AlgNum v = detail::ExprParser<AlgNum>(text, b, e, detail::algnum_ops()).parse_all();
        if (!v.is_rational())
            throw detail::parse_error(text, b, "parameters must be rational");
        out.push_back(v.as_rat());
    }
    return out;
}

} // namespace arithdyn
