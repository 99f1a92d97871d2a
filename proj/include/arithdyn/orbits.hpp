/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

/*
 * Exact orbits, certified preperiodicity and bounded-height searches.
 *
 * For a polarized map with rigorous lower constant C-, every point satisfies
 * hhat(P) >= h(P) - C-/(r-1). Two consequences drive everything here:
 *   - a preperiodic point (hhat = 0) has h(P) <= C-/(r-1), so a search of the
 *     height box up to that bound is complete;
 *   - once an orbit point has h > C-/(r-1) the start point has hhat > 0, so it
 *     is not preperiodic. Orbits therefore either repeat or provably escape.
 */

#include "heights.hpp"
#include "parallel.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace arithdyn {

enum class OrbitStatus { Cycle, Escaped, Budget };

inline const char *to_string(OrbitStatus s) {
    switch (s) {
    case OrbitStatus::Cycle:
        return "cycle";
    case OrbitStatus::Escaped:
        return "escaped";
    default:
        return "budget";
    }
}

struct OrbitRecord {
    ProjPoint start;
    std::size_t tail_length = 0;
    std::optional<std::size_t> cycle_length;
    std::vector<ProjPoint> points;         ///< includes the repeated point when status == Cycle
    std::vector<HeightValue> height_trace; ///< h of each visited point
    OrbitStatus status = OrbitStatus::Budget;
};

struct OrbitOptions {
    std::size_t max_steps = 10000;
    double height_cutoff = INFINITY;
    std::size_t max_bits = std::size_t{1} << 20;
};

inline OrbitRecord orbit(const PolyEndo &f, const ProjPoint &p, const OrbitOptions &opt = {}) {
    OrbitRecord rec;
    rec.start = p;
    std::unordered_map<ProjPoint, std::size_t> index;
    ProjPoint q = p;
    for (std::size_t step = 0;; ++step) {
        auto [it, fresh] = index.try_emplace(q, rec.points.size());
        rec.points.push_back(q);
        rec.height_trace.push_back(point_height(q));
        if (!fresh) {
            rec.status = OrbitStatus::Cycle;
            rec.tail_length = it->second;
            rec.cycle_length = rec.points.size() - 1 - it->second;
            return rec;
        }
        const HeightValue &h = rec.height_trace.back();
        if (h.value - h.error > opt.height_cutoff) {
            rec.status = OrbitStatus::Escaped;
            return rec;
        }
        if (step >= opt.max_steps || q.max_bits() > opt.max_bits) {
            rec.status = OrbitStatus::Budget;
            return rec;
        }
        q = evaluate(f, q);
    }
}

// -------------------------------------------------------- certification

enum class Certainty { Preperiodic, NotPreperiodic, Unknown };

inline const char *to_string(Certainty c) {
    switch (c) {
    case Certainty::Preperiodic:
        return "preperiodic";
    case Certainty::NotPreperiodic:
        return "not-preperiodic";
    default:
        return "unknown";
    }
}

struct PreperiodicityCertificate {
    Certainty verdict = Certainty::Unknown;
    OrbitRecord orbit;
    /// Rigorous lower bound on hhat(P) when verdict == NotPreperiodic (else 0).
    double hhat_lower_bound = 0.0;
};

/// Single-factor map given by block i of a product map.
inline PolyEndo factor_map(const PolyEndo &f, std::size_t i) {
    return PolyEndo::make(Ambient::projective(f.ambient().dims[i]), {f.block(i)});
}

inline ProjPoint factor_point(const ProjPoint &p, std::size_t i) {
    return ProjPoint::canonicalize(Ambient::projective(p.ambient().dims[i]), {p.block(i)});
}

/// Height bound containing every preperiodic point: C- / (r - 1).
inline double preperiodic_height_bound(const PolyEndo &f, const TransformBound &tb) {
    if (!tb.rigorous)
        throw Unsupported("no rigorous lower height constant for " + f.ambient().to_string());
    return *tb.lower / (f.polarization_degree() - 1);
}

namespace detail {

inline PreperiodicityCertificate certify_polarized(const PolyEndo &f, const ProjPoint &p, const TransformBound &tb,
                                                  const OrbitOptions &base) {
    PreperiodicityCertificate cert;
    OrbitOptions opt = base;
    const bool rigorous = tb.rigorous;
    if (rigorous)
        opt.height_cutoff = std::min(opt.height_cutoff, preperiodic_height_bound(f, tb));
    cert.orbit = orbit(f, p, opt);
    switch (cert.orbit.status) {
    case OrbitStatus::Cycle:
        cert.verdict = Certainty::Preperiodic;
        break;
    case OrbitStatus::Escaped: {
        if (!rigorous) {
            cert.verdict = Certainty::Unknown;
            break;
        }
        const double r = f.polarization_degree();
        const HeightValue &h = cert.orbit.height_trace.back();
        const double n = static_cast<double>(cert.orbit.points.size() - 1);
        double excess = h.value - h.error - preperiodic_height_bound(f, tb);
        if (excess > 0) {
            cert.verdict = Certainty::NotPreperiodic;
            cert.hhat_lower_bound = excess / std::pow(r, n);
        } else {
            cert.verdict = Certainty::Unknown;
        }
        break;
    }
    default:
        cert.verdict = Certainty::Unknown;
    }
    return cert;
}

} // namespace detail

/// Certified preperiodicity. Products are decided factor by factor.
inline PreperiodicityCertificate is_preperiodic(const PolyEndo &f, const ProjPoint &p,
                                                const OrbitOptions &opt = {}) {
    if (f.ambient().is_single() || f.is_polarized()) {
        if (!f.is_polarized())
            throw Unsupported("preperiodicity certification needs a map of degree >= 2");
        TransformBound tb = height_difference_bound(f);
        return detail::certify_polarized(f, p, tb, opt);
    }
    PreperiodicityCertificate cert;
    bool all_prep = true;
    std::size_t steps = 0;
    double lower = 0.0;
    std::size_t tail = 0, cycle = 1;
    for (std::size_t i = 0; i < f.ambient().num_factors(); ++i) {
        PolyEndo fi = factor_map(f, i);
        if (fi.degree() < 2)
            throw Unsupported("factor " + std::to_string(i) + " has degree 1; preperiodicity is not certifiable");
        auto c = is_preperiodic(fi, factor_point(p, i), opt);
        if (c.verdict == Certainty::NotPreperiodic) {
            cert.verdict = Certainty::NotPreperiodic;
            lower = std::max(lower, c.hhat_lower_bound);
        } else if (c.verdict == Certainty::Unknown && cert.verdict != Certainty::NotPreperiodic) {
            cert.verdict = Certainty::Unknown;
        }
        if (c.verdict != Certainty::Preperiodic)
            all_prep = false;
        else {
            tail = std::max(tail, c.orbit.tail_length);
            cycle = std::lcm(cycle, *c.orbit.cycle_length);
        }
        steps = std::max(steps, c.orbit.points.size());
    }
    OrbitOptions whole = opt;
    whole.height_cutoff = INFINITY;
    whole.max_steps = all_prep ? tail + cycle : steps;
    cert.orbit = orbit(f, p, whole);
    if (all_prep) {
        cert.verdict = Certainty::Preperiodic;
        if (cert.orbit.status != OrbitStatus::Cycle)
            throw InvariantViolation("factor cycles did not combine into a product cycle");
    }
    cert.hhat_lower_bound = lower;
    return cert;
}

// ---------------------------------------------------------- enumeration

namespace detail {

/// exp(B) as an integer box bound, with a little slack for B = log N inputs.
inline long box_bound(double b, double slack = 1e-9) {
    if (b < 0)
        return 0;
    double m = std::exp(b) * (1 + slack);
    if (m > 1e12)
        throw Unsupported("height box too large to enumerate");
    return static_cast<long>(std::floor(m));
}

/// Primitive integer vectors of length n+1, max |c| <= m, leftmost nonzero positive.
inline void for_each_primitive(int n, long m, const std::function<void(const std::vector<long> &)> &fn) {
    std::vector<long> v(static_cast<std::size_t>(n) + 1, -m);
    for (;;) {
        long g = 0;
        std::size_t lead = v.size();
        for (std::size_t i = 0; i < v.size(); ++i) {
            g = std::gcd(g, std::labs(v[i]));
            if (lead == v.size() && v[i] != 0)
                lead = i;
        }
        if (g == 1 && v[lead] > 0)
            fn(v);
        std::size_t k = 0;
        while (k < v.size() && v[k] == m)
            v[k++] = -m;
        if (k == v.size())
            return;
        ++v[k];
    }
}

} // namespace detail

/// Points of P^n with field degree <= d and height <= B (d = 2 on P^1 only).
inline std::vector<ProjPoint> enumerate_factor(int n, int d, double b) {
    const Ambient amb = Ambient::projective(n);
    std::vector<ProjPoint> out;
    const double lim = b + 1e-12;
    detail::for_each_primitive(n, detail::box_bound(b), [&](const std::vector<long> &v) {
        ProjPoint p = ProjPoint::from_ints(amb, {v});
        if (point_height(p).value <= lim)
            out.push_back(std::move(p));
    });
    if (d == 2) {
        if (n != 1)
            throw Unsupported("quadratic points are enumerated on P^1 only");
        // Irreducible a x^2 + b x + c, a > 0, Mahler measure <= e^{2B}:
        // a <= M, |c| <= M, |b| <= 2M.
        const long m = detail::box_bound(2 * b);
        for (long a = 1; a <= m; ++a)
            for (long c = -m; c <= m; ++c) {
                if (c == 0)
                    continue;
                for (long bb = -2 * m; bb <= 2 * m; ++bb) {
                    if (std::gcd(std::gcd(a, std::labs(bb)), std::labs(c)) != 1)
                        continue;
                    long disc = bb * bb - 4 * a * c;
                    long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(std::labs(disc)))));
                    if (disc >= 0 && s * s == disc)
                        continue; // reducible
                    for (int sign : {1, -1}) {
                        AlgNum root = quad_reduce(Rat::normalize(-bb, 2 * a), Rat::normalize(sign, 2 * a), disc);
                        if (abs_height_alg(root).value > lim)
                            break; // conjugates share the height
                        out.push_back(ProjPoint::canonicalize(amb, {{root, AlgNum(1)}}));
                    }
                }
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Northcott enumeration: all points of height <= B (sum of factor heights) and degree <= d.
inline std::vector<ProjPoint> enumerate_points(const Ambient &ambient, int d, double b) {
    ambient.validate();
    if (d != 1 && d != 2)
        throw Unsupported("field degree d must be 1 or 2");
    if (d == 2 && !(ambient.is_single() && ambient.dims[0] == 1))
        throw Unsupported("d = 2 enumeration is implemented on P^1 only");
    std::vector<std::vector<std::pair<ProjPoint, double>>> factors;
    for (int n : ambient.dims) {
        std::vector<std::pair<ProjPoint, double>> pts;
        for (auto &p : enumerate_factor(n, d, b))
            pts.emplace_back(p, point_height(p).value);
        factors.push_back(std::move(pts));
    }
    std::vector<ProjPoint> out;
    std::vector<Block> blocks(ambient.num_factors());
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double used) {
        if (i == factors.size()) {
            out.push_back(ProjPoint::canonicalize(ambient, blocks));
            return;
        }
        for (const auto &[p, h] : factors[i])
            if (used + h <= b + 1e-12) {
                blocks[i] = p.block(0);
                rec(i + 1, used + h);
            }
    };
    rec(0, 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

// --------------------------------------------------------------- search

struct FoundPoint {
    ProjPoint point;
    OrbitRecord orbit;
    HeightValue height;
    HeightValue hhat; ///< exactly 0 for certified preperiodic points
};

struct SearchReport {
    std::string map;
    int d = 1;
    double height_bound = 0.0;       ///< requested B
    double containment_bound = 0.0;  ///< every preperiodic point has h <= this
    double searched_bound = 0.0;     ///< min(B, containment bound)
    bool complete = false;           ///< B >= containment bound
    std::vector<long> fields;        ///< 0 = Q, else D of Q(sqrt D)
    std::vector<FoundPoint> found;
    std::map<long, std::size_t> counts_per_field;
    std::size_t candidates = 0;
    std::size_t unknown = 0;         ///< candidates left undecided (must be 0 for a certified report)
    double wall_ms = 0.0;            ///< not part of serialized output
};

struct SearchOptions {
    unsigned workers = 1;
    OrbitOptions orbit;
};

/// Preperiodic points of degree <= d and height <= B; complete when B covers the containment bound.
inline SearchReport zf_d_search(const PolyEndo &f, int d, double b, const SearchOptions &opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!f.ambient().is_single() || f.ambient().dims[0] != 1 || !f.is_polarized())
        throw Unsupported("zf_d_search needs a polarized map of P^1");
    TransformBound tb = height_difference_bound(f);
    SearchReport rep;
    rep.map = f.to_string();
    rep.d = d;
    rep.height_bound = b;
    rep.containment_bound = preperiodic_height_bound(f, tb);
    rep.searched_bound = std::min(b, rep.containment_bound);
    rep.complete = b >= rep.containment_bound;
    auto candidates = enumerate_points(f.ambient(), d, rep.searched_bound);
    rep.candidates = candidates.size();
    auto certs = parallel_map(
        candidates, [&](const ProjPoint &p) { return detail::certify_polarized(f, p, tb, opt.orbit); }, opt.workers);
    std::map<long, bool> field_seen;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto &c = certs[i];
        if (c.verdict == Certainty::Unknown)
            ++rep.unknown;
        if (c.verdict != Certainty::Preperiodic)
            continue;
        // Re-check: the exhibited cycle must close exactly.
        const auto &o = c.orbit;
        if (o.points[o.tail_length + *o.cycle_length] != o.points[o.tail_length] ||
            evaluate(f, o.points[o.points.size() - 2]) != o.points.back())
            throw InvariantViolation("cycle re-check failed at " + candidates[i].to_string());
        FoundPoint fp{candidates[i], c.orbit, point_height(candidates[i]), HeightValue{0.0, 0.0, true}};
        ++rep.counts_per_field[candidates[i].field()];
        field_seen[candidates[i].field()] = true;
        rep.found.push_back(std::move(fp));
    }
    for (const auto &[fld, seen] : field_seen)
        rep.fields.push_back(fld);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ------------------------------------------------------ family experiment

struct FamilyMember {
    std::string label; ///< e.g. the parameter value
    PolyEndo map;
};

struct FamilyEntry {
    std::string label;
    std::string map;
    std::optional<std::size_t> count; ///< absent when skipped
    std::string diagnostic;
    SearchReport report;
};

struct FamilyReport {
    std::vector<FamilyEntry> entries;
    std::size_t max_count = 0;
    std::vector<std::string> argmax;
    std::map<std::size_t, std::size_t> histogram; ///< count -> number of fibers
};

inline FamilyReport family_ubc_experiment(const std::vector<FamilyMember> &family, int d, double b,
                                          const SearchOptions &opt = {}) {
    SearchOptions inner = opt;
    inner.workers = 1;
    auto entries = parallel_map(
        family,
        [&](const FamilyMember &m) {
            FamilyEntry e;
            e.label = m.label;
            e.map = m.map.to_string();
            MorphismStatus st = morphism_check(m.map);
            if (st != MorphismStatus::Morphism) {
                e.diagnostic = std::string("skipped: ") + to_string(st);
                return e;
            }
            if (!m.map.is_polarized()) {
                e.diagnostic = "skipped: degree < 2";
                return e;
            }
            e.report = zf_d_search(m.map, d, b, inner);
            e.count = e.report.found.size();
            return e;
        },
        opt.workers);
    FamilyReport rep;
    for (auto &e : entries) {
        if (e.count) {
            ++rep.histogram[*e.count];
            if (*e.count > rep.max_count) {
                rep.max_count = *e.count;
                rep.argmax.clear();
            }
            if (*e.count == rep.max_count)
                rep.argmax.push_back(e.label);
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

} // namespace arithdyn
