/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

// CSV and text reports. Nothing here reads the clock, so equal inputs give equal bytes.

#include "abelian.hpp"
#include "orbits.hpp"
#include "parse.hpp"

#include <cstdio>
#include <sstream>

namespace arithdyn {

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ------------------------------------------------------------------- CSV

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string csv_row(const std::vector<std::string> &cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i)
        s += (i ? "," : "") + csv_field(cells[i]);
    return s + "\r\n";
}

/// RFC 4180 reader; accepts LF or CRLF line ends.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                rows.push_back(std::move(row));
            }
            row.clear();
            cell.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (quoted)
        throw ParseError("unterminated quoted CSV field");
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

// --------------------------------------------------------- point reports

inline const std::vector<std::string> kPointColumns{"map",  "field",    "min_poly", "coordinates", "h",      "h_err",
                                                    "hhat", "hhat_err", "tail",     "cycle",       "verdict"};

inline std::string field_name(long d) { return d == 0 ? "Q" : "Q(sqrt(" + std::to_string(d) + "))"; }

/// Minimal polynomial of the affine coordinate x/y on P^1, "inf" at (1:0), "-" elsewhere.
inline std::string affine_min_poly(const ProjPoint &p) {
    if (!p.ambient().is_single() || p.ambient().dims[0] != 1)
        return "-";
    const auto &b = p.block(0);
    if (b[1].is_zero())
        return "inf";
    return min_poly(b[0] / b[1]).to_string();
}

inline std::vector<std::string> point_row(const std::string &map, const FoundPoint &fp) {
    return {map,
            field_name(fp.point.field()),
            affine_min_poly(fp.point),
            fp.point.to_string(),
            fmt_real(fp.height.value),
            fmt_real(fp.height.error),
            fmt_real(fp.hhat.value),
            fmt_real(fp.hhat.error),
            std::to_string(fp.orbit.tail_length),
            fp.orbit.cycle_length ? std::to_string(*fp.orbit.cycle_length) : "",
            "preperiodic"};
}

inline std::string search_csv(const SearchReport &r) {
    std::string s = csv_row(kPointColumns);
    for (const auto &fp : r.found)
        s += csv_row(point_row(r.map, fp));
    return s;
}

inline std::string search_summary(const SearchReport &r) {
    std::ostringstream o;
    o << "map: " << r.map << "\n";
    o << "d: " << r.d << "\n";
    o << "height bound B: " << fmt_real(r.height_bound) << "\n";
    o << "preperiodic points satisfy h <= " << fmt_real(r.containment_bound) << "\n";
    o << "searched h <= " << fmt_real(r.searched_bound) << (r.complete ? " (complete)" : " (partial)") << "\n";
    o << "candidates: " << r.candidates << "\n";
    o << "undecided: " << r.unknown << "\n";
    o << "preperiodic points: " << r.found.size() << "\n";
    for (const auto &[f, n] : r.counts_per_field)
        o << "  " << field_name(f) << ": " << n << "\n";
    return o.str();
}

inline std::string family_csv(const FamilyReport &r) {
    std::string s = csv_row(kPointColumns);
    for (const auto &e : r.entries)
        for (const auto &fp : e.report.found)
            s += csv_row(point_row(e.map, fp));
    return s;
}

inline std::string family_summary(const FamilyReport &r) {
    std::ostringstream o;
    o << "fibers: " << r.entries.size() << "\n";
    for (const auto &e : r.entries) {
        o << "  " << e.label << "  " << e.map << "  ";
        if (e.count)
            o << "count " << *e.count << (e.report.complete ? "" : " (partial box)");
        else
            o << e.diagnostic;
        o << "\n";
    }
    o << "max count: " << r.max_count << "\n";
    o << "attained at:";
    for (const auto &a : r.argmax)
        o << " " << a;
    o << "\nhistogram:";
    for (const auto &[c, n] : r.histogram)
        o << " " << c << ":" << n;
    o << "\n";
    return o.str();
}

// ------------------------------------------------------- torsion reports

inline const std::vector<std::string> kTorsionColumns{"curve", "point", "order"};

inline std::string torsion_csv(const EllipticCurve &e, const TorsionSubgroup &t) {
    std::string s = csv_row(kTorsionColumns);
    for (const auto &p : t.points)
        s += csv_row({e.to_string(), p.point.to_string(), std::to_string(p.order)});
    return s;
}

inline std::string torsion_sweep_summary(const TorsionSweep &sw) {
    std::ostringstream o;
    for (const auto &e : sw.entries) {
        o << "E: " << e.a << " " << e.b << "  ";
        if (e.order)
            o << "order " << *e.order << "  " << e.structure;
        else
            o << e.diagnostic;
        o << "\n";
    }
    o << "max order: " << sw.max_order << "\nhistogram:";
    for (const auto &[c, n] : sw.histogram)
        o << " " << c << ":" << n;
    o << "\n";
    if (!sw.ceiling_violations.empty())
        o << "orders above the ceiling: " << sw.ceiling_violations.size() << "\n";
    return o.str();
}

// ----------------------------------------------------------------- verify

struct VerifyOutcome {
    std::size_t rows = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

namespace detail {

inline void verify_point_row(const std::vector<std::string> &row, std::size_t line, VerifyOutcome &out,
                             std::map<std::string, PolyEndo> &maps) {
    auto fail = [&](const std::string &m) { out.failures.push_back("row " + std::to_string(line) + ": " + m); };
    if (row.size() != kPointColumns.size())
        return fail("expected " + std::to_string(kPointColumns.size()) + " columns");
    auto it = maps.find(row[0]);
    if (it == maps.end())
        it = maps.emplace(row[0], parse_map(row[0])).first;
    const PolyEndo &f = it->second;
    ProjPoint p = parse_point(row[3], f.ambient());
    if (p.to_string() != row[3])
        fail("coordinates are not in canonical form");
    if (field_name(p.field()) != row[1])
        fail("field column disagrees with the coordinates");
    if (affine_min_poly(p) != row[2])
        fail("min_poly column disagrees with the coordinates");
    if (fmt_real(point_height(p).value) != row[4])
        fail("height column disagrees with the coordinates");
    if (row[10] != "preperiodic")
        return fail("unknown verdict '" + row[10] + "'");
    std::size_t tail = std::stoul(row[8]), cycle = std::stoul(row[9]);
    if (cycle == 0)
        return fail("cycle length must be positive");
    // Exact replay: the first tail+cycle points are distinct and f^{tail+cycle} P = f^tail P.
    std::vector<ProjPoint> pts{p};
    for (std::size_t k = 0; k < tail + cycle; ++k)
        pts.push_back(evaluate(f, pts.back()));
    if (pts[tail + cycle] != pts[tail])
        return fail("orbit does not close with the stated tail and cycle");
    std::unordered_set<ProjPoint> seen(pts.begin(), pts.end() - 1);
    if (seen.size() != tail + cycle)
        fail("stated tail or cycle is not minimal");
}

inline void verify_torsion_row(const std::vector<std::string> &row, std::size_t line, VerifyOutcome &out) {
    auto fail = [&](const std::string &m) { out.failures.push_back("row " + std::to_string(line) + ": " + m); };
    if (row.size() != kTorsionColumns.size())
        return fail("expected 3 columns");
    EllipticCurve e = parse_curve(row[0]);
    EllPoint p = parse_ell_point(row[1], e);
    long n = std::stol(row[2]);
    EllPoint q = p;
    for (long k = 1; k < n; ++k) {
        if (q.is_identity())
            return fail("order is not minimal");
        q = ell_add(e, q, p);
    }
    if (!q.is_identity())
        fail("[" + row[2] + "]P is not O");
}

} // namespace detail

/// Re-check every row of a point or torsion CSV exactly.
inline VerifyOutcome verify_csv(std::string_view text) {
    VerifyOutcome out;
    auto rows = parse_csv(text);
    if (rows.empty())
        throw ParseError("empty report");
    std::map<std::string, PolyEndo> maps;
    const bool points = rows[0] == kPointColumns;
    if (!points && rows[0] != kTorsionColumns)
        throw ParseError("unrecognized report header");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ++out.rows;
        try {
            if (points)
                detail::verify_point_row(rows[i], i + 1, out, maps);
            else
                detail::verify_torsion_row(rows[i], i + 1, out);
        } catch (const Error &e) {
            out.failures.push_back("row " + std::to_string(i + 1) + ": " + e.what());
        } catch (const std::logic_error &e) {
            out.failures.push_back("row " + std::to_string(i + 1) + ": bad number: " + e.what());
        }
    }
    return out;
}

} // namespace arithdyn
