/* SPDX-License-Identifier: Apache-2.0 */

// Command-line front end. Exit codes: 0 ok, 1 invariant violation or failed
// certification, 2 input error, 3 budget exceeded.

#include "arithdyn/arithdyn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace arithdyn;

namespace {

enum Exit { kOk = 0, kViolation = 1, kInput = 2, kBudget = 3 };

struct Common {
    unsigned workers = 1;
    std::string csv;
};

void emit_csv(const Common &c, const std::string &text) {
    if (c.csv.empty() || c.csv == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(c.csv, std::ios::binary);
    if (!out)
        throw Unsupported("cannot write " + c.csv);
    out << text;
}

std::string hv(const HeightValue &h) {
    return fmt_real(h.value) + " +- " + fmt_real(h.error) + (h.rigorous ? " (rigorous)" : " (heuristic)");
}

ParsedMapOptions map_options(const std::optional<int> &pol, const std::string &ns) {
    ParsedMapOptions o;
    o.polarization = pol;
    if (!ns.empty())
        o.ns_matrix = parse_matrix(ns);
    return o;
}

CLI::App *with_config(CLI::App *sub) {
    sub->add_option("--config", "key = value file with option defaults (expanded before parsing)");
    return sub;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Replace "--config FILE" by the file's "key = value" lines as flags placed ahead of the
/// command-line ones, so explicit flags win. Unknown keys are rejected with their line.
std::vector<std::string> expand_config(CLI::App &app, std::vector<std::string> args) {
    CLI::App *sub = nullptr;
    std::size_t sub_at = 0;
    for (std::size_t i = 0; i < args.size() && !sub; ++i)
        if ((sub = app.get_subcommand_no_throw(args[i])))
            sub_at = i;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config")
            continue;
        if (!sub || i < sub_at)
            throw ParseError("--config must follow the subcommand");
        std::ifstream in(args[i + 1]);
        if (!in)
            throw ParseError("cannot read config file " + args[i + 1]);
        std::vector<std::string> flags;
        std::string line;
        for (std::size_t ln = 1; std::getline(in, line); ++ln) {
            std::string t = trim(line);
            if (t.empty() || t[0] == '#')
                continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError(args[i + 1] + ": line " + std::to_string(ln) + ", column 1: expected key = value");
            std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
            if (key == "config" || !sub->get_option_no_throw("--" + key))
                throw ParseError(args[i + 1] + ": line " + std::to_string(ln) + ", column " +
                                 std::to_string(line.find(key) + 1) + ": unknown key '" + key + "'");
            flags.push_back("--" + key);
            if (value != "true")
                flags.push_back(value);
        }
        args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        args.insert(args.begin() + static_cast<long>(sub_at) + 1, flags.begin(), flags.end());
        break;
    }
    return args;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"arithdyn: heights, orbits and degrees in arithmetic dynamics"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Common common;
    app.add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);

    std::string map_s, point_s, ns_s, b_s = "log100";
    std::optional<int> polarization;
    double tol = 1e-9;
    int n_max = 20, d = 1, max_iter = 64;
    std::size_t max_steps = 10000, max_bits = std::size_t{1} << 16;
    double cutoff = INFINITY;
    auto map_opts = [&](CLI::App *s, bool point) {
        s->add_option("--map", map_s, "map, e.g. \"P1 -> P1 : [x^2 - y^2, x*y]\"")->required();
        s->add_option("--polarization", polarization, "declared polarization degree");
        s->add_option("--ns", ns_s, "NS action matrix, rows split by ';'");
        if (point)
            s->add_option("--point", point_s, "point, e.g. \"2:1\" or \"1:2;1:5\"")->required();
    };
    auto csv_opt = [&](CLI::App *s) { s->add_option("--csv", common.csv, "CSV output path (default stdout)"); };

    auto *height = with_config(app.add_subcommand("height", "Weil height, and canonical height when polarized"));
    map_opts(height, true);
    height->add_option("--tol", tol)->check(CLI::PositiveNumber);

    auto *canon = with_config(app.add_subcommand("canonical-height", "canonical height with error bound"));
    map_opts(canon, true);
    canon->add_option("--tol", tol)->check(CLI::PositiveNumber);
    canon->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
    canon->add_option("--max-bits", max_bits)->check(CLI::PositiveNumber);

    auto *orb = with_config(app.add_subcommand("orbit", "exact forward orbit"));
    map_opts(orb, true);
    orb->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);
    orb->add_option("--cutoff", cutoff, "escape height");

    auto *classify = with_config(app.add_subcommand("classify", "preperiodic or maximal arithmetic degree"));
    map_opts(classify, true);

    std::string matrix_s;
    unsigned power = 1;
    auto *dyn = with_config(app.add_subcommand("dyn-degree", "dynamical degree"));
    dyn->add_option("--map", map_s);
    dyn->add_option("--polarization", polarization);
    dyn->add_option("--ns", ns_s);
    dyn->add_option("--matrix", matrix_s, "integer matrix acting on E^g");
    dyn->add_option("--power", power, "degree of the n-th iterate")->check(CLI::PositiveNumber);

    auto *arith = with_config(app.add_subcommand("arith-degree", "arithmetic degree estimate"));
    map_opts(arith, true);
    arith->add_option("--n-max", n_max)->check(CLI::Range(4, 4096));
    bool max_height = false;
    arith->add_flag("--max-height", max_height, "use the max of factor heights on products");

    auto *zfd = with_config(app.add_subcommand("zfd", "preperiodic points of degree <= d and bounded height"));
    map_opts(zfd, false);
    zfd->add_option("--d", d)->check(CLI::IsMember({1, 2}));
    zfd->add_option("--B", b_s, "height bound: log100, log(100) or a decimal");
    csv_opt(zfd);

    std::string family_s, values_s, param = "c";
    auto *fam = with_config(app.add_subcommand("family-ubc", "counts across a one-parameter family"));
    fam->add_option("--family", family_s, "expression in x and the parameter, e.g. x^2+c")->required();
    fam->add_option("--param", param, "parameter name");
    fam->add_option("--c,--values", values_s, "values: a..b, frac:N or a comma list")->required();
    fam->add_option("--d", d)->check(CLI::IsMember({1, 2}));
    fam->add_option("--B", b_s);
    csv_opt(fam);

    std::vector<std::string> curves;
    std::string a_range, b_range;
    auto *tors = with_config(app.add_subcommand("ell-torsion", "rational torsion via Lutz-Nagell"));
    tors->add_option("--curve", curves, "curve \"E: a b\" (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    tors->add_option("--a", a_range, "sweep values for a");
    tors->add_option("--b", b_range, "sweep values for b");
    csv_opt(tors);

    std::string curve_s, translation_s, gens_s;
    auto *abel = with_config(app.add_subcommand("abelian-check", "Z_f = B + p + Tor on E^g"));
    abel->add_option("--curve", curve_s)->required();
    abel->add_option("--matrix", matrix_s)->required();
    abel->add_option("--translation", translation_s, "points a_i split by ';'");
    abel->add_option("--generators", gens_s, "non-torsion points split by ';'");
    abel->add_option("--B", b_s);
    abel->add_option("--n-max", n_max)->check(CLI::Range(4, 4096));
    abel->add_option("--d", d)->check(CLI::IsMember({1}));

    std::string verify_path;
    auto *verify = app.add_subcommand("verify", "re-check every row of a report exactly");
    verify->add_option("report", verify_path)->required();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (height->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            auto p = parse_point(point_s, f.ambient());
            std::cout << "point: " << p.to_string() << "\n";
            std::cout << "h = " << hv(point_height(p)) << "\n";
            if (f.is_polarized()) {
                auto c = canonical_height(f, p, tol);
                std::cout << "hhat = " << hv(c.height) << "\n";
                if (c.budget_exceeded)
                    return kBudget;
            }
        } else if (canon->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            auto p = parse_point(point_s, f.ambient());
            if (!f.is_polarized())
                throw Unsupported("canonical heights need a polarized map");
            auto tb = height_difference_bound(f);
            CanonicalHeightOptions o{max_iter, max_bits};
            auto c = canonical_height(f, p, tol, tb, o);
            std::cout << "C+ = " << fmt_real(tb.upper) << "\n";
            std::cout << "C- = " << (tb.lower ? fmt_real(*tb.lower) : std::string("unavailable")) << "\n";
            std::cout << "hhat = " << hv(c.height) << "\n";
            std::cout << "iterations = " << c.iterations << (c.cycle_found ? " (cycle)" : "") << "\n";
            if (c.budget_exceeded) {
                std::cout << "budget exceeded before reaching tol\n";
                return kBudget;
            }
        } else if (orb->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            auto p = parse_point(point_s, f.ambient());
            OrbitOptions o;
            o.max_steps = max_steps;
            o.height_cutoff = cutoff;
            auto r = orbit(f, p, o);
            for (std::size_t k = 0; k < r.points.size(); ++k)
                std::cout << k << "  " << r.points[k].to_string() << "  h = " << fmt_real(r.height_trace[k].value)
                          << "\n";
            std::cout << "status: " << to_string(r.status) << "\n";
            std::cout << "tail: " << r.tail_length << "\n";
            if (r.cycle_length)
                std::cout << "cycle: " << *r.cycle_length << "\n";
            if (r.status == OrbitStatus::Budget)
                return kBudget;
        } else if (classify->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            auto p = parse_point(point_s, f.ambient());
            auto c = is_preperiodic(f, p);
            std::cout << "point: " << p.to_string() << "\n";
            std::cout << "class: " << to_string(classify_point_polarized(f, p)) << "\n";
            if (c.verdict == Certainty::Preperiodic)
                std::cout << "tail: " << c.orbit.tail_length << "\ncycle: " << *c.orbit.cycle_length << "\n";
            else if (c.verdict == Certainty::NotPreperiodic)
                std::cout << "hhat lower bound: " << fmt_real(c.hhat_lower_bound) << "\n";
            else
                return kBudget;
        } else if (dyn->parsed()) {
            DynDegree dd;
            if (!matrix_s.empty()) {
                dd = matrix_endo_dyn_degree(MatrixEndo::make(parse_matrix(matrix_s)));
            } else if (!map_s.empty()) {
                auto f = parse_map(map_s, map_options(polarization, ns_s));
                dd = power > 1 ? dyn_degree_power(f, power) : dyn_degree(f);
            } else {
                throw Unsupported("dyn-degree needs --map or --matrix");
            }
            if (!matrix_s.empty() && power > 1)
                dd = {std::pow(dd.value, power), power * std::pow(dd.value, power - 1) * dd.error,
                      DegreeSource::PowerRule};
            std::cout << "delta = " << fmt_real(dd.value) << " +- " << fmt_real(dd.error) << "\n";
            std::cout << "source: " << to_string(dd.source) << "\n";
        } else if (arith->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            auto p = parse_point(point_s, f.ambient());
            ArithDegreeOptions o;
            o.height = max_height ? HeightChoice::MaxOfFactors : HeightChoice::SumOfFactors;
            auto e = arith_degree_estimate(f, p, n_max, o);
            std::cout << "alpha = " << fmt_real(e.estimate) << "\n";
            std::cout << "verdict: " << to_string(e.verdict) << "\n";
            std::cout << "ratio trace:";
            for (double r : e.ratio_trace)
                std::cout << " " << fmt_real(r);
            std::cout << "\nroot trace:";
            for (double r : e.root_trace)
                std::cout << " " << fmt_real(r);
            std::cout << "\n";
            if (e.budget_exceeded && e.verdict == ArithVerdict::Estimate)
                return kBudget;
        } else if (zfd->parsed()) {
            auto f = parse_map(map_s, map_options(polarization, ns_s));
            SearchOptions o;
            o.workers = common.workers;
            auto r = zf_d_search(f, d, parse_height_bound(b_s), o);
            emit_csv(common, search_csv(r));
            std::cerr << search_summary(r);
            if (r.unknown > 0)
                return kBudget;
        } else if (fam->parsed()) {
            MapFamily family{family_s, param};
            std::vector<FamilyMember> members;
            for (const auto &v : parse_parameter_values(values_s)) {
                FamilyMember m{v.to_string(), {}};
                try {
                    m.map = family.at(v);
                } catch (const InvalidMap &e) {
                    std::cerr << "skipping " << m.label << ": " << e.what() << "\n";
                    continue;
                }
                members.push_back(std::move(m));
            }
            SearchOptions o;
            o.workers = common.workers;
            auto r = family_ubc_experiment(members, d, parse_height_bound(b_s), o);
            emit_csv(common, family_csv(r));
            std::cerr << family_summary(r);
            for (const auto &e : r.entries)
                if (e.count && e.report.unknown > 0)
                    return kBudget;
        } else if (tors->parsed()) {
            std::vector<std::pair<Int, Int>> list;
            for (const auto &c : curves) {
                auto e = parse_curve(c);
                list.emplace_back(e.a(), e.b());
            }
            if (!a_range.empty() || !b_range.empty()) {
                auto as = parse_parameter_values(a_range.empty() ? "0" : a_range);
                auto bs = parse_parameter_values(b_range.empty() ? "0" : b_range);
                for (const auto &a : as)
                    for (const auto &b : bs) {
                        if (!a.is_integer() || !b.is_integer())
                            throw Unsupported("curve coefficients must be integers");
                        list.emplace_back(a.num(), b.num());
                    }
            }
            if (list.empty())
                throw Unsupported("ell-torsion needs --curve or a sweep over --a/--b");
            if (list.size() == 1) {
                EllipticCurve e(list[0].first, list[0].second);
                auto t = torsion_subgroup(e);
                emit_csv(common, torsion_csv(e, t));
                std::cerr << e.to_string() << "  order " << t.order() << "  " << t.structure() << "\n";
            } else {
                auto sw = torsion_count_ubc(list, 16, common.workers);
                std::string csv = csv_row(kTorsionColumns);
                for (const auto &en : sw.entries) {
                    if (!en.order)
                        continue;
                    EllipticCurve e(en.a, en.b);
                    auto t = torsion_subgroup(e);
                    auto body = torsion_csv(e, t);
                    csv += body.substr(body.find("\r\n") + 2);
                }
                emit_csv(common, csv);
                std::cerr << torsion_sweep_summary(sw);
                if (!sw.ceiling_violations.empty())
                    return kViolation;
            }
        } else if (abel->parsed()) {
            auto e = parse_curve(curve_s);
            auto m = parse_matrix(matrix_s);
            std::vector<EllPoint> tr;
            if (!translation_s.empty())
                tr = parse_ell_tuple(translation_s, e);
            std::vector<EllPoint> gens;
            if (!gens_s.empty())
                gens = parse_ell_tuple(gens_s, e);
            auto f = MatrixEndo::make(m, tr);
            auto lat = Lattice::build(e, gens);
            StructureOptions o;
            o.n_max = n_max;
            auto r = zf_structure_check(lat, f, parse_height_bound(b_s), o);
            std::cout << "delta = " << fmt_real(r.delta.value) << " +- " << fmt_real(r.delta.error) << "\n";
            if (r.cross_check)
                std::cout << "height growth = " << fmt_real(r.cross_check->growth) << " (relative error "
                          << fmt_real(r.cross_check->relative_error) << ")"
                          << (r.cross_check->passed ? "" : " FAILED") << "\n";
            std::cout << "torsion: " << lat.torsion.order() << " " << lat.torsion.structure() << "\n";
            std::cout << "hypothesis invariant: " << (r.invariant ? "yes" : "no") << "\n";
            std::string csv = csv_row({"probe", "alpha", "predicted", "low"});
            for (const auto &pr : r.probes) {
                std::string pts;
                for (std::size_t i = 0; i < pr.points.size(); ++i)
                    pts += (i ? ";" : "") + pr.points[i].to_string();
                csv += csv_row({pts, fmt_real(pr.alpha), pr.predicted ? "yes" : "no", pr.low ? "yes" : "no"});
            }
            std::cout << csv;
            std::cout << "probes: " << r.probes.size() << "\nviolations: " << r.violations.size()
                      << "\nconverse violations: " << r.converse_violations.size() << "\n";
            if (!r.ok())
                return kViolation;
        } else if (verify->parsed()) {
            std::ifstream in(verify_path, std::ios::binary);
            if (!in)
                throw Unsupported("cannot read " + verify_path);
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            auto v = verify_csv(text);
            for (const auto &f : v.failures)
                std::cout << f << "\n";
            std::cout << "rows: " << v.rows << "  failures: " << v.failures.size() << "\n";
            if (!v.ok())
                return kViolation;
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Invariant:
            return kViolation;
        case ErrorKind::Budget:
            return kBudget;
        default:
            return kInput;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kOk;
}
