// spectral_gap: command-line front end.
//
//   spectral_gap table1     [--solver analytic|fd]
//   spectral_gap verify1d   [--config FILE]
//   spectral_gap verify2d   [--config FILE] [--k K] [--mesh-level L]
//   spectral_gap flow       --config FILE
//   spectral_gap spectrum1d --config FILE
//   spectral_gap spectrum2d --config FILE [--mesh-off FILE]
//   spectral_gap quotient   --config FILE
//
// Exit codes: 0 success, 1 violated verdict / table mismatch, 2 malformed
// configuration, 3 solver failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spectral_gap/families.hpp"
#include "spectral_gap/fem2d.hpp"
#include "spectral_gap/io.hpp"
#include "spectral_gap/perturbation.hpp"
#include "spectral_gap/step_analytic.hpp"
#include "spectral_gap/verify1d.hpp"
#include "spectral_gap/verify2d.hpp"

using namespace spectral_gap;
using io::ConfigError;
using io::fmt;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
    std::string config;
    std::string out;
    std::string format = "text";
    std::optional<double> tol;
    std::optional<std::size_t> k;
    std::optional<int> mesh_level;
    std::string solver = "analytic";
    std::uint64_t seed = families::kDefaultSeed;
    std::string mesh_off;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--out", o.out, "write output to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json", "text"}));
    cmd->add_option("--tol", o.tol, "solver tolerance")->check(CLI::Range(1e-10, 1e-2));
    cmd->add_option("--k", o.k, "number of eigenvalues / indices")->check(CLI::Range(1, 200));
    cmd->add_option("--mesh-level", o.mesh_level, "FEM refinement level")->check(CLI::Range(1, 8));
    cmd->add_option("--solver", o.solver, "1D solver")->check(CLI::IsMember({"analytic", "fd"}));
    cmd->add_option("--seed", o.seed, "seed for randomized families");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot write '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

json load_config(const Options& o, bool required) {
    if (o.config.empty()) {
        if (required) throw ConfigError("--config is required for this command");
        return json::object();
    }
    json j = io::read_json_file(o.config);
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    return j;
}

double cfg_tol(const Options& o, const json& cfg) {
    double tol = o.tol.value_or(cfg.value("tol", 1e-9));
    if (!(tol >= 1e-10 && tol <= 1e-2)) throw ConfigError("tol must lie in [1e-10, 1e-2]");
    return tol;
}

std::size_t cfg_k(const Options& o, const json& cfg, std::size_t dflt) {
    long k = o.k ? static_cast<long>(*o.k) : cfg.value("k", static_cast<long>(dflt));
    if (k < 1 || k > 200) throw ConfigError("k must lie in [1, 200]");
    return static_cast<std::size_t>(k);
}

int cfg_level(const Options& o, const json& cfg, int dflt) {
    int l = o.mesh_level.value_or(cfg.value("mesh_level", dflt));
    if (l < 1 || l > 8) throw ConfigError("mesh_level must lie in [1, 8]");
    return l;
}

io::LoadedPotential one_potential(const json& cfg) {
    if (!cfg.contains("potential")) throw ConfigError("missing key 'potential'");
    return io::parse_potential(cfg.at("potential"));
}

void emit_reports(std::ostream& os, const std::string& format, const std::vector<InequalityReport>& reports) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(io::to_json(r));
        os << arr.dump(2) << '\n';
    } else if (format == "csv") {
        os << "theorem_id,subject,lhs_label,rhs_label,lhs,rhs,margin,error_budget,verdict\n";
        for (const auto& r : reports)
            os << r.theorem_id << ",\"" << r.subject << "\"," << r.lhs_label << ',' << r.rhs_label << ','
               << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.margin) << ',' << fmt(r.error_budget) << ','
               << to_string(r.verdict) << '\n';
    } else {
        os << io::report_table(reports);
    }
}

int verdict_exit(const std::vector<InequalityReport>& reports) {
    for (const auto& r : reports)
        if (r.verdict == Verdict::Violated) return kExitFail;
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_table1(const Options& o) {
    auto cells = step::table1_analytic();
    const bool fd = o.solver == "fd";
    std::vector<double> fd_vals(cells.size(), 0.0);
    bool all = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& c = cells[i];
        if (fd) {
            auto v = make_named_potential("step", {c.c}, IntervalDomain(0.0, 2.0));
            SolveOptions so;
            so.target_tol = o.tol.value_or(1e-9);
            if (c.quantity == "sqrt_mu2")
                fd_vals[i] = std::sqrt(solve(v, v.domain(), BoundaryPair::NN(), 2, so)[1]);
            else
                fd_vals[i] = std::sqrt(solve(v, v.domain(), BoundaryPair::DD(), 1, so)[0]);
        }
        bool ok = fd ? std::abs(fd_vals[i] - std::stod(c.published)) <= 1e-3 : c.match;
        all = all && ok;
    }
    Output out(o.out);
    auto& os = out.os();
    auto above = [&](const step::Table1Cell& c) {
        return c.quantity == "sqrt_lambda1" ? fmt(step::first_dirichlet_root_above_barrier(c.c)) : std::string("-");
    };
    if (o.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            json j{{"quantity", c.quantity}, {"c", c.c}, {"published", c.published},
                   {"computed", io::num(c.computed)}, {"match", c.match}};
            if (fd) {
                j["fd"] = io::num(fd_vals[i]);
                j["fd_within_1e-3"] = std::abs(fd_vals[i] - std::stod(c.published)) <= 1e-3;
            }
            if (c.quantity == "sqrt_lambda1") j["first_root_above_barrier"] = io::num(std::stod(above(c)));
            arr.push_back(j);
        }
        os << arr.dump(2) << '\n';
    } else if (o.format == "csv") {
        os << "quantity,c,published,computed,rounded,match" << (fd ? ",fd,fd_within_1e-3" : "")
           << ",first_root_above_barrier\n";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            os << c.quantity << ',' << fmt(c.c) << ',' << c.published << ',' << fmt(c.computed) << ','
               << step::round_to(c.computed, c.digits) << ',' << (c.match ? "yes" : "no");
            if (fd)
                os << ',' << fmt(fd_vals[i]) << ','
                   << (std::abs(fd_vals[i] - std::stod(c.published)) <= 1e-3 ? "yes" : "no");
            os << ',' << above(c) << '\n';
        }
    } else {
        char line[256];
        std::snprintf(line, sizeof line, "%-13s %-8s %-10s %-16s %-10s %-6s %-16s %s\n", "quantity", "c",
                      "published", "computed", "rounded", "match", fd ? "fd" : "", "first root k>sqrt(c)");
        os << line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            std::snprintf(line, sizeof line, "%-13s %-8s %-10s %-16s %-10s %-6s %-16s %s\n", c.quantity.c_str(),
                          fmt(c.c).c_str(), c.published.c_str(), fmt(c.computed).c_str(),
                          step::round_to(c.computed, c.digits).c_str(), c.match ? "yes" : "NO",
                          fd ? fmt(fd_vals[i]).c_str() : "", above(c).c_str());
            os << line;
        }
        os << (all ? "all cells match\n" : "MISMATCH: some cells differ from the published values\n");
    }
    return all ? kExitOk : kExitFail;
}

std::vector<InequalityReport> run_1d_checks(const Potential1D& v, const std::string& id,
                                            const std::vector<std::string>& checks, CheckOptions copt) {
    std::vector<InequalityReport> out;
    const auto dom = v.domain();
    for (const auto& c : checks) {
        InequalityReport r;
        if (c == "lemma32") r = check_lemma32(v, dom, copt);
        else if (c == "thm33") r = check_thm33(v, dom, copt);
        else if (c == "higher") r = check_higher_remark(v, dom, copt);
        else throw ConfigError("unknown 1D check '" + c + "' (lemma32, thm33, higher)");
        r.subject = id;
        out.push_back(std::move(r));
    }
    return out;
}

int cmd_verify1d(const Options& o) {
    json cfg = load_config(o, false);
    io::reject_unknown_keys(cfg, {"potentials", "checks", "tol", "step_reflections", "random_family"}, "verify1d config");
    CheckOptions copt;
    copt.tol = cfg_tol(o, cfg);
    std::vector<std::string> checks = cfg.contains("checks")
                                          ? io::get_as<std::vector<std::string>>(cfg, "checks", "verify1d config")
                                          : std::vector<std::string>{"lemma32", "thm33", "higher"};

    std::vector<std::pair<std::string, Potential1D>> pots;
    std::vector<double> reflections;
    if (cfg.contains("potentials")) {
        for (const auto& p : cfg.at("potentials")) {
            auto lp = io::parse_potential(p);
            if (!lp.is_1d()) throw ConfigError("verify1d needs interval potentials");
            pots.emplace_back(lp.id, lp.p1());
        }
    } else if (!cfg.contains("random_family") && !cfg.contains("step_reflections")) {
        // Built-in demonstration set.
        const IntervalDomain I(-1.0, 1.0);
        pots.emplace_back("3x^2 e^{-x^2} - 3/e", make_named_potential("gauss", {3.0, -3.0 * std::exp(-1.0)}, I));
        pots.emplace_back("-3x^2 e^{-x^2}", make_named_potential("gauss", {-3.0, 0.0}, I));
        pots.emplace_back("x^2", make_named_potential("poly", {0.0, 0.0, 1.0}, I));
        pots.emplace_back("-x^2", make_named_potential("poly", {0.0, 0.0, -1.0}, I));
        pots.emplace_back("-x on (0,1)", make_named_potential("poly", {0.0, -1.0}, IntervalDomain(0.0, 1.0)));
        pots.emplace_back("x on (0,1)", make_named_potential("poly", {0.0, 1.0}, IntervalDomain(0.0, 1.0)));
        reflections = {1e-4, 1.0};
    }
    if (cfg.contains("step_reflections"))
        reflections = io::get_as<std::vector<double>>(cfg, "step_reflections", "verify1d config");
    if (cfg.contains("random_family")) {
        const auto& rf = cfg.at("random_family");
        io::reject_unknown_keys(rf, {"kind", "count", "r"}, "random_family");
        auto kind = io::get_as<std::string>(rf, "kind", "random_family");
        int count = rf.value("count", 20);
        double r = rf.value("r", 1.0);
        if (count < 1 || count > 1000 || !(r > 0)) throw ConfigError("random_family: bad count or r");
        for (int i = 0; i < count; ++i) {
            std::string id = kind + "#" + std::to_string(i);
            if (kind == "symmetric_increasing")
                pots.emplace_back(id, families::symmetric_monotone_half(o.seed, i, r, true));
            else if (kind == "symmetric_decreasing")
                pots.emplace_back(id, families::symmetric_monotone_half(o.seed, i, r, false));
            else if (kind == "non_increasing")
                pots.emplace_back(id, families::non_increasing(o.seed, i, r));
            else
                throw ConfigError("random_family kind must be symmetric_increasing, symmetric_decreasing or non_increasing");
        }
    }

    std::vector<InequalityReport> reports;
    for (const auto& [id, v] : pots) {
        auto rs = run_1d_checks(v, id, checks, copt);
        reports.insert(reports.end(), rs.begin(), rs.end());
    }
    for (double c : reflections) {
        auto se = symmetric_extension_spectra(c, 4, copt.tol);
        reports.push_back(se.ordering);
    }
    Output out(o.out);
    emit_reports(out.os(), o.format, reports);
    return verdict_exit(reports);
}

int cmd_verify2d(const Options& o) {
    json cfg = load_config(o, false);
    io::reject_unknown_keys(cfg, {"potentials", "checks", "k", "mesh_level"}, "verify2d config");
    std::size_t k = cfg_k(o, cfg, 4);
    int level = cfg_level(o, cfg, 5);
    std::vector<std::string> checks = cfg.contains("checks")
                                          ? io::get_as<std::vector<std::string>>(cfg, "checks", "verify2d config")
                                          : std::vector<std::string>{"thm42", "thm44_45"};
    std::vector<std::pair<std::string, Potential2D>> pots;
    if (cfg.contains("potentials")) {
        for (const auto& p : cfg.at("potentials")) {
            auto lp = io::parse_potential(p);
            if (lp.is_1d()) throw ConfigError("verify2d needs polygon potentials");
            pots.emplace_back(lp.id, lp.p2());
        }
    } else {
        pots.emplace_back("e^{x+y} on unit square",
                          make_named_potential("exp", {1.0, 1.0}, ConvexPolygonDomain::unit_square()));
        pots.emplace_back("-e^{x^2+y^2} on (-1,1)^2",
                          make_named_potential("radial_concave", {1.0}, ConvexPolygonDomain::rectangle(-1, -1, 1, 1)));
    }
    std::vector<InequalityReport> reports;
    for (const auto& [id, v] : pots) {
        for (const auto& c : checks) {
            std::vector<InequalityReport> rs;
            if (c == "thm42") rs = check_thm42(v, k, level);
            else if (c == "thm44_45") rs = check_thm44_45(v, std::max(2, level - 1));
            else throw ConfigError("unknown 2D check '" + c + "' (thm42, thm44_45)");
            for (auto& r : rs) {
                r.subject = id;
                reports.push_back(std::move(r));
            }
        }
    }
    Output out(o.out);
    emit_reports(out.os(), o.format, reports);
    return verdict_exit(reports);
}

int cmd_flow(const Options& o) {
    json cfg = load_config(o, true);
    io::reject_unknown_keys(cfg, {"potential", "k", "tau", "steps", "tol"}, "flow config");
    auto lp = one_potential(cfg);
    if (!lp.is_1d()) throw ConfigError("flow needs an interval potential");
    std::size_t K = cfg_k(o, cfg, 3);
    auto tau = cfg.contains("tau") ? io::get_as<std::vector<double>>(cfg, "tau", "flow config")
                                   : std::vector<double>{-0.1, 0.1};
    if (tau.size() != 2 || !(tau[1] > tau[0])) throw ConfigError("tau must be [lo, hi] with lo < hi");
    int steps = cfg.value("steps", 16);
    if (steps < 8 || steps > 10000) throw ConfigError("steps must lie in [8, 10000]");
    FlowOptions fo;
    fo.tol = cfg_tol(o, cfg);
    auto curve = trace_flow(lp.p1(), lp.p1().domain(), K, tau[0], tau[1], static_cast<std::size_t>(steps), fo);

    Output out(o.out);
    auto& os = out.os();
    os << "tau";
    for (std::size_t k = 1; k <= K + 1; ++k) os << ",mu" << k;
    for (std::size_t k = 1; k <= K; ++k) os << ",lambda" << k;
    for (std::size_t k = 1; k <= K; ++k) os << ",g" << k;
    os << '\n';
    for (const auto& p : curve.points) {
        os << fmt(p.tau);
        for (double x : p.mu) os << ',' << fmt(x);
        for (double x : p.lambda) os << ',' << fmt(x);
        for (double x : p.gap) os << ',' << fmt(x);
        os << '\n';
    }
    for (const auto& c : curve.crossings)
        os << "# crossing k=" << c.k << " tau=" << fmt(c.tau) << " bracket=[" << fmt(c.lo) << ',' << fmt(c.hi)
           << "]\n";
    if (curve.truncated) {
        os << "# truncated: " << curve.error << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

void emit_spectrum(std::ostream& os, const std::string& format, const std::string& id, const SpectrumResult& r) {
    if (format == "json") {
        json j = io::to_json(r);
        j["potential"] = id;
        os << j.dump(2) << '\n';
    } else if (format == "csv") {
        os << "index,eigenvalue,error_estimate\n";
        for (std::size_t i = 0; i < r.size(); ++i)
            os << i + 1 << ',' << fmt(r[i]) << ',' << fmt(r.error_estimate[i]) << '\n';
    } else {
        os << "# " << id << "  bc=" << r.bc << "  method=" << r.discretization.method
           << "  grid=" << r.discretization.grid_size << '\n';
        for (std::size_t i = 0; i < r.size(); ++i)
            os << i + 1 << "  " << fmt(r[i]) << "  +/- " << fmt(r.error_estimate[i]) << '\n';
    }
}

int cmd_spectrum1d(const Options& o) {
    json cfg = load_config(o, true);
    io::reject_unknown_keys(cfg, {"potential", "bc", "k", "tol"}, "spectrum1d config");
    auto lp = one_potential(cfg);
    if (!lp.is_1d()) throw ConfigError("spectrum1d needs an interval potential");
    BoundaryPair bc;
    try {
        bc = parse_boundary_pair(cfg.value("bc", std::string("NN")));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::size_t K = cfg_k(o, cfg, 4);
    const auto& v = lp.p1();
    SpectrumResult r;
    // The analytic path applies to the step potential on (0, 2) with NN or DD.
    const auto* nd = std::get_if<PiecewiseConstant>(&v.descriptor());
    bool step_shape = nd && nd->breaks.size() == 1 && nd->breaks[0] == 1.0 && nd->values[1] == 0.0 &&
                      nd->values[0] > 0 && v.domain().a == 0.0 && v.domain().b == 2.0 &&
                      (bc.left == bc.right);
    if (o.solver == "analytic" && step_shape) {
        r = step::step_spectrum(nd->values[0], bc.left, K);
    } else {
        SolveOptions so;
        so.target_tol = cfg_tol(o, cfg);
        r = solve(v, v.domain(), bc, K, so);
    }
    Output out(o.out);
    emit_spectrum(out.os(), o.format, lp.id, r);
    return kExitOk;
}

int cmd_spectrum2d(const Options& o) {
    json cfg = load_config(o, true);
    io::reject_unknown_keys(cfg, {"potential", "bc", "k", "mesh_level"}, "spectrum2d config");
    auto lp = one_potential(cfg);
    if (lp.is_1d()) throw ConfigError("spectrum2d needs a polygon potential");
    auto bcs = cfg.value("bc", std::string("neumann"));
    if (bcs != "neumann" && bcs != "dirichlet") throw ConfigError("bc must be 'neumann' or 'dirichlet'");
    Bc2D bc = bcs == "neumann" ? Bc2D::Neumann : Bc2D::Dirichlet;
    std::size_t K = cfg_k(o, cfg, 8);
    int level = cfg_level(o, cfg, 4);
    const auto& v = lp.p2();
    if (!o.mesh_off.empty()) {
        std::ofstream f(o.mesh_off);
        if (!f) throw ConfigError("cannot write '" + o.mesh_off + "'");
        write_off(f, mesh_polygon(v.domain(), level));
    }
    auto r = solve2d(v, bc, K, level);
    Output out(o.out);
    emit_spectrum(out.os(), o.format, lp.id, r.spectrum);
    return kExitOk;
}

int cmd_quotient(const Options& o) {
    json cfg = load_config(o, true);
    io::reject_unknown_keys(cfg, {"potential", "tau", "n"}, "quotient config");
    auto lp = one_potential(cfg);
    if (!lp.is_1d()) throw ConfigError("quotient needs an interval potential");
    double tau = cfg.value("tau", 1.0);
    long n = cfg.value("n", 2047L);
    if (n < 64 || n > (1L << 20)) throw ConfigError("n must lie in [64, 2^20]");
    auto q = quotient_diagnostic(lp.p1(), lp.p1().domain(), tau, static_cast<std::size_t>(n));
    Output out(o.out);
    auto& os = out.os();
    if (o.format == "json") {
        json j{{"potential", lp.id},
               {"tau", tau},
               {"skipped", q.skipped},
               {"reason", q.reason},
               {"lambda1_DN", io::num(q.lambda_dn)},
               {"lambda1_ND", io::num(q.lambda_nd)},
               {"strictly_decreasing", q.strictly_decreasing},
               {"checked_nodes", q.checked_nodes},
               {"increases", q.increases},
               {"crossings", q.crossings},
               {"x0", io::num(q.x0)}};
        os << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        os << "x,psi_over_phi\n";
        for (std::size_t i = 0; i < q.x.size(); ++i) os << fmt(q.x[i]) << ',' << fmt(q.ratio[i]) << '\n';
        os << "# crossings=" << q.crossings << " x0=" << fmt(q.x0) << " strictly_decreasing=" << q.strictly_decreasing
           << '\n';
    } else {
        os << lp.id << "  tau=" << fmt(tau) << '\n';
        if (q.skipped) {
            os << "skipped: " << q.reason << '\n';
        } else {
            os << "lambda1_DN=" << fmt(q.lambda_dn) << "  lambda1_ND=" << fmt(q.lambda_nd) << '\n'
               << "psi/phi strictly decreasing on " << q.checked_nodes << " nodes: " << (q.strictly_decreasing ? "yes" : "NO")
               << '\n'
               << "zeros of phi^2 - psi^2: " << q.crossings << "  x0=" << fmt(q.x0) << '\n';
        }
    }
    if (q.skipped) return kExitOk;
    return q.strictly_decreasing && q.crossings == 1 ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neumann and Dirichlet eigenvalues of -d^2/dx^2 + V and -Laplace + V"};
    app.require_subcommand(1);
    Options o;
    struct Cmd {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Cmd cmds[] = {
        {"table1", "reproduce the step-potential table", cmd_table1},
        {"verify1d", "interval inequality checks", cmd_verify1d},
        {"verify2d", "polygon inequality checks", cmd_verify2d},
        {"flow", "gap curves along tau -> tau V", cmd_flow},
        {"spectrum1d", "eigenvalues on an interval", cmd_spectrum1d},
        {"spectrum2d", "eigenvalues on a polygon (P1 FEM)", cmd_spectrum2d},
        {"quotient", "psi/phi monotonicity diagnostic", cmd_quotient},
    };
    std::vector<std::pair<CLI::App*, int (*)(const Options&)>> subs;
    for (const auto& c : cmds) {
        auto* s = app.add_subcommand(c.name, c.help);
        add_common(s, o);
        if (std::string(c.name) == "spectrum2d") s->add_option("--mesh-off", o.mesh_off, "export the mesh as OFF");
        subs.emplace_back(s, c.run);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    try {
        for (auto& [s, run] : subs)
            if (s->parsed()) return run(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PotentialError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitConfig;
}
