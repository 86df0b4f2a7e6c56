#pragma once

// JSON potential files, run configuration and report formatting.
//
// Potential file:
//   {"name": "gauss", "params": [3, -1.1036], "domain": {"kind": "interval", "a": -1, "b": 1}}
//   {"name": "exp", "params": [1, 1], "domain": {"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]}}
//   {"tabulated": {"x": [...], "v": [...]}, "domain": {...}}       (domain optional: defaults to [x0, xN])
//   {"piecewise_constant": {"breaks": [...], "values": [...]}, "domain": {...}}
// Optional "id" names the potential in reports.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "spectral_gap/fem2d.hpp"
#include "spectral_gap/potential.hpp"
#include "spectral_gap/report.hpp"
#include "spectral_gap/types.hpp"

namespace spectral_gap::io {

using json = nlohmann::json;

/// Malformed configuration or potential file (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// %.12g: fixed 12 significant digits for reproducible output.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// JSON number carrying exactly the 12 significant digits of fmt().
inline double num(double x) { return std::isfinite(x) ? std::strtod(fmt(x).c_str(), nullptr) : x; }

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

using Domain = std::variant<IntervalDomain, ConvexPolygonDomain>;

inline Domain parse_domain(const json& d) {
    if (!d.is_object()) throw ConfigError("domain must be an object");
    auto kind = get_as<std::string>(d, "kind", "domain");
    try {
        if (kind == "interval") {
            reject_unknown_keys(d, {"kind", "a", "b"}, "interval domain");
            return IntervalDomain(get_as<double>(d, "a", "domain"), get_as<double>(d, "b", "domain"));
        }
        if (kind == "polygon") {
            reject_unknown_keys(d, {"kind", "vertices"}, "polygon domain");
            auto vs = get_as<std::vector<std::vector<double>>>(d, "vertices", "domain");
            std::vector<Point2> pts;
            for (auto& v : vs) {
                if (v.size() != 2) throw ConfigError("polygon vertex must have 2 coordinates");
                pts.push_back({v[0], v[1]});
            }
            return ConvexPolygonDomain(std::move(pts));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid domain: ") + e.what());
    }
    throw ConfigError("domain kind must be 'interval' or 'polygon', got '" + kind + "'");
}

struct LoadedPotential {
    std::string id;
    std::variant<Potential1D, Potential2D> potential;

    bool is_1d() const { return std::holds_alternative<Potential1D>(potential); }
    const Potential1D& p1() const { return std::get<Potential1D>(potential); }
    const Potential2D& p2() const { return std::get<Potential2D>(potential); }
};

/// Accepts an inline object or a string path to a JSON file.
inline LoadedPotential parse_potential(const json& spec) {
    if (spec.is_string()) {
        auto loaded = parse_potential(read_json_file(spec.get<std::string>()));
        if (loaded.id.empty()) loaded.id = spec.get<std::string>();
        return loaded;
    }
    if (!spec.is_object()) throw ConfigError("potential must be an object or a file path");
    reject_unknown_keys(spec, {"id", "name", "params", "domain", "tabulated", "piecewise_constant"}, "potential");
    std::string id = spec.value("id", std::string());
    try {
        if (spec.contains("tabulated")) {
            const auto& t = spec.at("tabulated");
            reject_unknown_keys(t, {"x", "v"}, "tabulated");
            auto x = get_as<std::vector<double>>(t, "x", "tabulated");
            auto v = get_as<std::vector<double>>(t, "v", "tabulated");
            std::optional<IntervalDomain> dom;
            if (spec.contains("domain")) {
                auto d = parse_domain(spec.at("domain"));
                if (!std::holds_alternative<IntervalDomain>(d)) throw ConfigError("tabulated potentials are 1D");
                dom = std::get<IntervalDomain>(d);
            }
            return {id.empty() ? "tabulated" : id, make_tabulated(std::move(x), std::move(v), dom)};
        }
        if (spec.contains("piecewise_constant")) {
            const auto& p = spec.at("piecewise_constant");
            reject_unknown_keys(p, {"breaks", "values"}, "piecewise_constant");
            auto d = parse_domain(get_as<json>(spec, "domain", "potential"));
            if (!std::holds_alternative<IntervalDomain>(d)) throw ConfigError("piecewise-constant potentials are 1D");
            return {id.empty() ? "piecewise_constant" : id,
                    make_piecewise_constant(std::get<IntervalDomain>(d), get_as<std::vector<double>>(p, "breaks", "piecewise_constant"),
                                            get_as<std::vector<double>>(p, "values", "piecewise_constant"))};
        }
        auto name = get_as<std::string>(spec, "name", "potential");
        auto params = spec.contains("params") ? get_as<std::vector<double>>(spec, "params", "potential")
                                              : std::vector<double>{};
        auto d = parse_domain(get_as<json>(spec, "domain", "potential"));
        if (id.empty()) {
            id = name + "(";
            for (std::size_t i = 0; i < params.size(); ++i) id += (i ? "," : "") + fmt(params[i]);
            id += ")";
        }
        if (auto* iv = std::get_if<IntervalDomain>(&d)) return {id, make_named_potential(name, params, *iv)};
        return {id, make_named_potential(name, params, std::get<ConvexPolygonDomain>(d))};
    } catch (const PotentialError& e) {
        throw ConfigError(std::string("invalid potential: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output

inline json to_json(const SpectrumResult& r) {
    json j;
    j["bc"] = r.bc;
    j["count_requested"] = r.count_requested;
    j["method"] = r.discretization.method;
    j["grid_size"] = r.discretization.grid_size;
    j["mesh_level"] = r.discretization.mesh_level;
    j["extrapolation_order"] = r.discretization.extrapolation_order;
    j["eigenvalues"] = json::array();
    j["error_estimate"] = json::array();
    for (double v : r.eigenvalues) j["eigenvalues"].push_back(num(v));
    for (double v : r.error_estimate) j["error_estimate"].push_back(num(v));
    j["lowest_near_degenerate"] = r.lowest_near_degenerate;
    return j;
}

inline json to_json(const InequalityReport& r) {
    json j;
    j["theorem_id"] = r.theorem_id;
    j["subject"] = r.subject;
    j["applicable"] = r.applicable;
    j["reason"] = r.reason;
    j["expectation"] = r.lhs_label + " " + to_string(r.expectation) + " " + r.rhs_label;
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["margin"] = num(r.margin);
    j["error_budget"] = num(r.error_budget);
    j["verdict"] = to_string(r.verdict);
    if (r.reproduced) j["reproduced"] = *r.reproduced;
    json d = json::object();
    for (const auto& [k, v] : r.details) d[k] = num(v);
    j["details"] = d;
    return j;
}

inline std::string report_table(const std::vector<InequalityReport>& reports) {
    std::ostringstream os;
    char line[512];
    std::snprintf(line, sizeof line, "%-12s %-28s %-24s %-18s %-18s %s\n", "theorem", "subject", "claim", "margin",
                  "budget", "verdict");
    os << line;
    for (const auto& r : reports) {
        std::string claim = r.lhs_label.empty() ? "-" : r.lhs_label + " " + to_string(r.expectation) + " " + r.rhs_label;
        std::snprintf(line, sizeof line, "%-12s %-28s %-24s %-18s %-18s %s\n", r.theorem_id.c_str(),
                      r.subject.substr(0, 28).c_str(), claim.c_str(), fmt(r.margin).c_str(),
                      fmt(r.error_budget).c_str(), to_string(r.verdict).c_str());
        os << line;
    }
    return os.str();
}

} // namespace spectral_gap::io
