#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "charcurv/csv.hpp"

namespace charcurv {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One fully validated run description; every key has a default, unknown
/// keys are rejected.
struct RunConfig {
    std::string subcommand = "verify";  // run.subcommand
    std::uint64_t seed = 12345;         // run.seed
    int samples = 100;                  // run.samples

    std::string surface_kind = "sphere";  // surface.kind: sphere|cylinder1|cylinder2|ellipsoid
    double surface_R = 1.0;               // surface.R
    int surface_n = 1;                    // surface.n
    std::vector<double> surface_axes = {1.0, 1.0, 1.0, 1.0};  // surface.axes (length 2n+2)

    std::vector<double> traj_z0 = {1.0, 0.0, 0.0, 0.0};  // trajectory.z0
    double traj_t_end = 6.28318530717958648;             // trajectory.t_end
    double traj_dt = 1e-3;                               // trajectory.dt

    std::string domain_kind = "ball";  // domain.kind: box|ball|ellipsoid
    std::vector<double> domain_center = {0.0, 0.0, 0.0};
    double domain_radius = 1.0;
    std::vector<double> domain_min = {0.0, 0.0, 0.0};
    std::vector<double> domain_max = {1.0, 1.0, 1.0};
    std::vector<double> domain_axes = {1.0, 1.0, 1.0};

    std::string k_kind = "constant";  // k.kind: constant|affine
    double k_value = 0.0;             // k.value
    double k_slope = 0.0;             // k.slope (affine: k = value + slope * r)

    std::string phi_kind = "constant";  // phi.kind: constant|affine|hemisphere
    double phi_value = 0.0;
    std::vector<double> phi_coeffs = {0.0, 0.0, 0.0, 0.0};  // ax,ay,at,b
    double phi_R = 2.0;

    double solve_h = 0.0625;  // solve.h
    std::vector<double> solve_eps_schedule = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    double solve_theta = 0.7;
    int solve_max_iters = 200;
    double solve_tol = 1e-8;
    double solve_linear_tol = 1e-8;
    double solve_grad_threshold = 0.0;  // 0 = auto

    double ce_R = 1.0;    // counterexample.R
    double ce_h = 0.125;  // counterexample.h
};

namespace detail {

inline double parse_double(const std::string& s, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw config_error("invalid number for key '" + key + "': '" + s + "'");
    if (!std::isfinite(v)) throw config_error("non-finite value for key '" + key + "'");
    return v;
}

inline long long parse_int(const std::string& s, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw config_error("invalid integer for key '" + key + "': '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || s.find('-') != std::string::npos)
        throw config_error("invalid unsigned integer for key '" + key + "': '" + s + "'");
    return v;
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw config_error("empty list entry for key '" + key + "'");
        out.push_back(parse_double(item.substr(b, e - b + 1), key));
    }
    if (out.empty()) throw config_error("empty list for key '" + key + "'");
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt17(v[i]);
    }
    return out;
}

}  // namespace detail

inline void validate_config(const RunConfig& cfg) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw config_error("invalid value for key '" + key + "': " + why);
    };
    static const std::set<std::string> subcommands = {"verify",  "curvature", "trajectory",
                                                      "solve",   "probe",     "counterexample"};
    if (!subcommands.count(cfg.subcommand)) fail("run.subcommand", "unknown subcommand '" + cfg.subcommand + "'");
    if (cfg.samples < 1) fail("run.samples", "must be >= 1");

    static const std::set<std::string> surfaces = {"sphere", "cylinder1", "cylinder2", "ellipsoid"};
    if (!surfaces.count(cfg.surface_kind)) fail("surface.kind", "unknown surface '" + cfg.surface_kind + "'");
    if (cfg.surface_R <= 0.0) fail("surface.R", "must be positive");
    if (cfg.surface_n < 1) fail("surface.n", "must be >= 1");
    if (cfg.surface_kind == "ellipsoid" &&
        cfg.surface_axes.size() != static_cast<std::size_t>(2 * cfg.surface_n + 2))
        fail("surface.axes", "need 2n+2 semi-axes");
    for (double a : cfg.surface_axes)
        if (a <= 0.0) fail("surface.axes", "semi-axes must be positive");
    if ((cfg.surface_kind == "cylinder1" || cfg.surface_kind == "cylinder2") && cfg.surface_n != 1)
        fail("surface.n", "cylinder examples are defined for n = 1");

    if (cfg.traj_z0.size() < 4 || cfg.traj_z0.size() % 2 != 0)
        fail("trajectory.z0", "length must be even and >= 4");
    if (cfg.traj_t_end <= 0.0) fail("trajectory.t_end", "must be positive");
    if (cfg.traj_dt <= 0.0) fail("trajectory.dt", "must be positive");

    static const std::set<std::string> domains = {"box", "ball", "ellipsoid"};
    if (!domains.count(cfg.domain_kind)) fail("domain.kind", "unknown domain '" + cfg.domain_kind + "'");
    if (cfg.domain_radius <= 0.0) fail("domain.radius", "must be positive");
    if (cfg.domain_center.size() != 3) fail("domain.center", "need 3 components");
    if (cfg.domain_min.size() != 3 || cfg.domain_max.size() != 3) fail("domain.min", "need 3 components");
    for (int a = 0; a < 3; ++a)
        if (cfg.domain_min[a] >= cfg.domain_max[a]) fail("domain.max", "box must have positive extent");
    if (cfg.domain_axes.size() != 3) fail("domain.axes", "need 3 components");
    for (double a : cfg.domain_axes)
        if (a <= 0.0) fail("domain.axes", "semi-axes must be positive");

    if (cfg.k_kind != "constant" && cfg.k_kind != "affine") fail("k.kind", "unknown kind '" + cfg.k_kind + "'");
    if (cfg.k_slope < 0.0) fail("k.slope", "must be nonnegative");

    static const std::set<std::string> phis = {"constant", "affine", "hemisphere"};
    if (!phis.count(cfg.phi_kind)) fail("phi.kind", "unknown kind '" + cfg.phi_kind + "'");
    if (cfg.phi_coeffs.size() != 4) fail("phi.coeffs", "need ax,ay,at,b");
    if (cfg.phi_R <= 0.0) fail("phi.R", "must be positive");

    if (cfg.solve_h <= 0.0) fail("solve.h", "must be positive");
    if (cfg.solve_eps_schedule.empty()) fail("solve.eps_schedule", "must be nonempty");
    for (std::size_t i = 0; i < cfg.solve_eps_schedule.size(); ++i) {
        if (cfg.solve_eps_schedule[i] <= 0.0) fail("solve.eps_schedule", "entries must be positive");
        if (i > 0 && cfg.solve_eps_schedule[i] >= cfg.solve_eps_schedule[i - 1])
            fail("solve.eps_schedule", "must be strictly decreasing");
    }
    if (cfg.solve_theta <= 0.0 || cfg.solve_theta > 1.0) fail("solve.theta", "must be in (0, 1]");
    if (cfg.solve_max_iters < 1) fail("solve.max_iters", "must be >= 1");
    if (cfg.solve_tol <= 0.0) fail("solve.tol", "must be positive");
    if (cfg.solve_linear_tol <= 0.0) fail("solve.linear_tol", "must be positive");
    if (cfg.solve_grad_threshold < 0.0) fail("solve.grad_threshold", "must be >= 0 (0 = auto)");

    if (cfg.ce_R <= 0.0) fail("counterexample.R", "must be positive");
    if (cfg.ce_h <= 0.0) fail("counterexample.h", "must be positive");
}

/// Parses a "key = value" document ('#' comments, dot-namespaced keys).
/// Unknown keys, duplicates and malformed lines are errors carrying the line
/// number; validation errors name the key.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::string> seen;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("parse error at line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("parse error at line " + std::to_string(lineno) + ": empty key");
        if (seen.count(key))
            throw config_error("duplicate key '" + key + "' at line " + std::to_string(lineno));
        seen[key] = value;

        using detail::parse_double;
        using detail::parse_int;
        using detail::parse_list;
        if (key == "run.subcommand") cfg.subcommand = value;
        else if (key == "run.seed") cfg.seed = detail::parse_uint(value, key);
        else if (key == "run.samples") cfg.samples = static_cast<int>(parse_int(value, key));
        else if (key == "surface.kind") cfg.surface_kind = value;
        else if (key == "surface.R") cfg.surface_R = parse_double(value, key);
        else if (key == "surface.n") cfg.surface_n = static_cast<int>(parse_int(value, key));
        else if (key == "surface.axes") cfg.surface_axes = parse_list(value, key);
        else if (key == "trajectory.z0") cfg.traj_z0 = parse_list(value, key);
        else if (key == "trajectory.t_end") cfg.traj_t_end = parse_double(value, key);
        else if (key == "trajectory.dt") cfg.traj_dt = parse_double(value, key);
        else if (key == "domain.kind") cfg.domain_kind = value;
        else if (key == "domain.center") cfg.domain_center = parse_list(value, key);
        else if (key == "domain.radius") cfg.domain_radius = parse_double(value, key);
        else if (key == "domain.min") cfg.domain_min = parse_list(value, key);
        else if (key == "domain.max") cfg.domain_max = parse_list(value, key);
        else if (key == "domain.axes") cfg.domain_axes = parse_list(value, key);
        else if (key == "k.kind") cfg.k_kind = value;
        else if (key == "k.value") cfg.k_value = parse_double(value, key);
        else if (key == "k.slope") cfg.k_slope = parse_double(value, key);
        else if (key == "phi.kind") cfg.phi_kind = value;
        else if (key == "phi.value") cfg.phi_value = parse_double(value, key);
        else if (key == "phi.coeffs") cfg.phi_coeffs = parse_list(value, key);
        else if (key == "phi.R") cfg.phi_R = parse_double(value, key);
        else if (key == "solve.h") cfg.solve_h = parse_double(value, key);
        else if (key == "solve.eps_schedule") cfg.solve_eps_schedule = parse_list(value, key);
        else if (key == "solve.theta") cfg.solve_theta = parse_double(value, key);
        else if (key == "solve.max_iters") cfg.solve_max_iters = static_cast<int>(parse_int(value, key));
        else if (key == "solve.tol") cfg.solve_tol = parse_double(value, key);
        else if (key == "solve.linear_tol") cfg.solve_linear_tol = parse_double(value, key);
        else if (key == "solve.grad_threshold") cfg.solve_grad_threshold = parse_double(value, key);
        else if (key == "counterexample.R") cfg.ce_R = parse_double(value, key);
        else if (key == "counterexample.h") cfg.ce_h = parse_double(value, key);
        else
            throw config_error("unknown key '" + key + "' at line " + std::to_string(lineno));
    }
    validate_config(cfg);
    return cfg;
}

/// Canonical emission: every key, 17-significant-digit numbers. Parsing the
/// result reproduces the config exactly.
inline std::string emit_config(const RunConfig& cfg) {
    using detail::join;
    std::ostringstream os;
    os << "run.subcommand = " << cfg.subcommand << '\n';
    os << "run.seed = " << cfg.seed << '\n';
    os << "run.samples = " << cfg.samples << '\n';
    os << "surface.kind = " << cfg.surface_kind << '\n';
    os << "surface.R = " << fmt17(cfg.surface_R) << '\n';
    os << "surface.n = " << cfg.surface_n << '\n';
    os << "surface.axes = " << join(cfg.surface_axes) << '\n';
    os << "trajectory.z0 = " << join(cfg.traj_z0) << '\n';
    os << "trajectory.t_end = " << fmt17(cfg.traj_t_end) << '\n';
    os << "trajectory.dt = " << fmt17(cfg.traj_dt) << '\n';
    os << "domain.kind = " << cfg.domain_kind << '\n';
    os << "domain.center = " << join(cfg.domain_center) << '\n';
    os << "domain.radius = " << fmt17(cfg.domain_radius) << '\n';
    os << "domain.min = " << join(cfg.domain_min) << '\n';
    os << "domain.max = " << join(cfg.domain_max) << '\n';
    os << "domain.axes = " << join(cfg.domain_axes) << '\n';
    os << "k.kind = " << cfg.k_kind << '\n';
    os << "k.value = " << fmt17(cfg.k_value) << '\n';
    os << "k.slope = " << fmt17(cfg.k_slope) << '\n';
    os << "phi.kind = " << cfg.phi_kind << '\n';
    os << "phi.value = " << fmt17(cfg.phi_value) << '\n';
    os << "phi.coeffs = " << join(cfg.phi_coeffs) << '\n';
    os << "phi.R = " << fmt17(cfg.phi_R) << '\n';
    os << "solve.h = " << fmt17(cfg.solve_h) << '\n';
    os << "solve.eps_schedule = " << join(cfg.solve_eps_schedule) << '\n';
    os << "solve.theta = " << fmt17(cfg.solve_theta) << '\n';
    os << "solve.max_iters = " << cfg.solve_max_iters << '\n';
    os << "solve.tol = " << fmt17(cfg.solve_tol) << '\n';
    os << "solve.linear_tol = " << fmt17(cfg.solve_linear_tol) << '\n';
    os << "solve.grad_threshold = " << fmt17(cfg.solve_grad_threshold) << '\n';
    os << "counterexample.R = " << fmt17(cfg.ce_R) << '\n';
    os << "counterexample.h = " << fmt17(cfg.ce_h) << '\n';
    return os.str();
}

}  // namespace charcurv
