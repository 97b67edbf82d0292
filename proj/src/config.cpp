#include "gpq/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "gpq/errors.hpp"
#include "gpq/io.hpp"

namespace gpq {

Side RunConfig::resolved_side() const { return side ? *side : default_side(c); }

BcMode RunConfig::resolved_bc() const {
    if (bc) return *bc;
    if (ic_kind == "dark") return BcMode::pinned_exact;
    if (ic_kind == "uniform") return BcMode::neumann;
    return BcMode::pinned_static;
}

SchemeConfig RunConfig::scheme() const {
    SchemeConfig s;
    s.dt = dt;
    s.picard_tol = picard_tol;
    s.bc = resolved_bc();
    s.laplacian_order = laplacian_order;
    return s;
}

FitOptions RunConfig::fit_options() const {
    FitOptions f;
    f.speed_cap = speed_cap;
    f.newton_tol = newton_tol;
    f.side = ic_kind == "dark" ? resolved_side() : Side::minus;
    return f;
}

namespace {
[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw Error(Errc::ConfigError, key + ": " + why);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double num(const std::string& key, const std::string& v) {
    try {
        return parse_double(v);
    } catch (const Error&) {
        bad(key, "expected a number, got '" + v + "'");
    }
}

long integer(const std::string& key, const std::string& v) {
    long out = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m = {
        {"grid.L", [](RunConfig& c, auto& k, auto& v) { c.L = num(k, v); }},
        {"grid.N", [](RunConfig& c, auto& k, auto& v) { c.N = static_cast<int>(integer(k, v)); }},
        {"time.dt", [](RunConfig& c, auto& k, auto& v) { c.dt = num(k, v); }},
        {"time.T", [](RunConfig& c, auto& k, auto& v) { c.T = num(k, v); }},
        {"ic.kind", [](RunConfig& c, auto&, auto& v) { c.ic_kind = v; }},
        {"ic.c", [](RunConfig& c, auto& k, auto& v) { c.c = num(k, v); }},
        {"ic.side",
         [](RunConfig& c, auto& k, auto& v) {
             if (v != "minus" && v != "plus") bad(k, "expected minus or plus");
             c.side = side_from_string(v);
         }},
        {"ic.eps", [](RunConfig& c, auto& k, auto& v) { c.eps = num(k, v); }},
        {"ic.seed",
         [](RunConfig& c, auto& k, auto& v) {
             std::uint64_t s = 0;
             auto r = std::from_chars(v.data(), v.data() + v.size(), s);
             if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(k, "expected an unsigned integer");
             c.seed = s;
         }},
        {"ic.a0", [](RunConfig& c, auto& k, auto& v) { c.a0 = num(k, v); }},
        {"ic.theta0", [](RunConfig& c, auto& k, auto& v) { c.theta0 = num(k, v); }},
        {"ic.u0", [](RunConfig& c, auto& k, auto& v) { c.u0 = num(k, v); }},
        {"modulation.speed_cap", [](RunConfig& c, auto& k, auto& v) { c.speed_cap = num(k, v); }},
        {"tolerances.newton", [](RunConfig& c, auto& k, auto& v) { c.newton_tol = num(k, v); }},
        {"tolerances.picard", [](RunConfig& c, auto& k, auto& v) { c.picard_tol = num(k, v); }},
        {"tolerances.verify", [](RunConfig& c, auto& k, auto& v) { c.verify_tol = num(k, v); }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.out_dir = v; }},
        {"scheme.bc",
         [](RunConfig& c, auto& k, auto& v) {
             try {
                 c.bc = bc_from_string(v);
             } catch (const Error&) {
                 bad(k, "expected pinned_static, pinned_exact or neumann");
             }
         }},
        {"scheme.laplacian_order",
         [](RunConfig& c, auto& k, auto& v) { c.laplacian_order = static_cast<int>(integer(k, v)); }},
        {"spectrum.k", [](RunConfig& c, auto& k, auto& v) { c.spectrum_k = static_cast<int>(integer(k, v)); }},
        {"modulate.snapshot", [](RunConfig& c, auto&, auto& v) { c.snapshot = v; }},
    };
    return m;
}
}  // namespace

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end()) bad(key, "unknown key");
        if (val.empty()) bad(key, "empty value");
        it->second(cfg, key, val);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::ConfigError, "cannot open config file " + path);
    return parse_config(f);
}

void validate(const RunConfig& c) {
    if (!(c.L > 0.0) || !std::isfinite(c.L)) bad("grid.L", "must be positive");
    if (c.N < 9 || c.N % 2 == 0) bad("grid.N", "must be odd and >= 9");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) bad("time.dt", "must be positive");
    if (!(c.T >= 0.0) || !std::isfinite(c.T)) bad("time.T", "must be >= 0");
    if (c.ic_kind != "black" && c.ic_kind != "dark" && c.ic_kind != "uniform" && c.ic_kind != "perturbed_black")
        bad("ic.kind", "expected black, dark, uniform or perturbed_black");
    if (!(c.speed_cap > 0.0 && c.speed_cap < 2.0)) bad("modulation.speed_cap", "must lie in (0, 2)");
    if (!std::isfinite(c.c) || std::abs(c.c) >= 2.0) bad("ic.c", "|c| must be < 2");
    if (c.ic_kind == "dark" && std::abs(c.c) > c.speed_cap) bad("ic.c", "|c| exceeds modulation.speed_cap");
    if (!(c.eps >= 0.0 && c.eps <= 0.05)) bad("ic.eps", "must lie in [0, 0.05]");
    if (!std::isfinite(c.a0)) bad("ic.a0", "must be finite");
    if (!std::isfinite(c.theta0)) bad("ic.theta0", "must be finite");
    if (!(c.u0 > 0.0) || !std::isfinite(c.u0)) bad("ic.u0", "must be positive");
    if (!(c.newton_tol > 0.0)) bad("tolerances.newton", "must be positive");
    if (!(c.picard_tol > 0.0)) bad("tolerances.picard", "must be positive");
    if (c.verify_tol && !(*c.verify_tol > 0.0)) bad("tolerances.verify", "must be positive");
    if (c.laplacian_order != 2 && c.laplacian_order != 4) bad("scheme.laplacian_order", "must be 2 or 4");
    if (c.spectrum_k < 1 || c.spectrum_k > 10) bad("spectrum.k", "must lie in [1, 10]");
    if (c.out_dir.empty()) bad("output.dir", "must not be empty");
    if (c.bc == BcMode::pinned_exact && c.ic_kind == "perturbed_black")
        bad("scheme.bc", "pinned_exact needs an exact solution, which perturbed_black lacks");
}

}  // namespace gpq
