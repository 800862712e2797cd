#pragma once

// Run configuration: one "key = value" per line, '#' starts a comment.
// Unknown keys, duplicates, malformed values and violated invariants are
// errors that name the offending line.

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "robinfb/certificates.hpp"
#include "robinfb/field_io.hpp"
#include "robinfb/outer_loop.hpp"
#include "robinfb/presets.hpp"

namespace robinfb {

enum class Preset { slab, square_symmetric, custom };

inline const char* to_string(Preset p) {
    switch (p) {
    case Preset::slab: return "slab";
    case Preset::square_symmetric: return "square_symmetric";
    case Preset::custom: return "custom";
    }
    return "?";
}

inline const char* to_string(LateralBc b) { return b == LateralBc::periodic ? "periodic" : "dirichlet"; }

struct RunConfig {
    Preset preset = Preset::square_symmetric;
    double beta = 1.0;
    double h = 0.03125;
    double slab_a = 0.5;
    double slab_width = 1.0;
    double square_side = 1.0;
    int custom_n1 = 0;
    int custom_n2 = 0;
    double custom_x0 = 0.0;
    double custom_y0 = 0.0;
    LateralBc custom_lateral = LateralBc::dirichlet;
    std::string custom_mask;
    double v = 1.0; ///< constant boundary data
    double eps0 = 0.5;
    double eps_min = 1e-3;
    double rho = 0.5;
    double tol_outer = 1e-9;
    int max_outer = 50;
    double tol_cg = 1e-10;
    int max_iter = 0;
    std::string output_dir = "out";
    std::vector<std::string> certificates = certificate_names();
    std::uint64_t seed = 0;
    double tol_cert = 1e-6;
    double residual_envelope = 10.0; ///< residual records pass below this multiple of h
    double holder_delta = 0.1;
    int curvature_half_width = 4;
    double c_max = 1.0;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw InvalidProblem("expected a finite number, got \"" + s + "\"");
    return v;
}

inline long long parse_integer(const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno == ERANGE) throw InvalidProblem("expected an integer, got \"" + s + "\"");
    return v;
}

inline int parse_int(const std::string& s) {
    const long long v = parse_integer(s);
    if (v < INT32_MIN || v > INT32_MAX) throw InvalidProblem("integer out of range: " + s);
    return static_cast<int>(v);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct ConfigKey {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    bool custom_only = false;
};

inline std::string fmt_int(long long v) { return std::to_string(v); }

/// Shortest decimal that reads back to the same double.
inline std::string fmt_real(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline const std::vector<ConfigKey>& config_keys() {
    using C = RunConfig;
    auto real = [](double C::*m) {
        return std::pair{std::function<void(C&, const std::string&)>(
                             [m](C& c, const std::string& s) { c.*m = parse_double(s); }),
                         std::function<std::string(const C&)>([m](const C& c) { return fmt_real(c.*m); })};
    };
    auto integer = [](int C::*m) {
        return std::pair{std::function<void(C&, const std::string&)>(
                             [m](C& c, const std::string& s) { c.*m = parse_int(s); }),
                         std::function<std::string(const C&)>([m](const C& c) { return fmt_int(c.*m); })};
    };
    auto key = [](const char* name, auto accessors, bool custom = false) {
        return ConfigKey{name, accessors.first, accessors.second, custom};
    };
    static const std::vector<ConfigKey> keys = [&] {
        std::vector<ConfigKey> k;
        k.push_back({"preset",
                     [](C& c, const std::string& s) {
                         if (s == "slab") c.preset = Preset::slab;
                         else if (s == "square_symmetric") c.preset = Preset::square_symmetric;
                         else if (s == "custom") c.preset = Preset::custom;
                         else throw InvalidProblem("preset must be slab, square_symmetric or custom");
                     },
                     [](const C& c) { return std::string(to_string(c.preset)); }});
        k.push_back(key("beta", real(&C::beta)));
        k.push_back(key("grid.h", real(&C::h)));
        k.push_back(key("slab.a", real(&C::slab_a)));
        k.push_back(key("slab.width", real(&C::slab_width)));
        k.push_back(key("square.side", real(&C::square_side)));
        k.push_back(key("custom.n1", integer(&C::custom_n1), true));
        k.push_back(key("custom.n2", integer(&C::custom_n2), true));
        k.push_back(key("custom.x0", real(&C::custom_x0), true));
        k.push_back(key("custom.y0", real(&C::custom_y0), true));
        k.push_back({"custom.lateral",
                     [](C& c, const std::string& s) {
                         if (s == "periodic") c.custom_lateral = LateralBc::periodic;
                         else if (s == "dirichlet") c.custom_lateral = LateralBc::dirichlet;
                         else throw InvalidProblem("custom.lateral must be dirichlet or periodic");
                     },
                     [](const C& c) { return std::string(to_string(c.custom_lateral)); }, true});
        k.push_back({"custom.mask", [](C& c, const std::string& s) { c.custom_mask = s; },
                     [](const C& c) { return c.custom_mask; }, true});
        k.push_back(key("v", real(&C::v)));
        k.push_back(key("eps0", real(&C::eps0)));
        k.push_back(key("eps_min", real(&C::eps_min)));
        k.push_back(key("rho", real(&C::rho)));
        k.push_back(key("tol_outer", real(&C::tol_outer)));
        k.push_back(key("max_outer", integer(&C::max_outer)));
        k.push_back(key("tol_cg", real(&C::tol_cg)));
        k.push_back(key("max_iter", integer(&C::max_iter)));
        k.push_back({"output_dir", [](C& c, const std::string& s) { c.output_dir = s; },
                     [](const C& c) { return c.output_dir; }});
        k.push_back({"certificates", [](C& c, const std::string& s) { c.certificates = split_list(s); },
                     [](const C& c) {
                         std::string out;
                         for (const auto& n : c.certificates) out += (out.empty() ? "" : ",") + n;
                         return out;
                     }});
        k.push_back({"seed",
                     [](C& c, const std::string& s) {
                         std::uint64_t v = 0;
                         const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                         if (s.empty() || ec != std::errc() || end != s.data() + s.size())
                             throw InvalidProblem("seed must be an unsigned integer, got \"" + s + "\"");
                         c.seed = v;
                     },
                     [](const C& c) { return std::to_string(c.seed); }});
        k.push_back(key("tol_cert", real(&C::tol_cert)));
        k.push_back(key("residual_envelope", real(&C::residual_envelope)));
        k.push_back(key("holder.delta", real(&C::holder_delta)));
        k.push_back(key("curvature.half_width", integer(&C::curvature_half_width)));
        k.push_back(key("almost_minimality.c_max", real(&C::c_max)));
        return k;
    }();
    return keys;
}

} // namespace detail

/// Checks invariants; `lines` maps keys to the line that set them.
inline void validate(const RunConfig& c, const std::map<std::string, int>& lines = {}) {
    auto fail = [&](const std::string& what, std::initializer_list<const char*> keys) {
        int line = 0;
        for (const char* k : keys) {
            auto it = lines.find(k);
            if (it != lines.end()) line = std::max(line, it->second);
        }
        throw ConfigError(what, line);
    };
    if (!(c.beta >= 0.0)) fail("beta must be non-negative", {"beta"});
    if (!(c.h > 0.0)) fail("grid.h must be positive", {"grid.h"});
    if (!(c.v > 0.0)) fail("boundary value v must be positive", {"v"});
    if (!(c.rho > 0.0 && c.rho < 1.0)) fail("rho must lie in (0,1)", {"rho"});
    if (!(c.eps_min > 0.0)) fail("eps_min must be positive", {"eps_min"});
    if (!(c.eps_min <= c.eps0)) fail("eps_min must not exceed eps0", {"eps_min", "eps0"});
    if (!(c.eps0 < c.v)) fail("eps0 must be below the boundary minimum v", {"eps0", "v"});
    if (!(c.tol_outer > 0.0)) fail("tol_outer must be positive", {"tol_outer"});
    if (c.max_outer < 1) fail("max_outer must be at least 1", {"max_outer"});
    if (!(c.tol_cg > 0.0)) fail("tol_cg must be positive", {"tol_cg"});
    if (c.max_iter < 0) fail("max_iter must be non-negative", {"max_iter"});
    if (c.output_dir.empty()) fail("output_dir must not be empty", {"output_dir"});
    for (const auto& n : c.certificates)
        if (std::find(certificate_names().begin(), certificate_names().end(), n) == certificate_names().end())
            fail("unknown certificate " + n, {"certificates"});
    if (!(c.tol_cert >= 0.0)) fail("tol_cert must be non-negative", {"tol_cert"});
    if (!(c.residual_envelope > 0.0)) fail("residual_envelope must be positive", {"residual_envelope"});
    if (!(c.holder_delta > 2.0 * c.h)) fail("holder.delta must exceed 2 grid.h", {"holder.delta", "grid.h"});
    if (c.curvature_half_width < 2) fail("curvature.half_width must be at least 2", {"curvature.half_width"});
    if (!(c.c_max >= 0.0)) fail("almost_minimality.c_max must be non-negative", {"almost_minimality.c_max"});
    try {
        switch (c.preset) {
        case Preset::slab:
            if (!(c.slab_a > 0.0)) fail("slab.a must be positive", {"slab.a"});
            if (!(c.slab_width > 0.0)) fail("slab.width must be positive", {"slab.width"});
            cells_spanning(2.0 * c.slab_a, c.h, "slab thickness 2a");
            cells_spanning(c.slab_width, c.h, "slab width");
            break;
        case Preset::square_symmetric:
            if (!(c.square_side > 0.0)) fail("square.side must be positive", {"square.side"});
            if (cells_spanning(c.square_side, c.h, "square side") % 2 != 0)
                fail("square.side must span an even number of cells", {"square.side", "grid.h"});
            break;
        case Preset::custom:
            if (c.custom_n1 < 2 || c.custom_n2 < 2)
                fail("custom.n1 and custom.n2 must be at least 2", {"custom.n1", "custom.n2"});
            if (c.custom_mask.empty()) fail("custom.mask is required", {"custom.mask", "preset"});
            break;
        }
    } catch (const InvalidProblem& e) {
        fail(e.what(), {"grid.h", "slab.a", "slab.width", "square.side"});
    }
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::map<std::string, int> lines;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected \"key = value\"", line);
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        const auto& keys = detail::config_keys();
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return key == k.name; });
        if (it == keys.end()) throw ConfigError("unknown key \"" + key + "\"", line);
        if (lines.count(key)) throw ConfigError("duplicate key \"" + key + "\"", line);
        lines[key] = line;
        try {
            it->set(c, value);
        } catch (const InvalidProblem& e) {
            throw ConfigError(key + ": " + e.what(), line);
        }
    }
    if (c.preset != Preset::custom)
        for (const auto& k : detail::config_keys())
            if (k.custom_only && lines.count(k.name))
                throw ConfigError(std::string(k.name) + " requires preset = custom", lines[k.name]);
    validate(c, lines);
    return c;
}

/// Canonical text; parse_config(to_text(c)) == c.
inline std::string to_text(const RunConfig& c) {
    std::string out;
    for (const auto& k : detail::config_keys()) {
        if (k.custom_only && c.preset != Preset::custom) continue;
        out += std::string(k.name) + " = " + k.get(c) + "\n";
    }
    return out;
}

inline Domain make_domain(const RunConfig& c) {
    switch (c.preset) {
    case Preset::slab: return slab_domain(c.slab_a, c.h, c.slab_width);
    case Preset::square_symmetric: return square_symmetric_domain(c.square_side, c.h);
    case Preset::custom: {
        Grid g(c.custom_n1, c.custom_n2, c.h, {c.custom_x0, c.custom_y0}, c.custom_lateral);
        auto in = open_input(c.custom_mask);
        return Domain(g, read_mask(in, g));
    }
    }
    throw InvalidProblem("unknown preset");
}

inline SolveConfig make_solve_config(const RunConfig& c, const Domain& dom) {
    SolveConfig s;
    s.beta = c.beta;
    s.boundary = ScalarField(dom.grid(), c.v);
    s.eps0 = c.eps0;
    s.eps_min = c.eps_min;
    s.rho = c.rho;
    s.tol_outer = c.tol_outer;
    s.max_outer = c.max_outer;
    s.tol_cg = c.tol_cg;
    s.max_iter = c.max_iter;
    return s;
}

inline CertificateOptions make_certificate_options(const RunConfig& c) {
    CertificateOptions o;
    o.selection = c.certificates;
    o.tol_cert = c.tol_cert;
    o.seed = c.seed;
    o.residual_envelope_factor = c.residual_envelope;
    o.holder_delta = c.holder_delta;
    o.curvature_half_width = c.curvature_half_width;
    o.c_max = c.c_max;
    return o;
}

} // namespace robinfb
