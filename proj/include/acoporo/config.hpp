#ifndef ACOPORO_CONFIG_HPP
#define ACOPORO_CONFIG_HPP

// Run configuration. JSON keys carry their SI unit as a suffix.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <acoporo/errors.hpp>
#include <acoporo/green.hpp>
#include <acoporo/media.hpp>
#include <acoporo/quadrature.hpp>

namespace acoporo
{

struct SourceConfig {
    double h = 500.0;
    double f0 = 15.0;
    double gain = 1.0;
    bool operator==(const SourceConfig &) const = default;
};

struct TimeConfig {
    double t_end = 1.5;
    double dt = 1e-3;
    bool operator==(const TimeConfig &) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::string format = "csv"; // csv | json
    bool emit_green = false;
    bool operator==(const OutputConfig &) const = default;
};

struct VerifyConfig {
    std::vector<double> s_values{20.0, 40.0};
    int grid_n = 2560;               // largest oracle grid per axis
    int time_nodes_per_segment = 200; // Laplace quadrature of the traces
    int quadrature_n = 2000;          // slowness nodes for the traced values
    bool operator==(const VerifyConfig &) const = default;
};

struct RunConfig {
    AcousticMedium acoustic{1020.0, 1500.0};
    PoroelasticParams poro{2500.0, 1020.0, 0.4, 2.0, 16.0554e9, 2.295e9, 10e9, 9.63342e9};
    SourceConfig source;
    std::vector<Receiver> receivers{{400.0, 0.0, 533.0}, {400.0, 0.0, -533.0}};
    TimeConfig time;
    QuadratureConfig quadrature{2000, false};
    OutputConfig output;
    VerifyConfig verify;
};

inline bool operator==(const AcousticMedium &a, const AcousticMedium &b)
{
    return a.rho_plus == b.rho_plus && a.v_plus == b.v_plus;
}
inline bool operator==(const PoroelasticParams &a, const PoroelasticParams &b)
{
    return a.rho_s == b.rho_s && a.rho_f == b.rho_f && a.phi == b.phi && a.a == b.a && a.K_s == b.K_s &&
           a.K_f == b.K_f && a.K_b == b.K_b && a.mu == b.mu;
}
inline bool operator==(const Receiver &a, const Receiver &b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
inline bool operator==(const QuadratureConfig &a, const QuadratureConfig &b)
{
    return a.n == b.n && a.sin_substitution == b.sin_substitution;
}
inline bool operator==(const RunConfig &a, const RunConfig &b)
{
    return a.acoustic == b.acoustic && a.poro == b.poro && a.source == b.source && a.receivers == b.receivers &&
           a.time == b.time && a.quadrature == b.quadrature && a.output == b.output && a.verify == b.verify;
}

/// The two-receiver experiment shipped as the default fixture.
inline RunConfig fixture_config() { return RunConfig{}; }

inline nlohmann::ordered_json to_json(const RunConfig &c)
{
    nlohmann::ordered_json j;
    j["acoustic"] = {{"rho_plus_kg_m3", c.acoustic.rho_plus}, {"v_plus_m_s", c.acoustic.v_plus}};
    j["poroelastic"] = {{"rho_s_kg_m3", c.poro.rho_s}, {"rho_f_kg_m3", c.poro.rho_f},
                        {"porosity", c.poro.phi},       {"tortuosity", c.poro.a},
                        {"K_s_Pa", c.poro.K_s},         {"K_f_Pa", c.poro.K_f},
                        {"K_b_Pa", c.poro.K_b},         {"mu_Pa", c.poro.mu},
                        {"viscosity_Pa_s", 0.0}};
    j["source"] = {{"h_m", c.source.h}, {"f0_Hz", c.source.f0}, {"gain", c.source.gain}};
    auto rs = nlohmann::ordered_json::array();
    for (const auto &r : c.receivers) {
        rs.push_back({{"x_m", r.x}, {"y_m", r.y}, {"z_m", r.z}});
    }
    j["receivers"] = rs;
    j["time"] = {{"t_end_s", c.time.t_end}, {"dt_s", c.time.dt}};
    j["quadrature"] = {{"n", c.quadrature.n}, {"sin_substitution", c.quadrature.sin_substitution}};
    j["output"] = {{"directory", c.output.directory}, {"format", c.output.format}, {"emit_green", c.output.emit_green}};
    j["verify"] = {{"s_values_1_s", c.verify.s_values},
                   {"grid_n", c.verify.grid_n},
                   {"time_nodes_per_segment", c.verify.time_nodes_per_segment},
                   {"quadrature_n", c.verify.quadrature_n}};
    return j;
}

namespace detail
{

template <class T> T get_or(const nlohmann::json &j, const char *key, T fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline double need(const nlohmann::json &j, const char *section, const char *key)
{
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing key '") + section + "." + key + "'");
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("'") + section + "." + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

inline const nlohmann::json &section(const nlohmann::json &j, const char *name)
{
    if (!j.contains(name) || !j.at(name).is_object()) {
        throw ConfigError(std::string("missing section '") + name + "'");
    }
    return j.at(name);
}

} // namespace detail

/// Parses and checks a configuration. Throws ConfigError.
inline RunConfig config_from_json(const nlohmann::json &j)
{
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    RunConfig c;
    const auto &ac = detail::section(j, "acoustic");
    c.acoustic.rho_plus = detail::need(ac, "acoustic", "rho_plus_kg_m3");
    c.acoustic.v_plus = detail::need(ac, "acoustic", "v_plus_m_s");

    const auto &po = detail::section(j, "poroelastic");
    c.poro.rho_s = detail::need(po, "poroelastic", "rho_s_kg_m3");
    c.poro.rho_f = detail::need(po, "poroelastic", "rho_f_kg_m3");
    c.poro.phi = detail::need(po, "poroelastic", "porosity");
    c.poro.a = detail::need(po, "poroelastic", "tortuosity");
    c.poro.K_s = detail::need(po, "poroelastic", "K_s_Pa");
    c.poro.K_f = detail::need(po, "poroelastic", "K_f_Pa");
    c.poro.K_b = detail::need(po, "poroelastic", "K_b_Pa");
    c.poro.mu = detail::need(po, "poroelastic", "mu_Pa");
    if (detail::get_or<double>(po, "viscosity_Pa_s", 0.0) != 0.0) {
        throw ConfigError("only the inviscid poroelastic medium is supported: viscosity_Pa_s must be 0");
    }

    const auto &src = detail::section(j, "source");
    c.source.h = detail::need(src, "source", "h_m");
    c.source.f0 = detail::need(src, "source", "f0_Hz");
    c.source.gain = detail::get_or<double>(src, "gain", 1.0);

    if (!j.contains("receivers") || !j.at("receivers").is_array()) {
        throw ConfigError("missing array 'receivers'");
    }
    c.receivers.clear();
    for (const auto &r : j.at("receivers")) {
        c.receivers.push_back({detail::need(r, "receivers[]", "x_m"), detail::get_or<double>(r, "y_m", 0.0),
                               detail::need(r, "receivers[]", "z_m")});
    }

    const auto &tm = detail::section(j, "time");
    c.time.t_end = detail::need(tm, "time", "t_end_s");
    c.time.dt = detail::need(tm, "time", "dt_s");

    if (j.contains("quadrature")) {
        const auto &q = j.at("quadrature");
        c.quadrature.n = detail::get_or<int>(q, "n", c.quadrature.n);
        c.quadrature.sin_substitution = detail::get_or<bool>(q, "sin_substitution", c.quadrature.sin_substitution);
    }
    if (j.contains("output")) {
        const auto &o = j.at("output");
        c.output.directory = detail::get_or<std::string>(o, "directory", c.output.directory);
        c.output.format = detail::get_or<std::string>(o, "format", c.output.format);
        c.output.emit_green = detail::get_or<bool>(o, "emit_green", c.output.emit_green);
    }
    if (j.contains("verify")) {
        const auto &v = j.at("verify");
        c.verify.s_values = detail::get_or<std::vector<double>>(v, "s_values_1_s", c.verify.s_values);
        c.verify.grid_n = detail::get_or<int>(v, "grid_n", c.verify.grid_n);
        c.verify.time_nodes_per_segment =
            detail::get_or<int>(v, "time_nodes_per_segment", c.verify.time_nodes_per_segment);
        c.verify.quadrature_n = detail::get_or<int>(v, "quadrature_n", c.verify.quadrature_n);
    }
    return c;
}

/// Invariant problems that make a configuration unusable (empty when fine).
inline std::vector<std::string> config_errors(const RunConfig &c)
{
    std::vector<std::string> e = validate(c.acoustic, c.poro);
    if (e.empty()) {
        try {
            derive_poroelastic(c.poro);
        } catch (const NonPhysical &ex) {
            e.emplace_back(ex.what());
        }
    }
    if (!(c.source.h > 0.0)) {
        e.emplace_back("source.h_m must be positive");
    }
    if (!(c.source.f0 > 0.0)) {
        e.emplace_back("source.f0_Hz must be positive");
    }
    if (!std::isfinite(c.source.gain)) {
        e.emplace_back("source.gain must be finite");
    }
    if (c.receivers.empty()) {
        e.emplace_back("receiver list is empty");
    }
    for (const auto &r : c.receivers) {
        if (!(std::abs(r.z) > 1e-6)) {
            e.emplace_back("receiver z_m must satisfy |z| > 1e-6 m");
        }
        if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z)) {
            e.emplace_back("receiver coordinates must be finite");
        }
    }
    if (!(c.time.dt > 0.0) || !(c.time.t_end > 0.0)) {
        e.emplace_back("time.dt_s and time.t_end_s must be positive");
    } else if (c.source.f0 > 0.0 && c.time.dt > 1.0 / (40.0 * c.source.f0)) {
        e.emplace_back("time.dt_s must not exceed 1/(40 f0)");
    }
    if (c.quadrature.n < 1) {
        e.emplace_back("quadrature.n must be >= 1");
    }
    if (c.output.format != "csv" && c.output.format != "json") {
        e.emplace_back("output.format must be csv or json");
    }
    return e;
}

inline RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace acoporo

#endif
