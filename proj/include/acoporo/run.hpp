#ifndef ACOPORO_RUN_HPP
#define ACOPORO_RUN_HPP

// compute / verify orchestration and trace files.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include <acoporo/config.hpp>
#include <acoporo/green.hpp>
#include <acoporo/oracle.hpp>
#include <acoporo/seismogram.hpp>

namespace acoporo
{

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3, kOracle = 4 };

/// Shortest decimal text that reads back to the same double.
inline std::string fmt_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// FNV-1a over the shortest-form media parameters.
inline std::string media_hash(const AcousticMedium &a, const PoroelasticParams &p)
{
    std::uint64_t h = 1469598103934665603ull;
    for (double v : {a.rho_plus, a.v_plus, p.rho_s, p.rho_f, p.phi, p.a, p.K_s, p.K_f, p.K_b, p.mu}) {
        for (char ch : fmt_double(v) + ";") {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Green sample times (j + 1/2) dt covering [0, t_end].
inline std::vector<double> green_times(const TimeConfig &tc)
{
    const auto n = static_cast<std::size_t>(std::ceil(tc.t_end / tc.dt - 1e-9));
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) {
        t[j] = (j + 0.5) * tc.dt;
    }
    return t;
}

inline std::string receiver_label(std::size_t i) { return "receiver_" + std::to_string(i + 1); }

namespace detail
{

struct Column {
    std::string name;
    const std::vector<double> *values;
};

inline std::string arrival_line(const std::string &wave, const ArrivalTimes &a)
{
    std::string s = "# arrival " + wave + ": t0_s=" + fmt_double(a.t0);
    if (a.head_exists) {
        s += " head=yes t_h1_s=" + fmt_double(a.t_h1) + " t_h2_s=" + fmt_double(a.t_h2) +
             " q_max_s_m=" + fmt_double(a.q_max);
    } else {
        s += " head=no";
    }
    return s;
}

inline void write_table(const std::filesystem::path &path, const std::string &format,
                        const std::vector<std::string> &header, const std::vector<Column> &cols)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    const std::size_t n = cols.empty() ? 0 : cols.front().values->size();
    if (format == "json") {
        nlohmann::ordered_json j;
        j["header"] = header;
        auto names = nlohmann::ordered_json::array();
        for (const auto &c : cols) {
            names.push_back(c.name);
        }
        j["columns"] = names;
        nlohmann::ordered_json data;
        for (const auto &c : cols) {
            data[c.name] = *c.values;
        }
        j["data"] = data;
        out << j.dump(1) << "\n";
        return;
    }
    for (const auto &h : header) {
        out << h << "\n";
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out << (k ? "," : "") << cols[k].name;
    }
    out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out << (k ? "," : "") << fmt_double((*cols[k].values)[i]);
        }
        out << "\n";
    }
}

} // namespace detail

/// Header lines shared by every output file of a run.
inline std::vector<std::string> file_header(const RunConfig &cfg, std::size_t receiver_index, const std::string &kind)
{
    const auto &r = cfg.receivers[receiver_index];
    return {"# acoporo " + kind,
            "# media_hash: " + media_hash(cfg.acoustic, cfg.poro),
            "# config: " + to_json(cfg).dump(),
            "# receiver: " + receiver_label(receiver_index) + " x_m=" + fmt_double(r.x) + " y_m=" + fmt_double(r.y) +
                " z_m=" + fmt_double(r.z)};
}

inline void write_seismogram(const RunConfig &cfg, std::size_t ri, const Seismogram &s, const GreenTrace &g,
                             const std::filesystem::path &dir)
{
    auto header = file_header(cfg, ri, "seismogram");
    header.push_back("# units: t [s], p [Pa], u_x u_y u_z [m], per unit source gain");
    if (g.receiver.acoustic_side()) {
        header.push_back("# arrival incident: t0_s=" + fmt_double(g.incident.arrival) + " head=no");
        header.push_back(detail::arrival_line("reflected", g.reflected.arrivals));
    } else {
        for (const auto &tr : g.transmitted) {
            header.push_back(detail::arrival_line(branch_name(tr.tag), tr.arrivals));
        }
    }
    const std::string ext = cfg.output.format == "json" ? ".json" : ".csv";
    detail::write_table(dir / (receiver_label(ri) + ext), cfg.output.format, header,
                        {{"t", &s.t}, {"p", &s.p}, {"u_x", &s.u_x}, {"u_y", &s.u_y}, {"u_z", &s.u_z}});
}

inline void write_green(const RunConfig &cfg, std::size_t ri, const GreenTrace &g, const std::filesystem::path &dir)
{
    auto header = file_header(cfg, ri, "green");
    header.push_back("# units: t [s], xi [Pa s], u [m], per unit source strength");
    std::vector<detail::Column> cols{{"t", &g.t}};
    if (g.receiver.acoustic_side()) {
        header.push_back("# incident pressure: dirac at t0_s=" + fmt_double(g.incident.arrival) +
                         " weight=" + fmt_double(g.incident.amplitude));
        header.push_back(detail::arrival_line("reflected", g.reflected.arrivals));
        cols.insert(cols.end(), {{"inc_u_x", &g.incident.u_x},
                                 {"inc_u_y", &g.incident.u_y},
                                 {"inc_u_z", &g.incident.u_z},
                                 {"ref_xi", &g.reflected.xi},
                                 {"ref_u_x", &g.reflected.u_x},
                                 {"ref_u_y", &g.reflected.u_y},
                                 {"ref_u_z", &g.reflected.u_z}});
    } else {
        // Column names need stable storage.
        static const char *names[3][3] = {
            {"pf_u_x", "pf_u_y", "pf_u_z"}, {"ps_u_x", "ps_u_y", "ps_u_z"}, {"s_u_x", "s_u_y", "s_u_z"}};
        for (std::size_t k = 0; k < g.transmitted.size(); ++k) {
            const auto &tr = g.transmitted[k];
            header.push_back(detail::arrival_line(branch_name(tr.tag), tr.arrivals));
            cols.insert(cols.end(), {{names[k][0], &tr.u_x}, {names[k][1], &tr.u_y}, {names[k][2], &tr.u_z}});
        }
    }
    const std::string ext = cfg.output.format == "json" ? ".json" : ".csv";
    detail::write_table(dir / (receiver_label(ri) + "_green" + ext), cfg.output.format, header, cols);
}

struct RunOptions {
    unsigned threads = 1;
    bool quiet = false;
};

/// Latest volume-wave arrival among the receivers.
inline double latest_arrival(const RunConfig &cfg, const Media &md)
{
    double latest = 0.0;
    for (const auto &r : cfg.receivers) {
        const Geometry g{cfg.source.h, r.offset(), r.z};
        if (r.acoustic_side()) {
            latest = std::max({latest, g.direct_distance() / md.acoustic.v_plus,
                               arrival_times(g, make_branch(md, BranchTag::ReflectedAcoustic), md.v_max()).t0});
        } else {
            for (BranchTag tag : transmitted_tags) {
                latest = std::max(latest, arrival_times(g, make_branch(md, tag), md.v_max()).t0);
            }
        }
    }
    return latest;
}

inline int run_compute(const RunConfig &cfg, const RunOptions &opt, std::ostream &log = std::cerr)
{
    try {
        if (const auto errs = config_errors(cfg); !errs.empty()) {
            for (const auto &e : errs) {
                log << "config error: " << e << "\n";
            }
            return kConfig;
        }
        const Media md = make_media(cfg.acoustic, cfg.poro);
        if (cfg.time.t_end <= latest_arrival(cfg, md) && !opt.quiet) {
            log << "warning: t_end_s does not reach the latest arrival\n";
        }
        const std::filesystem::path dir(cfg.output.directory);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw ConfigError("cannot create output directory " + dir.string());
        }
        const auto times = green_times(cfg.time);
        for (std::size_t i = 0; i < cfg.receivers.size(); ++i) {
            const GreenTrace g = compute_green(md, cfg.source.h, cfg.receivers[i], times, cfg.quadrature, opt.threads);
            const Seismogram s = convolve(g, SourceWavelet{cfg.source.f0, cfg.source.gain}, cfg.time.dt);
            write_seismogram(cfg, i, s, g, dir);
            if (cfg.output.emit_green) {
                write_green(cfg, i, g, dir);
            }
            if (!opt.quiet) {
                log << "done " << receiver_label(i) << " (" << times.size() << " samples)\n";
            }
        }
        return kOk;
    } catch (const ConfigError &e) {
        log << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NonPhysical &e) {
        log << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const GridTooCoarse &e) {
        log << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError &e) {
        log << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}

struct VerifyRow {
    std::string channel;
    std::string receiver;
    double s = 0.0;
    double main = 0.0;
    double oracle = 0.0;
    double rel_error = 0.0;
    std::string status; // pass | fail | not_converged
};

/// Channels checked for a receiver, with the wave that carries them and the
/// slot of the evaluator output.
struct CheckedChannel {
    OracleChannel channel;
    BranchTag wave;
    int slot;
};

inline std::vector<CheckedChannel> checked_channels(const Receiver &r)
{
    if (r.acoustic_side()) {
        return {{OracleChannel::ReflectedXi, BranchTag::ReflectedAcoustic, 0},
                {OracleChannel::ReflectedUx, BranchTag::ReflectedAcoustic, 1},
                {OracleChannel::ReflectedUz, BranchTag::ReflectedAcoustic, 2}};
    }
    return {{OracleChannel::PfUx, BranchTag::TransmittedPf, 0}, {OracleChannel::PfUz, BranchTag::TransmittedPf, 1},
            {OracleChannel::PsUx, BranchTag::TransmittedPs, 0}, {OracleChannel::PsUz, BranchTag::TransmittedPs, 1},
            {OracleChannel::SUx, BranchTag::TransmittedS, 0},   {OracleChannel::SUz, BranchTag::TransmittedS, 1}};
}

/// Laplace transforms of the traced channels against the oracle. The traced
/// side always uses the substituted quadrature so that its own error stays
/// far below the 1e-3 acceptance level. `main_coef` replaces the coefficient
/// solver of the traced side only.
inline std::vector<VerifyRow> verify_rows(const RunConfig &cfg, unsigned threads = 1,
                                          const CoefficientFn &main_coef = {})
{
    const Media md = make_media(cfg.acoustic, cfg.poro);
    const double s_min = *std::min_element(cfg.verify.s_values.begin(), cfg.verify.s_values.end());
    const QuadratureConfig qc{cfg.verify.quadrature_n, true};
    std::vector<VerifyRow> rows;
    for (std::size_t i = 0; i < cfg.receivers.size(); ++i) {
        Receiver r = cfg.receivers[i];
        r = Receiver{r.offset(), 0.0, r.z};
        const Geometry geom{cfg.source.h, r.x, r.z};
        const auto channels = checked_channels(r);
        BranchTag current = channels.front().wave;
        std::optional<WaveEvaluator> ev;
        TimeQuadrature tq;
        std::vector<std::array<double, 3>> values;
        for (const auto &cc : channels) {
            if (!ev || cc.wave != current) {
                current = cc.wave;
                ev.emplace(md, geom, cc.wave, qc, main_coef);
                tq = breakpoint_quadrature(laplace_breaks(ev->contour().arrivals(), s_min),
                                           cfg.verify.time_nodes_per_segment);
                values.assign(tq.t.size(), {});
                parallel_for(tq.t.size(), threads, [&](std::size_t k) { values[k] = (*ev)(tq.t[k]); });
            }
            std::vector<double> g(values.size());
            for (std::size_t k = 0; k < g.size(); ++k) {
                g[k] = values[k][cc.slot];
            }
            for (double s : cfg.verify.s_values) {
                VerifyRow row;
                row.channel = channel_name(cc.channel);
                row.receiver = receiver_label(i);
                row.s = s;
                row.main = laplace_of_samples(tq, g, s);
                LaplaceProbe probe;
                probe.s = s;
                probe.receiver = r;
                probe.max_panels = std::max(1, cfg.verify.grid_n / 20);
                try {
                    row.oracle = laplace_reference(probe, md, cfg.source.h, cc.channel);
                    row.rel_error = std::abs(row.main - row.oracle) / std::abs(row.oracle);
                    row.status = row.rel_error <= 1e-3 ? "pass" : "fail";
                } catch (const NotConverged &) {
                    row.oracle = std::numeric_limits<double>::quiet_NaN();
                    row.rel_error = std::numeric_limits<double>::quiet_NaN();
                    row.status = "not_converged";
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline int run_verify(const RunConfig &cfg, const RunOptions &opt, std::ostream &log = std::cerr)
{
    try {
        auto errs = config_errors(cfg);
        if (cfg.verify.s_values.empty()) {
            errs.emplace_back("verify.s_values_1_s is empty");
        }
        for (double s : cfg.verify.s_values) {
            if (!(s > 0.0)) {
                errs.emplace_back("verify.s_values_1_s entries must be positive");
            }
        }
        if (cfg.verify.grid_n < 20 || cfg.verify.time_nodes_per_segment < 1 || cfg.verify.quadrature_n < 1) {
            errs.emplace_back("verify grid sizes are too small");
        }
        if (!errs.empty()) {
            for (const auto &e : errs) {
                log << "config error: " << e << "\n";
            }
            return kConfig;
        }
        const auto rows = verify_rows(cfg, opt.threads);
        const std::filesystem::path dir(cfg.output.directory);
        std::filesystem::create_directories(dir);
        std::ofstream out(dir / "verify_report.csv", std::ios::binary);
        out << "# acoporo verify\n# media_hash: " << media_hash(cfg.acoustic, cfg.poro) << "\n";
        out << "channel,receiver,s_1_s,main,oracle,rel_error,status\n";
        int code = kOk;
        for (const auto &r : rows) {
            out << r.channel << "," << r.receiver << "," << fmt_double(r.s) << "," << fmt_double(r.main) << ","
                << fmt_double(r.oracle) << "," << fmt_double(r.rel_error) << "," << r.status << "\n";
            if (r.status != "pass") {
                code = kOracle;
            }
            if (!opt.quiet) {
                log << r.receiver << " " << r.channel << " s=" << r.s << " rel_error=" << r.rel_error << " "
                    << r.status << "\n";
            }
        }
        return code;
    } catch (const ConfigError &e) {
        log << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NonPhysical &e) {
        log << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError &e) {
        log << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}

} // namespace acoporo

#endif
