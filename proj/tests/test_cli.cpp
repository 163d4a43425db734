#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <acoporo/run.hpp>

using namespace acoporo;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("acoporo_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_config(const fs::path &dir, const nlohmann::ordered_json &j)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(ACOPORO_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// A short, coarse run of the fixture.
RunConfig small_config(const fs::path &out)
{
    RunConfig c = fixture_config();
    c.time.t_end = 0.9;
    c.quadrature.n = 100;
    c.output.directory = out.string();
    return c;
}

} // namespace

TEST(Config, RoundTrip)
{
    RunConfig c = fixture_config();
    c.receivers.push_back({1.5, -2.25, 1e-3});
    c.output.format = "json";
    c.verify.s_values = {5.0};
    c.quadrature.sin_substitution = true;
    const auto j = to_json(c);
    const RunConfig back = config_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_TRUE(back == c);
    EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Config, FixtureValid) { EXPECT_TRUE(config_errors(fixture_config()).empty()); }

TEST(Config, Errors)
{
    RunConfig c = fixture_config();
    c.receivers.clear();
    EXPECT_EQ(config_errors(c).size(), 1u);
    c = fixture_config();
    c.time.dt = 2e-3;
    EXPECT_EQ(config_errors(c).size(), 1u);
    c = fixture_config();
    c.receivers[0].z = 0.0;
    EXPECT_EQ(config_errors(c).size(), 1u);
    c = fixture_config();
    c.output.format = "xml";
    EXPECT_EQ(config_errors(c).size(), 1u);
}

TEST(Config, ParseErrors)
{
    auto j = nlohmann::json::parse(to_json(fixture_config()).dump());
    j["poroelastic"]["viscosity_Pa_s"] = 1e-3;
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = nlohmann::json::parse(to_json(fixture_config()).dump());
    j["acoustic"].erase("v_plus_m_s");
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = nlohmann::json::parse(to_json(fixture_config()).dump());
    j["time"]["dt_s"] = "fast";
    EXPECT_THROW(config_from_json(j), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::array()), ConfigError);
}

TEST(Format, ShortestRoundTrip)
{
    EXPECT_EQ(fmt_double(0.1), "0.1");
    EXPECT_EQ(fmt_double(1e-300), "1e-300");
    for (double v : {1.0 / 3.0, -2.5e-17, 6.02214076e23}) {
        EXPECT_EQ(std::stod(fmt_double(v)), v);
    }
}

TEST(Compute, EmptyReceiversExit2)
{
    RunConfig c = fixture_config();
    c.receivers.clear();
    std::ostringstream log;
    EXPECT_EQ(run_compute(c, {}, log), 2);
    EXPECT_NE(log.str().find("receiver list is empty"), std::string::npos);
}

TEST(Compute, WritesTracesWithHeader)
{
    const fs::path out = scratch("header");
    RunConfig c = small_config(out);
    c.output.emit_green = true;
    std::ostringstream log;
    ASSERT_EQ(run_compute(c, {1, false}, log), 0);
    EXPECT_NE(log.str().find("done receiver_1"), std::string::npos);
    EXPECT_NE(log.str().find("done receiver_2"), std::string::npos);
    for (const char *f : {"receiver_1.csv", "receiver_2.csv", "receiver_1_green.csv", "receiver_2_green.csv"}) {
        ASSERT_TRUE(fs::exists(out / f)) << f;
    }
    const std::string text = slurp(out / "receiver_2.csv");
    EXPECT_NE(text.find("# media_hash: " + media_hash(c.acoustic, c.poro)), std::string::npos);
    EXPECT_NE(text.find("\nt,p,u_x,u_y,u_z\n"), std::string::npos);
    EXPECT_NE(text.find("Pf"), std::string::npos);
    EXPECT_NE(text.find("Ps"), std::string::npos);
    EXPECT_NE(text.find("# arrival S"), std::string::npos);
}

TEST(Compute, RerunIsByteIdentical)
{
    const fs::path a = scratch("rerun_a");
    const fs::path b = scratch("rerun_b");
    RunConfig ca = small_config(a);
    RunConfig cb = small_config(b);
    std::ostringstream log;
    ASSERT_EQ(run_compute(ca, {1, true}, log), 0);
    cb.output.directory = b.string();
    ASSERT_EQ(run_compute(cb, {2, true}, log), 0);
    for (const char *f : {"receiver_1.csv", "receiver_2.csv"}) {
        // Headers echo the output directory; compare everything else.
        auto strip = [](std::string s) {
            const auto pos = s.find("\"directory\"");
            const auto end = s.find(',', pos);
            return s.erase(pos, end - pos);
        };
        EXPECT_EQ(strip(slurp(a / f)), strip(slurp(b / f))) << f;
    }
}

TEST(Compute, JsonOutput)
{
    const fs::path out = scratch("json");
    RunConfig c = small_config(out);
    c.output.format = "json";
    c.receivers.resize(1);
    std::ostringstream log;
    ASSERT_EQ(run_compute(c, {1, true}, log), 0);
    const auto j = nlohmann::json::parse(slurp(out / "receiver_1.json"));
    EXPECT_EQ(j["columns"], nlohmann::json::parse(R"(["t","p","u_x","u_y","u_z"])"));
    EXPECT_EQ(j["data"]["t"].size(), j["data"]["p"].size());
}

TEST(Verify, EmptySListExit2)
{
    RunConfig c = fixture_config();
    c.verify.s_values.clear();
    std::ostringstream log;
    EXPECT_EQ(run_verify(c, {}, log), 2);
}

TEST(Verify, CorruptedCoefficientSignFails)
{
    RunConfig c = fixture_config();
    c.receivers = {{400.0, 0.0, 533.0}};
    c.verify.s_values = {20.0};
    c.verify.quadrature_n = 400;
    c.verify.time_nodes_per_segment = 60;
    const Media md = make_media(c.acoustic, c.poro);
    const auto honest = verify_rows(c, 1);
    CoefficientFn flipped = [md](cplx qx, double qy) {
        InterfaceCoefficients k = solve_coefficients(md, qx, qy);
        k.r = -k.r;
        return k;
    };
    const auto corrupted = verify_rows(c, 1, flipped);
    ASSERT_EQ(honest.size(), 3u);
    ASSERT_EQ(corrupted.size(), 3u);
    for (std::size_t i = 0; i < honest.size(); ++i) {
        EXPECT_EQ(honest[i].status, "pass") << honest[i].channel << " " << honest[i].rel_error;
        EXPECT_EQ(corrupted[i].status, "fail") << corrupted[i].channel;
        EXPECT_NEAR(corrupted[i].rel_error, 2.0, 1e-2);
    }
}

TEST(Cli, Fixture)
{
    const fs::path dir = scratch("cli_fixture");
    const std::string cmd = std::string(ACOPORO_CLI) + " fixture > " + (dir / "f.json").string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    const RunConfig c = load_config((dir / "f.json").string());
    EXPECT_TRUE(c == fixture_config());
}

TEST(Cli, ExitCodes)
{
    const fs::path dir = scratch("cli_exit");
    auto j = to_json(fixture_config());
    j["receivers"] = nlohmann::ordered_json::array();
    EXPECT_EQ(run_cli("compute --config " + write_config(dir, j).string()), 2);
    j = to_json(fixture_config());
    j["verify"]["s_values_1_s"] = nlohmann::ordered_json::array();
    EXPECT_EQ(run_cli("verify --config " + write_config(dir, j).string()), 2);
    EXPECT_EQ(run_cli("compute --config " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Cli, ComputeSmallRun)
{
    const fs::path dir = scratch("cli_compute");
    auto j = to_json(small_config(dir / "out"));
    EXPECT_EQ(run_cli("compute --quiet --threads 2 --config " + write_config(dir, j).string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "receiver_1.csv"));
}
