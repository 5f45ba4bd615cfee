#include "vortex/cli_io.hpp"
#include "vortex/commands.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace vortex;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("vortex_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

} // namespace

TEST_CASE("config parsing") {
    RunConfig c = parse("# comment\nregime = PAIR_SCH\neps = 0.1 # trailing\nkappa=0.25\n\nd_bracket = 4, 12\nh1 = 0.5\n"
                        "newton_max = 20\noutput = out dir\n");
    CHECK(c.regime == "PAIR_SCH");
    CHECK(c.eps == 0.1);
    CHECK(c.kappa == 0.25);
    REQUIRE(c.d_bracket);
    CHECK((*c.d_bracket)[1] == 12.0);
    CHECK(c.h1 == 0.5);
    CHECK(c.h2 == 0.25);
    CHECK(c.newton_max == 20);
    CHECK(c.output == "out dir");
    ModelParams p = config_params(c);
    CHECK(p.d == doctest::Approx(10.0));
    GridSpec g = config_grid(c, p);
    CHECK(g.l1 == doctest::Approx(20.0));
    CHECK(config_solver(c).newton_max == 20);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse("eps = 0.1\neps = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse("eps = 0.1x\n"), ConfigError);
    CHECK_THROWS_AS(parse("eps\n"), ConfigError);
    CHECK_THROWS_AS(parse("eps =\n"), ConfigError);
    CHECK_THROWS_AS(parse("kappa = 0.2\n"), ConfigError); // wave map needs kappa = 0
    CHECK_THROWS_AS(parse("regime = PAIR\n"), ConfigError);
    CHECK_THROWS_AS(parse("h1 = 0.75\n"), ConfigError);
    CHECK_THROWS_AS(parse("d_bracket = 12, 4\n"), ConfigError);
    CHECK_THROWS_AS(parse("newton_max = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), IoError);
}

TEST_CASE("format_double roundtrips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        double x = U(rng) * std::pow(10.0, k % 20 - 10);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.125) == "0.125");
}

TEST_CASE("reports keep insertion order") {
    Report r;
    r.section("b");
    r.add("z", 1);
    r.add("a", 0.5);
    r.section("a");
    r.add("flag", true);
    CHECK(r.str() == "[b]\nz: 1\na: 0.5\n\n[a]\nflag: true\n");
}

TEST_CASE("field files roundtrip bit for bit") {
    fs::path dir = scratch_dir("vsf");
    GridSpec g = make_grid(3.0, 2.0, 0.5, 0.25, Symmetry::ring);
    ComplexField f(g);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N;
    for (cplx& z : f.data) z = {N(rng), N(rng)};
    f.data[3] = {-0.0, std::numeric_limits<double>::denorm_min()};
    save_field(f, (dir / "c.vsf").string());
    ComplexField back = load_complex_field((dir / "c.vsf").string());
    CHECK(back.spec == g);
    CHECK(std::memcmp(back.data.data(), f.data.data(), f.data.size() * sizeof(cplx)) == 0);

    ScalarField s(g);
    for (double& v : s.data) v = N(rng);
    save_field(s, (dir / "s.vsf").string());
    AnyField any = load_field((dir / "s.vsf").string());
    REQUIRE(std::holds_alternative<ScalarField>(any));
    CHECK(std::memcmp(std::get<ScalarField>(any).data.data(), s.data.data(), s.data.size() * sizeof(double)) == 0);
    CHECK_THROWS_AS(load_complex_field((dir / "s.vsf").string()), IoError);

    std::string bytes = slurp(dir / "c.vsf");
    CHECK(bytes.substr(0, 4) == "VSF1");
    CHECK(bytes.size() == 4 + 4 * 4 + 4 * 8 + g.size() * 16);
    CHECK(static_cast<unsigned char>(bytes[4]) == 1); // kind, little-endian
    CHECK(static_cast<unsigned char>(bytes[8]) == 1); // ring
}

TEST_CASE("corrupt field files are rejected") {
    fs::path dir = scratch_dir("vsf_bad");
    GridSpec g = make_grid(3.0, 2.0, 0.5, 0.5, Symmetry::pair);
    save_field(ComplexField(g, cplx(1.0, 2.0)), (dir / "ok.vsf").string());
    std::string good = slurp(dir / "ok.vsf");
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream(dir / name, std::ios::binary) << content;
        return (dir / name).string();
    };
    std::string magic = good;
    magic.replace(0, 4, "XXXX");
    CHECK_THROWS_AS(load_field(write("empty.vsf", "")), IoError);
    CHECK_THROWS_AS(load_field(write("magic2.vsf", magic)), IoError);
    CHECK_THROWS_AS(load_field(write("short.vsf", good.substr(0, good.size() - 8))), IoError);
    CHECK_THROWS_AS(load_field(write("header.vsf", good.substr(0, 20))), IoError);
    std::string big = good;
    std::uint32_t huge = 0xffffffffu;
    std::memcpy(big.data() + 12, &huge, 4);
    CHECK_THROWS_AS(load_field(write("big.vsf", big)), IoError);
    CHECK_THROWS_AS(load_field((dir / "missing.vsf").string()), IoError);
}

TEST_CASE("csv output uses full precision") {
    fs::path dir = scratch_dir("csv");
    write_csv((dir / "t.csv").string(), {"a", "b"}, {{0.1, 1.0 / 3.0}});
    CHECK(slurp(dir / "t.csv") == "a,b\n0.10000000000000001,0.33333333333333331\n");
}

TEST_CASE("profile command writes the integrals footer") {
    fs::path dir = scratch_dir("cmd_profile");
    RunConfig cfg;
    cfg.output = dir.string();
    run_profile(cfg);
    std::string csv = slurp(dir / "profile.csv");
    auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    CHECK(last.rfind("inf,1,0,", 0) == 0);
    double i2 = std::stod(last.substr(last.rfind(',') + 1));
    CHECK(std::abs(i2 - 0.125) <= 1e-6);
}

TEST_CASE("ansatz then verify reports a +1/-1 pair, and reports are reproducible") {
    fs::path dir = scratch_dir("cmd_pair");
    RunConfig cfg;
    cfg.eps = 0.2;
    cfg.d_hat = 2.0;
    cfg.h1 = cfg.h2 = 0.5;
    cfg.output = dir.string();
    run_solve(cfg, {true, false});
    Report v = run_verify(cfg, (dir / "pair_wm_ansatz.vsf").string());
    CHECK(v.str().find("windings: +1, -1\n") != std::string::npos);
    CHECK(v.str().find("total_winding: 0\n") != std::string::npos);

    std::string first = slurp(dir / "pair_wm_report.txt");
    run_solve(cfg, {true, false});
    CHECK(slurp(dir / "pair_wm_report.txt") == first);
    CHECK(first.find("c: ") != std::string::npos);
    CHECK(first.find("omega: ") != std::string::npos);
}

TEST_CASE("full solve command writes the solution and diagnostics") {
    fs::path dir = scratch_dir("cmd_solve");
    RunConfig cfg;
    cfg.regime = "RING_SCH";
    cfg.eps = 0.2;
    cfg.kappa = 0.1;
    cfg.d_hat = 2.0;
    cfg.h1 = cfg.h2 = 0.5;
    cfg.output = dir.string();
    Report r = run_solve(cfg, {});
    CHECK(fs::exists(dir / "ring_sch_solution.vsf"));
    CHECK(r.str().find("newton_iters: ") != std::string::npos);
    CHECK(r.str().find("windings: +1, -1\n") != std::string::npos);
    Report rec = run_reconstruct(cfg, (dir / "ring_sch_solution.vsf").string(), {});
    CHECK(fs::exists(dir / "samples.csv"));
    CHECK(rec.str().find("level_3_rms: ") != std::string::npos);
}
