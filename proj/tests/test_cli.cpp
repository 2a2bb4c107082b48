#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tcmc/runner.hpp"

using namespace tcmc;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TCMC_BIN) + " " + args + " >tmp_cli_out.txt 2>tmp_cli_err.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const char* kFig1Left = R"(# cuspidal cross cap at v = 0
[cauchy]
s = 2 0 0.2
t = 0 1
theta = 0 1
H = 1
interval_u = -0.2 0.2
interval_v = -0.3 0.3
grid = 9 7
ode_step = 0.004
)";
} // namespace

TEST_CASE("config round trip: parse(print(cfg)) reproduces the data exactly") {
    const Config a = parse_config_text(kFig1Left);
    const Config b = parse_config_text(print_config(a));
    CHECK(a.family == b.family);
    CHECK(a.cauchy.s == b.cauchy.s);
    CHECK(a.cauchy.t == b.cauchy.t);
    CHECK(a.cauchy.theta == b.cauchy.theta);
    CHECK(a.H == b.H);
    CHECK(a.A.lo == b.A.lo);
    CHECK(a.B.hi == b.B.hi);
    CHECK(a.na == b.na);

    // exercise an awkward decimal literal
    Config c = a;
    c.cauchy.s = PolyFn({0.1, 1.0 / 3.0, 2.000000000000001});
    const Config d = parse_config_text(print_config(c));
    CHECK(c.cauchy.s == d.cauchy.s);
}

TEST_CASE("config round trip over every family") {
    const char* texts[] = {
        "[pair]\nalpha = 1\nbeta = -1 0 1\ngamma = 1\ndelta = 0.25 3\n"
        "x_extra_-1 = 0 0 0.5 0\ninterval_x = -1.5 1.5\ninterval_y = -0.5 0.5\ngrid = 11 7\n",
        "[singular]\nalpha0 = 0\nbeta1 = -0.5\ngamma1 = -1 0 -0.1\ngamma_m1 = 0.5 1\n"
        "gamma_m3 = 1 -0.5\ninterval_u = -0.3 0.3\ninterval_v = -0.7 0.7\n",
        "[characteristic]\ngamma1 = -1\ngamma_m1 = 1\ndelta = 1\nsigma = 1 0 2\n"
        "interval_x = -0.6 0.6\ninterval_y = -0.4 0.4\n",
        "[cauchy.characteristic]\ns = 1\nt0 = -1\ndelta = 1\nsigma = 1\nH = 1\n",
    };
    for (const char* text : texts) {
        const Config a = parse_config_text(text);
        const Config b = parse_config_text(print_config(a));
        CHECK(print_config(a) == print_config(b));
        CHECK(a.family == b.family);
    }
    // extra terms survive the round trip
    const Config p = parse_config_text(texts[0]);
    REQUIRE(p.pair.x_extra.size() == 1);
    const Config p2 = parse_config_text(print_config(p));
    REQUIRE(p2.pair.x_extra.size() == 1);
    CHECK(p2.pair.x_extra[0].degree == -1);
    CHECK(p2.pair.x_extra[0].e21(0.0) == 0.5);
}

TEST_CASE("config parse errors carry locations and name the problem") {
    CHECK_THROWS_AS((void)parse_config_text(""), ParseError);
    CHECK_THROWS_AS((void)parse_config_text("s = 1\n"), ParseError);     // key before section
    CHECK_THROWS_AS((void)parse_config_text("[nope]\ns = 1\n"), ParseError);
    CHECK_THROWS_AS((void)parse_config_text("[cauchy]\ns = 1\nt = 1\nbogus = 2\n"), ParseError);
    CHECK_THROWS_AS((void)parse_config_text("[cauchy]\nt = 1\n"), ParseError); // missing s
    // validation failures surface as ValidationError from build_model
    const Config c = parse_config_text("[pair]\nbeta = 0\ngamma = 0\n");
    CHECK_THROWS_AS((void)build_model(c), ValidationError);
}

TEST_CASE("characteristic family rejects non-constant t") {
    CHECK_THROWS_AS(
        (void)parse_config_text("[cauchy.characteristic]\ns = 1\nt = 0 1\ndelta = 1\nsigma = 1\n"),
        ValidationError);
    const Config ok = parse_config_text(
        "[cauchy.characteristic]\ns = 1\nt = -1\ndelta = 1\nsigma = 1\nH = 1\n");
    CHECK(ok.t0 == -1.0);
}

TEST_CASE("runner: figure-1-left reports a cuspidal cross cap at v = 0") {
    const Config cfg = parse_config_text(kFig1Left);
    RunFlags flags;
    flags.format = "csv";
    flags.out_dir = "tmp_run_fig1";
    flags.json_report = true;
    const RunReport rep = run(cfg, flags);
    CHECK(rep.cell_counts[static_cast<size_t>(Stratum::P1)] == 7); // u = 0 column
    REQUIRE(rep.curves.size() == 1);
    bool crosscap_at_0 = false;
    for (const auto& p : rep.curves[0].points) {
        if (std::abs(p.b) < 1e-9) {
            CHECK(p.type == SingType::CuspidalCrossCap);
            crosscap_at_0 = true;
        } else {
            CHECK(p.type == SingType::CuspidalEdge);
        }
        CHECK(p.klass == 2);
    }
    CHECK(crosscap_at_0);
    CHECK(rep.warnings.empty()); // symbolic and numeric classifiers agree

    // singular points appear in exactly one report entry
    int total = 0;
    for (const auto& c : rep.curves) total += static_cast<int>(c.points.size());
    CHECK(total == 7);

    const auto j = nlohmann::json::parse(slurp("tmp_run_fig1/report.json"));
    CHECK(j["cells"]["P1"] == 7);
    CHECK(j["singular_curves"].size() == 1);
}

TEST_CASE("runner: determinism - identical config gives byte-identical CSV") {
    const Config cfg = parse_config_text(kFig1Left);
    RunFlags flags;
    flags.format = "csv";
    flags.out_dir = "tmp_det_a";
    (void)run(cfg, flags);
    flags.out_dir = "tmp_det_b";
    (void)run(cfg, flags);
    CHECK(slurp("tmp_det_a/surface.csv") == slurp("tmp_det_b/surface.csv"));
}

TEST_CASE("cli: empty config exits 2 with a ParseError diagnostic") {
    write_file("tmp_empty.cfg", "");
    CHECK(run_cli("build tmp_empty.cfg") == 2);
    CHECK(slurp("tmp_cli_err.txt").find("kind=ParseError") != std::string::npos);
}

TEST_CASE("cli: malformed flags exit 2") {
    write_file("tmp_fig1.cfg", kFig1Left);
    CHECK(run_cli("build tmp_fig1.cfg --grid nonsense") == 2);
    CHECK(run_cli("build tmp_fig1.cfg --format stl") == 2);
    CHECK(run_cli("nosuchcommand") == 2);
}

TEST_CASE("cli: a small build succeeds and writes the mesh") {
    write_file("tmp_fig1.cfg", kFig1Left);
    CHECK(run_cli("build tmp_fig1.cfg --grid 7x5 --format obj --out tmp_cli_run --report json") == 0);
    const std::string out = slurp("tmp_cli_out.txt");
    CHECK(out.find("cells:") != std::string::npos);
    CHECK(out.find("wrote: tmp_cli_run/surface.obj") != std::string::npos);
    CHECK(slurp("tmp_cli_run/surface.obj").find("v ") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp("tmp_cli_run/report.json")).contains("invariants"));
}

TEST_CASE("cli: numeric failure (truncation overflow) exits 3") {
    write_file("tmp_overflow.cfg",
               "[singular]\nbeta1 = -9\ngamma1 = -9\ngamma_m1 = 9\ngamma_m3 = 9\n"
               "interval_u = -1 1\ninterval_v = -2 2\ngrid = 5 5\n");
    CHECK(run_cli("build tmp_overflow.cfg --out tmp_overflow_out") == 3);
    CHECK(slurp("tmp_cli_err.txt").find("kind=TailOverflow") != std::string::npos);
}

TEST_CASE("cli: tolerance table override via TCMC_TOLERANCES") {
    write_file("tmp_fig1.cfg", kFig1Left);
    write_file("tmp_tols_ok.txt", "factor_residual = 1e-8\nrank = 1e-6\n");
    write_file("tmp_tols_bad.txt", "no_such_tolerance = 1\n");
    const std::string base = std::string(TCMC_BIN) + " build tmp_fig1.cfg --grid 5x5 --out tmp_tol_run";
    int status = std::system(("TCMC_TOLERANCES=tmp_tols_ok.txt " + base + " >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == 0);
    status = std::system(("TCMC_TOLERANCES=tmp_tols_bad.txt " + base + " >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
