// Command-line front end: parse a surface config, run the selected pipeline,
// classify the singular set, and write mesh + report files.
//
//   tcmc build <config> [--grid NxM] [--lambda L] [--format obj|ply|csv]
//                       [--out DIR] [--report json]
//
// Exit codes: 0 success, 2 config/validation error, 3 numeric failure.
// Diagnostics go to stderr as structured "tcmc: key=value" lines. The
// TCMC_TOLERANCES environment variable may point at a tolerance override file.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tcmc/runner.hpp"

namespace {

void diag(const char* level, const char* kind, const std::string& msg) {
    std::fprintf(stderr, "tcmc: level=%s kind=%s msg=\"%s\"\n", level, kind, msg.c_str());
}

int run_build(const std::string& config_path, const std::string& grid_arg, double lambda,
              const std::string& format, const std::string& out_dir, const std::string& report) {
    tcmc::RunFlags flags;
    flags.format = format;
    flags.out_dir = out_dir;
    flags.lambda = lambda;
    flags.json_report = (report == "json");
    if (!report.empty() && report != "json") {
        diag("error", "Usage", "unsupported report format '" + report + "'");
        return 2;
    }
    if (!grid_arg.empty()) {
        const auto x = grid_arg.find('x');
        try {
            if (x == std::string::npos) throw std::invalid_argument("missing 'x'");
            flags.grid_na = std::stoi(grid_arg.substr(0, x));
            flags.grid_nb = std::stoi(grid_arg.substr(x + 1));
        } catch (const std::exception&) {
            diag("error", "Usage", "--grid expects NxM (e.g. 201x201)");
            return 2;
        }
    }

    try {
        const tcmc::Config cfg = tcmc::load_config(config_path);
        const tcmc::RunReport rep = tcmc::run(cfg, flags);
        for (const auto& w : rep.warnings) diag("warning", "Run", w);
        std::cout << tcmc::report_summary(rep);
        return 0;
    } catch (const tcmc::ParseError& e) {
        diag("error", "ParseError", e.what());
        return 2;
    } catch (const tcmc::ValidationError& e) {
        diag("error", "ValidationError", e.what());
        return 2;
    } catch (const tcmc::IOError& e) {
        diag("error", "IOError", e.what());
        return 2;
    } catch (const tcmc::TailOverflow& e) {
        diag("error", "TailOverflow", e.what());
        return 3;
    } catch (const tcmc::DetDrift& e) {
        diag("error", "DetDrift", e.what());
        return 3;
    } catch (const tcmc::Error& e) {
        diag("error", "NumericError", e.what());
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"timelike CMC surfaces from loop-group potentials"};
    app.require_subcommand(1);

    auto* build = app.add_subcommand("build", "construct a surface from a config file");
    std::string config_path, grid_arg, format = "obj", out_dir = ".", report;
    double lambda = 0.0;
    build->add_option("config", config_path, "surface config file")->required();
    build->add_option("--grid", grid_arg, "grid override, NxM");
    build->add_option("--lambda", lambda, "evaluation value of the loop parameter");
    build->add_option("--format", format, "mesh format: obj, ply or csv")
        ->check(CLI::IsMember({"obj", "ply", "csv"}));
    build->add_option("--out", out_dir, "output directory");
    build->add_option("--report", report, "also write report.json ('json')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return run_build(config_path, grid_arg, lambda, format, out_dir, report);
}
