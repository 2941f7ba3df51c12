// biham: construct and verify bi-Hamiltonian structure for a nonvanishing
// vector field on a chart domain, probe the global obstructions, and run
// convergence sweeps. Scenario files are JSON; see README for the schema.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "biham/scenario.hpp"

namespace {

void print_human(const biham::ordered_json& rep) {
    std::cout << "biham " << rep["version"].get<std::string>() << "  command="
              << rep["command"].get<std::string>() << "  config=" << rep["config_hash"]
              << "\n";
    if (rep.contains("residuals")) {
        for (const auto& [name, st] : rep["residuals"].items()) {
            std::printf("  %-22s max %.3e  mean %.3e  tol %.3e  %s\n", name.c_str(),
                        st["max"].get<double>(), st["mean"].get<double>(),
                        st["tolerance"].get<double>(),
                        st["pass"].get<bool>() ? "PASS" : "FAIL");
        }
    }
    if (rep.contains("diagnostics")) {
        const auto& d = rep["diagnostics"];
        std::printf("  path independence %.3e, closedness %.3e, min |mu1-mu2| %.3e\n",
                    d["path_independence"].get<double>(),
                    d["hamiltonian_closedness"].get<double>(),
                    d["min_mu_separation"].get<double>());
    }
    if (rep.contains("probes")) {
        if (rep["probes"].contains("chern")) {
            const auto& c = rep["probes"]["chern"];
            std::printf("  chern[%s]: %d (pre-rounding %.6f, defect %.2e) -> %s\n",
                        c["surface"].get<std::string>().c_str(),
                        c["chern_number"].get<int>(), c["pre_rounding"].get<double>(),
                        c["defect"].get<double>(), c["verdict"].get<std::string>().c_str());
        }
        if (rep["probes"].contains("bott")) {
            const auto& b = rep["probes"]["bott"];
            std::printf("  bott[T^3 n=%d]: integral %.3e (tol %.3e) -> %s\n",
                        b["grid"].get<int>(), b["integral"].get<double>(),
                        b["quadrature_tolerance"].get<double>(),
                        b["verdict"].get<std::string>().c_str());
        }
    }
    if (rep.contains("residual_slopes")) {
        for (const auto& [name, sj] : rep["residual_slopes"].items()) {
            if (sj["at_noise_floor"].get<bool>())
                std::printf("  slope %-22s at noise floor\n", name.c_str());
            else
                std::printf("  slope %-22s %.2f  %s\n", name.c_str(),
                            sj["slope"].get<double>(),
                            sj["pass"].get<bool>() ? "PASS" : "FAIL");
        }
        std::printf("  integrator order %.2f, fd order-2 %.2f, fd order-4 %.2f\n",
                    rep["integrator_order"].get<double>(),
                    rep["fd_order2"]["slope"].get<double>(),
                    rep["fd_order4"]["slope"].get<double>());
    }
    for (const auto& e : rep["errors"])
        std::cout << "  error (" << e["type"].get<std::string>()
                  << "): " << e["message"].get<std::string>() << "\n";
    std::cout << "verdict: " << rep["verdict"].get<std::string>() << "\n";
}

int emit(const biham::RunResult& res, bool as_json) {
    if (as_json)
        std::cout << res.report.dump(2) << "\n";
    else
        print_human(res.report);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-Hamiltonian construction and verification engine"};
    app.require_subcommand(1);

    bool as_json = false;
    std::string dump_dir;
    double tol_scale = 1.0;
    app.add_flag("--json", as_json, "emit a single JSON report on stdout");
    app.add_option("--dump-samples", dump_dir,
                   "write tube.csv and fields.csv to this directory");
    app.add_option("--tolerance-scale", tol_scale, "multiply every tolerance by this factor");

    std::string scenario_path;
    int levels = 3;

    auto* c_construct =
        app.add_subcommand("construct", "build the Poisson pair and verify all identities");
    c_construct->add_option("scenario", scenario_path, "scenario JSON file")->required();
    auto* c_obstruct =
        app.add_subcommand("obstruct", "run the Chern and Bott obstruction probes");
    c_obstruct->add_option("scenario", scenario_path, "scenario JSON file")->required();
    auto* c_converge = app.add_subcommand("converge", "joint-refinement convergence sweep");
    c_converge->add_option("scenario", scenario_path, "scenario JSON file")->required();
    c_converge->add_option("--levels", levels, "number of refinement levels (default 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        biham::Scenario sc = biham::Scenario::from_file(scenario_path);
        sc.tolerance_scale *= tol_scale;
        if (c_construct->parsed()) return emit(biham::run_construct(sc, dump_dir), as_json);
        if (c_obstruct->parsed()) return emit(biham::run_obstruct(sc), as_json);
        return emit(biham::run_convergence(sc, levels), as_json);
    } catch (const std::exception& e) {
        if (as_json) {
            biham::ordered_json err;
            err["verdict"] = "error";
            err["errors"] = {{{"type", "fatal"}, {"message", e.what()}}};
            std::cout << err.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 2;
    }
}
