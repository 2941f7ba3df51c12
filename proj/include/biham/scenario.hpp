#pragma once

// Batch front-end: named analytic fields, scenario configuration with
// embedded defaults (a minimal file names only the field), end-to-end
// construction runs, obstruction probes, and convergence sweeps. Reports are
// single JSON documents; identical scenarios produce byte-identical report
// bodies apart from the timestamp block.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biham/assemble.hpp"
#include "biham/bundle.hpp"
#include "biham/fields.hpp"

namespace biham {

inline constexpr const char* kVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

struct ChernProbeConfig {
    bool enabled = true;
    std::string surface = "icosphere";  // icosphere | torus | file
    int subdivision = 4;
    double torus_R = 2.0, torus_r = 0.5;
    int torus_nu = 48, torus_nv = 24;
    std::string mesh_file;
};

struct BottProbeConfig {
    std::optional<bool> enabled;  // default: only for periodic-box fields
    int grid = 16;
    std::optional<double> period;  // default: the field's period
};

struct Scenario {
    std::string field_name = "constant";
    FieldParams field_params;
    Point3 base{0, 0, 0};
    Vec3 reference_axis{0, 0, 1};
    double r_d = 0.05;
    int n_r = 5, n_theta = 8;
    double L = 1.0, ds = 1e-3;
    DiffConfig diff{DiffBackend::FiniteDifference, 1e-4, 2};
    double mu1_0 = 0.0, mu2_0 = 1.0;
    std::optional<double> alpha1_0, alpha2_0;  // default |v(base)|
    double eps_sep = 1e-6, eps_q = 1e-8, eps_v = 1e-10;
    std::map<std::string, double> tolerances;  // per-identity overrides
    double tolerance_scale = 1.0;
    ChernProbeConfig chern;
    BottProbeConfig bott;

    static Scenario from_json(const nlohmann::json& j) {
        Scenario sc;
        if (j.contains("field")) {
            const auto& f = j.at("field");
            if (f.is_string()) {
                sc.field_name = f.get<std::string>();
            } else {
                sc.field_name = f.value("name", sc.field_name);
                if (f.contains("params"))
                    for (const auto& [k, v] : f.at("params").items())
                        sc.field_params[k] = v.get<double>();
            }
        }
        auto vec3 = [](const nlohmann::json& a) {
            return Vec3{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
        };
        if (j.contains("base_point")) sc.base = vec3(j.at("base_point"));
        if (j.contains("reference_axis")) sc.reference_axis = vec3(j.at("reference_axis"));
        if (j.contains("tube")) {
            const auto& t = j.at("tube");
            sc.r_d = t.value("r_d", sc.r_d);
            sc.n_r = t.value("n_r", sc.n_r);
            sc.n_theta = t.value("n_theta", sc.n_theta);
            sc.L = t.value("L", sc.L);
            sc.ds = t.value("ds", sc.ds);
        }
        if (j.contains("diff")) {
            const auto& d = j.at("diff");
            const std::string backend = d.value("backend", std::string("fd"));
            if (backend == "exact")
                sc.diff.backend = DiffBackend::Exact;
            else if (backend == "fd" || backend == "finite-difference")
                sc.diff.backend = DiffBackend::FiniteDifference;
            else
                throw std::invalid_argument("scenario: unknown diff backend '" + backend + "'");
            sc.diff.h = d.value("h", sc.diff.h);
            sc.diff.order = d.value("order", sc.diff.order);
        }
        if (j.contains("initial")) {
            const auto& i = j.at("initial");
            sc.mu1_0 = i.value("mu1", sc.mu1_0);
            sc.mu2_0 = i.value("mu2", sc.mu2_0);
            if (i.contains("alpha1") && !i.at("alpha1").is_null())
                sc.alpha1_0 = i.at("alpha1").get<double>();
            if (i.contains("alpha2") && !i.at("alpha2").is_null())
                sc.alpha2_0 = i.at("alpha2").get<double>();
        }
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items())
                sc.tolerances[k] = v.get<double>();
        if (j.contains("probes")) {
            const auto& p = j.at("probes");
            if (p.contains("chern")) {
                const auto& c = p.at("chern");
                sc.chern.enabled = c.value("enabled", true);
                sc.chern.surface = c.value("surface", sc.chern.surface);
                sc.chern.subdivision = c.value("subdivision", sc.chern.subdivision);
                sc.chern.torus_R = c.value("torus_R", sc.chern.torus_R);
                sc.chern.torus_r = c.value("torus_r", sc.chern.torus_r);
                sc.chern.torus_nu = c.value("torus_nu", sc.chern.torus_nu);
                sc.chern.torus_nv = c.value("torus_nv", sc.chern.torus_nv);
                sc.chern.mesh_file = c.value("file", sc.chern.mesh_file);
            }
            if (p.contains("bott")) {
                const auto& b = p.at("bott");
                if (b.contains("enabled")) sc.bott.enabled = b.at("enabled").get<bool>();
                sc.bott.grid = b.value("grid", sc.bott.grid);
                if (b.contains("period")) sc.bott.period = b.at("period").get<double>();
            }
        }
        return sc;
    }

    static Scenario from_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::invalid_argument("scenario: cannot open " + path);
        nlohmann::json j;
        is >> j;
        return from_json(j);
    }

    AnalyticVectorField make_field() const { return fields::make(field_name, field_params); }

    // Full effective configuration, embedded in every report.
    ordered_json to_json() const {
        ordered_json j;
        j["field"]["name"] = field_name;
        j["field"]["params"] = field_params;
        j["base_point"] = {base.x, base.y, base.z};
        j["reference_axis"] = {reference_axis.x, reference_axis.y, reference_axis.z};
        j["tube"] = {{"r_d", r_d}, {"n_r", n_r}, {"n_theta", n_theta}, {"L", L}, {"ds", ds}};
        j["diff"] = {{"backend", diff.backend == DiffBackend::Exact ? "exact" : "fd"},
                     {"h", diff.h},
                     {"order", diff.order}};
        j["initial"]["mu1"] = mu1_0;
        j["initial"]["mu2"] = mu2_0;
        j["initial"]["alpha1"] = alpha1_0 ? ordered_json(*alpha1_0) : ordered_json(nullptr);
        j["initial"]["alpha2"] = alpha2_0 ? ordered_json(*alpha2_0) : ordered_json(nullptr);
        j["eps"] = {{"sep", eps_sep}, {"q", eps_q}, {"v", eps_v}};
        j["tolerances"] = tolerances;
        j["tolerance_scale"] = tolerance_scale;
        j["probes"]["chern"] = {{"enabled", chern.enabled},
                                {"surface", chern.surface},
                                {"subdivision", chern.subdivision},
                                {"torus_R", chern.torus_R},
                                {"torus_r", chern.torus_r},
                                {"torus_nu", chern.torus_nu},
                                {"torus_nv", chern.torus_nv},
                                {"file", chern.mesh_file}};
        j["probes"]["bott"] = {
            {"enabled", bott.enabled ? ordered_json(*bott.enabled) : ordered_json(nullptr)},
            {"grid", bott.grid},
            {"period", bott.period ? ordered_json(*bott.period) : ordered_json(nullptr)}};
        return j;
    }

    ToleranceTable tolerance_table() const {
        ToleranceTable t = ToleranceTable::defaults(ds, diff.h, r_d);
        for (const auto& [k, v] : tolerances) t.tol[k] = v;
        if (tolerances.count("identity_default"))
            t.identity_default = tolerances.at("identity_default");
        t.identity_default *= tolerance_scale;
        for (auto& [k, v] : t.tol) v *= tolerance_scale;
        return t;
    }
};

namespace detail {

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline ordered_json timestamp_block() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return ordered_json{{"iso8601", buf}};
}

inline ordered_json stat_json(const ResidualStat& st) {
    return ordered_json{{"max", st.max_abs},
                        {"mean", st.mean_abs},
                        {"argmax",
                         {{"seed", st.argmax_seed},
                          {"k", st.argmax_k},
                          {"x", {st.argmax_x.x, st.argmax_x.y, st.argmax_x.z}}}},
                        {"tolerance", st.tolerance},
                        {"pass", st.pass()}};
}

// least-squares slope of -log2(residual) against level; +inf-like levels at
// the noise floor are reported as "floor"
inline ordered_json slope_json(const std::vector<double>& values, double floor = 1e-12) {
    bool all_floor = true;
    for (double v : values) all_floor = all_floor && v <= floor;
    ordered_json j;
    j["values"] = values;
    if (all_floor || values.size() < 2) {
        j["slope"] = nullptr;
        j["at_noise_floor"] = all_floor;
        return j;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i) {
        const double y = -std::log2(std::max(values[i], floor));
        sx += i; sy += y; sxx += double(i) * i; sxy += i * y;
    }
    j["slope"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    j["at_noise_floor"] = false;
    return j;
}

}  // namespace detail

struct RunResult {
    ordered_json report;
    int exit_code = 0;  // 0 pass, 1 tolerance failure, 2 structured error
};

inline ordered_json report_skeleton(const char* command, const Scenario& sc) {
    ordered_json rep;
    rep["version"] = kVersion;
    rep["command"] = command;
    rep["scenario"] = sc.to_json();
    rep["config_hash"] = detail::fnv1a_hex(rep["scenario"].dump());
    rep["timestamp"] = detail::timestamp_block();
    return rep;
}

inline RunResult run_construct(const Scenario& sc, const std::string& dump_dir = "") {
    ordered_json rep = report_skeleton("construct", sc);
    try {
        const AnalyticVectorField f = sc.make_field();
        const AdaptedFrame frame = build_frame(f.field, sc.reference_axis, sc.eps_v);
        StreamTube tube = build_tube(f.field, frame, sc.base, sc.r_d, sc.n_r, sc.n_theta,
                                     sc.L, sc.ds, sc.eps_v);
        ConstructOptions opts;
        opts.mu1_0 = sc.mu1_0;
        opts.mu2_0 = sc.mu2_0;
        opts.alpha1_0 = sc.alpha1_0;
        opts.alpha2_0 = sc.alpha2_0;
        opts.eps_sep = sc.eps_sep;
        opts.eps_q = sc.eps_q;
        opts.diff = sc.diff;
        const Construction cx = construct_pair(frame, std::move(tube), opts);
        const ResidualReport rr = evaluate_residuals(cx, sc.tolerance_table());

        rep["residuals"] = ordered_json::object();
        for (const auto& st : rr.stats) rep["residuals"][st.name] = detail::stat_json(st);

        const int stride = std::max(1, cx.tube.n_samples / 64);
        const ConnectionReport conn = connection_report(cx, stride);
        rep["diagnostics"] = {
            {"path_independence", cx.path_independence},
            {"hamiltonian_closedness", cx.max_closedness_residual},
            {"min_mu_separation", cx.pair.min_mu_separation},
            {"min_cross_norm", cx.pair.min_cross_norm},
            {"connection",
             {{"gamma_fit_residual", conn.gamma_fit_residual},
              {"gamma_e1_contraction", conn.gamma_e1_contraction},
              {"big_gamma_residual", conn.big_gamma_residual},
              {"gauge_coherence", conn.gauge_coherence},
              {"curvature_closure", conn.curvature_closure},
              {"kappa_decomposability", conn.kappa_decomposability},
              {"form_vec_compat_gap", conn.form_vec_compat_gap}}}};

        if (!dump_dir.empty()) {
            std::ofstream tcsv(dump_dir + "/tube.csv");
            write_tube_csv(tcsv, cx.tube);
            std::ofstream fcsv(dump_dir + "/fields.csv");
            fcsv << "seed_i,seed_j,s,x,y,z,mu1,mu2,alpha1,alpha2,phi,H1,H2\n";
            char buf[400];
            for (int sd = 0; sd < cx.tube.n_seeds(); ++sd)
                for (int k = 0; k < cx.tube.n_samples; ++k) {
                    const Point3& p = cx.tube.x(sd, k);
                    std::snprintf(buf, sizeof(buf),
                                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                                  "%.17g,%.17g,%.17g\n",
                                  cx.tube.seeds[sd].ring, cx.tube.seeds[sd].jang,
                                  cx.tube.s_at(k), p.x, p.y, p.z, cx.pair.J1.mu.at(sd, k),
                                  cx.pair.J2.mu.at(sd, k), cx.pair.J1.alpha.at(sd, k),
                                  cx.pair.J2.alpha.at(sd, k), cx.pair.phi.at(sd, k),
                                  cx.pair.H1.at(sd, k), cx.pair.H2.at(sd, k));
                    fcsv << buf;
                }
        }

        const bool pass = rr.pass();
        rep["verdict"] = pass ? "pass" : "fail";
        rep["errors"] = ordered_json::array();
        return {rep, pass ? 0 : 1};
    } catch (const BihamError& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "numerical"}, {"message", e.what()}}};
        return {rep, 2};
    } catch (const std::invalid_argument& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "argument"}, {"message", e.what()}}};
        return {rep, 2};
    }
}

inline RunResult run_obstruct(const Scenario& sc) {
    ordered_json rep = report_skeleton("obstruct", sc);
    try {
        const AnalyticVectorField f = sc.make_field();
        rep["probes"] = ordered_json::object();

        if (sc.chern.enabled) {
            TriangulatedSurface mesh;
            if (!sc.chern.mesh_file.empty())
                mesh = load_mesh(sc.chern.mesh_file);
            else if (sc.chern.surface == "torus")
                mesh = torus_mesh(sc.chern.torus_R, sc.chern.torus_r, sc.chern.torus_nu,
                                  sc.chern.torus_nv);
            else
                mesh = icosphere(sc.chern.subdivision);
            const ChernResult res = chern_number(f.field, mesh);
            rep["probes"]["chern"] = {
                {"surface", sc.chern.mesh_file.empty() ? sc.chern.surface : sc.chern.mesh_file},
                {"triangles", mesh.n_triangles()},
                {"chern_number", res.chern},
                {"pre_rounding", res.real},
                {"defect", res.defect},
                {"verdict", res.chern == 0 ? "no obstruction detected"
                                           : "obstruction: normal bundle nontrivial"}};
        }

        const bool bott_enabled = sc.bott.enabled.value_or(f.periodic || f.name == "constant");
        if (bott_enabled) {
            const double period = sc.bott.period.value_or(f.periodic ? f.period : 2.0 * M_PI);
            const BottProbe probe =
                bott_probe(f.field, period, sc.bott.grid, sc.reference_axis);
            const double quad_tol = std::max(1e-10, 10.0 * probe.richardson_error);
            rep["probes"]["bott"] = {
                {"grid", probe.grid_n},
                {"period", probe.period},
                {"integral", probe.integral},
                {"richardson_error", probe.richardson_error},
                {"quadrature_tolerance", quad_tol},
                {"max_section_jacobi", probe.max_section_jacobi},
                {"max_xi_norm", probe.max_xi_norm},
                {"verdict", std::abs(probe.integral) <= quad_tol
                                ? "no obstruction evidence (zero integral is evidence, not proof)"
                                : "obstruction: Xi integral nonzero"}};
        }

        rep["verdict"] = "pass";
        rep["errors"] = ordered_json::array();
        return {rep, 0};
    } catch (const BihamError& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "numerical"}, {"message", e.what()}}};
        return {rep, 2};
    } catch (const std::invalid_argument& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "argument"}, {"message", e.what()}}};
        return {rep, 2};
    }
}

inline RunResult run_convergence(const Scenario& sc, int levels) {
    ordered_json rep = report_skeleton("converge", sc);
    try {
        if (levels < 2) throw std::invalid_argument("converge: need at least 2 levels");
        const AnalyticVectorField f = sc.make_field();

        std::map<std::string, std::vector<double>> table;
        for (int lev = 0; lev < levels; ++lev) {
            Scenario s = sc;
            const double sc2 = 1.0 / double(1 << lev);
            s.ds *= sc2;
            s.diff.h *= sc2;
            s.r_d *= sc2;
            const AdaptedFrame frame = build_frame(f.field, s.reference_axis, s.eps_v);
            StreamTube tube = build_tube(f.field, frame, s.base, s.r_d, s.n_r, s.n_theta,
                                         s.L, s.ds, s.eps_v);
            ConstructOptions opts;
            opts.mu1_0 = s.mu1_0;
            opts.mu2_0 = s.mu2_0;
            opts.alpha1_0 = s.alpha1_0;
            opts.alpha2_0 = s.alpha2_0;
            opts.eps_sep = s.eps_sep;
            opts.diff = s.diff;
            const Construction cx = construct_pair(frame, std::move(tube), opts);
            const ResidualReport rr = evaluate_residuals(cx, s.tolerance_table());
            for (const auto& st : rr.stats) table[st.name].push_back(st.max_abs);
        }

        rep["levels"] = levels;
        rep["residual_slopes"] = ordered_json::object();
        bool pass = true;
        // identities whose residuals must decrease at 2nd order
        const std::vector<std::string> identity_keys = {
            "jacobi_J1", "jacobi_J2",        "compatibility_vec", "bihamiltonian_r1",
            "bihamiltonian_r2", "lemma1",    "two_form"};
        for (const auto& [name, values] : table) {
            ordered_json sj = detail::slope_json(values);
            const bool is_identity =
                std::find(identity_keys.begin(), identity_keys.end(), name) !=
                identity_keys.end();
            bool ok = true;
            if (is_identity && !sj["at_noise_floor"].get<bool>())
                ok = sj["slope"].get<double>() >= 1.9;
            sj["pass"] = ok;
            pass = pass && ok;
            rep["residual_slopes"][name] = sj;
        }

        // integrator order (step halving on the scenario's own field)
        const double integ_order =
            streamline_order_estimate(f.field, sc.base, std::min(1.0, sc.L), 0.05);
        rep["integrator_order"] = integ_order;
        pass = pass && integ_order >= 3.9;

        // finite-difference backend orders on a smooth reference field
        ScalarField probe{[](const Point3& p) {
                              return std::sin(p.x) * std::cos(p.y) * std::exp(0.3 * p.z);
                          },
                          {},
                          {}};
        auto exact = [](const Point3& p) {
            const double e = std::exp(0.3 * p.z);
            return Vec3{std::cos(p.x) * std::cos(p.y) * e,
                        -std::sin(p.x) * std::sin(p.y) * e,
                        0.3 * std::sin(p.x) * std::cos(p.y) * e};
        };
        const Point3 x0{0.4, -0.7, 0.2};
        for (int order : {2, 4}) {
            std::vector<double> errs;
            const double h0 = order == 2 ? 1e-2 : 1e-1;
            for (int lev = 0; lev < 3; ++lev) {
                const DiffConfig c{DiffBackend::FiniteDifference, h0 / (1 << lev), order};
                errs.push_back((grad(probe, x0, c) - exact(x0)).norm());
            }
            ordered_json sj = detail::slope_json(errs);
            const double need = order == 2 ? 1.9 : 3.8;
            sj["pass"] = sj["slope"].get<double>() >= need;
            pass = pass && sj["pass"].get<bool>();
            rep[order == 2 ? "fd_order2" : "fd_order4"] = sj;
        }

        rep["verdict"] = pass ? "pass" : "fail";
        rep["errors"] = ordered_json::array();
        return {rep, pass ? 0 : 1};
    } catch (const BihamError& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "numerical"}, {"message", e.what()}}};
        return {rep, 2};
    } catch (const std::invalid_argument& e) {
        rep["verdict"] = "error";
        rep["errors"] = {{{"type", "argument"}, {"message", e.what()}}};
        return {rep, 2};
    }
}

}  // namespace biham
