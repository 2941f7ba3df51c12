#pragma once

// Differential-form layer over the normal bundle Q = v-perp: Poisson
// one-forms, the connection gamma (d K_i = gamma ^ K_i, contracted by e1 to
// zero), gauge-fixed per-section connections Gamma_i, curvature kappa, the
// 3-form Xi = (Gamma_1 - Gamma_2) ^ kappa, and the two global-obstruction
// probes: a discrete-holonomy Chern number on closed surfaces and the
// periodic-box integral of Xi.
//
// Connection gauges are fixed explicitly (minimal-norm for gamma,
// Gamma(j-sharp) = 0 for Gamma_i); the forms are defined only up to multiples
// of j_i, so every gauge-dependent comparison is wedged with j_i first.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "biham/assemble.hpp"
#include "biham/calc3.hpp"
#include "biham/errors.hpp"
#include "biham/mesh.hpp"

namespace biham {

// The plane Q_x = v(x)-perp with its complex structure (rotation by +90
// degrees about e1); squares to -identity on the plane.
struct NormalPlaneField {
    Vec3 e1;  // unit flow direction

    static NormalPlaneField at(const VectorField& v, const Point3& x, double eps_v = 1e-10) {
        const Vec3 u = v.eval(x);
        const double n = u.norm();
        if (!(n >= eps_v)) throw VanishingFieldError("NormalPlaneField: |v| < eps_v", x);
        return {u / n};
    }
    Vec3 project(const Vec3& u) const { return u - e1 * u.dot(e1); }
    Vec3 rotate90(const Vec3& u) const { return e1.cross(u); }
};

// ---------------------------------------------------------------------------
// Connection fits (pointwise, on form values)
// ---------------------------------------------------------------------------

struct GammaFit {
    FormValue gamma{1, {}};
    double residual = 0.0;    // | dK - gamma ^ K | over both inputs
    bool rank_deficient = false;
};

// Minimal-norm least-squares solution of the six scalar equations
// dK_i = gamma ^ K_i (i = 1, 2) in the three components of gamma.
inline GammaFit fit_gamma_value(const FormValue& K1, const FormValue& dK1,
                                const FormValue& K2, const FormValue& dK2) {
    Eigen::Matrix<double, 6, 3> A;
    Eigen::Matrix<double, 6, 1> b;
    const FormValue* K[2] = {&K1, &K2};
    const FormValue* dK[2] = {&dK1, &dK2};
    for (int i = 0; i < 2; ++i) {
        // gamma ^ K has 2-form components gamma x k
        const Mat3 Ai = Mat3::cross_matrix(K[i]->c) * (-1.0);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) A(3 * i + r, c) = Ai(r, c);
            b(3 * i + r) = dK[i]->c[r];
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(A,
                                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const Eigen::Vector3d g = svd.solve(b);
    GammaFit fit;
    fit.gamma = FormValue{1, {g(0), g(1), g(2)}};
    fit.residual = (A * g - b).norm();
    fit.rank_deficient = svd.rank() < 3;
    return fit;
}

// Gauge-fixed closed-form per-section connection,
//   Gamma = -i_{j-sharp}(d j) / |j|^2,   gauge  Gamma(j-sharp) = 0 exactly,
// with the d j - Gamma ^ j residual reported. Inputs whose form-language
// Jacobi residual |j ^ dj| exceeds the threshold are rejected.
inline FormValue fit_big_gamma_value(const FormValue& j, const FormValue& dj,
                                     double* fit_residual = nullptr,
                                     double jacobi_threshold = 1e-3) {
    const double jacobi = wedge(j, dj).scalar_part();
    if (std::abs(jacobi) > jacobi_threshold)
        throw NotPoissonError("fit_big_gamma: input 1-form is not Poisson (j ^ dj != 0)",
                              jacobi);
    const double n2 = j.c.norm_sq();
    const FormValue gamma = contract(j.c, dj) * (-1.0 / n2);
    if (fit_residual) *fit_residual = (dj - wedge(gamma, j)).norm();
    return gamma;
}

inline GammaFit fit_gamma(const FormField& K1, const FormField& K2, const Point3& x,
                          const DiffConfig& cfg) {
    return fit_gamma_value(K1.eval(x), ext_deriv(K1, x, cfg), K2.eval(x),
                           ext_deriv(K2, x, cfg));
}

inline FormValue fit_big_gamma(const FormField& j, const Point3& x, const DiffConfig& cfg,
                               double* fit_residual = nullptr,
                               double jacobi_threshold = 1e-3) {
    return fit_big_gamma_value(j.eval(x), ext_deriv(j, x, cfg), fit_residual,
                               jacobi_threshold);
}

// Xi = (Gamma_1 - Gamma_2) ^ kappa.
inline FormValue xi_value(const FormValue& Gamma1, const FormValue& Gamma2,
                          const FormValue& kappa) {
    return wedge(Gamma1 - Gamma2, kappa);
}

// ---------------------------------------------------------------------------
// Tube-sampled forms
// ---------------------------------------------------------------------------

// Exterior derivative of a tube-sampled form (components in the coordinate
// coframe) via tube-chart ambient gradients. grade 1 -> 2 or 2 -> 3.
inline FormValue tube_ext_deriv(const StreamTube& tube, const TubeVec3& w, int grade,
                                int seed, int k) {
    Mat3 jac;
    for (int c = 0; c < 3; ++c) {
        const Vec3 g = tube.ambient_grad(w.comp[c], seed, k);
        for (int j = 0; j < 3; ++j) jac(c, j) = g[j];
    }
    if (grade == 1) return FormValue{2, curl_of(jac)};
    if (grade == 2) return FormValue::scalar(3, jac.trace());
    throw std::invalid_argument("tube_ext_deriv: grade must be 1 or 2");
}

// Metric-dual unit Poisson 1-forms j_i = (J_i/|J_i|)-flat.
inline TubeVec3 tube_unit_form(const Construction& cx, int i) {
    const PoissonField& J = (i == 1) ? cx.pair.J1 : cx.pair.J2;
    TubeVec3 out = TubeVec3::make(cx.tube);
    for (int s = 0; s < cx.tube.n_seeds(); ++s)
        for (int k = 0; k < cx.tube.n_samples; ++k) {
            const Vec3 j = J.at(s, k);
            const double n = j.norm();
            if (!(n > 0.0))
                throw DegeneratePairError("unit_poisson_forms: |J| vanished on the tube");
            out.set(s, k, j / n);
        }
    return out;
}

// The canonical 1-forms K_i = J_i / phi (so K_i = (-1)^{i+1} dH_i).
inline TubeVec3 tube_canonical_form(const Construction& cx, int i) {
    const PoissonField& J = (i == 1) ? cx.pair.J1 : cx.pair.J2;
    TubeVec3 out = TubeVec3::make(cx.tube);
    for (int s = 0; s < cx.tube.n_seeds(); ++s)
        for (int k = 0; k < cx.tube.n_samples; ++k)
            out.set(s, k, J.at(s, k) / cx.pair.phi.at(s, k));
    return out;
}

inline TubeScalar tube_log_norm(const StreamTube& tube, const TubeVec3& w) {
    TubeScalar out = tube.make_scalar();
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; ++k) out.values[s][k] = std::log(w.at(s, k).norm());
    return out;
}

// Connection diagnostics over a construction; maxima over the sampled tube.
struct ConnectionReport {
    double gamma_fit_residual = 0.0;      // joint fit d K_i = gamma ^ K_i
    double gamma_e1_contraction = 0.0;    // |i_{e1} gamma|
    double big_gamma_residual = 0.0;      // d j_i - Gamma_i ^ j_i
    double gauge_coherence = 0.0;         // |(Gamma_i - gamma + d ln|K_i|) ^ j_i|
    double curvature_closure = 0.0;       // |d kappa|
    double kappa_decomposability = 0.0;   // |kappa ^ j_i| for kappa = d(gamma - d ln|K_1|)
    double form_vec_compat_gap = 0.0;     // form-language vs vector-language compatibility
};

inline ConnectionReport connection_report(const Construction& cx, int stride = 1) {
    const StreamTube& tube = cx.tube;
    ConnectionReport rep;

    const TubeVec3 j1 = tube_unit_form(cx, 1), j2 = tube_unit_form(cx, 2);
    const TubeVec3 K1 = tube_canonical_form(cx, 1), K2 = tube_canonical_form(cx, 2);
    const TubeScalar lnK1 = tube_log_norm(tube, K1), lnK2 = tube_log_norm(tube, K2);

    // canonical-gauge Gamma_1 = gamma - d ln|K_1| sampled for the curvature
    TubeVec3 Gamma1_canon = TubeVec3::make(tube);
    TubeVec3 kappa_f = TubeVec3::make(tube);

    for (int s = 0; s < tube.n_seeds(); ++s) {
        for (int k = 0; k < tube.n_samples; ++k) {
            const FormValue k1{1, K1.at(s, k)}, k2{1, K2.at(s, k)};
            const FormValue dk1 = tube_ext_deriv(tube, K1, 1, s, k);
            const FormValue dk2 = tube_ext_deriv(tube, K2, 1, s, k);
            const GammaFit fit = fit_gamma_value(k1, dk1, k2, dk2);
            Gamma1_canon.set(
                s, k, fit.gamma.c - tube.ambient_grad(lnK1, s, k));
        }
    }
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; ++k)
            kappa_f.set(s, k, tube_ext_deriv(tube, Gamma1_canon, 1, s, k).c);

    for (int s = 0; s < tube.n_seeds(); s += 1) {
        for (int k = 0; k < tube.n_samples; k += stride) {
            const FormValue jv1{1, j1.at(s, k)}, jv2{1, j2.at(s, k)};
            const FormValue kv1{1, K1.at(s, k)}, kv2{1, K2.at(s, k)};
            const FormValue dj1 = tube_ext_deriv(tube, j1, 1, s, k);
            const FormValue dj2 = tube_ext_deriv(tube, j2, 1, s, k);
            const FormValue dk1 = tube_ext_deriv(tube, K1, 1, s, k);
            const FormValue dk2 = tube_ext_deriv(tube, K2, 1, s, k);

            const GammaFit fit = fit_gamma_value(kv1, dk1, kv2, dk2);
            rep.gamma_fit_residual = std::max(rep.gamma_fit_residual, fit.residual);
            rep.gamma_e1_contraction =
                std::max(rep.gamma_e1_contraction,
                         std::abs(fit.gamma.c.dot(cx.frame_data.frames[s][k].e1)));

            double r1 = 0.0, r2 = 0.0;
            const FormValue G1 = fit_big_gamma_value(jv1, dj1, &r1, 1e10);
            const FormValue G2 = fit_big_gamma_value(jv2, dj2, &r2, 1e10);
            rep.big_gamma_residual = std::max(rep.big_gamma_residual, std::max(r1, r2));

            // Eq. d j_i = (gamma - d ln|K_i|) ^ j_i, wedge-tested to kill the
            // j_i-multiple gauge freedom
            const Vec3 dlnK1 = tube.ambient_grad(lnK1, s, k);
            const Vec3 dlnK2 = tube.ambient_grad(lnK2, s, k);
            const double gc1 =
                wedge(FormValue{1, G1.c - fit.gamma.c + dlnK1}, jv1).norm();
            const double gc2 =
                wedge(FormValue{1, G2.c - fit.gamma.c + dlnK2}, jv2).norm();
            rep.gauge_coherence = std::max(rep.gauge_coherence, std::max(gc1, gc2));

            const FormValue kappa{2, kappa_f.at(s, k)};
            rep.kappa_decomposability =
                std::max(rep.kappa_decomposability,
                         std::max(std::abs(wedge(kappa, jv1).scalar_part()),
                                  std::abs(wedge(kappa, jv2).scalar_part())));
            rep.curvature_closure =
                std::max(rep.curvature_closure,
                         std::abs(tube_ext_deriv(tube, kappa_f, 2, s, k).scalar_part()));
        }
    }

    // form-language compatibility via tube exterior derivatives of the raw
    // Poisson 1-forms, against the cancellation-based vector route
    TubeVec3 J1f = TubeVec3::make(tube), J2f = TubeVec3::make(tube);
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; ++k) {
            J1f.set(s, k, cx.pair.J1.at(s, k));
            J2f.set(s, k, cx.pair.J2.at(s, k));
        }
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; k += stride) {
            const FormValue f1{1, J1f.at(s, k)}, f2{1, J2f.at(s, k)};
            const double form_lang =
                wedge(f1, tube_ext_deriv(tube, J2f, 1, s, k)).scalar_part() +
                wedge(f2, tube_ext_deriv(tube, J1f, 1, s, k)).scalar_part();
            const double vec_lang =
                compatibility_residual_vec(tube, cx.frame_data, cx.pair.J1, cx.pair.J2, s, k);
            rep.form_vec_compat_gap =
                std::max(rep.form_vec_compat_gap, std::abs(form_lang - vec_lang));
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Periodic-box (T^3) forms and the Bott-class probe
// ---------------------------------------------------------------------------

struct PeriodicGrid {
    int n = 0;
    double period = 2.0 * M_PI;

    double h() const { return period / n; }
    long size() const { return static_cast<long>(n) * n * n; }
    long id(int i, int j, int k) const {
        auto w = [this](int a) { return ((a % n) + n) % n; };
        return (static_cast<long>(w(i)) * n + w(j)) * n + w(k);
    }
    Point3 point(int i, int j, int k) const {
        return {i * h(), j * h(), k * h()};
    }
};

struct GridScalar {
    std::vector<double> v;
    explicit GridScalar(const PeriodicGrid& g) : v(g.size(), 0.0) {}
};

using GridForm1 = std::array<GridScalar, 3>;

// 4th-order periodic central difference along one axis.
inline GridScalar grid_partial(const PeriodicGrid& g, const GridScalar& f, int axis) {
    GridScalar out(g);
    const double c = 1.0 / (12.0 * g.h());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                auto at = [&](int d) {
                    const int ii = i + (axis == 0 ? d : 0);
                    const int jj = j + (axis == 1 ? d : 0);
                    const int kk = k + (axis == 2 ? d : 0);
                    return f.v[g.id(ii, jj, kk)];
                };
                out.v[g.id(i, j, k)] =
                    (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) * c;
            }
    return out;
}

// d of a grid 1-form (curl pattern) and of a grid 2-form (div pattern).
inline GridForm1 grid_ext_deriv1(const PeriodicGrid& g, const GridForm1& w) {
    const GridScalar dPy = grid_partial(g, w[0], 1), dPz = grid_partial(g, w[0], 2);
    const GridScalar dQx = grid_partial(g, w[1], 0), dQz = grid_partial(g, w[1], 2);
    const GridScalar dRx = grid_partial(g, w[2], 0), dRy = grid_partial(g, w[2], 1);
    GridForm1 out{GridScalar(g), GridScalar(g), GridScalar(g)};
    for (long t = 0; t < g.size(); ++t) {
        out[0].v[t] = dRy.v[t] - dQz.v[t];
        out[1].v[t] = dPz.v[t] - dRx.v[t];
        out[2].v[t] = dQx.v[t] - dPy.v[t];
    }
    return out;
}

inline GridScalar grid_ext_deriv2(const PeriodicGrid& g, const GridForm1& w) {
    const GridScalar dAx = grid_partial(g, w[0], 0);
    const GridScalar dBy = grid_partial(g, w[1], 1);
    const GridScalar dCz = grid_partial(g, w[2], 2);
    GridScalar out(g);
    for (long t = 0; t < g.size(); ++t) out.v[t] = dAx.v[t] + dBy.v[t] + dCz.v[t];
    return out;
}

// Rectangle-rule integral of a 3-form over the periodic box (exact for trig
// polynomials below the grid Nyquist), with a coarse-grid Richardson error
// estimate when n is even.
inline double integrate_3form_torus(const PeriodicGrid& g, const GridScalar& w,
                                    double* richardson_error = nullptr) {
    double acc = 0.0;
    for (double x : w.v) acc += x;
    const double vol = g.period * g.period * g.period;
    const double full = acc / static_cast<double>(g.size()) * vol;
    if (richardson_error) {
        *richardson_error = 0.0;
        if (g.n % 2 == 0) {
            double acc2 = 0.0;
            for (int i = 0; i < g.n; i += 2)
                for (int j = 0; j < g.n; j += 2)
                    for (int k = 0; k < g.n; k += 2) acc2 += w.v[g.id(i, j, k)];
            const double half = acc2 / (static_cast<double>(g.n / 2) * (g.n / 2) * (g.n / 2)) * vol;
            *richardson_error = std::abs(full - half);
        }
    }
    return full;
}

// Samples must wrap: f(x + period e_axis) = f(x) on probe points.
inline void check_periodicity(const std::function<double(const Point3&)>& f, double period,
                              double tol = 1e-9) {
    const Point3 probes[4] = {{0.1, 0.2, 0.3}, {1.0, 0.0, 2.0}, {0.0, 0.0, 0.0}, {2.2, 1.1, 0.4}};
    for (const Point3& p : probes)
        for (int axis = 0; axis < 3; ++axis) {
            Point3 q = p;
            q[axis] += period;
            if (std::abs(f(p) - f(q)) > tol)
                throw PeriodicityError("periodic-box data does not wrap within tolerance");
        }
}

// Necessary-condition probe for the second obstruction: Xi assembled from the
// global Gram-Schmidt sections of Q^*, integrated over the periodic box. A
// nonzero integral certifies an obstruction; zero is evidence, not proof. The
// sections' own form-language Jacobi defects are reported so the caller can
// judge how far the inputs are from Poisson.
struct BottProbe {
    double integral = 0.0;
    double richardson_error = 0.0;
    double max_section_jacobi = 0.0;  // max |j_i ^ d j_i|
    double max_xi_norm = 0.0;
    int grid_n = 0;
    double period = 0.0;
};

inline BottProbe bott_probe(const VectorField& v, double period, int n,
                            Vec3 reference_axis = {0, 0, 1}) {
    if (n < 8) throw std::invalid_argument("bott_probe: grid too coarse (n >= 8)");
    const PeriodicGrid g{n, period};
    check_periodicity([&v](const Point3& p) { return v.eval(p).x + 0.7 * v.eval(p).y +
                                                     0.13 * v.eval(p).z; },
                      period);

    const AdaptedFrame frame = build_frame(v, reference_axis);
    GridForm1 j1{GridScalar(g), GridScalar(g), GridScalar(g)};
    GridForm1 j2{GridScalar(g), GridScalar(g), GridScalar(g)};
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const FrameValue f = frame.at(g.point(i, j, k));
                const long t = g.id(i, j, k);
                for (int c = 0; c < 3; ++c) {
                    j1[c].v[t] = f.e2[c];
                    j2[c].v[t] = f.e3[c];
                }
            }

    const GridForm1 dj1 = grid_ext_deriv1(g, j1);
    const GridForm1 dj2 = grid_ext_deriv1(g, j2);

    GridForm1 Gamma1{GridScalar(g), GridScalar(g), GridScalar(g)};
    GridForm1 Gamma2{GridScalar(g), GridScalar(g), GridScalar(g)};
    BottProbe probe;
    probe.grid_n = n;
    probe.period = period;
    for (long t = 0; t < g.size(); ++t) {
        const FormValue jv1{1, {j1[0].v[t], j1[1].v[t], j1[2].v[t]}};
        const FormValue jv2{1, {j2[0].v[t], j2[1].v[t], j2[2].v[t]}};
        const FormValue dv1{2, {dj1[0].v[t], dj1[1].v[t], dj1[2].v[t]}};
        const FormValue dv2{2, {dj2[0].v[t], dj2[1].v[t], dj2[2].v[t]}};
        probe.max_section_jacobi =
            std::max(probe.max_section_jacobi,
                     std::max(std::abs(wedge(jv1, dv1).scalar_part()),
                              std::abs(wedge(jv2, dv2).scalar_part())));
        const FormValue G1 = fit_big_gamma_value(jv1, dv1, nullptr, 1e100);
        const FormValue G2 = fit_big_gamma_value(jv2, dv2, nullptr, 1e100);
        for (int c = 0; c < 3; ++c) {
            Gamma1[c].v[t] = G1.c[c];
            Gamma2[c].v[t] = G2.c[c];
        }
    }

    const GridForm1 kappa = grid_ext_deriv1(g, Gamma1);
    GridScalar xi(g);
    for (long t = 0; t < g.size(); ++t) {
        const FormValue dG{1, {Gamma1[0].v[t] - Gamma2[0].v[t], Gamma1[1].v[t] - Gamma2[1].v[t],
                               Gamma1[2].v[t] - Gamma2[2].v[t]}};
        const FormValue kv{2, {kappa[0].v[t], kappa[1].v[t], kappa[2].v[t]}};
        const FormValue x = wedge(dG, kv);
        xi.v[t] = x.scalar_part();
        probe.max_xi_norm = std::max(probe.max_xi_norm, std::abs(x.scalar_part()));
    }
    probe.integral = integrate_3form_torus(g, xi, &probe.richardson_error);
    return probe;
}

// ---------------------------------------------------------------------------
// Chern number by discrete holonomy
// ---------------------------------------------------------------------------

enum class TransportRule {
    MinimalRotation,  // rotation about v_p x v_q; exact fiber isometry
    Projection        // orthogonal projection onto the next fiber
};

struct ChernResult {
    int chern = 0;
    double real = 0.0;    // pre-rounding angle sum / 2 pi
    double defect = 0.0;  // |real - chern|
};

namespace detail {

inline Vec3 transport(const Vec3& u, const Vec3& np, const Vec3& nq, TransportRule rule) {
    if (rule == TransportRule::Projection) return u - nq * u.dot(nq);
    const Vec3 axis = np.cross(nq);
    const double s = axis.norm();
    if (s < 1e-15) return u;
    return rotation_about(axis / s, std::atan2(s, np.dot(nq))) * u;
}

}  // namespace detail

// Parallel-transports a fiber basis of Q around each oriented triangle, sums
// the per-triangle rotation angles (polar angle of the 2x2 holonomy matrix,
// scale-invariant) and divides by 2 pi.
inline ChernResult chern_number(const VectorField& v, const TriangulatedSurface& mesh,
                                TransportRule rule = TransportRule::MinimalRotation,
                                double eps_v = 1e-10) {
    mesh.validate_closed();
    std::vector<Vec3> dir(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const Vec3 u = v.eval(mesh.vertices[i]);
        const double n = u.norm();
        if (!(n >= eps_v))
            throw VanishingFieldError("chern_number: v vanishes at a mesh vertex",
                                      mesh.vertices[i]);
        dir[i] = u / n;
    }

    double angle_sum = 0.0;
    for (const auto& tri : mesh.triangles) {
        const Vec3 n0 = dir[tri[0]], n1 = dir[tri[1]], n2 = dir[tri[2]];
        if (n0.dot(n1) <= 0.0 || n1.dot(n2) <= 0.0 || n2.dot(n0) <= 0.0)
            throw RefineMeshError(
                "chern_number: adjacent fibers differ by >= 90 degrees; refine the mesh");

        // deterministic fiber basis at the first corner
        int least = 0;
        double best = std::abs(n0.x);
        if (std::abs(n0.y) < best) { least = 1; best = std::abs(n0.y); }
        if (std::abs(n0.z) < best) least = 2;
        Vec3 axis{};
        axis[least] = 1.0;
        const Vec3 f1 = (axis - n0 * axis.dot(n0)).normalized();
        const Vec3 f2 = n0.cross(f1);

        auto loop = [&](Vec3 u) {
            u = detail::transport(u, n0, n1, rule);
            u = detail::transport(u, n1, n2, rule);
            return detail::transport(u, n2, n0, rule);
        };
        const Vec3 u1 = loop(f1), u2 = loop(f2);
        const double m00 = u1.dot(f1), m10 = u1.dot(f2);
        const double m01 = u2.dot(f1), m11 = u2.dot(f2);
        angle_sum += std::atan2(m10 - m01, m00 + m11);
    }

    ChernResult res;
    res.real = angle_sum / (2.0 * M_PI);
    res.chern = static_cast<int>(std::lround(res.real));
    res.defect = std::abs(res.real - res.chern);
    return res;
}

}  // namespace biham
