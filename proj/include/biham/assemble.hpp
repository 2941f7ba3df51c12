#pragma once

// Assembles the Poisson pair J_i = alpha_i (e2 + mu_i e3), the conformal
// factor phi, and the Hamiltonians H_1, H_2 on a stream tube, and evaluates
// every residual identity of the local construction.
//
// Sign convention (fixed by the orientation e1.(e2 x e3) = +1):
//     phi = alpha_1 alpha_2 (mu_1 - mu_2) / |v|,
//     J_i = (-1)^{i+1} phi grad H_i,
//     v   = J_1 x grad H_2 = J_2 x grad H_1,
//     J_1 x J_2 = -phi v,
//     i_v Omega = phi dH_1 ^ dH_2.
// All five hold simultaneously; flipping the sign of phi breaks three of them
// by O(1), which the fault-injection tests rely on.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biham/calc3.hpp"
#include "biham/errors.hpp"
#include "biham/flowline.hpp"
#include "biham/framekit.hpp"
#include "biham/parallel.hpp"
#include "biham/riccati.hpp"

namespace biham {

struct TubeVec3 {
    std::array<TubeScalar, 3> comp;

    Vec3 at(int seed, int k) const {
        return {comp[0].at(seed, k), comp[1].at(seed, k), comp[2].at(seed, k)};
    }
    void set(int seed, int k, const Vec3& v) {
        for (int c = 0; c < 3; ++c) comp[c].values[seed][k] = v[c];
    }
    static TubeVec3 make(const StreamTube& tube) {
        return {{tube.make_scalar(), tube.make_scalar(), tube.make_scalar()}};
    }
};

// Frame values, speeds, frame-leg curl projections and div e1 at every tube
// sample; one frame-Jacobian evaluation per sample covers all of them.
struct TubeFrameData {
    std::vector<std::vector<FrameValue>> frames;  // [seed][k]
    TubeScalar speed;
    TubeScalar r22, r23, r32, r33;  // r_ab = (curl e_a).e_b for a,b in {2,3}
    TubeScalar div_e1;
};

inline TubeFrameData sample_frame_data(const StreamTube& tube, const AdaptedFrame& frame,
                                       const DiffConfig& cfg) {
    TubeFrameData fd;
    fd.frames.assign(tube.n_seeds(), std::vector<FrameValue>(tube.n_samples));
    fd.speed = tube.make_scalar();
    fd.r22 = tube.make_scalar();
    fd.r23 = tube.make_scalar();
    fd.r32 = tube.make_scalar();
    fd.r33 = tube.make_scalar();
    fd.div_e1 = tube.make_scalar();

    parallel_for(tube.n_seeds(), [&](std::size_t sd) {
        const int s = static_cast<int>(sd);
        for (int k = 0; k < tube.n_samples; ++k) {
            const Point3& x = tube.x(s, k);
            const FrameValue f = frame.at(x);
            const auto D = frame.jacobians(x, cfg);
            const Vec3 curl_e2 = curl_of(D[1]);
            const Vec3 curl_e3 = curl_of(D[2]);
            fd.frames[s][k] = f;
            fd.speed.values[s][k] = frame.field().eval(x).norm();
            fd.r22.values[s][k] = curl_e2.dot(f.e2);
            fd.r23.values[s][k] = curl_e2.dot(f.e3);
            fd.r32.values[s][k] = curl_e3.dot(f.e2);
            fd.r33.values[s][k] = curl_e3.dot(f.e3);
            fd.div_e1.values[s][k] = D[0].trace();
        }
    });
    return fd;
}

// A Poisson vector field sampled on a tube: J = alpha (e2 + mu e3).
struct PoissonField {
    TubeScalar alpha, mu, beta;  // beta = alpha * mu
    std::vector<std::vector<Vec3>> J;

    Vec3 at(int seed, int k) const { return J[seed][k]; }
};

inline PoissonField make_poisson_field(const StreamTube& tube, const TubeFrameData& fd,
                                       const TubeScalar& alpha, const TubeScalar& mu) {
    PoissonField out;
    out.alpha = alpha;
    out.mu = mu;
    out.beta = tube.make_scalar();
    out.J.assign(tube.n_seeds(), std::vector<Vec3>(tube.n_samples));
    for (int s = 0; s < tube.n_seeds(); ++s) {
        for (int k = 0; k < tube.n_samples; ++k) {
            const double a = alpha.at(s, k), m = mu.at(s, k);
            out.beta.values[s][k] = a * m;
            const FrameValue& f = fd.frames[s][k];
            out.J[s][k] = (f.e2 + f.e3 * m) * a;
        }
    }
    return out;
}

struct BiHamiltonianPair {
    PoissonField J1, J2;
    TubeScalar phi;
    TubeScalar H1, H2;
    TubeVec3 G1, G2;  // target gradients (-1)^{i+1} J_i / phi
    double min_mu_separation = 0.0;
    double min_cross_norm = 0.0;  // independence certificate: min |J1 x J2|
};

// phi = alpha_1 alpha_2 (mu_1 - mu_2)/|v|; errors out when the pair is
// degenerate (|mu_1 - mu_2| < eps_sep: the Hamiltonians would be dependent).
inline TubeScalar phi_field(const StreamTube& tube, const TubeScalar& a1, const TubeScalar& a2,
                            const TubeScalar& mu1, const TubeScalar& mu2,
                            const TubeScalar& speed, double eps_sep = 1e-6) {
    TubeScalar phi = tube.make_scalar();
    for (int s = 0; s < tube.n_seeds(); ++s) {
        for (int k = 0; k < tube.n_samples; ++k) {
            const double sep = mu1.at(s, k) - mu2.at(s, k);
            if (std::abs(sep) < eps_sep)
                throw DegeneratePairError(
                    "phi: |mu1 - mu2| < eps_sep at seed " + std::to_string(s) + ", sample " +
                    std::to_string(k) + "; the pair is degenerate");
            phi.values[s][k] = a1.at(s, k) * a2.at(s, k) * sep / speed.at(s, k);
        }
    }
    return phi;
}

struct ConstructOptions {
    double mu1_0 = 0.0, mu2_0 = 1.0;
    std::optional<double> alpha1_0, alpha2_0;  // default: |v| at the tube base
    double eps_sep = 1e-6;
    double eps_q = 1e-8;
    DiffConfig diff{};
};

struct Construction {
    StreamTube tube;
    TubeFrameData frame_data;
    std::vector<StreamlineCoefficients> coeffs;  // per seed
    std::vector<ProjectiveSolution> mu1, mu2;
    std::vector<ScalingSolution> alpha1, alpha2;
    BiHamiltonianPair pair;
    double path_independence = 0.0;  // max |H via disc-then-flow vs flow-then-disc|
    double max_closedness_residual = 0.0;  // max |curl (J_i/phi)|
};

namespace detail {

// Trapezoidal line integral of G from the center seed outward along the
// advected disc at sample k, then H is constant along each streamline up to
// the (identically vanishing) tangential component of G.
inline TubeScalar integrate_disc(const StreamTube& tube, const TubeVec3& G, int k) {
    TubeScalar H = tube.make_scalar();
    for (int j = 0; j < tube.n_theta; ++j) {
        double acc = 0.0;
        int prev = 0;  // center
        for (int i = 1; i <= tube.n_r; ++i) {
            const int cur = tube.seed_id(i, j);
            const Vec3 dx = tube.x(cur, k) - tube.x(prev, k);
            acc += 0.5 * (G.at(prev, k) + G.at(cur, k)).dot(dx);
            H.values[cur][k] = acc;
            prev = cur;
        }
    }
    return H;
}

}  // namespace detail

// H_i from trapezoidal integration of G_i = (-1)^{i+1} J_i/phi: radially
// across the seed disc at s = 0, then along each streamline. H_i(base) = 0.
inline void reconstruct_hamiltonians(Construction& cx) {
    const StreamTube& tube = cx.tube;
    BiHamiltonianPair& pair = cx.pair;
    pair.G1 = TubeVec3::make(tube);
    pair.G2 = TubeVec3::make(tube);
    for (int s = 0; s < tube.n_seeds(); ++s) {
        for (int k = 0; k < tube.n_samples; ++k) {
            const double ph = pair.phi.at(s, k);
            pair.G1.set(s, k, pair.J1.at(s, k) / ph);
            pair.G2.set(s, k, pair.J2.at(s, k) / (-ph));
        }
    }

    auto build_H = [&tube](const TubeVec3& G) {
        TubeScalar disc0 = detail::integrate_disc(tube, G, 0);
        TubeScalar H = tube.make_scalar();
        for (int s = 0; s < tube.n_seeds(); ++s) {
            // cumulative trapezoid of the tangential component along the line
            double acc = disc0.at(s, 0);
            H.values[s][0] = acc;
            for (int k = 1; k < tube.n_samples; ++k) {
                const double g0 = G.at(s, k - 1).dot(tube.tangent(s, k - 1));
                const double g1 = G.at(s, k).dot(tube.tangent(s, k));
                acc += 0.5 * (g0 + g1) * tube.ds;
                H.values[s][k] = acc;
            }
        }
        return H;
    };
    pair.H1 = build_H(pair.G1);
    pair.H2 = build_H(pair.G2);

    // Homotopic-path diagnostic: integrate across the advected disc at the
    // horizon midpoint instead of at s = 0.
    const int kmid = (tube.n_samples - 1) / 2;
    double worst = 0.0;
    for (const TubeVec3* G : {&pair.G1, &pair.G2}) {
        const TubeScalar& H = (G == &pair.G1) ? pair.H1 : pair.H2;
        TubeScalar disc_mid = detail::integrate_disc(tube, *G, kmid);
        for (int s = 0; s < tube.n_seeds(); ++s) {
            const double via_b = H.at(0, kmid) + disc_mid.at(s, kmid);
            worst = std::max(worst, std::abs(via_b - H.at(s, kmid)));
        }
    }
    cx.path_independence = worst;

    // Closedness of the target gradient fields (curl of J_i/phi).
    double worst_curl = 0.0;
    for (const TubeVec3* G : {&pair.G1, &pair.G2}) {
        for (int s = 0; s < tube.n_seeds(); ++s) {
            for (int k = 0; k < tube.n_samples; ++k) {
                Mat3 jac;
                for (int c = 0; c < 3; ++c) {
                    const Vec3 g = tube.ambient_grad(G->comp[c], s, k);
                    for (int j = 0; j < 3; ++j) jac(c, j) = g[j];
                }
                worst_curl = std::max(worst_curl, curl_of(jac).norm());
            }
        }
    }
    cx.max_closedness_residual = worst_curl;
}

// Full pipeline: coefficients -> mu -> alpha -> pair -> phi -> H.
inline Construction construct_pair(const AdaptedFrame& frame, StreamTube tube,
                                   const ConstructOptions& opts = {}) {
    Construction cx;
    cx.tube = std::move(tube);
    const StreamTube& tb = cx.tube;
    cx.frame_data = sample_frame_data(tb, frame, opts.diff);

    const double alpha_base = frame.field().eval(tb.base).norm();
    const double a10 = opts.alpha1_0.value_or(alpha_base);
    const double a20 = opts.alpha2_0.value_or(alpha_base);

    cx.coeffs.resize(tb.n_seeds());
    cx.mu1.resize(tb.n_seeds());
    cx.mu2.resize(tb.n_seeds());
    cx.alpha1.resize(tb.n_seeds());
    cx.alpha2.resize(tb.n_seeds());
    parallel_for(tb.n_seeds(), [&](std::size_t sd) {
        const int s = static_cast<int>(sd);
        cx.coeffs[s] = streamline_coefficients(tb.lines[s], frame, opts.diff);
        cx.mu1[s] = solve_mu(cx.coeffs[s].riccati, opts.mu1_0, opts.eps_q);
        cx.mu2[s] = solve_mu(cx.coeffs[s].riccati, opts.mu2_0, opts.eps_q);
        cx.alpha1[s] = solve_alpha(cx.mu1[s], cx.coeffs[s].c331, cx.coeffs[s].c312,
                                   cx.coeffs[s].speed, a10);
        cx.alpha2[s] = solve_alpha(cx.mu2[s], cx.coeffs[s].c331, cx.coeffs[s].c312,
                                   cx.coeffs[s].speed, a20);
    });

    TubeScalar mu1 = tb.make_scalar(), mu2 = tb.make_scalar();
    TubeScalar a1 = tb.make_scalar(), a2 = tb.make_scalar();
    for (int s = 0; s < tb.n_seeds(); ++s) {
        for (int k = 0; k < tb.n_samples; ++k) {
            mu1.values[s][k] = cx.mu1[s].mu(k);
            mu2.values[s][k] = cx.mu2[s].mu(k);
            a1.values[s][k] = cx.alpha1[s].alpha[k];
            a2.values[s][k] = cx.alpha2[s].alpha[k];
        }
    }

    cx.pair.J1 = make_poisson_field(tb, cx.frame_data, a1, mu1);
    cx.pair.J2 = make_poisson_field(tb, cx.frame_data, a2, mu2);
    cx.pair.phi = phi_field(tb, a1, a2, mu1, mu2, cx.frame_data.speed, opts.eps_sep);

    double min_sep = std::numeric_limits<double>::infinity();
    double min_cross = std::numeric_limits<double>::infinity();
    for (int s = 0; s < tb.n_seeds(); ++s) {
        for (int k = 0; k < tb.n_samples; ++k) {
            min_sep = std::min(min_sep, std::abs(mu1.at(s, k) - mu2.at(s, k)));
            min_cross =
                std::min(min_cross, cx.pair.J1.at(s, k).cross(cx.pair.J2.at(s, k)).norm());
        }
    }
    cx.pair.min_mu_separation = min_sep;
    cx.pair.min_cross_norm = min_cross;

    reconstruct_hamiltonians(cx);
    return cx;
}

// ---------------------------------------------------------------------------
// Residual identities
// ---------------------------------------------------------------------------

// J.(curl J) for an ambient vector field (signed; the normalized variant
// divides by |J||curl J| + eps).
inline double jacobi_residual(const VectorField& J, const Point3& x, const DiffConfig& cfg) {
    return J.eval(x).dot(curl(J, x, cfg));
}

inline double jacobi_residual_normalized(const VectorField& J, const Point3& x,
                                         const DiffConfig& cfg, double eps = 1e-30) {
    const Vec3 j = J.eval(x);
    const Vec3 c = curl(J, x, cfg);
    return j.dot(c) / (j.norm() * c.norm() + eps);
}

// J.(curl J) at a tube sample for J = alpha e2 + beta e3 with tube-sampled
// coefficients. The transverse parts of grad alpha, grad beta cancel exactly
// in this contraction, so only arclength derivatives enter; the frame-curl
// projections come from the independent finite-difference route.
inline double jacobi_residual_sample(const StreamTube& tube, const TubeFrameData& fd,
                                     const TubeScalar& alpha, const TubeScalar& beta, int s,
                                     int k) {
    const double a = alpha.at(s, k), b = beta.at(s, k);
    const double da = tube.d_ds(alpha, s, k);
    const double db = tube.d_ds(beta, s, k);
    return b * da - a * db + a * a * fd.r22.at(s, k) +
           a * b * (fd.r23.at(s, k) + fd.r32.at(s, k)) + b * b * fd.r33.at(s, k);
}

// (curl J_i).J_j at a tube sample, same decomposition.
inline double curl_pairing_sample(const StreamTube& tube, const TubeFrameData& fd,
                                  const PoissonField& Ji, const PoissonField& Jj, int s,
                                  int k) {
    const double ai = Ji.alpha.at(s, k), bi = Ji.beta.at(s, k);
    const double aj = Jj.alpha.at(s, k), bj = Jj.beta.at(s, k);
    const double dai = tube.d_ds(Ji.alpha, s, k);
    const double dbi = tube.d_ds(Ji.beta, s, k);
    return bj * dai - aj * dbi + ai * aj * fd.r22.at(s, k) + ai * bj * fd.r23.at(s, k) +
           bi * aj * fd.r32.at(s, k) + bi * bj * fd.r33.at(s, k);
}

// (curl J1).J2 + (curl J2).J1 at a tube sample.
inline double compatibility_residual_vec(const StreamTube& tube, const TubeFrameData& fd,
                                         const PoissonField& J1, const PoissonField& J2,
                                         int s, int k) {
    return curl_pairing_sample(tube, fd, J1, J2, s, k) +
           curl_pairing_sample(tube, fd, J2, J1, s, k);
}

// (r1, r2) = (|v - J1 x grad H2|, |v - J2 x grad H1|) / |v|.
inline std::pair<double, double> bihamiltonian_residual(const StreamTube& tube,
                                                        const TubeFrameData& fd,
                                                        const BiHamiltonianPair& pair, int s,
                                                        int k) {
    const Vec3 v = fd.frames[s][k].e1 * fd.speed.at(s, k);
    const Vec3 gH1 = tube.ambient_grad(pair.H1, s, k);
    const Vec3 gH2 = tube.ambient_grad(pair.H2, s, k);
    const double n = fd.speed.at(s, k);
    return {(v - pair.J1.at(s, k).cross(gH2)).norm() / n,
            (v - pair.J2.at(s, k).cross(gH1)).norm() / n};
}

// div e1 - d/ds ln(|alpha1 alpha2 (mu2 - mu1)| / |v|^2); the absolute value
// keeps the identity meaningful under either labeling of the pair.
inline TubeScalar lemma1_residual(const StreamTube& tube, const TubeFrameData& fd,
                                  const BiHamiltonianPair& pair) {
    TubeScalar lg = tube.make_scalar();
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; ++k) {
            const double num = std::abs(pair.J1.alpha.at(s, k) * pair.J2.alpha.at(s, k) *
                                        (pair.J2.mu.at(s, k) - pair.J1.mu.at(s, k)));
            const double sp = fd.speed.at(s, k);
            lg.values[s][k] = std::log(num / (sp * sp));
        }
    TubeScalar r = tube.make_scalar();
    for (int s = 0; s < tube.n_seeds(); ++s)
        for (int k = 0; k < tube.n_samples; ++k)
            r.values[s][k] = fd.div_e1.at(s, k) - tube.d_ds(lg, s, k);
    return r;
}

// |i_v Omega - phi dH1 ^ dH2| in the 2-form norm at a tube sample (absolute;
// callers normalize by |v| for verdicts).
inline double two_form_residual(const StreamTube& tube, const TubeFrameData& fd,
                                const BiHamiltonianPair& pair, int s, int k,
                                double phi_sign = 1.0) {
    const Vec3 v = fd.frames[s][k].e1 * fd.speed.at(s, k);
    const FormValue ivOmega = contract(v, FormValue{3, {1.0, 0.0, 0.0}});
    const FormValue dH1 = flat(tube.ambient_grad(pair.H1, s, k));
    const FormValue dH2 = flat(tube.ambient_grad(pair.H2, s, k));
    const FormValue rhs = wedge(dH1, dH2) * (phi_sign * pair.phi.at(s, k));
    return (ivOmega - rhs).norm();
}

// ---------------------------------------------------------------------------
// Residual report
// ---------------------------------------------------------------------------

struct ResidualStat {
    std::string name;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    long count = 0;
    int argmax_seed = -1, argmax_k = -1;
    Point3 argmax_x;
    double tolerance = 0.0;

    bool pass() const { return max_abs <= tolerance; }
    void add(double value, int s, int k, const Point3& x) {
        const double a = std::abs(value);
        mean_abs = (mean_abs * count + a) / (count + 1);
        ++count;
        if (a > max_abs) {
            max_abs = a;
            argmax_seed = s;
            argmax_k = k;
            argmax_x = x;
        }
    }
};

struct ResidualReport {
    std::vector<ResidualStat> stats;

    bool pass() const {
        for (const auto& st : stats)
            if (!st.pass()) return false;
        return true;
    }
    const ResidualStat* find(const std::string& name) const {
        for (const auto& st : stats)
            if (st.name == name) return &st;
        return nullptr;
    }
};

struct ToleranceTable {
    std::map<std::string, double> tol;
    double identity_default = 0.0;

    double get(const std::string& name) const {
        auto it = tol.find(name);
        return it == tol.end() ? identity_default : it->second;
    }
    // Conservative defaults tied to the discretization scales.
    static ToleranceTable defaults(double ds, double h, double r_d) {
        ToleranceTable t;
        t.identity_default =
            50.0 * (ds * ds * ds * ds + h * h + r_d * r_d);
        t.tol["transversality"] = 1e-10;
        t.tol["mu_equation"] = 10.0 * ds * ds * ds * ds + 10.0 * h * h;
        t.tol["alpha_equation"] = 10.0 * ds * ds * ds * ds + 10.0 * h * h;
        t.tol["compatibility_ode"] = 10.0 * ds * ds * ds * ds + 10.0 * h * h;
        return t;
    }
};

inline ResidualReport evaluate_residuals(const Construction& cx, const ToleranceTable& tt) {
    const StreamTube& tube = cx.tube;
    const TubeFrameData& fd = cx.frame_data;
    const BiHamiltonianPair& pair = cx.pair;

    auto stat = [&tt](const std::string& name) {
        ResidualStat st;
        st.name = name;
        st.tolerance = tt.get(name);
        return st;
    };
    ResidualStat jac1 = stat("jacobi_J1"), jac2 = stat("jacobi_J2");
    ResidualStat compat = stat("compatibility_vec");
    ResidualStat bih1 = stat("bihamiltonian_r1"), bih2 = stat("bihamiltonian_r2");
    ResidualStat lem1 = stat("lemma1");
    ResidualStat twof = stat("two_form");
    ResidualStat trans = stat("transversality");
    ResidualStat cross = stat("cross_product_identity");
    ResidualStat flow1 = stat("flow_invariance_H1"), flow2 = stat("flow_invariance_H2");
    ResidualStat mu_eq = stat("mu_equation"), al_eq = stat("alpha_equation");
    ResidualStat ode_comp = stat("compatibility_ode");

    const TubeScalar lem1_field = lemma1_residual(tube, fd, pair);

    for (int s = 0; s < tube.n_seeds(); ++s) {
        // along-streamline ODE residuals from the riccati module
        const auto rm1 = mu_residual(cx.mu1[s], cx.coeffs[s].riccati);
        const auto rm2 = mu_residual(cx.mu2[s], cx.coeffs[s].riccati);
        const auto ra1 =
            alpha_residual(cx.alpha1[s], cx.mu1[s], cx.coeffs[s].c331_s, cx.coeffs[s].c312_s);
        const auto ra2 =
            alpha_residual(cx.alpha2[s], cx.mu2[s], cx.coeffs[s].c331_s, cx.coeffs[s].c312_s);
        const auto rc = compatibility_residual(cx.mu1[s], cx.mu2[s], cx.alpha1[s],
                                               cx.alpha2[s], cx.coeffs[s].c312_s);

        for (int k = 0; k < tube.n_samples; ++k) {
            const Point3& x = tube.x(s, k);
            const Vec3 v = fd.frames[s][k].e1 * fd.speed.at(s, k);
            const Vec3 j1 = pair.J1.at(s, k), j2 = pair.J2.at(s, k);

            jac1.add(jacobi_residual_sample(tube, fd, pair.J1.alpha, pair.J1.beta, s, k), s, k, x);
            jac2.add(jacobi_residual_sample(tube, fd, pair.J2.alpha, pair.J2.beta, s, k), s, k, x);
            compat.add(compatibility_residual_vec(tube, fd, pair.J1, pair.J2, s, k), s, k, x);
            const auto [r1, r2] = bihamiltonian_residual(tube, fd, pair, s, k);
            bih1.add(r1, s, k, x);
            bih2.add(r2, s, k, x);
            lem1.add(lem1_field.at(s, k), s, k, x);
            twof.add(two_form_residual(tube, fd, pair, s, k) / fd.speed.at(s, k), s, k, x);
            trans.add(j1.dot(v) / (j1.norm() * v.norm()), s, k, x);
            trans.add(j2.dot(v) / (j2.norm() * v.norm()), s, k, x);
            cross.add((j1.cross(j2) + v * pair.phi.at(s, k)).norm() /
                          (j1.norm() * j2.norm()),
                      s, k, x);
            flow1.add(pair.H1.at(s, k) - pair.H1.at(s, 0), s, k, x);
            flow2.add(pair.H2.at(s, k) - pair.H2.at(s, 0), s, k, x);
            mu_eq.add(rm1[k], s, k, x);
            mu_eq.add(rm2[k], s, k, x);
            al_eq.add(ra1[k], s, k, x);
            al_eq.add(ra2[k], s, k, x);
            ode_comp.add(rc[k], s, k, x);
        }
    }

    ResidualReport rep;
    rep.stats = {jac1, jac2,  compat, bih1,  bih2,   lem1,   twof,
                 trans, cross, flow1,  flow2, mu_eq, al_eq, ode_comp};
    return rep;
}

}  // namespace biham
