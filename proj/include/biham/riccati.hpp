#pragma once

// The mu equation along a streamline,
//
//     dmu/ds = A + B mu + C mu^2,
//     A = -C^2_31,  B = -(C^3_31 + C^2_12),  C = -C^3_12,
//
// solved through its projective linear lift p' = B p + A q, q' = -C p with
// mu = p/q: Riccati solutions generically blow up in finite arclength and the
// lift continues smoothly through the poles. The scaling factor alpha solves
// d/ds ln(alpha/|v|) = C^3_31 + mu C^3_12 in log space, so alpha > 0 exactly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biham/errors.hpp"
#include "biham/flowline.hpp"
#include "biham/framekit.hpp"
#include "biham/gridfd.hpp"

namespace biham {

struct RiccatiCoefficients {
    std::vector<double> s;        // uniform arclength grid
    std::vector<double> A, B, C;  // sampled on the grid
    std::function<Vec3(double)> eval;  // (A, B, C) at any s in the span

    double ds() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
    int size() const { return static_cast<int>(s.size()); }
    double c312(int k) const { return -C[k]; }

    static RiccatiCoefficients from_functions(std::function<double(double)> fA,
                                              std::function<double(double)> fB,
                                              std::function<double(double)> fC, double s1,
                                              double ds) {
        RiccatiCoefficients co;
        const int n = static_cast<int>(std::lround(s1 / ds)) + 1;
        co.s.resize(n);
        co.A.resize(n);
        co.B.resize(n);
        co.C.resize(n);
        for (int k = 0; k < n; ++k) {
            co.s[k] = k * ds;
            co.A[k] = fA(co.s[k]);
            co.B[k] = fB(co.s[k]);
            co.C[k] = fC(co.s[k]);
        }
        co.eval = [fA, fB, fC](double sv) { return Vec3{fA(sv), fB(sv), fC(sv)}; };
        return co;
    }
};

// Structure-function samples along a streamline, packaged for the mu and
// alpha equations. Evaluation at off-grid s goes through the streamline's
// Hermite interpolant, so integrator stages see smooth coefficients.
struct StreamlineCoefficients {
    RiccatiCoefficients riccati;
    std::function<double(double)> c331, c312, speed;
    std::vector<double> c331_s, c312_s, speed_s;  // grid samples
};

inline StreamlineCoefficients streamline_coefficients(const Streamline& line,
                                                      const AdaptedFrame& frame,
                                                      const DiffConfig& cfg) {
    StreamlineCoefficients out;
    const int n = static_cast<int>(line.samples.size());
    auto& co = out.riccati;
    co.s.resize(n);
    co.A.resize(n);
    co.B.resize(n);
    co.C.resize(n);
    out.c331_s.resize(n);
    out.c312_s.resize(n);
    out.speed_s.resize(n);

    auto sf_at = [frame, line, cfg](double sv) {
        return structure_functions(frame, line.position(sv), cfg);
    };
    for (int k = 0; k < n; ++k) {
        const StructureFunctions sf = structure_functions(frame, line.samples[k].x, cfg);
        co.s[k] = line.samples[k].s;
        co.A[k] = -sf.c231();
        co.B[k] = -(sf.c331() + sf.c212());
        co.C[k] = -sf.c312();
        out.c331_s[k] = sf.c331();
        out.c312_s[k] = sf.c312();
        out.speed_s[k] = frame.field().eval(line.samples[k].x).norm();
    }
    co.eval = [sf_at](double sv) {
        const StructureFunctions sf = sf_at(sv);
        return Vec3{-sf.c231(), -(sf.c331() + sf.c212()), -sf.c312()};
    };
    out.c331 = [sf_at](double sv) { return sf_at(sv).c331(); };
    out.c312 = [sf_at](double sv) { return sf_at(sv).c312(); };
    const VectorField v = frame.field();
    out.speed = [v, line](double sv) { return v.eval(line.position(sv)).norm(); };
    return out;
}

inline RiccatiCoefficients riccati_coeffs(const Streamline& line, const AdaptedFrame& frame,
                                          const DiffConfig& cfg) {
    return streamline_coefficients(line, frame, cfg).riccati;
}

// mu through the linear lift; (p, q) kept on the unit circle, mu = p/q.
// Samples with |q| < eps_q carry blow-up markers; sign changes of q between
// samples are recorded as pole spans. Blow-ups are data, not errors.
struct ProjectiveSolution {
    std::vector<double> s, p, q;
    std::vector<double> dp, dq;  // circle-tangent derivatives, for interpolation
    double eps_q = 1e-8;
    std::vector<int> markers;
    std::vector<std::pair<double, double>> pole_spans;

    int size() const { return static_cast<int>(s.size()); }
    bool defined(int k) const { return std::abs(q[k]) >= eps_q; }
    double mu(int k) const {
        return defined(k) ? p[k] / q[k] : std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<double> mu_samples() const {
        std::vector<double> out(s.size());
        for (int k = 0; k < size(); ++k) out[k] = mu(k);
        return out;
    }

    // No marker and no pole span intersecting [k0, k1].
    bool span_clear(int k0, int k1) const {
        for (int m : markers)
            if (m >= k0 && m <= k1) return false;
        for (const auto& [a, b] : pole_spans)
            if (b > s[k0] && a < s[k1]) return false;
        return true;
    }
    double first_pole_after(double s0) const {
        double best = std::numeric_limits<double>::infinity();
        for (int m : markers)
            if (s[m] >= s0 && s[m] < best) best = s[m];
        for (const auto& [a, b] : pole_spans)
            if (b >= s0 && a < best) best = a;
        return best;
    }

    double mu_at(double sv) const {
        const auto [pi, qi] = lift_at(sv);
        return pi / qi;
    }
    std::pair<double, double> lift_at(double sv) const {
        const int n = size();
        if (sv <= s.front()) return {p.front(), q.front()};
        if (sv >= s.back()) return {p.back(), q.back()};
        const double ds = s[1] - s[0];
        int k = static_cast<int>((sv - s.front()) / ds);
        if (k > n - 2) k = n - 2;
        const double u = (sv - s[k]) / ds;
        auto hermite = [u, ds](double f0, double d0, double f1, double d1) {
            const double u2 = u * u, u3 = u2 * u;
            return f0 * (2 * u3 - 3 * u2 + 1) + d0 * ds * (u3 - 2 * u2 + u) +
                   f1 * (-2 * u3 + 3 * u2) + d1 * ds * (u3 - u2);
        };
        return {hermite(p[k], dp[k], p[k + 1], dp[k + 1]),
                hermite(q[k], dq[k], q[k + 1], dq[k + 1])};
    }
};

inline ProjectiveSolution solve_mu_projective(const RiccatiCoefficients& co, double p0,
                                              double q0, double eps_q = 1e-8) {
    const int n = co.size();
    if (n < 2) throw std::invalid_argument("solve_mu: need at least two grid samples");
    if (!co.eval) throw std::invalid_argument("solve_mu: coefficients must be evaluable");
    ProjectiveSolution sol;
    sol.eps_q = eps_q;
    sol.s = co.s;
    sol.p.resize(n);
    sol.q.resize(n);
    sol.dp.resize(n);
    sol.dq.resize(n);

    const double r0 = std::hypot(p0, q0);
    if (!(r0 > 0.0)) throw std::invalid_argument("solve_mu: (p0, q0) must be nonzero");
    double pc = p0 / r0, qc = q0 / r0;
    const double ds = co.ds();

    auto rhs = [&co](double sv, double pv, double qv) {
        const Vec3 abc = co.eval(sv);
        return std::pair<double, double>{abc.y * pv + abc.x * qv, -abc.z * pv};
    };
    for (int k = 0; k < n; ++k) {
        sol.p[k] = pc;
        sol.q[k] = qc;
        // tangential projection keeps the interpolant on the circle flow
        auto [rp, rq] = rhs(co.s[k], pc, qc);
        const double radial = rp * pc + rq * qc;
        sol.dp[k] = rp - radial * pc;
        sol.dq[k] = rq - radial * qc;
        if (k == n - 1) break;

        const double sv = co.s[k];
        auto [k1p, k1q] = rhs(sv, pc, qc);
        auto [k2p, k2q] = rhs(sv + 0.5 * ds, pc + 0.5 * ds * k1p, qc + 0.5 * ds * k1q);
        auto [k3p, k3q] = rhs(sv + 0.5 * ds, pc + 0.5 * ds * k2p, qc + 0.5 * ds * k2q);
        auto [k4p, k4q] = rhs(sv + ds, pc + ds * k3p, qc + ds * k3q);
        pc += ds / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        qc += ds / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
        const double r = std::hypot(pc, qc);
        pc /= r;
        qc /= r;
    }
    for (int k = 0; k < n; ++k)
        if (std::abs(sol.q[k]) < eps_q) sol.markers.push_back(k);
    for (int k = 0; k + 1 < n; ++k)
        if (sol.q[k] * sol.q[k + 1] < 0.0) sol.pole_spans.emplace_back(co.s[k], co.s[k + 1]);
    return sol;
}

inline ProjectiveSolution solve_mu(const RiccatiCoefficients& co, double mu0,
                                   double eps_q = 1e-8) {
    if (!std::isfinite(mu0)) throw std::invalid_argument("solve_mu: mu0 must be finite");
    return solve_mu_projective(co, mu0, 1.0, eps_q);
}

struct ScalingSolution {
    std::vector<double> s, alpha;
    std::vector<double> log_alpha_over_speed;
    double alpha0 = 1.0;
};

// alpha from d/ds ln(alpha/|v|) = C^3_31 + mu C^3_12, integrated in log space.
inline ScalingSolution solve_alpha(const ProjectiveSolution& mu,
                                   const std::function<double(double)>& c331,
                                   const std::function<double(double)>& c312,
                                   const std::function<double(double)>& speed, double alpha0) {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("solve_alpha: alpha0 must be > 0");
    const int n = mu.size();
    if (!mu.span_clear(0, n - 1)) {
        throw SpanSplitError(
            "solve_alpha: mu blow-up inside the requested span; restrict the tube",
            mu.first_pole_after(mu.s.front()));
    }
    ScalingSolution out;
    out.alpha0 = alpha0;
    out.s = mu.s;
    out.alpha.resize(n);
    out.log_alpha_over_speed.resize(n);
    const double ds = n > 1 ? mu.s[1] - mu.s[0] : 0.0;

    auto rhs = [&](double sv) { return c331(sv) + mu.mu_at(sv) * c312(sv); };
    double lambda = std::log(alpha0 / speed(mu.s[0]));
    for (int k = 0; k < n; ++k) {
        out.log_alpha_over_speed[k] = lambda;
        out.alpha[k] = speed(mu.s[k]) * std::exp(lambda);
        if (k == n - 1) break;
        const double sv = mu.s[k];
        const double k1 = rhs(sv);
        const double k2 = rhs(sv + 0.5 * ds);
        const double k4 = rhs(sv + ds);
        lambda += ds / 6.0 * (k1 + 4.0 * k2 + k4);  // Simpson stage (k2 = k3 here)
    }
    return out;
}

// Pointwise residual of d/ds ln(alpha_i/alpha_j) = C^3_12 (mu_i - mu_j).
inline std::vector<double> compatibility_residual(const ProjectiveSolution& mu1,
                                                  const ProjectiveSolution& mu2,
                                                  const ScalingSolution& a1,
                                                  const ScalingSolution& a2,
                                                  const std::vector<double>& c312) {
    const int n = mu1.size();
    if (mu2.size() != n || static_cast<int>(a1.alpha.size()) != n ||
        static_cast<int>(a2.alpha.size()) != n || static_cast<int>(c312.size()) != n)
        throw std::invalid_argument("compatibility_residual: grids must agree");
    const double ds = mu1.s[1] - mu1.s[0];
    std::vector<double> lnratio(n), r(n);
    for (int k = 0; k < n; ++k) lnratio[k] = std::log(a1.alpha[k] / a2.alpha[k]);
    for (int k = 0; k < n; ++k)
        r[k] = grid_derivative(lnratio, k, ds) - c312[k] * (mu1.mu(k) - mu2.mu(k));
    return r;
}

struct Lemma3Result {
    double max_residual = 0.0;
    std::vector<int> blow_up_samples;  // constructed mu undefined here
};

// Builds the general solution mu from two known solutions,
//   mu - mu1 = K (mu - mu2) exp(int C^3_12 (mu2 - mu1) ds),
// solves pointwise for mu, re-substitutes into the Riccati equation, and
// returns the max residual away from construction blow-ups. Samples where the
// constructed mu runs into a pole (1 - K E near 0) get blow-up markers and
// are excluded together with their derivative stencils: a grid derivative
// taken across a pole carries no information. The |mu| cap keeping the
// 4th-order stencil trustworthy at step ds scales like (tol/ds^4)^{1/6}.
inline Lemma3Result lemma3_check(const ProjectiveSolution& mu1, const ProjectiveSolution& mu2,
                                 double K, const RiccatiCoefficients& co,
                                 double target_tol = 1e-5) {
    const int n = co.size();
    if (mu1.size() != n || mu2.size() != n)
        throw std::invalid_argument("lemma3_check: grids must agree");
    const double ds = co.ds();

    std::vector<double> integrand(n);
    for (int k = 0; k < n; ++k) integrand[k] = co.c312(k) * (mu2.mu(k) - mu1.mu(k));
    const std::vector<double> I = grid_cumulative_integral(integrand, ds);

    Lemma3Result out;
    std::vector<double> mu(n);
    std::vector<bool> bad(n, false);
    const double ds4 = ds * ds * ds * ds;
    for (int k = 0; k < n; ++k) {
        const double E = std::exp(I[k]);
        const double den = 1.0 - K * E;
        const double num = mu1.mu(k) - K * E * mu2.mu(k);
        // Any pole of a Riccati solution has residue -1/C, so the 5th
        // derivative entering the stencil error grows like |C|^5 |mu|^6;
        // capping |mu| accordingly keeps the evaluated residual within the
        // target tolerance.
        const double cloc = std::max(std::abs(co.C[k]), 1e-3);
        const double cap = std::pow(
            target_tol / (40.0 * ds4 * cloc * cloc * cloc * cloc * cloc), 1.0 / 6.0);
        if (!mu1.defined(k) || !mu2.defined(k) || den == 0.0 || std::abs(num / den) > cap) {
            bad[k] = true;
            out.blow_up_samples.push_back(k);
            continue;
        }
        mu[k] = num / den;
    }
    for (int k = 0; k < n; ++k) {
        if (bad[k]) continue;
        // exclude samples whose derivative stencil touches a blow-up
        bool stencil_ok = true;
        for (int m = std::max(0, k - 2); m <= std::min(n - 1, k + 2); ++m)
            if (bad[m]) stencil_ok = false;
        if (!stencil_ok) continue;
        const double dmu = grid_derivative(mu, k, ds);
        const double res = dmu - (co.A[k] + co.B[k] * mu[k] + co.C[k] * mu[k] * mu[k]);
        out.max_residual = std::max(out.max_residual, std::abs(res));
    }
    return out;
}

// Re-substitution residual of the mu equation itself on marker-free samples.
inline std::vector<double> mu_residual(const ProjectiveSolution& mu,
                                       const RiccatiCoefficients& co) {
    const int n = co.size();
    const double ds = co.ds();
    std::vector<double> m = mu.mu_samples(), r(n, 0.0);
    for (int k = 0; k < n; ++k) {
        bool ok = true;
        for (int j = std::max(0, k - 2); j <= std::min(n - 1, k + 2); ++j)
            if (!mu.defined(j)) ok = false;
        if (!ok) continue;
        r[k] = grid_derivative(m, k, ds) - (co.A[k] + co.B[k] * m[k] + co.C[k] * m[k] * m[k]);
    }
    return r;
}

// Re-substitution residual of the alpha equation.
inline std::vector<double> alpha_residual(const ScalingSolution& a,
                                          const ProjectiveSolution& mu,
                                          const std::vector<double>& c331,
                                          const std::vector<double>& c312) {
    const int n = static_cast<int>(a.alpha.size());
    const double ds = a.s[1] - a.s[0];
    std::vector<double> r(n, 0.0);
    for (int k = 0; k < n; ++k)
        r[k] = grid_derivative(a.log_alpha_over_speed, k, ds) -
               (c331[k] + mu.mu(k) * c312[k]);
    return r;
}

}  // namespace biham
