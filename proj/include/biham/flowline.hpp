#pragma once

// Arclength-parametrized streamlines (classic fixed-step 4th-order one-step
// integration of dx/ds = v/|v|) and stream tubes: a transverse seed disc
// advected by the flow. The fixed step keeps all streamlines on one shared
// s-grid, which transverse finite differences require.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biham/errors.hpp"
#include "biham/framekit.hpp"
#include "biham/gridfd.hpp"
#include "biham/parallel.hpp"

namespace biham {

struct StreamlineSample {
    double s;
    Point3 x;
    Vec3 tangent;  // v/|v| at x
};

enum class TruncationReason { VanishingField, LeftDomain };

struct Truncation {
    TruncationReason reason;
    double s_reached;
    Point3 where;
};

struct Streamline {
    Point3 base;
    double ds = 0.0;
    std::vector<StreamlineSample> samples;
    std::optional<Truncation> truncation;

    double length() const { return samples.empty() ? 0.0 : samples.back().s; }
    bool full_horizon() const { return !truncation.has_value(); }

    // Cubic Hermite interpolation using the stored unit tangents.
    Point3 position(double s) const { return hermite(s).first; }
    Vec3 tangent_at(double s) const { return hermite(s).second; }

private:
    std::pair<Point3, Vec3> hermite(double s) const {
        const int n = static_cast<int>(samples.size());
        if (n == 1 || s <= samples.front().s) return {samples.front().x, samples.front().tangent};
        if (s >= samples.back().s) return {samples.back().x, samples.back().tangent};
        int k = static_cast<int>((s - samples.front().s) / ds);
        if (k > n - 2) k = n - 2;
        const auto& a = samples[k];
        const auto& b = samples[k + 1];
        const double h = b.s - a.s;
        const double u = (s - a.s) / h;
        const double u2 = u * u, u3 = u2 * u;
        const Point3 p = a.x * (2 * u3 - 3 * u2 + 1) + a.tangent * (h * (u3 - 2 * u2 + u)) +
                         b.x * (-2 * u3 + 3 * u2) + b.tangent * (h * (u3 - u2));
        const Vec3 d = a.x * ((6 * u2 - 6 * u) / h) + a.tangent * (3 * u2 - 4 * u + 1) +
                       b.x * ((-6 * u2 + 6 * u) / h) + b.tangent * (3 * u2 - 2 * u);
        return {p, d};
    }
};

namespace detail {

// Unit tangent; empty when |v| < eps_v or x left the domain.
inline std::optional<Vec3> unit_tangent(const VectorField& v, const Point3& x, double eps_v,
                                        TruncationReason* why) {
    if (!v.domain.contains(x)) {
        if (why) *why = TruncationReason::LeftDomain;
        return std::nullopt;
    }
    const Vec3 u = v.eval(x);
    const double n = u.norm();
    if (!(n >= eps_v)) {
        if (why) *why = TruncationReason::VanishingField;
        return std::nullopt;
    }
    return u / n;
}

}  // namespace detail

inline Streamline integrate_streamline(const VectorField& v, const Point3& x0, double L,
                                       double ds, double eps_v = 1e-10) {
    if (!(L > 0.0) || !(ds > 0.0))
        throw std::invalid_argument("integrate_streamline: L > 0 and ds > 0 required");

    Streamline line;
    line.base = x0;
    line.ds = ds;

    TruncationReason why{};
    auto t0 = detail::unit_tangent(v, x0, eps_v, &why);
    if (!t0)
        throw VanishingFieldError("integrate_streamline: invalid base point", x0);

    const int n_steps = static_cast<int>(std::lround(L / std::abs(ds)));
    line.samples.push_back({0.0, x0, *t0});
    Point3 x = x0;
    for (int k = 0; k < n_steps; ++k) {
        const Vec3 k1 = line.samples.back().tangent;
        auto stage = [&](const Point3& p) { return detail::unit_tangent(v, p, eps_v, &why); };
        const auto k2 = stage(x + k1 * (0.5 * ds));
        if (!k2) { line.truncation = {why, line.samples.back().s, x}; return line; }
        const auto k3 = stage(x + (*k2) * (0.5 * ds));
        if (!k3) { line.truncation = {why, line.samples.back().s, x}; return line; }
        const auto k4 = stage(x + (*k3) * ds);
        if (!k4) { line.truncation = {why, line.samples.back().s, x}; return line; }
        x = x + (k1 + (*k2) * 2.0 + (*k3) * 2.0 + (*k4)) * (ds / 6.0);
        const auto t = detail::unit_tangent(v, x, eps_v, &why);
        if (!t) { line.truncation = {why, line.samples.back().s, x}; return line; }
        line.samples.push_back({(k + 1) * ds, x, *t});
    }
    return line;
}

// Step-halving slope of the endpoint error; ~4 for the one-step scheme.
inline double streamline_order_estimate(const VectorField& v, const Point3& x0, double L,
                                        double ds) {
    const Point3 a = integrate_streamline(v, x0, L, ds).samples.back().x;
    const Point3 b = integrate_streamline(v, x0, L, ds / 2).samples.back().x;
    const Point3 c = integrate_streamline(v, x0, L, ds / 4).samples.back().x;
    return std::log2((a - b).norm() / (b - c).norm());
}

// ---------------------------------------------------------------------------
// Stream tubes
// ---------------------------------------------------------------------------

struct Seed {
    int ring;   // 0 = base streamline
    int jang;   // angle index, 0 for the center
    double a, b;  // disc coordinates in the (e2, e3)-plane at the base point
};

// A quantity sampled on the tube grid, values[seed][k].
struct TubeScalar {
    std::vector<std::vector<double>> values;

    double& at(int seed, int k) { return values[seed][k]; }
    double at(int seed, int k) const { return values[seed][k]; }
};

struct ChartGrad {
    double ga = 0.0, gb = 0.0;  // d/da, d/db in seed-disc coordinates
    bool one_sided = false;
};

enum class TransverseDirection { E2, E3 };

class StreamTube {
public:
    Point3 base;
    FrameValue base_frame;
    double r_d = 0.0;
    int n_r = 0, n_theta = 0;
    double L = 0.0, ds = 0.0;
    std::vector<Seed> seeds;
    std::vector<Streamline> lines;
    int n_samples = 0;

    int n_seeds() const { return static_cast<int>(seeds.size()); }
    int seed_id(int ring, int j) const { return ring == 0 ? 0 : 1 + (ring - 1) * n_theta + j; }
    const Point3& x(int seed, int k) const { return lines[seed].samples[k].x; }
    const Vec3& tangent(int seed, int k) const { return lines[seed].samples[k].tangent; }
    double s_at(int k) const { return k * ds; }
    double ring_step() const { return r_d / n_r; }

    TubeScalar make_scalar() const {
        TubeScalar q;
        q.values.assign(n_seeds(), std::vector<double>(n_samples, 0.0));
        return q;
    }

    TubeScalar sample(const std::function<double(const Point3&)>& f) const {
        TubeScalar q = make_scalar();
        for (int sd = 0; sd < n_seeds(); ++sd)
            for (int k = 0; k < n_samples; ++k) q.values[sd][k] = f(x(sd, k));
        return q;
    }

    // Arclength derivative along the seed's own streamline: 4th-order
    // stencils, biased near the horizon ends.
    double d_ds(const TubeScalar& q, int seed, int k, bool* one_sided = nullptr) const {
        return grid_derivative(q.values[seed], k, ds, one_sided);
    }

    // Transverse derivative across neighboring streamlines at equal s, in the
    // seed-disc chart. Radial direction: central differences across rings
    // (one-sided on the outer ring). Angular direction: differencing across
    // the full ring, exact for the trigonometric interpolant, so the angular
    // error does not floor out when r_d is refined with n_theta fixed.
    ChartGrad chart_grad(const TubeScalar& q, int seed, int k) const {
        ChartGrad g;
        const Seed& sd = seeds[seed];
        if (sd.ring == 0) {
            // symmetric least-squares fit over ring 1
            const double rho1 = ring_step();
            const double fc = q.values[0][k];
            double sa = 0.0, sb = 0.0;
            for (int j = 0; j < n_theta; ++j) {
                const double df = q.values[seed_id(1, j)][k] - fc;
                sa += df * cos_[j];
                sb += df * sin_[j];
            }
            g.ga = 2.0 * sa / (n_theta * rho1);
            g.gb = 2.0 * sb / (n_theta * rho1);
            return g;
        }
        const int i = sd.ring, j = sd.jang;
        const double rho = i * ring_step();
        double dr;
        if (i == 1 && n_r == 1) {
            dr = (q.values[seed][k] - q.values[0][k]) / ring_step();
            g.one_sided = true;
        } else if (i < n_r) {
            const double inner = (i == 1) ? q.values[0][k] : q.values[seed_id(i - 1, j)][k];
            dr = (q.values[seed_id(i + 1, j)][k] - inner) / (2.0 * ring_step());
        } else {
            const double f0 = q.values[seed][k];
            const double f1 = (i - 1 == 0) ? q.values[0][k] : q.values[seed_id(i - 1, j)][k];
            const double f2 = (i - 2 == 0) ? q.values[0][k] : q.values[seed_id(i - 2, j)][k];
            dr = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * ring_step());
            g.one_sided = true;
        }
        double dtheta = 0.0;
        for (int m = 0; m < n_theta; ++m) {
            const double w = dtheta_[(j - m + n_theta) % n_theta];
            if (w != 0.0) dtheta += w * q.values[seed_id(i, m)][k];
        }
        g.ga = cos_[j] * dr - sin_[j] * dtheta / rho;
        g.gb = sin_[j] * dr + cos_[j] * dtheta / rho;
        return g;
    }

    double transverse_derivative(const TubeScalar& q, TransverseDirection dir, int seed, int k,
                                 bool* one_sided = nullptr) const {
        const ChartGrad g = chart_grad(q, seed, k);
        if (one_sided) *one_sided = g.one_sided;
        return dir == TransverseDirection::E2 ? g.ga : g.gb;
    }

    // Ambient gradient of a tube-sampled scalar, solving M^T grad = chart
    // derivatives with M = [dx/da | dx/db | e1].
    Vec3 ambient_grad(const TubeScalar& q, int seed, int k, bool* one_sided = nullptr) const {
        bool flag_s = false;
        const ChartGrad gq = chart_grad(q, seed, k);
        const double gs = d_ds(q, seed, k, &flag_s);
        const Mat3 M = chart_frame(seed, k);
        if (one_sided) *one_sided = gq.one_sided || flag_s;
        return M.transposed().solve({gq.ga, gq.gb, gs});
    }

    // Columns (dx/da, dx/db, e1) at a sample.
    Mat3 chart_frame(int seed, int k) const {
        Vec3 xa, xb;
        for (int c = 0; c < 3; ++c) {
            const ChartGrad g = chart_grad(position_component(c), seed, k);
            xa[c] = g.ga;
            xb[c] = g.gb;
        }
        return Mat3::from_columns(xa, xb, tangent(seed, k));
    }

    void finalize() {
        cos_.resize(n_theta);
        sin_.resize(n_theta);
        for (int j = 0; j < n_theta; ++j) {
            cos_[j] = std::cos(2.0 * M_PI * j / n_theta);
            sin_[j] = std::sin(2.0 * M_PI * j / n_theta);
        }
        // periodic differentiation weights, indexed by offset
        dtheta_.assign(n_theta, 0.0);
        const double hth = 2.0 * M_PI / n_theta;
        for (int d = 1; d < n_theta; ++d) {
            const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
            if (n_theta % 2 == 0)
                dtheta_[d] = 0.5 * sgn / std::tan(0.5 * d * hth);
            else
                dtheta_[d] = 0.5 * sgn / std::sin(0.5 * d * hth);
        }
        xcomp_.clear();
        for (int c = 0; c < 3; ++c) {
            TubeScalar q = make_scalar();
            for (int sd = 0; sd < n_seeds(); ++sd)
                for (int k = 0; k < n_samples; ++k) q.values[sd][k] = x(sd, k)[c];
            xcomp_.push_back(std::move(q));
        }
    }

    const TubeScalar& position_component(int c) const { return xcomp_[c]; }

private:
    std::vector<double> cos_, sin_, dtheta_;
    std::vector<TubeScalar> xcomp_;
};

// Seeds a polar disc (center + n_r rings of n_theta points) in the (e2, e3)
// plane at `base` and advects every seed over the full horizon L. Any seed
// that truncates fails the whole tube.
inline StreamTube build_tube(const VectorField& v, const AdaptedFrame& frame,
                             const Point3& base, double r_d, int n_r, int n_theta, double L,
                             double ds, double eps_v = 1e-10) {
    if (n_r < 1 || n_theta < 3)
        throw std::invalid_argument("build_tube: need n_r >= 1 and n_theta >= 3");
    StreamTube tube;
    tube.base = base;
    tube.base_frame = frame.at(base);
    tube.r_d = r_d;
    tube.n_r = n_r;
    tube.n_theta = n_theta;
    tube.L = L;
    tube.ds = ds;

    tube.seeds.push_back({0, 0, 0.0, 0.0});
    for (int i = 1; i <= n_r; ++i) {
        const double rho = r_d * i / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * M_PI * j / n_theta;
            tube.seeds.push_back({i, j, rho * std::cos(th), rho * std::sin(th)});
        }
    }

    tube.lines.resize(tube.seeds.size());
    std::vector<std::pair<int, int>> failed;
    std::vector<std::string> errors(tube.seeds.size());
    parallel_for(tube.seeds.size(), [&](std::size_t sd) {
        const Seed& seed = tube.seeds[sd];
        const Point3 x0 =
            base + tube.base_frame.e2 * seed.a + tube.base_frame.e3 * seed.b;
        try {
            tube.lines[sd] = integrate_streamline(v, x0, L, ds, eps_v);
        } catch (const BihamError& e) {
            errors[sd] = e.what();
        }
    });
    for (std::size_t sd = 0; sd < tube.seeds.size(); ++sd) {
        if (!errors[sd].empty() || !tube.lines[sd].full_horizon())
            failed.emplace_back(tube.seeds[sd].ring, tube.seeds[sd].jang);
    }
    if (!failed.empty())
        throw TubeConstructionError(
            "build_tube: " + std::to_string(failed.size()) + " seed(s) truncated", failed);

    tube.n_samples = static_cast<int>(tube.lines[0].samples.size());
    tube.finalize();
    return tube;
}

// Tube samples as CSV (columns: seed_i, seed_j, s, x, y, z).
inline void write_tube_csv(std::ostream& os, const StreamTube& tube) {
    os << "seed_i,seed_j,s,x,y,z\n";
    char buf[160];
    for (int sd = 0; sd < tube.n_seeds(); ++sd) {
        for (int k = 0; k < tube.n_samples; ++k) {
            const Point3& p = tube.x(sd, k);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                          tube.seeds[sd].ring, tube.seeds[sd].jang, tube.s_at(k), p.x, p.y,
                          p.z);
            os << buf;
        }
    }
}

}  // namespace biham
