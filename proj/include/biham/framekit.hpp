#pragma once

// Adapted orthonormal frame (e1, e2, e3) with e1 = v/|v|, e2 from
// Gram-Schmidt of a fixed reference axis, e3 = e1 x e2, and the structure
// functions C^k_ij of the frame's Lie brackets.
//
// The reference axis is fixed per region: finite differences of the frame
// require a smooth frame selection, so there is no per-point axis switching.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "biham/calc3.hpp"
#include "biham/errors.hpp"

namespace biham {

struct FrameValue {
    Vec3 e1, e2, e3;
    Vec3 e(int i) const { return i == 1 ? e1 : (i == 2 ? e2 : e3); }
};

class AdaptedFrame {
public:
    AdaptedFrame(VectorField v, Vec3 reference_axis = {0.0, 0.0, 1.0},
                 double eps_v = 1e-10, double degeneracy_angle = 1e-3)
        : v_(std::move(v)),
          ref_(reference_axis.normalized()),
          eps_v_(eps_v),
          sin_degeneracy_(std::sin(degeneracy_angle)) {}

    const VectorField& field() const { return v_; }
    const Vec3& reference_axis() const { return ref_; }
    double eps_v() const { return eps_v_; }

    FrameValue at(const Point3& x) const {
        const Vec3 u = v_.eval(x);
        const double n = u.norm();
        if (!(n >= eps_v_))
            throw VanishingFieldError(
                "build_frame: |v| < eps_v, the field must be nonvanishing", x);
        FrameValue f;
        f.e1 = u / n;
        Vec3 w = ref_ - f.e1 * ref_.dot(f.e1);
        const double m = w.norm();
        if (m < sin_degeneracy_)
            throw FrameDegeneracyError(
                "build_frame: reference axis within the degeneracy angle of e1; "
                "pass an alternate axis",
                x, suggest_axis(f.e1));
        f.e2 = w / m;
        f.e3 = f.e1.cross(f.e2);
        return f;
    }

    // Jacobians (D e1, D e2, D e3); exact backend differentiates through the
    // normalization and Gram-Schmidt chain, FD backend re-evaluates the frame.
    std::array<Mat3, 3> jacobians(const Point3& x, const DiffConfig& cfg) const {
        cfg.validate();
        if (cfg.backend == DiffBackend::Exact) return exact_jacobians(x);
        detail::check_stencil(v_.domain, x, cfg, "frame jacobian");
        std::array<Mat3, 3> J;
        for (int axis = 0; axis < 3; ++axis) {
            const Vec3 de1 = detail::central_diff<Vec3>(
                [this](const Point3& p) { return at(p).e1; }, x, axis, cfg);
            const Vec3 de2 = detail::central_diff<Vec3>(
                [this](const Point3& p) { return at(p).e2; }, x, axis, cfg);
            const Vec3 de3 = detail::central_diff<Vec3>(
                [this](const Point3& p) { return at(p).e3; }, x, axis, cfg);
            J[0].col[axis] = de1;
            J[1].col[axis] = de2;
            J[2].col[axis] = de3;
        }
        return J;
    }

    // The i-th frame leg as a standalone vector field (1-based index).
    VectorField leg(int i) const {
        VectorField f;
        f.domain = v_.domain;
        const AdaptedFrame self = *this;
        f.eval = [self, i](const Point3& p) { return self.at(p).e(i); };
        if (v_.exact_jacobian) {
            f.exact_jacobian = [self, i](const Point3& p) {
                return self.exact_jacobians(p)[i - 1];
            };
        }
        return f;
    }

private:
    static Vec3 suggest_axis(const Vec3& e1) {
        // coordinate axis most orthogonal to e1
        int best = 0;
        double best_abs = std::abs(e1.x);
        if (std::abs(e1.y) < best_abs) { best = 1; best_abs = std::abs(e1.y); }
        if (std::abs(e1.z) < best_abs) best = 2;
        Vec3 a{};
        a[best] = 1.0;
        return a;
    }

    std::array<Mat3, 3> exact_jacobians(const Point3& x) const {
        if (!v_.exact_jacobian)
            throw std::invalid_argument(
                "frame jacobians: exact backend requested but v has no exact Jacobian");
        const Vec3 u = v_.eval(x);
        const double n = u.norm();
        if (!(n >= eps_v_))
            throw VanishingFieldError("frame jacobians: |v| < eps_v", x);
        const Mat3 Du = v_.exact_jacobian(x);
        const FrameValue f = at(x);

        const Mat3 P1 = Mat3::identity() - Mat3::outer(f.e1, f.e1);
        const Mat3 De1 = P1 * Du * (1.0 / n);

        const Vec3 w = ref_ - f.e1 * ref_.dot(f.e1);
        const double m = w.norm();
        const Mat3 Dw =
            (Mat3::outer(f.e1, De1.transposed() * ref_) + De1 * ref_.dot(f.e1)) * (-1.0);
        const Mat3 P2 = Mat3::identity() - Mat3::outer(f.e2, f.e2);
        const Mat3 De2 = P2 * Dw * (1.0 / m);

        Mat3 De3;
        for (int j = 0; j < 3; ++j)
            De3.col[j] = De1.col[j].cross(f.e2) + f.e1.cross(De2.col[j]);
        return {De1, De2, De3};
    }

    VectorField v_;
    Vec3 ref_;
    double eps_v_;
    double sin_degeneracy_;
};

inline AdaptedFrame build_frame(VectorField v, Vec3 reference_axis = {0.0, 0.0, 1.0},
                                double eps_v = 1e-10, double degeneracy_angle = 1e-3) {
    return AdaptedFrame(std::move(v), reference_axis, eps_v, degeneracy_angle);
}

// Evaluates the frame at every probe point, surfacing vanishing-field or
// degeneracy errors before a long run commits to the region.
inline void validate_frame_on(const AdaptedFrame& frame, const std::vector<Point3>& probes) {
    for (const Point3& p : probes) (void)frame.at(p);
}

// C^k_ij with [e_i, e_j] = C^k_ij e_k; antisymmetric in (i,j) by construction.
struct StructureFunctions {
    double c_[3][3][3] = {};  // c_[k-1][i-1][j-1]

    double c(int k, int i, int j) const { return c_[k - 1][i - 1][j - 1]; }

    // The combinations that drive the mu and alpha equations.
    double c231() const { return c(2, 3, 1); }
    double c331() const { return c(3, 3, 1); }
    double c212() const { return c(2, 1, 2); }
    double c312() const { return c(3, 1, 2); }
};

inline StructureFunctions structure_functions(const AdaptedFrame& frame, const Point3& x,
                                              const DiffConfig& cfg) {
    const FrameValue f = frame.at(x);
    const std::array<Mat3, 3> D = frame.jacobians(x, cfg);
    const std::array<Vec3, 3> e = {f.e1, f.e2, f.e3};

    StructureFunctions sf;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            // [e_i, e_j] = (D e_j) e_i - (D e_i) e_j
            const Vec3 bracket = D[j] * e[i] - D[i] * e[j];
            for (int k = 0; k < 3; ++k) {
                const double v = bracket.dot(e[k]);
                sf.c_[k][i][j] = v;
                sf.c_[k][j][i] = -v;
            }
        }
    }
    return sf;
}

}  // namespace biham
