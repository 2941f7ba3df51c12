#pragma once

// Vector calculus and exterior algebra on 3D chart domains, Euclidean metric,
// orientation fixed by Omega = dx^dy^dz. Derivatives come from a pluggable
// backend: central finite differences (order 2 or 4) or caller-supplied exact
// derivatives.

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "biham/errors.hpp"
#include "biham/linalg3.hpp"

namespace biham {

enum class DiffBackend { FiniteDifference, Exact };

struct DiffConfig {
    DiffBackend backend = DiffBackend::FiniteDifference;
    double h = 1e-4;  // chart units; balances truncation vs cancellation
    int order = 2;    // stencil order, 2 or 4

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("DiffConfig: h must be > 0");
        if (order != 2 && order != 4)
            throw std::invalid_argument("DiffConfig: stencil order must be 2 or 4");
    }
    // Half-width of the stencil in chart units.
    double stencil_reach() const { return (order == 2 ? 1.0 : 2.0) * h; }
};

// Evaluation domain of a field: optional axis-aligned box, optional excluded
// ball (e.g. the origin for x/|x|^3-type fields). Default is all of R^3.
struct Domain {
    std::optional<Point3> box_lo, box_hi;
    double excluded_ball_radius = 0.0;
    Point3 excluded_ball_center{};

    bool contains(const Point3& p) const {
        if (box_lo && box_hi) {
            if (p.x < box_lo->x || p.y < box_lo->y || p.z < box_lo->z) return false;
            if (p.x > box_hi->x || p.y > box_hi->y || p.z > box_hi->z) return false;
        }
        if (excluded_ball_radius > 0.0 &&
            (p - excluded_ball_center).norm() < excluded_ball_radius)
            return false;
        return true;
    }
    void require(const Point3& p, const char* what) const {
        if (!contains(p))
            throw DomainBoundaryError(std::string(what) + ": point outside declared domain", p);
    }
};

struct ScalarField {
    std::function<double(const Point3&)> eval;
    std::function<Vec3(const Point3&)> exact_grad;  // optional
    Domain domain;

    double operator()(const Point3& p) const { return eval(p); }
};

// An evaluable vector field on a chart domain with optional exact Jacobian.
struct VectorField {
    std::function<Vec3(const Point3&)> eval;
    std::function<Mat3(const Point3&)> exact_jacobian;  // optional; columns d v/d x_j
    Domain domain;

    Vec3 operator()(const Point3& p) const { return eval(p); }
};

namespace detail {

// dq/dx_axis by central differences; `value` must be evaluable on the stencil.
template <typename Value, typename Fn>
Value central_diff(const Fn& value, const Point3& x, int axis, const DiffConfig& cfg) {
    Point3 p1 = x, m1 = x;
    p1[axis] += cfg.h;
    m1[axis] -= cfg.h;
    if (cfg.order == 2) return (value(p1) - value(m1)) * (1.0 / (2.0 * cfg.h));
    Point3 p2 = x, m2 = x;
    p2[axis] += 2.0 * cfg.h;
    m2[axis] -= 2.0 * cfg.h;
    return (value(m2) - value(p2) + (value(p1) - value(m1)) * 8.0) * (1.0 / (12.0 * cfg.h));
}

inline void check_stencil(const Domain& domain, const Point3& x, const DiffConfig& cfg,
                          const char* what) {
    const double r = cfg.stencil_reach();
    for (int axis = 0; axis < 3; ++axis) {
        for (double sgn : {-1.0, 1.0}) {
            Point3 p = x;
            p[axis] += sgn * r;
            if (!domain.contains(p))
                throw DomainBoundaryError(std::string(what) + ": stencil exits domain", p);
        }
    }
}

}  // namespace detail

inline Vec3 grad(const ScalarField& f, const Point3& x, const DiffConfig& cfg) {
    cfg.validate();
    if (cfg.backend == DiffBackend::Exact) {
        if (!f.exact_grad)
            throw std::invalid_argument("grad: exact backend requested but field has no exact gradient");
        return f.exact_grad(x);
    }
    detail::check_stencil(f.domain, x, cfg, "grad");
    Vec3 g;
    for (int axis = 0; axis < 3; ++axis)
        g[axis] = detail::central_diff<double>(f.eval, x, axis, cfg);
    return g;
}

// Columns are d V / d x_j.
inline Mat3 jacobian(const VectorField& V, const Point3& x, const DiffConfig& cfg) {
    cfg.validate();
    if (cfg.backend == DiffBackend::Exact) {
        if (!V.exact_jacobian)
            throw std::invalid_argument("jacobian: exact backend requested but field has no exact Jacobian");
        return V.exact_jacobian(x);
    }
    detail::check_stencil(V.domain, x, cfg, "jacobian");
    Mat3 J;
    for (int axis = 0; axis < 3; ++axis)
        J.col[axis] = detail::central_diff<Vec3>(V.eval, x, axis, cfg);
    return J;
}

inline Vec3 curl_of(const Mat3& jac) {
    return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

inline Vec3 curl(const VectorField& V, const Point3& x, const DiffConfig& cfg) {
    return curl_of(jacobian(V, x, cfg));
}

inline double divergence(const VectorField& V, const Point3& x, const DiffConfig& cfg) {
    return jacobian(V, x, cfg).trace();
}

// ---------------------------------------------------------------------------
// Differential forms in the coordinate coframe.
//
// Component conventions (these fix every sign downstream):
//   grade 0: c[0]              = f
//   grade 1: (c[0],c[1],c[2])  = coefficients of (dx, dy, dz)
//   grade 2: (c[0],c[1],c[2])  = coefficients of (dy^dz, dz^dx, dx^dy)
//   grade 3: c[0]              = coefficient of dx^dy^dz
// With this ordering flat/hodge/contract act componentwise on the Vec3 proxy.
// ---------------------------------------------------------------------------

struct FormValue {
    int grade = 0;
    Vec3 c{};  // grades 0 and 3 use c.x only

    static FormValue scalar(int grade, double v) { return {grade, {v, 0.0, 0.0}}; }
    double scalar_part() const { return c.x; }

    FormValue operator+(const FormValue& o) const { return {grade, c + o.c}; }
    FormValue operator-(const FormValue& o) const { return {grade, c - o.c}; }
    FormValue operator*(double s) const { return {grade, c * s}; }

    // Euclidean norm of the component vector; for all grades this is the
    // metric norm of the form at a point.
    double norm() const { return c.norm(); }
};

inline int form_component_count(int grade) {
    switch (grade) {
        case 0: case 3: return 1;
        case 1: case 2: return 3;
        default: throw std::invalid_argument("form grade must be in {0,1,2,3}");
    }
}

// A differential form of grade 0..3 sampled by evaluation.
struct FormField {
    int grade = 0;
    std::function<FormValue(const Point3&)> eval;
    Domain domain;

    FormValue operator()(const Point3& p) const { return eval(p); }
};

inline FormValue wedge(const FormValue& a, const FormValue& b) {
    const int g = a.grade + b.grade;
    if (g > 3) throw std::invalid_argument("wedge: grade overflow");
    if (a.grade == 0) return FormValue{g, b.c * a.c.x};
    if (b.grade == 0) return FormValue{g, a.c * b.c.x};
    if (a.grade == 1 && b.grade == 1) return FormValue{2, a.c.cross(b.c)};
    // (1,2) and (2,1): both commute with + sign and pair by the metric.
    return FormValue::scalar(3, a.c.dot(b.c));
}

inline FormValue hodge(const FormValue& a) {
    switch (a.grade) {
        case 0: return FormValue{3, a.c};
        case 1: return FormValue{2, a.c};
        case 2: return FormValue{1, a.c};
        case 3: return FormValue{0, a.c};
        default: throw std::invalid_argument("hodge: bad grade");
    }
}

inline FormValue contract(const Vec3& V, const FormValue& a) {
    switch (a.grade) {
        case 1: return FormValue::scalar(0, a.c.dot(V));
        case 2: return FormValue{1, a.c.cross(V)};
        case 3: return FormValue{2, V * a.c.x};
        default: throw std::invalid_argument("contract: grade must be >= 1");
    }
}

inline FormValue flat(const Vec3& V) { return FormValue{1, V}; }

inline FormField wedge(const FormField& a, const FormField& b) {
    if (a.grade + b.grade > 3) throw std::invalid_argument("wedge: grade overflow");
    return {a.grade + b.grade,
            [a, b](const Point3& p) { return wedge(a.eval(p), b.eval(p)); }, a.domain};
}

inline FormField hodge(const FormField& a) {
    return {3 - a.grade, [a](const Point3& p) { return hodge(a.eval(p)); }, a.domain};
}

inline FormField contract(const VectorField& V, const FormField& a) {
    if (a.grade < 1) throw std::invalid_argument("contract: grade must be >= 1");
    return {a.grade - 1,
            [V, a](const Point3& p) { return contract(V.eval(p), a.eval(p)); }, a.domain};
}

inline FormField flat(const VectorField& V) {
    return {1, [V](const Point3& p) { return flat(V.eval(p)); }, V.domain};
}

inline FormField constant_form(int grade, const Vec3& comps) {
    return {grade, [comps, grade](const Point3&) { return FormValue{grade, comps}; }, {}};
}

inline FormField volume_form() { return constant_form(3, {1.0, 0.0, 0.0}); }

// Exterior derivative at a point, from partial derivatives of the components
// in the coordinate coframe (finite differences only; forms carry no exact
// derivative hooks).
inline FormValue ext_deriv(const FormField& w, const Point3& x, const DiffConfig& cfg) {
    cfg.validate();
    if (w.grade > 2) throw std::invalid_argument("ext_deriv: grade must be <= 2");
    if (cfg.backend == DiffBackend::Exact)
        throw std::invalid_argument("ext_deriv: no exact backend for sampled forms");
    detail::check_stencil(w.domain, x, cfg, "ext_deriv");

    Mat3 d;  // d.col[axis] = d comps / d x_axis
    for (int axis = 0; axis < 3; ++axis)
        d.col[axis] = detail::central_diff<Vec3>(
            [&w](const Point3& p) { return w.eval(p).c; }, x, axis, cfg);

    switch (w.grade) {
        case 0:
            return FormValue{1, {d(0, 0), d(0, 1), d(0, 2)}};
        case 1:
            // d(P dx + Q dy + R dz), curl pattern in the (dy^dz, dz^dx, dx^dy) basis
            return FormValue{2, {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)}};
        default:
            // d(A dy^dz + B dz^dx + C dx^dy) = (div) dx^dy^dz
            return FormValue::scalar(3, d(0, 0) + d(1, 1) + d(2, 2));
    }
}

inline FormField ext_deriv_field(const FormField& w, const DiffConfig& cfg) {
    if (w.grade > 2) throw std::invalid_argument("ext_deriv: grade must be <= 2");
    return {w.grade + 1,
            [w, cfg](const Point3& p) { return ext_deriv(w, p, cfg); }, w.domain};
}

}  // namespace biham
