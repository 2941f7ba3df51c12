#pragma once

// Registry of named analytic vector fields used by scenarios and tests.
// Every entry carries an exact Jacobian so the exact differentiation backend
// can isolate finite-difference error in experiments.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "biham/calc3.hpp"

namespace biham {

using FieldParams = std::map<std::string, double>;

struct AnalyticVectorField {
    std::string name;
    FieldParams params;
    VectorField field;
    bool periodic = false;   // defined on a periodic box
    double period = 0.0;     // box edge length when periodic
};

namespace fields {

inline double param(const FieldParams& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

// v = const direction; the canonical globally bi-Hamiltonian example.
inline AnalyticVectorField constant(const FieldParams& p = {}) {
    const Vec3 d{param(p, "dx", 1.0), param(p, "dy", 0.0), param(p, "dz", 0.0)};
    AnalyticVectorField f;
    f.name = "constant";
    f.params = {{"dx", d.x}, {"dy", d.y}, {"dz", d.z}};
    f.field.eval = [d](const Point3&) { return d; };
    f.field.exact_jacobian = [](const Point3&) { return Mat3::zero(); };
    return f;
}

// v = x/|x| on R^3 minus a ball around the origin; the normal bundle is the
// tangent bundle of S^2, the classic global counterexample.
inline AnalyticVectorField radial(const FieldParams& p = {}) {
    const double rmin = param(p, "rmin", 0.05);
    AnalyticVectorField f;
    f.name = "radial";
    f.params = {{"rmin", rmin}};
    f.field.domain.excluded_ball_radius = rmin;
    f.field.eval = [](const Point3& x) { return x / x.norm(); };
    f.field.exact_jacobian = [](const Point3& x) {
        const double r = x.norm();
        const Vec3 u = x / r;
        return (Mat3::identity() - Mat3::outer(u, u)) * (1.0 / r);
    };
    return f;
}

// v = (-y, x, c): rigid rotation about the z-axis with optional axial drift.
inline AnalyticVectorField rotation(const FieldParams& p = {}) {
    const double c = param(p, "c", 0.0);
    AnalyticVectorField f;
    f.name = "rotation";
    f.params = {{"c", c}};
    f.field.eval = [c](const Point3& x) { return Vec3{-x.y, x.x, c}; };
    f.field.exact_jacobian = [](const Point3&) {
        return Mat3::from_columns({0, 1, 0}, {-1, 0, 0}, {0, 0, 0});
    };
    return f;
}

// v = (1, k z, 0): unit drift with a linear cross-shear.
inline AnalyticVectorField shear(const FieldParams& p = {}) {
    const double k = param(p, "k", 0.5);
    AnalyticVectorField f;
    f.name = "shear";
    f.params = {{"k", k}};
    f.field.eval = [k](const Point3& x) { return Vec3{1.0, k * x.z, 0.0}; };
    f.field.exact_jacobian = [k](const Point3&) {
        return Mat3::from_columns({0, 0, 0}, {0, 0, 0}, {0, k, 0});
    };
    return f;
}

// v = (x, y, 0): planar radial field; its adapted frame is the cylindrical
// frame, which has closed-form structure functions.
inline AnalyticVectorField planar_radial(const FieldParams& p = {}) {
    const double rmin = param(p, "rmin", 0.05);
    AnalyticVectorField f;
    f.name = "planar_radial";
    f.params = {{"rmin", rmin}};
    f.field.domain.excluded_ball_radius = rmin;
    f.field.eval = [](const Point3& x) { return Vec3{x.x, x.y, 0.0}; };
    f.field.exact_jacobian = [](const Point3&) {
        return Mat3::from_columns({1, 0, 0}, {0, 1, 0}, {0, 0, 0});
    };
    return f;
}

// Arnold-Beltrami-Childress flow; curl v = v when A = B = C.
inline AnalyticVectorField abc(const FieldParams& p = {}) {
    const double A = param(p, "A", 1.0), B = param(p, "B", 1.0), C = param(p, "C", 1.0);
    AnalyticVectorField f;
    f.name = "abc";
    f.params = {{"A", A}, {"B", B}, {"C", C}};
    f.periodic = true;
    f.period = 2.0 * M_PI;
    f.field.eval = [A, B, C](const Point3& x) {
        return Vec3{A * std::sin(x.z) + C * std::cos(x.y),
                    B * std::sin(x.x) + A * std::cos(x.z),
                    C * std::sin(x.y) + B * std::cos(x.x)};
    };
    f.field.exact_jacobian = [A, B, C](const Point3& x) {
        return Mat3::from_columns(
            Vec3{0.0, B * std::cos(x.x), -B * std::sin(x.x)},
            Vec3{-C * std::sin(x.y), 0.0, C * std::cos(x.y)},
            Vec3{A * std::cos(x.z), -A * std::sin(x.z), 0.0});
    };
    return f;
}

// v = (a sin z, a cos z, 0): unit-speed nonvanishing Beltrami field on the
// 2*pi-periodic box (curl v = v for a = 1).
inline AnalyticVectorField beltrami(const FieldParams& p = {}) {
    const double a = param(p, "a", 1.0);
    AnalyticVectorField f;
    f.name = "beltrami";
    f.params = {{"a", a}};
    f.periodic = true;
    f.period = 2.0 * M_PI;
    f.field.eval = [a](const Point3& x) {
        return Vec3{a * std::sin(x.z), a * std::cos(x.z), 0.0};
    };
    f.field.exact_jacobian = [a](const Point3& x) {
        return Mat3::from_columns({0, 0, 0}, {0, 0, 0},
                                  {a * std::cos(x.z), -a * std::sin(x.z), 0});
    };
    return f;
}

using Factory = std::function<AnalyticVectorField(const FieldParams&)>;

inline const std::map<std::string, Factory>& registry() {
    static const std::map<std::string, Factory> reg = {
        {"constant", [](const FieldParams& p) { return constant(p); }},
        {"radial", [](const FieldParams& p) { return radial(p); }},
        {"rotation", [](const FieldParams& p) { return rotation(p); }},
        {"shear", [](const FieldParams& p) { return shear(p); }},
        {"planar_radial", [](const FieldParams& p) { return planar_radial(p); }},
        {"abc", [](const FieldParams& p) { return abc(p); }},
        {"beltrami", [](const FieldParams& p) { return beltrami(p); }},
    };
    return reg;
}

inline AnalyticVectorField make(const std::string& name, const FieldParams& p = {}) {
    auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown field '" + name + "' in registry");
    return it->second(p);
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

}  // namespace fields
}  // namespace biham
