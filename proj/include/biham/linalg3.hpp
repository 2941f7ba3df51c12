#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <ostream>

namespace biham {

// Chart coordinates are dimensionless doubles throughout.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double norm_sq() const { return dot(*this); }
    Vec3 normalized() const { return *this / norm(); }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

using Point3 = Vec3;

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

// Column-major 3x3 matrix, used for Jacobians of fields and frames.
struct Mat3 {
    std::array<Vec3, 3> col{};  // col[j] = j-th column

    static Mat3 zero() { return {}; }
    static Mat3 identity() {
        Mat3 m;
        m.col = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        return m;
    }
    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 m;
        m.col = {c0, c1, c2};
        return m;
    }
    static Mat3 outer(const Vec3& a, const Vec3& b) {
        return from_columns(a * b.x, a * b.y, a * b.z);
    }
    // [v]_x, the matrix of u -> v x u
    static Mat3 cross_matrix(const Vec3& v) {
        return from_columns(Vec3{0, v.z, -v.y}, Vec3{-v.z, 0, v.x}, Vec3{v.y, -v.x, 0});
    }

    double operator()(int i, int j) const { return col[j][i]; }
    double& operator()(int i, int j) { return col[j][i]; }

    Vec3 operator*(const Vec3& v) const { return col[0] * v.x + col[1] * v.y + col[2] * v.z; }
    Mat3 operator*(const Mat3& o) const {
        return from_columns((*this) * o.col[0], (*this) * o.col[1], (*this) * o.col[2]);
    }
    Mat3 operator+(const Mat3& o) const {
        return from_columns(col[0] + o.col[0], col[1] + o.col[1], col[2] + o.col[2]);
    }
    Mat3 operator-(const Mat3& o) const {
        return from_columns(col[0] - o.col[0], col[1] - o.col[1], col[2] - o.col[2]);
    }
    Mat3 operator*(double s) const { return from_columns(col[0] * s, col[1] * s, col[2] * s); }

    Mat3 transposed() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }
    double det() const { return col[0].dot(col[1].cross(col[2])); }
    double trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

    // Adjugate-based inverse; caller is responsible for det != 0.
    Mat3 inverse() const {
        const Vec3 r0 = col[1].cross(col[2]);
        const Vec3 r1 = col[2].cross(col[0]);
        const Vec3 r2 = col[0].cross(col[1]);
        const double d = col[0].dot(r0);
        Mat3 inv;
        for (int j = 0; j < 3; ++j) {
            inv(0, j) = r0[j] / d;
            inv(1, j) = r1[j] / d;
            inv(2, j) = r2[j] / d;
        }
        return inv;
    }
    Vec3 solve(const Vec3& b) const { return inverse() * b; }
};

// Rotation by `angle` about unit `axis` (Rodrigues).
inline Mat3 rotation_about(const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    const Mat3 K = Mat3::cross_matrix(axis);
    return Mat3::identity() * c + K * s + Mat3::outer(axis, axis) * (1.0 - c);
}

}  // namespace biham
