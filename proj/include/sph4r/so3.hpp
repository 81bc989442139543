#pragma once

// Rotations about arbitrary axes and geodesic arcs on the unit sphere.

#include <array>
#include <cmath>

#include "sph4r/errors.hpp"

namespace sph4r {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// |dot| distance from 1 below which two unit vectors count as (anti)parallel.
inline constexpr double kParallelEps = 1e-9;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    constexpr double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }
};

/// A point on (equivalently, a unit vector to) the unit sphere.
/// Construction renormalizes; near-zero input is rejected.
class UnitVector3 {
public:
    UnitVector3(double x, double y, double z) : UnitVector3(Vec3{x, y, z}) {}

    explicit UnitVector3(const Vec3& v) {
        const double n = v.norm();
        if (n < 1e-9) {
            throw std::invalid_argument("UnitVector3: input too close to zero to normalize");
        }
        v_ = v * (1.0 / n);
    }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    const Vec3& vec() const { return v_; }

    double dot(const UnitVector3& o) const { return v_.dot(o.v_); }
    Vec3 cross(const UnitVector3& o) const { return v_.cross(o.v_); }

private:
    Vec3 v_;
};

/// Proper orthogonal 3x3 matrix acting as an active rotation (the frame
/// stays fixed, vectors move; right-hand rule about the axis).
class Rotation {
public:
    static Rotation identity() {
        return Rotation({1, 0, 0, 0, 1, 0, 0, 0, 1});
    }

    explicit Rotation(const std::array<double, 9>& row_major) : m_(row_major) {}

    double operator()(int row, int col) const { return m_[3 * row + col]; }

    Vec3 operator*(const Vec3& v) const {
        return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z,
                m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
                m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
    }

    Rotation operator*(const Rotation& o) const;

    Rotation transposed() const {
        return Rotation({m_[0], m_[3], m_[6], m_[1], m_[4], m_[7], m_[2], m_[5], m_[8]});
    }

    /// Rotated unit vector, renormalized to keep |result| = 1 exactly.
    UnitVector3 apply(const UnitVector3& v) const { return UnitVector3((*this) * v.vec()); }

private:
    std::array<double, 9> m_;  // row-major
};

/// Active rotation by `angle` (radians) about a unit axis, closed form.
Rotation rotation_about_axis(double angle, const UnitVector3& axis);

/// Free-function spelling of Rotation::apply.
inline UnitVector3 apply(const Rotation& r, const UnitVector3& v) { return r.apply(v); }

/// Great-circle arc from `start` to `end`; `axis` is the rotation axis
/// carrying start onto end, arc_angle = arccos(start . end) in (0, pi).
struct GeodesicArc {
    UnitVector3 start;
    UnitVector3 end;
    UnitVector3 axis;
    double arc_angle;
};

/// Throws DegenerateGeodesic when h1, h2 are parallel or antiparallel.
GeodesicArc geodesic_between(const UnitVector3& h1, const UnitVector3& h2);

/// Point at parameter t along the arc; t outside [0, arc_angle] extends
/// along the same great circle.
UnitVector3 evaluate_geodesic(const GeodesicArc& arc, double t);

/// Signed angle in (-pi, pi] at `vertex` from the geodesic vertex->a to the
/// geodesic vertex->b, positive counterclockwise about the outward normal.
/// Throws DegenerateGeodesic when a tangent is undefined.
double spherical_angle_at_vertex(const UnitVector3& vertex, const UnitVector3& a,
                                 const UnitVector3& b);

/// Wrap an angle to (-pi, pi].
inline double wrap_pi(double angle) {
    double r = std::remainder(angle, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

}  // namespace sph4r
