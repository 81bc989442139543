#include "sph4r/so3.hpp"

namespace sph4r {

Rotation Rotation::operator*(const Rotation& o) const {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m_[3 * i + k] * o.m_[3 * k + j];
            r[3 * i + j] = s;
        }
    }
    return Rotation(r);
}

Rotation rotation_about_axis(double angle, const UnitVector3& axis) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const double nx = axis.x(), ny = axis.y(), nz = axis.z();
    return Rotation({c + t * nx * nx,      t * nx * ny - s * nz, t * nx * nz + s * ny,
                     t * nx * ny + s * nz, c + t * ny * ny,      t * ny * nz - s * nx,
                     t * nx * nz - s * ny, t * ny * nz + s * nx, c + t * nz * nz});
}

GeodesicArc geodesic_between(const UnitVector3& h1, const UnitVector3& h2) {
    const double d = h1.dot(h2);
    if (std::abs(d) >= 1.0 - kParallelEps) {
        throw DegenerateGeodesic("geodesic_between: points are parallel or antiparallel");
    }
    return GeodesicArc{h1, h2, UnitVector3(h1.cross(h2)), std::acos(d)};
}

UnitVector3 evaluate_geodesic(const GeodesicArc& arc, double t) {
    return rotation_about_axis(t, arc.axis).apply(arc.start);
}

namespace {

// Unit tangent at `vertex` of the geodesic toward `p`.
Vec3 tangent_at(const UnitVector3& vertex, const UnitVector3& p) {
    const double d = vertex.dot(p);
    if (std::abs(d) >= 1.0 - kParallelEps) {
        throw DegenerateGeodesic("spherical_angle_at_vertex: tangent undefined for (anti)parallel point");
    }
    const Vec3 t = p.vec() - vertex.vec() * d;
    return t * (1.0 / t.norm());
}

}  // namespace

double spherical_angle_at_vertex(const UnitVector3& vertex, const UnitVector3& a,
                                 const UnitVector3& b) {
    const Vec3 ta = tangent_at(vertex, a);
    const Vec3 tb = tangent_at(vertex, b);
    return std::atan2(vertex.vec().dot(ta.cross(tb)), ta.dot(tb));
}

}  // namespace sph4r
