#include "vacref/spherical.hpp"

#include <cmath>

#include "vacref/errors.hpp"

namespace vacref {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Vec3 to_cartesian(const SphericalPoint& p) {
    const double st = std::sin(p.theta);
    return {p.r * st * std::cos(p.phi), p.r * st * std::sin(p.phi),
            p.r * std::cos(p.theta)};
}

SphericalPoint quadrant_angles(const Vec3& v) {
    const double r = v.norm();
    if (r == 0.0) throw validation_error("quadrant_angles: zero vector has no direction");
    const double rho = std::hypot(v.x, v.y);
    SphericalPoint p;
    p.r = r;
    p.theta = std::atan2(rho, v.z);
    if (rho == 0.0) {
        p.phi = 0.0;  // pole: phi canonicalized
        return p;
    }
    double phi = std::atan2(v.y, v.x);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
    p.phi = phi;
    return p;
}

SphericalPoint local_to_global(const SphericalPoint& p, const FrameTranslation& t) {
    const Vec3 g = to_cartesian(p) + t.offset;
    if (g.norm() == 0.0)
        throw validation_error("local_to_global: translated point at origin");
    return quadrant_angles(g);
}

}  // namespace vacref
