#pragma once

#include "vacref/vec3.hpp"

namespace vacref {

// Point in spherical coordinates.  Canonical ranges: r >= 0, theta in
// [0, pi], phi in [0, 2*pi); on the polar axis phi is pinned to 0 so every
// point has a unique representation.
struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// Pure translation of a local frame (e.g. a hemisphere center) relative to
// the system origin.  No rotation component.
struct FrameTranslation {
    Vec3 offset{};
};

// r * (sin t cos p, sin t sin p, cos t).  Total function.
Vec3 to_cartesian(const SphericalPoint& p);

// Inverse map with quadrant-resolved angles.  theta in [0, pi], phi in
// [0, 2*pi); exact-axis inputs resolve by the four-quadrant arctangent and
// poles canonicalize phi to 0.  Throws validation_error on the zero vector.
SphericalPoint quadrant_angles(const Vec3& v);

// Spherical triple of the translated point: radius |C(p) + offset| and the
// quadrant-resolved angles of that sum.  Throws validation_error if the
// translated point lands on the origin.
SphericalPoint local_to_global(const SphericalPoint& p, const FrameTranslation& t);

}  // namespace vacref
