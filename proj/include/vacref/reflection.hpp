#pragma once

#include <cstddef>
#include <vector>

#include "vacref/vec3.hpp"

namespace vacref {

// A ray inside a spherical cavity.  `direction` must be unit length.  The
// incidence-plane normal is fixed by the first reflection and shared by all
// subsequent ones; it stays unset (zero) for radial chords, where the plane
// is undefined.
struct RayState {
    Vec3 origin{};
    Vec3 direction{};
    Vec3 plane_normal{};  // unit normal of the plane of incidence, or zero

    bool has_plane_normal() const { return plane_normal.norm_sq() > 0.0; }
};

// Ordered reflection points of a specular billiard inside the sphere.  The
// incidence angle and chord length are shared by every bounce; parameters
// hold the positive line parameters of each segment.
struct ReflectionTrace {
    std::vector<Vec3> points;
    double incidence_angle = 0.0;  // radians, in [0, pi/2)
    double chord_length = 0.0;     // |R_{j+1} - R_j|, constant along the trace
    std::vector<double> parameters;
    Vec3 plane_normal{};   // zero for the degenerate radial chord
    bool complete = true;  // false when the bounce budget ran out

    std::size_t size() const { return points.size(); }
};

// First intersection of the ray with the sphere |P| = radius.  The origin
// must be strictly inside.  Returns the positive line parameter and the
// surface point.
struct SurfaceHit {
    double parameter = 0.0;
    Vec3 point{};
};
SurfaceHit first_intersection(const RayState& ray, double radius);

// Specular reflection with separate parallel/perpendicular coefficients:
//   k_r = c_perp (n x k) x n - c_par (n . k) n.
// For c_perp = c_par = 1 this is the mirror image k - 2 (n.k) n and
// preserves the norm.  `surface_normal` must be unit length.
Vec3 reflect(const Vec3& incident, const Vec3& surface_normal,
             double coeff_parallel = 1.0, double coeff_perp = 1.0);

// Angle between the incident direction and the local radial direction at a
// sphere surface point, in [0, pi/2].  Normal incidence gives 0; pi/2 is the
// grazing limit (returned, callers decide whether to reject).
double incidence_angle(const Vec3& incident, const Vec3& surface_point);

// Unit normal of the plane spanned by the ray origin and direction.  That
// plane contains the sphere center and every subsequent reflection point.
// Throws degeneracy_error when origin and direction are parallel (radial
// chord, plane undefined).
Vec3 incidence_plane_normal(const RayState& ray);

// Nth reflection point by the closed-form chord-rotation construction: the
// linear system (1 R1^T - [R1]_x) v = Gamma c + r^2 cos(beta_N) 1 solved
// per component by Cramer determinants, followed by quadrant-resolved angle
// extraction.  N = 1 reduces to first_intersection.  Throws degeneracy_error
// within 1e-9 of grazing incidence (the chord length vanishes).
Vec3 closed_form_nth_point(const RayState& ray, double radius, int n);

// Step-by-step specular trace; the independent reference path for the
// closed form.  Perfect reflection (unit coefficients), inward surface
// normal -R/|R| at every bounce.
ReflectionTrace trace_iterative(const RayState& ray, double radius,
                                int max_reflections);

// Grazing rejection threshold shared by the closed form and the hemisphere
// counting logic.
inline constexpr double kGrazingEps = 1e-9;

}  // namespace vacref
