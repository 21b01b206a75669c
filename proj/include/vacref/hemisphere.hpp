#pragma once

#include "vacref/reflection.hpp"
#include "vacref/spherical.hpp"
#include "vacref/vec3.hpp"

namespace vacref {

// Scene kinds.  A Hemisphere scene means the closed hemisphere-hemisphere
// resonator (two domes forming a sphere, integrated over one dome);
// PlateHemisphere replaces the far dome with a conducting plate.
enum class CavityKind { Sphere, Hemisphere, PlateHemisphere };

// Geometry of the cavity scene.
//
// Conventions: in the hemisphere frame the dome is the z <= 0 half of the
// sphere |P| = inner_radius, the opening disk lies in the plane z = 0, and
// entry rays start on that disk with direction z-component < 0.  `center`
// translates the hemisphere frame into the global frame (pure translation,
// the dome axis stays along z).  The plate pose is global: unit normal from
// the polar pair (plate_theta, plate_phi) and a point `plate_center` on the
// plane.
struct CavityGeometry {
    double inner_radius = 1.0;
    double shell_thickness = 0.0;
    FrameTranslation center{};
    CavityKind kind = CavityKind::Sphere;
    double plate_theta = 0.0;  // PlateHemisphere only
    double plate_phi = 0.0;
    FrameTranslation plate_center{};

    Vec3 plate_normal() const;
    void validate() const;  // throws validation_error on bad fields
};

// Result of the escape-count closed form.  `boundary` marks samples whose
// angular budget lands within 1e-9 of an integer, where the floor is
// ambiguous against the step-by-step count.
struct ReflectionCount {
    int value = 1;        // N_h,max >= 1
    double z = 0.0;       // the pre-floor angular ratio
    bool boundary = false;
};

enum class EscapeClass { SingleReflection, MultipleReflection };

// Single/multiple classification data.  exit_crossing_norm is |R'_f|, the
// distance from the dome center to where the once-reflected ray crosses the
// opening plane (+infinity when that crossing lies behind the ray).
struct EscapeClassification {
    EscapeClass cls = EscapeClass::SingleReflection;
    double exit_crossing_norm = 0.0;
    int max_reflections = 1;
    bool boundary = false;
    bool degenerate_plane = false;  // axial entry, plane of incidence undefined
};

enum class Reentry { Reenters, Escapes };

// Reflection off the plate of a plate-hemisphere scene.
struct PlateInteraction {
    Vec3 plate_point{};       // R_p, global frame
    Reentry reentry = Reentry::Escapes;
    Vec3 scale_components{};  // per-axis parametric scales xi_kappa,i
};

// Maximum number of internal reflections before the ray escapes through the
// opening:  N = [Z]_G + 1 with
//   Z = (pi - arccos(1/2 {r/|R0| + |R0|/r - xi^2/(r |R0|)})) / (pi - 2 theta_inc),
// the +1 accounting for the entering strike itself (N >= 1 always; an entry
// through the disk center bounces straight back, N = 1).  Ray given in the
// hemisphere frame.
ReflectionCount max_reflections(const RayState& ray, const CavityGeometry& geom);

// Single vs. multiple internal reflection via the |R'_f| threshold:
// SingleReflection iff |R'_f| < inner_radius.  Consistent with
// max_reflections == 1 away from boundary samples.
EscapeClassification classify_reflection(const RayState& ray,
                                         const CavityGeometry& geom);

// Ray leaving the dome after its last internal reflection: origin is the
// N_h,max-th reflection point, direction the once-more reflected wave
// vector.  Input in the hemisphere frame; output in the global frame.
RayState hemisphere_exit_ray(const RayState& ray, const CavityGeometry& geom);

// Reflection point on the plate hit by the exit ray (global frame), with the
// re-entry verdict filled in.  Throws degeneracy_error when the exit ray
// runs parallel to the plate plane or the plate lies behind it.
PlateInteraction plate_reflection_point(const RayState& exit_ray,
                                        const CavityGeometry& geom);

// Re-entry criterion: the plate-reflected parametric line pierces the
// hemisphere opening disk, which is exactly the statement that the three
// per-axis scales xi_kappa,i agree on a single positive constant.
Reentry reentry_check(const PlateInteraction& plate_hit, const RayState& exit_ray,
                      const CavityGeometry& geom, Vec3* scales_out = nullptr);

// Kinematics of a surface element of the plate, parameterized by the
// orientation pair (theta_p, phi_p), the in-plate coordinates along the
// polar/azimuthal triad directions, and the plate translation.
struct PlateElement {
    double theta_p = 0.0;
    double phi_p = 0.0;
    double coord_theta = 0.0;  // nu'_{p,theta}
    double coord_phi = 0.0;    // nu'_{p,phi}
    Vec3 translation{};        // nu_{T,p,i}
};

struct PlateElementRates {
    double theta_rate = 0.0;       // plate angular frequencies
    double phi_rate = 0.0;
    double coord_theta_rate = 0.0; // lattice vibrations along the triad
    double coord_phi_rate = 0.0;
    Vec3 translation_rate{};       // plate translation speed
};

// Position of the element: translation + coord_theta * dLambda/dtheta +
// (coord_phi / sin theta) * dLambda/dphi.
Vec3 plate_element_position(const PlateElement& el);

// Total time derivative of the element position under the given rates.  A
// static plate (all rates zero) yields exactly the zero vector; the moving
// cases exist for completeness and are validated against numerical
// differentiation, not used by the force pipeline.
Vec3 plate_element_velocity(const PlateElement& el, const PlateElementRates& rates);

// Relative spread below which the three scale components count as equal.
inline constexpr double kReentryTol = 1e-9;

}  // namespace vacref
