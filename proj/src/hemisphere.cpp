#include "vacref/hemisphere.hpp"

#include <cmath>
#include <limits>

#include "vacref/errors.hpp"

namespace vacref {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_entry(const RayState& ray, const CavityGeometry& geom, const char* who) {
    geom.validate();
    const double r = geom.inner_radius;
    if (std::abs(ray.origin.z) > 1e-9 * r)
        throw validation_error(std::string(who) + ": entry point must lie on the opening plane");
    if (!(ray.origin.norm() < r))
        throw validation_error(std::string(who) + ": entry point outside the opening disk");
    if (!(ray.direction.z < 0.0))
        throw validation_error(std::string(who) + ": entry direction must head into the dome");
}

}  // namespace

Vec3 CavityGeometry::plate_normal() const {
    return to_cartesian({1.0, plate_theta, plate_phi});
}

void CavityGeometry::validate() const {
    if (!(inner_radius > 0.0)) throw validation_error("geometry: inner_radius must be > 0");
    if (shell_thickness < 0.0) throw validation_error("geometry: shell_thickness must be >= 0");
    if (!center.offset.finite() || !plate_center.offset.finite())
        throw validation_error("geometry: non-finite translation");
    if (kind != CavityKind::PlateHemisphere &&
        (plate_theta != 0.0 || plate_phi != 0.0 || plate_center.offset.norm_sq() != 0.0))
        throw validation_error("geometry: plate fields require kind = PlateHemisphere");
}

ReflectionCount max_reflections(const RayState& ray, const CavityGeometry& geom) {
    check_entry(ray, geom, "max_reflections");
    const double r = geom.inner_radius;
    const double rho = ray.origin.norm();
    if (rho < 1e-12 * r) {
        // Axial entry through the disk center: normal-incidence bounce-back.
        return {1, 0.0, false};
    }
    const SurfaceHit hit = first_intersection(ray, r);
    const double theta_inc = incidence_angle(ray.direction, hit.point);
    if (theta_inc >= kPi / 2.0 - kGrazingEps)
        throw degeneracy_error("max_reflections: grazing entry, bounce count diverges");

    double arg = 0.5 * (r / rho + rho / r - hit.parameter * hit.parameter / (r * rho));
    if (arg > 1.0) arg = 1.0;
    if (arg < -1.0) arg = -1.0;
    const double z = (kPi - std::acos(arg)) / (kPi - 2.0 * theta_inc);

    ReflectionCount out;
    out.z = z;
    out.boundary = std::abs(z - std::round(z)) < 1e-9;
    out.value = static_cast<int>(std::floor(z)) + 1;
    if (out.value < 1) out.value = 1;
    return out;
}

EscapeClassification classify_reflection(const RayState& ray,
                                         const CavityGeometry& geom) {
    check_entry(ray, geom, "classify_reflection");
    const double r = geom.inner_radius;

    EscapeClassification out;
    if (ray.origin.norm() < 1e-12 * r) {
        out.degenerate_plane = true;
        out.cls = EscapeClass::SingleReflection;
        out.exit_crossing_norm = 0.0;
        out.max_reflections = 1;
        return out;
    }

    const ReflectionCount count = max_reflections(ray, geom);
    out.max_reflections = count.value;
    out.boundary = count.boundary;

    // R'_f: crossing of the once-reflected ray with the opening plane, which
    // lies along -R'_0 within the plane of incidence.
    const SurfaceHit hit = first_intersection(ray, r);
    const Vec3 d2 = reflect(ray.direction, -(hit.point / r));
    if (d2.z > 0.0) {
        const double t = -hit.point.z / d2.z;
        out.exit_crossing_norm = (hit.point + t * d2).norm();
    } else {
        // Reflected ray keeps descending; the exit crossing is not on this
        // segment, so the wave certainly stays for more bounces.
        out.exit_crossing_norm = kInf;
    }
    out.cls = out.exit_crossing_norm < r ? EscapeClass::SingleReflection
                                         : EscapeClass::MultipleReflection;
    return out;
}

RayState hemisphere_exit_ray(const RayState& ray, const CavityGeometry& geom) {
    const ReflectionCount count = max_reflections(ray, geom);
    const ReflectionTrace trace = trace_iterative(ray, geom.inner_radius, count.value);
    const Vec3 last = trace.points.back();
    Vec3 dir;
    if (trace.size() >= 2) {
        dir = (last - trace.points[trace.size() - 2]).normalized();
    } else {
        dir = (last - ray.origin).normalized();
    }
    RayState out;
    out.origin = last + geom.center.offset;
    out.direction = reflect(dir, -(last / geom.inner_radius));
    out.plane_normal = trace.plane_normal;
    return out;
}

PlateInteraction plate_reflection_point(const RayState& exit_ray,
                                        const CavityGeometry& geom) {
    geom.validate();
    if (geom.kind != CavityKind::PlateHemisphere)
        throw validation_error("plate_reflection_point: scene has no plate");
    const Vec3 n = geom.plate_normal();
    const double dn = dot(exit_ray.direction, n);
    if (std::abs(dn) < 1e-14)
        throw degeneracy_error("plate_reflection_point: exit ray parallel to plate plane");
    const double t = dot(geom.plate_center.offset - exit_ray.origin, n) / dn;
    if (!(t > 0.0))
        throw degeneracy_error("plate_reflection_point: plate lies behind the exit ray");

    PlateInteraction out;
    out.plate_point = exit_ray.origin + t * exit_ray.direction;
    out.reentry = reentry_check(out, exit_ray, geom, &out.scale_components);
    return out;
}

Reentry reentry_check(const PlateInteraction& plate_hit, const RayState& exit_ray,
                      const CavityGeometry& geom, Vec3* scales_out) {
    geom.validate();
    const double r = geom.inner_radius;
    const Vec3 refl = reflect(exit_ray.direction, geom.plate_normal());
    const Vec3 rp = plate_hit.plate_point;
    const Vec3 hc = geom.center.offset;  // dome center; opening plane z = hc.z

    // Crossing of the reflected line with the opening plane, then the target
    // point clamped into the opening disk.  On the line every per-axis scale
    // equals the crossing parameter; off it they disagree.
    Vec3 target;
    double t_cross = kInf;
    if (refl.z != 0.0) {
        t_cross = (hc.z - rp.z) / refl.z;
        Vec3 in_plane = rp + t_cross * refl - hc;
        in_plane.z = 0.0;
        const double d = in_plane.norm();
        if (d > r) in_plane *= r / d;
        target = hc + in_plane;
    } else {
        target = hc;  // parallel to the plane: no crossing, scales disagree
    }

    Vec3 scales;
    bool equal = true;
    double common = 0.0;
    bool have_common = false;
    const double span = std::max({std::abs(t_cross) == kInf ? 0.0 : std::abs(t_cross),
                                  (target - rp).norm(), r});
    for (int i = 0; i < 3; ++i) {
        if (std::abs(refl[i]) > 1e-12 && !have_common) {
            common = (target[i] - rp[i]) / refl[i];
            have_common = true;
        }
    }
    for (int i = 0; i < 3; ++i) {
        const double num = target[i] - rp[i];
        const double den = refl[i];
        if (std::abs(den) > 1e-12) {
            scales[i] = num / den;
            if (std::abs(scales[i] - common) >
                kReentryTol * std::max(std::abs(common), 1.0))
                equal = false;
        } else {
            // Degenerate axis: the line cannot change this coordinate, so the
            // target must already match it.
            scales[i] = std::abs(num) <= kReentryTol * span ? common : kInf;
            if (scales[i] == kInf) equal = false;
        }
    }
    if (scales_out) *scales_out = scales;
    const bool forward = have_common && common > 0.0;
    return (equal && forward) ? Reentry::Reenters : Reentry::Escapes;
}

namespace {

// Direction-cosine triple Lambda(theta, phi) and its angular derivatives.
Vec3 lam_dtheta(double th, double ph) {
    return {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
}
Vec3 lam_dphi(double th, double ph) {
    return {-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0};
}
Vec3 lam_dtheta2(double th, double ph) {
    return {-std::sin(th) * std::cos(ph), -std::sin(th) * std::sin(ph), -std::cos(th)};
}
Vec3 lam_dtheta_dphi(double th, double ph) {
    return {-std::cos(th) * std::sin(ph), std::cos(th) * std::cos(ph), 0.0};
}
Vec3 lam_dphi2(double th, double ph) {
    return {-std::sin(th) * std::cos(ph), -std::sin(th) * std::sin(ph), 0.0};
}

}  // namespace

Vec3 plate_element_position(const PlateElement& el) {
    const double st = std::sin(el.theta_p);
    if (std::abs(st) < 1e-12)
        throw degeneracy_error("plate element: sin(theta_p) = 0, azimuthal triad undefined");
    return el.translation + el.coord_theta * lam_dtheta(el.theta_p, el.phi_p) +
           (el.coord_phi / st) * lam_dphi(el.theta_p, el.phi_p);
}

Vec3 plate_element_velocity(const PlateElement& el, const PlateElementRates& rates) {
    const double th = el.theta_p, ph = el.phi_p;
    const double st = std::sin(th);
    if (std::abs(st) < 1e-12)
        throw degeneracy_error("plate element: sin(theta_p) = 0, azimuthal triad undefined");
    const double cot = std::cos(th) / st;
    // d/dt of the element position: every term carries one rate factor, so a
    // static plate gives the exact zero vector.
    Vec3 v = rates.translation_rate;
    v += rates.coord_theta_rate * lam_dtheta(th, ph);
    v += (rates.coord_phi_rate / st) * lam_dphi(th, ph);
    v += rates.theta_rate *
         (el.coord_theta * lam_dtheta2(th, ph) +
          (el.coord_phi / st) * (lam_dtheta_dphi(th, ph) - cot * lam_dphi(th, ph)));
    v += rates.phi_rate * (el.coord_theta * lam_dtheta_dphi(th, ph) +
                           (el.coord_phi / st) * lam_dphi2(th, ph));
    return v;
}

}  // namespace vacref
