#include "vacref/reflection.hpp"

#include <cmath>
#include <string>

#include "vacref/errors.hpp"
#include "vacref/spherical.hpp"

namespace vacref {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

void check_ray(const RayState& ray, double radius, const char* who) {
    if (!(radius > 0.0)) throw validation_error(std::string(who) + ": radius must be positive");
    if (!ray.origin.finite() || !ray.direction.finite())
        throw validation_error(std::string(who) + ": non-finite ray");
    if (std::abs(ray.direction.norm() - 1.0) > 1e-9)
        throw validation_error(std::string(who) + ": direction must be unit length");
    if (!(ray.origin.norm() < radius))
        throw validation_error(std::string(who) + ": origin must lie strictly inside the sphere");
}

// True when origin and direction span no plane (chord through the center).
bool is_radial_chord(const RayState& ray, double radius) {
    return cross(ray.direction, ray.origin).norm() <= 1e-12 * radius;
}

// Positive-root line/sphere intersection without the interior check, for
// stepping from one surface point to the next.
SurfaceHit advance(const Vec3& pos, const Vec3& dir, double radius) {
    const double kr = dot(dir, pos);
    double disc = kr * kr + radius * radius - pos.norm_sq();
    if (disc < 0.0) disc = 0.0;  // on-surface roundoff
    const double xi = -kr + std::sqrt(disc);
    return {xi, pos + xi * dir};
}

}  // namespace

SurfaceHit first_intersection(const RayState& ray, double radius) {
    check_ray(ray, radius, "first_intersection");
    return advance(ray.origin, ray.direction, radius);
}

Vec3 reflect(const Vec3& incident, const Vec3& surface_normal,
             double coeff_parallel, double coeff_perp) {
    const Vec3& n = surface_normal;
    const double nk = dot(n, incident);
    // (n x k) x n = k - n (n.k)
    return coeff_perp * (incident - n * nk) - coeff_parallel * nk * n;
}

double incidence_angle(const Vec3& incident, const Vec3& surface_point) {
    const double ki = incident.norm();
    const double rp = surface_point.norm();
    if (ki == 0.0) throw validation_error("incidence_angle: zero incident vector");
    if (rp == 0.0) throw validation_error("incidence_angle: surface point at origin");
    double c = std::abs(dot(incident, surface_point)) / (ki * rp);
    if (c > 1.0) c = 1.0;
    return std::acos(c);
}

Vec3 incidence_plane_normal(const RayState& ray) {
    const Vec3 c = cross(ray.direction, ray.origin);
    const double n = c.norm();
    if (n <= 1e-14 * (ray.origin.norm() + 1.0))
        throw degeneracy_error(
            "incidence_plane_normal: ray through the center spans no plane");
    return -(c / n);
}

Vec3 closed_form_nth_point(const RayState& ray, double radius, int n) {
    if (n < 1) throw validation_error("closed_form_nth_point: N must be >= 1");
    const SurfaceHit hit = first_intersection(ray, radius);
    if (n == 1) return hit.point;

    if (is_radial_chord(ray, radius)) {
        // Radial chord: the bounce sequence alternates between antipodes.
        return (n % 2 == 1) ? hit.point : -hit.point;
    }

    const double theta_inc = incidence_angle(ray.direction, hit.point);
    if (theta_inc >= kPi / 2.0 - kGrazingEps)
        throw degeneracy_error("closed_form_nth_point: grazing incidence, chord vanishes");

    // Unit components of k x R0; the plane-of-incidence normal is -c.
    const Vec3 c = cross(ray.direction, ray.origin).normalized();
    const Vec3 r1 = hit.point;
    const double x1 = r1.x, y1 = r1.y, z1 = r1.z;
    const double r2 = radius * radius;

    // Chord-angle function Gamma and its angular rate, per bounce step.
    const double beta = (n - 1) * (kPi - 2.0 * theta_inc);
    const double gamma = r2 * std::sin(beta);
    const double gamma_rate = r2 * std::cos(beta);
    const Vec3 zeta{gamma * c.x + gamma_rate, gamma * c.y + gamma_rate,
                    gamma * c.z + gamma_rate};

    const double a1 = y1 + z1, a2 = z1 - y1;
    const double a3 = x1 - z1, a4 = z1 + x1;
    const double a5 = x1 + y1, a6 = y1 - x1;

    const double sum1 = x1 + y1 + z1;
    Vec3 nu;
    if (std::abs(sum1) > 1e-8 * radius) {
        // Cramer's rule; the base determinant is r^2 (x1 + y1 + z1).
        const double m1[3][3] = {{zeta.x, a1, a2}, {zeta.y, y1, a4}, {zeta.z, a6, z1}};
        const double m2[3][3] = {{x1, zeta.x, a2}, {a3, zeta.y, a4}, {a5, zeta.z, z1}};
        const double m3[3][3] = {{x1, a1, zeta.x}, {a3, y1, zeta.y}, {a5, a6, zeta.z}};
        const double denom = r2 * sum1;
        nu = {det3(m1) / denom, det3(m2) / denom, det3(m3) / denom};
    } else {
        // The base matrix is singular on the plane x1+y1+z1 = 0.  The
        // solution is still unique inside the incidence plane, so solve the
        // system augmented with the in-plane constraint c.v = 0 by normal
        // equations.
        const double M[3][3] = {{x1, a1, a2}, {a3, y1, a4}, {a5, a6, z1}};
        double A[3][3];
        double b[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                A[i][j] = c[i] * c[j];
                for (int k = 0; k < 3; ++k) A[i][j] += M[k][i] * M[k][j];
            }
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) b[i] += M[k][i] * zeta[k];
        const double dA = det3(A);
        if (dA == 0.0)
            throw degeneracy_error("closed_form_nth_point: singular reflection system");
        double Ai[3][3];
        for (int col = 0; col < 3; ++col) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) Ai[i][j] = A[i][j];
            for (int i = 0; i < 3; ++i) Ai[i][col] = b[i];
            nu[col] = det3(Ai) / dA;
        }
    }

    // Quadrant-resolved angles, then back to the surface.  Re-expressing the
    // point through (theta, phi) keeps it exactly on the sphere.
    const SphericalPoint s = quadrant_angles(nu);
    return to_cartesian({radius, s.theta, s.phi});
}

ReflectionTrace trace_iterative(const RayState& ray, double radius,
                                int max_reflections) {
    if (max_reflections < 1)
        throw validation_error("trace_iterative: need at least one reflection");
    check_ray(ray, radius, "trace_iterative");

    ReflectionTrace trace;
    trace.points.reserve(static_cast<std::size_t>(max_reflections));
    trace.parameters.reserve(static_cast<std::size_t>(max_reflections));

    const bool radial = is_radial_chord(ray, radius);
    if (!radial) trace.plane_normal = incidence_plane_normal(ray);

    Vec3 pos = ray.origin;
    Vec3 dir = ray.direction;
    for (int i = 0; i < max_reflections; ++i) {
        SurfaceHit hit;
        if (i == 0) {
            hit = advance(pos, dir, radius);
        } else {
            // From a surface point the positive root collapses to the exact
            // chord parameter 2 r cos(theta).
            hit.parameter = -2.0 * dot(dir, pos);
            hit.point = pos + hit.parameter * dir;
        }
        // pin the strike onto the sphere so roundoff cannot drift the trace
        hit.point *= radius / hit.point.norm();
        if (i == 0) {
            trace.incidence_angle = incidence_angle(dir, hit.point);
            trace.chord_length = 2.0 * radius * std::cos(trace.incidence_angle);
        }
        trace.points.push_back(hit.point);
        trace.parameters.push_back(hit.parameter);
        dir = reflect(dir, -(hit.point / radius));
        dir = dir / dir.norm();
        pos = hit.point;
    }
    trace.complete = true;
    return trace;
}

}  // namespace vacref
