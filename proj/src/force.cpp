#include "vacref/force.hpp"

#include <algorithm>
#include <cmath>

#include "vacref/errors.hpp"
#include "vacref/sampling.hpp"

namespace vacref {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

struct NodeForce {
    double force = 0.0;  // signed magnitude along the first strike direction
    Vec3 strike_dir{};
    double raw_sum = 0.0;
    double raw_integral = 0.0;
    double theta_inc = 0.0;
    double chord = 0.0;
};

double raw_mode_sum(double length, int cutoff) {
    // Truncated divergent sum sum_{n<=cutoff} n pi / L, diagnostic only.
    const double n = static_cast<double>(cutoff);
    return kPi / length * 0.5 * n * (n + 1.0);
}

double raw_integral(double length, int cutoff) {
    // Matching continuum part (L/pi) int_0^{kmax} k dk with kmax = cutoff pi/L.
    const double kmax = static_cast<double>(cutoff) * kPi / length;
    return length / kPi * 0.5 * kmax * kmax;
}

// One sphere-interior sample: two reflection points fix the chord and angle.
NodeForce evaluate_chord_node(const Vec3& origin, const Vec3& dir, double radius,
                              double zeta, int cutoff) {
    const ReflectionTrace trace = trace_iterative({origin, dir}, radius, 2);
    const double L = (trace.points[1] - trace.points[0]).norm();
    NodeForce nf;
    nf.strike_dir = trace.points[0] / radius;
    nf.theta_inc = trace.incidence_angle;
    nf.chord = L;
    nf.force = 2.0 * std::cos(trace.incidence_angle) * (kPi / L) * zeta;
    nf.raw_sum = raw_mode_sum(L, cutoff);
    nf.raw_integral = raw_integral(L, cutoff);
    return nf;
}

}  // namespace

ModeGeometry mode_geometry_from_trace(const ReflectionTrace& trace, double radius) {
    if (trace.size() < 2)
        throw validation_error("mode_geometry_from_trace: need at least two points");
    ModeGeometry mg;
    mg.incidence_angle = trace.incidence_angle;
    mg.quantization_length = (trace.points[1] - trace.points[0]).norm();
    const double expected = 2.0 * radius * std::cos(trace.incidence_angle);
    if (std::abs(mg.quantization_length - expected) > 1e-10 * radius)
        throw numerical_error("mode_geometry_from_trace: chord disagrees with 2 r cos(theta)");
    return mg;
}

Vec3 delta_k_inner(const ReflectionTrace& trace, int mode) {
    if (trace.size() < 2)
        throw validation_error("delta_k_inner: need at least two reflection points");
    if (mode < 1) throw validation_error("delta_k_inner: mode index starts at 1");
    const double chord = (trace.points[1] - trace.points[0]).norm();
    const double mag = 4.0 * mode * kPi * std::cos(trace.incidence_angle) / chord;
    return -mag * trace.points[0].normalized();
}

Vec3 delta_k_outer(double theta_inc, double free_k, const Vec3& surface_direction) {
    if (!(free_k > 0.0)) throw validation_error("delta_k_outer: free_k must be positive");
    return 4.0 * free_k * std::cos(theta_inc) * surface_direction.normalized();
}

double regularized_zeta_balance() {
    // S(eps) = sum_{n>=1} n exp(-eps n) - 1/eps^2, with the elementary
    // integral int_0^inf n exp(-eps n) dn = 1/eps^2.  S -> -1/12 + O(eps^2);
    // one Richardson step in eps^2 removes the leading correction.
    const double eps_grid[] = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    double s[4];
    for (int level = 0; level < 4; ++level) {
        const double eps = eps_grid[level];
        const int nmax = static_cast<int>(std::ceil(60.0 / eps));
        double sum = 0.0, comp = 0.0;
        for (int n = 1; n <= nmax; ++n) {
            const double term = n * std::exp(-eps * n);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        s[level] = sum - 1.0 / (eps * eps);
    }
    double r_prev = (4.0 * s[1] - s[0]) / 3.0;
    double r = r_prev;
    for (int level = 1; level < 3; ++level) {
        r = (4.0 * s[level + 1] - s[level]) / 3.0;
        if (level == 2 && std::abs(r - r_prev) > 1e-6 * std::abs(r))
            throw numerical_error("regularized_zeta_balance: extrapolation did not settle");
        r_prev = r;
    }
    if (!(r < 0.0))
        throw numerical_error("regularized_zeta_balance: balance lost its sign");
    return r;
}

double regularized_mode_balance(double quantization_length) {
    if (!(quantization_length > 0.0))
        throw validation_error("regularized_mode_balance: length must be positive");
    return kPi / quantization_length * regularized_zeta_balance();
}

ForceResult per_direction_force(const ModeGeometry& mode_geom) {
    if (!(mode_geom.quantization_length > 0.0))
        throw validation_error("per_direction_force: quantization length must be positive");
    if (mode_geom.incidence_angle < 0.0 || mode_geom.incidence_angle >= kPi / 2.0)
        throw validation_error("per_direction_force: incidence angle outside [0, pi/2)");
    ForceResult fr;
    fr.per_direction_force = 2.0 * std::cos(mode_geom.incidence_angle) *
                             regularized_mode_balance(mode_geom.quantization_length);
    fr.raw_sum_part = raw_mode_sum(mode_geom.quantization_length, mode_geom.mode_cutoff);
    fr.integral_part = raw_integral(mode_geom.quantization_length, mode_geom.mode_cutoff);
    fr.regularized = true;
    fr.mean_radial_stress = fr.per_direction_force;
    return fr;
}

ForceResult total_force(const CavityGeometry& geom, const QuadratureSpec& quadrature,
                        std::vector<NodeRecord>* table) {
    geom.validate();
    if (quadrature.node_count < 1)
        throw validation_error("total_force: quadrature needs at least one node");

    const double r = geom.inner_radius;
    const double zeta = regularized_zeta_balance();
    const HaltonSampler smp(quadrature.seed);
    const int cutoff = 10000;

    // PlateHemisphere with the plate farther than one radius from the dome
    // center reuses the hemisphere path unchanged.
    bool use_plate = false;
    if (geom.kind == CavityKind::PlateHemisphere) {
        const double gap = std::abs(
            dot(geom.plate_center.offset - geom.center.offset, geom.plate_normal()));
        use_plate = gap < r;
    }

    Vec3 net{};
    double stress = 0.0, raw_s = 0.0, raw_i = 0.0, mean_f = 0.0;
    long count = 0;

    auto accumulate = [&](const NodeForce& nf, const Vec3& origin, const Vec3& dir,
                          double length) {
        net += nf.force * nf.strike_dir;
        stress += nf.force;
        mean_f += nf.force;
        raw_s += nf.raw_sum;
        raw_i += nf.raw_integral;
        ++count;
        if (table) {
            NodeRecord rec;
            rec.origin = origin;
            rec.direction = dir;
            rec.theta_inc = nf.theta_inc;
            rec.quantization_length = length;
            rec.force = nf.force;
            rec.closed_form = -kPi * std::cos(nf.theta_inc) / (6.0 * length);
            table->push_back(rec);
        }
    };

    double area = 0.0;
    if (geom.kind == CavityKind::Sphere) {
        // Inversion-symmetric node set: every sampled (entry, direction) pair
        // is accompanied by its point-inverted twin.
        const long pairs = (quadrature.node_count + 1) / 2;
        for (long j = 0; j < pairs; ++j) {
            const auto idx = static_cast<std::uint64_t>(j);
            const double rho = r * std::sqrt(smp.sample(idx, 0));
            const double a = 2.0 * kPi * smp.sample(idx, 1);
            const Vec3 origin{rho * std::cos(a), rho * std::sin(a), 0.0};
            const double kz = -smp.sample(idx, 2);
            const double s = std::sqrt(std::max(0.0, 1.0 - kz * kz));
            const double b = 2.0 * kPi * smp.sample(idx, 3);
            const Vec3 dir{s * std::cos(b), s * std::sin(b), kz};
            const NodeForce nf = evaluate_chord_node(origin, dir, r, zeta, cutoff);
            accumulate(nf, origin, dir, nf.chord);
            const NodeForce nm = evaluate_chord_node(-origin, -dir, r, zeta, cutoff);
            accumulate(nm, -origin, -dir, nm.chord);
        }
        area = 4.0 * kPi * r * r;
    } else {
        // Hemisphere scenes: entries on the opening disk, directions into the
        // dome; the first strike always lands on the integrated dome.
        for (long j = 0; j < quadrature.node_count; ++j) {
            const auto idx = static_cast<std::uint64_t>(j);
            const double rho = r * std::sqrt(smp.sample(idx, 0));
            const double a = 2.0 * kPi * smp.sample(idx, 1);
            const Vec3 origin{rho * std::cos(a), rho * std::sin(a), 0.0};
            const double kz = -smp.sample(idx, 2);
            const double s = std::sqrt(std::max(0.0, 1.0 - kz * kz));
            const double b = 2.0 * kPi * smp.sample(idx, 3);
            const Vec3 dir{s * std::cos(b), s * std::sin(b), kz};

            NodeForce nf = evaluate_chord_node(origin, dir, r, zeta, cutoff);
            double length = nf.chord;
            if (use_plate) {
                // Quantization-length selection: the interior chord competes
                // with the distance from the last interior strike to the
                // plate; the smaller of the two bounds the admissible modes.
                try {
                    const RayState exit = hemisphere_exit_ray({origin, dir}, geom);
                    const PlateInteraction hit = plate_reflection_point(exit, geom);
                    const double to_plate = (hit.plate_point - exit.origin).norm();
                    length = std::min(nf.chord, to_plate);
                    nf.force = 2.0 * std::cos(nf.theta_inc) * (kPi / length) * zeta;
                    nf.raw_sum = raw_mode_sum(length, cutoff);
                    nf.raw_integral = raw_integral(length, cutoff);
                } catch (const degeneracy_error&) {
                    // Exit ray misses the plate (parallel or behind): the
                    // interior chord stands.
                    length = nf.chord;
                }
            }
            accumulate(nf, origin, dir, length);
        }
        area = 2.0 * kPi * r * r;
    }

    ForceResult fr;
    fr.regularized = true;
    fr.net_vector = net * (area / static_cast<double>(count));
    fr.mean_radial_stress = stress / static_cast<double>(count);
    fr.per_direction_force = mean_f / static_cast<double>(count);
    fr.raw_sum_part = raw_s / static_cast<double>(count);
    fr.integral_part = raw_i / static_cast<double>(count);
    return fr;
}

double parallel_plate_force_1d(double gap) {
    if (!(gap > 0.0)) throw validation_error("parallel_plate_force_1d: gap must be positive");
    // Mode energy E(d) = (pi / 2d) * balance; F = -dE/dd = (pi / 2d^2) * balance.
    return kPi / (2.0 * gap * gap) * regularized_zeta_balance();
}

}  // namespace vacref
