#pragma once

#include <cstdint>
#include <vector>

#include "vacref/hemisphere.hpp"
#include "vacref/reflection.hpp"
#include "vacref/vec3.hpp"

namespace vacref {

// Standing-wave data of one chord: the quantization length (distance between
// successive reflection points, which bounds admissible wavelengths through
// lambda <= 2 L) and the shared incidence angle.
struct ModeGeometry {
    double quantization_length = 0.0;
    double incidence_angle = 0.0;
    int mode_cutoff = 10000;  // truncation for the diagnostic raw parts
};

// Builds ModeGeometry from a trace, cross-checking the chord against
// 2 r cos(theta_inc) instead of assuming it.
ModeGeometry mode_geometry_from_trace(const ReflectionTrace& trace, double radius);

// Regularized force data.  hbar = c = 1 throughout the library; callers
// convert units on output.
struct ForceResult {
    double per_direction_force = 0.0;  // signed, along the first strike direction
    double raw_sum_part = 0.0;         // truncated divergent sum, diagnostic only
    double integral_part = 0.0;        // matching continuum part, diagnostic only
    bool regularized = false;
    Vec3 net_vector{};
    double mean_radial_stress = 0.0;
};

// Sampling plan for surface/direction sweeps.  Deterministic: a fixed seed
// reproduces every node and the fixed-order reduction bit for bit.
struct QuadratureSpec {
    int node_count = 1024;
    std::uint64_t seed = 0;
};

// Wave-vector change per reflection at the inner surface for mode n:
// magnitude 4 n pi cos(theta_inc) / chord, directed along -R_1.
Vec3 delta_k_inner(const ReflectionTrace& trace, int mode);

// Wave-vector change at the outer surface: magnitude 4 |k_free| cos(theta),
// directed outward along the strike direction.
Vec3 delta_k_outer(double theta_inc, double free_k, const Vec3& surface_direction);

// The dimensionless regularized balance  sum_{n>=1} n - int_0^inf n dn,
// evaluated by exponential cutoff exp(-eps n) on a halving eps grid with
// Richardson extrapolation.  Converges to -1/12; never hard-coded.  Throws
// numerical_error if the extrapolation fails to settle.
double regularized_zeta_balance();

// Regularized value of  sum_n n pi / L - (L / pi) int_0^inf k dk  at fixed
// quantization length L, i.e. (pi / L) times the zeta balance.
double regularized_mode_balance(double quantization_length);

// Per-direction time-averaged force 2 cos(theta) * regularized balance;
// negative (attractive) for every admissible chord.
ForceResult per_direction_force(const ModeGeometry& mode_geom);

// One row of the per-direction force table.
struct NodeRecord {
    Vec3 origin{};
    Vec3 direction{};
    double theta_inc = 0.0;
    double quantization_length = 0.0;
    double force = 0.0;
    double closed_form = 0.0;  // -pi cos(theta) / (6 L) comparison value
};

// Surface-integrated force.  Entry points are sampled on the diametral
// cross-section (sphere) or the opening disk (hemisphere variants) and
// directions on the inward hemisphere of directions, via the seeded Halton
// scheme; sphere node sets are closed under point inversion.  For
// PlateHemisphere scenes with plate gap below the radius the quantization
// length per sample is the smaller of the interior chord and the
// exit-to-plate distance; for larger gaps the hemisphere path is reused
// unchanged.  `table`, when given, receives one record per node in
// reduction order.
ForceResult total_force(const CavityGeometry& geom, const QuadratureSpec& quadrature,
                        std::vector<NodeRecord>* table = nullptr);

// Regularized 1D force between perfect parallel mirrors at gap d:
// -(pi/24) / d^2 in natural units, derived through the same cutoff
// machinery from the mode energy (pi / 2d) * balance.
double parallel_plate_force_1d(double gap);

}  // namespace vacref
