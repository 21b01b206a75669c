#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "vacref/vec3.hpp"

namespace vacref {

// Quantized-field state in a rectangular cavity region.  hbar = c = 1.
//
// mode_numbers is the reference mode triple (n1, n2, n3); an entry of 0
// deactivates that axis (the mode lattice collapses onto the remaining
// ones), so (n, 0, 0) describes a one-dimensional cavity.  The cutoff
// truncates the lattice sums of energy_bounded.
struct FieldQuantization {
    int occupation = 0;       // n_s
    int polarization_dof = 2; // 2 for electromagnetic waves
    std::array<int, 3> mode_numbers{1, 1, 1};
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    int mode_cutoff = 10;

    // Reference wave numbers k_i = n_i pi / L_i (0 on inactive axes).
    std::array<double, 3> wave_numbers() const;
    void validate() const;
};

// The seven chain coefficients of the boundary-variation force along one
// axis.  c4's radicand must be positive for the chain to exist; the
// constructor-level check lives in dynamical_coefficients.
struct DynamicalCoefficients {
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;
};

// Driven two-plate linear system
//   dR3/dt = eta1 R3 + eta2 R4 + xi_rp(t),
//   dR4/dt = eta4 R3 + eta3 R4 + xi_lp,
// with R1, R2 the plate center-of-mass positions (dR1/dt = R3,
// dR2/dt = R4).  xi_rp is scaled by a prescribed driver-plate velocity at
// evolution time; xi_lp is constant.
struct PlateSystem1D {
    double mass_rp = 1.0;
    double mass_lp = 1.0;
    std::array<double, 4> eta{0, 0, 0, 0};       // eta1..eta4
    double drive_rp = 0.0;                       // s_rp,3 g_3 / m_rp
    double drive_lp = 0.0;                       // -s_lp,1 g_1 / m_lp
    std::array<int, 3> signs_rp{1, 1, 1};
    std::array<int, 3> signs_lp{1, 1, 1};
    std::array<double, 4> state{0, 0, 0, 0};     // R1, R2, R3, R4 at t0
    std::array<double, 3> couplings{0, 0, 0};    // g per region
};

struct Eigenvalues {
    std::complex<double> lambda3;
    std::complex<double> lambda4;
    bool complex_pair = false;
};

struct Mat2 {
    double m11 = 0, m12 = 0, m21 = 0, m22 = 0;
};

struct PlateEvolution {
    double velocity_rp = 0.0;
    double velocity_lp = 0.0;
    double position_rp = 0.0;
    double position_lp = 0.0;
};

using DriveFunction = std::function<double(double)>;  // driver-plate velocity

// Lattice-sum field energy (n_s + 1/2) Theta sum_m sqrt(sum_i (m_i pi/L_i)^2)
// over the active-axis mode lattice truncated at mode_cutoff.
double energy_bounded(const FieldQuantization& q);

// Free-space counterpart: the triple integral of sqrt(k1^2+k2^2+k3^2) over
// [0, k_cutoff]^3 scaled by (n_s + 1/2) Theta / (f1 f2 f3), f_i = pi / L_i.
// Fixed 64-point tensorized Gauss-Legendre rule; the cutoff is always
// explicit because the raw integral diverges.
double energy_free(const FieldQuantization& q, double k_cutoff);

// Chain coefficients along `axis` (0..2) on the single-mode energy surface
// H(k) = (n_s + 1/2) Theta sqrt(sum k_i^2) at the reference wave numbers.
// Throws numerical_error naming the radicand when c4 does not exist.
DynamicalCoefficients dynamical_coefficients(const FieldQuantization& q, int axis);

// Boundary-variation force for an isolated system (all mode numbers frozen):
// per axis, the c-coefficient chain applied to the analytic first and second
// partials of the single-mode energy surface, driven by the length rates.
// Linear in the rates; vanishes identically for one-dimensional states.
Vec3 dynamical_force_3d(const FieldQuantization& q, const Vec3& length_rates);

// One-dimensional force (n / c) (df/dL) (dH/dk) Ldot for a single-axis
// state; sign opposite to the length rate.
double dynamical_force_1d(const FieldQuantization& q, double length_rate);

// Populates the eta / drive coefficients from the three region states
// (left-outer, inter-plate, right-outer), plate masses and sign choices.
// Each region must be a one-dimensional state.
PlateSystem1D plate_coefficients(const std::array<FieldQuantization, 3>& regions,
                                 double mass_rp, double mass_lp,
                                 const std::array<int, 3>& signs_rp,
                                 const std::array<int, 3>& signs_lp);

// lambda_{3,4} = (eta1+eta3)/2 +- sqrt((eta1-eta3)^2/4 + eta2 eta4);
// a negative radicand yields the flagged complex pair.
Eigenvalues eigenvalues(const PlateSystem1D& sys);

// Principal (fundamental) matrix psi(t, t0) of the velocity subsystem, with
// the undetermined normalization constant fixed at 1.  Requires real,
// distinct eigenvalues and lambda3 != eta1; violations raise
// degeneracy_error.  Satisfies d psi/dt = M_eta psi.
Mat2 principal_matrix(double t, double t0, const PlateSystem1D& sys);

// Closed-form propagation of velocities (psi plus drive convolution by
// cumulative quadrature) and positions (time integral of the velocities).
// Coefficients are frozen at their t0 values.  `driver_velocity` scales the
// right-plate drive; nullptr means unit driver velocity.
PlateEvolution evolve_plates(const PlateSystem1D& sys, double t0, double t,
                             const DriveFunction& driver_velocity = nullptr);

// Dense output of the same propagation at `samples`+1 equally spaced times.
std::vector<PlateEvolution> evolve_plates_series(const PlateSystem1D& sys,
                                                 double t0, double t1, int samples,
                                                 const DriveFunction& driver_velocity = nullptr);

// Fixed-step 4th-order Runge-Kutta reference for the same system; the
// independent check of the closed form.
std::vector<PlateEvolution> reference_evolution(const PlateSystem1D& sys,
                                                double t0, double t1, int samples,
                                                const DriveFunction& driver_velocity = nullptr,
                                                int substeps = 64);

// Momentum-conservation starting velocities from the region energies:
// v_rp = 2 |H3 - H2| / m_rp, v_lp = 2 |H1 - H2| / m_lp.
std::pair<double, double> initial_velocities(const std::array<double, 3>& region_energies,
                                             double mass_rp, double mass_lp);

// Effective thermal-bath temperature |a| / (2 pi k) seen by a uniformly
// accelerating boundary (hbar = c = 1).
double unruh_temperature(double acceleration, double wave_number);

}  // namespace vacref
