#include "vacref/dynamical.hpp"

#include <cmath>
#include <string>

#include "vacref/errors.hpp"

namespace vacref {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kHbar = 1.0;
constexpr double kC = 1.0;

double occupation_factor(const FieldQuantization& q) {
    return (q.occupation + 0.5) * kHbar * kC * q.polarization_dof;
}

// 64-point Gauss-Legendre nodes/weights on [0, 1], built once by Newton
// iteration on the Legendre recurrence.
struct GaussRule {
    double node[64];
    double weight[64];
    GaussRule() {
        const int n = 64;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * pp * pp);
            node[i] = 0.5 * (1.0 - x);
            weight[i] = 0.5 * w;
            node[n - 1 - i] = 0.5 * (1.0 + x);
            weight[n - 1 - i] = 0.5 * w;
        }
    }
};

const GaussRule& gauss64() {
    static const GaussRule rule;
    return rule;
}

// Shared eigenstructure of the velocity subsystem.
struct EigenData {
    double l3 = 0, l4 = 0;  // real eigenvalues, l3 > l4
    double ratio12 = 0;     // eta2 / (l3 - eta1)
    double ratio21 = 0;     // (l4 - eta1) / eta2
    double rho = 0;         // (l4 - eta1) / (l3 - eta1)
};

EigenData real_eigen(const PlateSystem1D& sys, const char* who) {
    const double e1 = sys.eta[0], e2 = sys.eta[1], e3 = sys.eta[2], e4 = sys.eta[3];
    const double disc = 0.25 * (e1 - e3) * (e1 - e3) + e2 * e4;
    const double scale = std::abs(e1) + std::abs(e2) + std::abs(e3) + std::abs(e4) + 1.0;
    if (disc < 0.0)
        throw degeneracy_error(std::string(who) +
                               ": complex eigenvalue pair, closed form unsupported");
    const double root = std::sqrt(disc);
    if (root < 1e-12 * scale)
        throw degeneracy_error(std::string(who) + ": degenerate eigenvalues");
    EigenData ed;
    ed.l3 = 0.5 * (e1 + e3) + root;
    ed.l4 = 0.5 * (e1 + e3) - root;
    if (std::abs(ed.l3 - e1) < 1e-12 * scale)
        throw degeneracy_error(std::string(who) + ": lambda3 equals eta1, formula singular");
    // eta2 / (l3 - eta1) and (l4 - eta1) / eta2, rewritten through the
    // characteristic identity (l - eta1)(l - eta3) = eta2 eta4 when eta2
    // vanishes.
    if (std::abs(e2) > 1e-300) {
        ed.ratio12 = e2 / (ed.l3 - e1);
        ed.ratio21 = (ed.l4 - e1) / e2;
    } else {
        ed.ratio12 = std::abs(e4) > 1e-300 ? (ed.l3 - e3) / e4 : 0.0;
        ed.ratio21 = std::abs(ed.l4 - e3) > 1e-300 ? e4 / (ed.l4 - e3) : 0.0;
    }
    ed.rho = (ed.l4 - e1) / (ed.l3 - e1);
    return ed;
}

Mat2 psi_of(const EigenData& ed, double t, double t0) {
    const double ea = std::exp(ed.l3 * t + ed.l4 * t0);
    const double eb = std::exp(ed.l4 * t + ed.l3 * t0);
    Mat2 m;
    m.m11 = ed.rho * ea - eb;
    m.m12 = ed.ratio12 * (eb - ea);
    m.m21 = ed.ratio21 * (ea - eb);
    m.m22 = ed.rho * eb - ea;
    return m;
}

}  // namespace

std::array<double, 3> FieldQuantization::wave_numbers() const {
    std::array<double, 3> k{};
    for (int i = 0; i < 3; ++i)
        k[i] = mode_numbers[i] > 0 ? mode_numbers[i] * kPi / lengths[i] : 0.0;
    return k;
}

void FieldQuantization::validate() const {
    if (occupation < 0) throw validation_error("field state: occupation must be >= 0");
    if (polarization_dof < 1)
        throw validation_error("field state: polarization dof must be >= 1");
    if (mode_cutoff < 1) throw validation_error("field state: mode cutoff must be >= 1");
    bool any_active = false;
    for (int i = 0; i < 3; ++i) {
        if (mode_numbers[i] < 0)
            throw validation_error("field state: mode numbers must be >= 0");
        if (mode_numbers[i] > mode_cutoff)
            throw validation_error("field state: reference mode beyond the cutoff");
        if (!(lengths[i] > 0.0))
            throw validation_error("field state: lengths must be positive");
        any_active = any_active || mode_numbers[i] > 0;
    }
    if (!any_active) throw validation_error("field state: no active axis");
}

double energy_bounded(const FieldQuantization& q) {
    q.validate();
    const int hi[3] = {q.mode_numbers[0] > 0 ? q.mode_cutoff : 0,
                       q.mode_numbers[1] > 0 ? q.mode_cutoff : 0,
                       q.mode_numbers[2] > 0 ? q.mode_cutoff : 0};
    const double f[3] = {kPi / q.lengths[0], kPi / q.lengths[1], kPi / q.lengths[2]};
    double sum = 0.0;
    for (int m1 = 0; m1 <= hi[0]; ++m1)
        for (int m2 = 0; m2 <= hi[1]; ++m2)
            for (int m3 = 0; m3 <= hi[2]; ++m3) {
                const double k1 = m1 * f[0], k2 = m2 * f[1], k3 = m3 * f[2];
                sum += std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
            }
    return occupation_factor(q) * sum;
}

double energy_free(const FieldQuantization& q, double k_cutoff) {
    q.validate();
    if (!(k_cutoff > 0.0)) throw validation_error("energy_free: cutoff must be positive");
    const GaussRule& g = gauss64();
    double sum = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double ki = k_cutoff * g.node[i];
        for (int j = 0; j < 64; ++j) {
            const double kj = k_cutoff * g.node[j];
            double inner = 0.0;
            for (int l = 0; l < 64; ++l) {
                const double kl = k_cutoff * g.node[l];
                inner += g.weight[l] * std::sqrt(ki * ki + kj * kj + kl * kl);
            }
            sum += g.weight[i] * g.weight[j] * inner;
        }
    }
    if (!std::isfinite(sum)) throw numerical_error("energy_free: quadrature failed");
    const double integral = sum * k_cutoff * k_cutoff * k_cutoff;
    const double f123 = kPi / q.lengths[0] * kPi / q.lengths[1] * kPi / q.lengths[2];
    return occupation_factor(q) / f123 * integral;
}

DynamicalCoefficients dynamical_coefficients(const FieldQuantization& q, int axis) {
    q.validate();
    if (axis < 0 || axis > 2) throw validation_error("dynamical_coefficients: bad axis");
    const auto k = q.wave_numbers();
    const double omega = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    const double amp = occupation_factor(q);           // dH/dk_i = amp k_i / omega
    const double ez = (q.occupation + 0.5) * kHbar;    // (n_s + 1/2) hbar

    DynamicalCoefficients c;
    for (int i = 0; i < 3; ++i) c.c1 += amp * k[i] / omega;
    for (int i = 0; i < 3; ++i) {
        if (i == axis) continue;
        c.c2 += (ez * kC) * (ez * kC) * k[i];
        c.c3 += ez * ez * k[i] * k[i];
    }
    const double den = c.c1 * c.c1 - (ez * kC) * (ez * kC);
    const double radicand = ez * ez * c.c2 * c.c2 / (den * den) +
                            (c.c2 * c.c2 - c.c1 * c.c1 * c.c3) / den;
    if (!(radicand > 0.0))
        throw numerical_error(
            "dynamical_coefficients: c4 radicand non-positive along axis " +
            std::to_string(axis) + " (value " + std::to_string(radicand) + ")");
    c.c4 = 1.0 / std::sqrt(radicand);
    c.c5 = c.c1 * c.c4 * (c.c1 * c.c1 * c.c3 - c.c2 * c.c2) / (den * den) -
           2.0 * ez * ez * c.c1 * c.c2 * c.c2 * c.c4 / (den * den * den) -
           2.0 * ez * c.c1 * c.c2 / (den * den) - c.c1 * c.c3 * c.c4 / den;
    c.c6 = ez * ez * c.c2 * c.c4 / (den * den) + c.c2 * c.c4 / den + ez / den;
    c.c7 = c.c1 * c.c1 * c.c4 / den;
    return c;
}

Vec3 dynamical_force_3d(const FieldQuantization& q, const Vec3& length_rates) {
    q.validate();
    int active = 0;
    for (int i = 0; i < 3; ++i) active += q.mode_numbers[i] > 0 ? 1 : 0;
    // One-dimensional degeneration: the energy surface is linear in the
    // single wave number, every second partial vanishes and so does the
    // force.
    if (active == 1) return Vec3{};

    const auto k = q.wave_numbers();
    const double omega = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    const double amp = occupation_factor(q);
    const double ns_half = q.occupation + 0.5;

    // Analytic partials of the single-mode surface H = amp sqrt(sum k^2):
    // dH/dk_i = amp k_i / omega,  d2H/dk_i dk_j = amp (d_ij - k_i k_j / w^2)/w.
    auto d2h = [&](int i, int j) {
        const double kron = i == j ? 1.0 : 0.0;
        return amp * (kron - k[i] * k[j] / (omega * omega)) / omega;
    };
    auto df_dl = [&](int i) { return -kPi / (q.lengths[i] * q.lengths[i]); };

    Vec3 force{};
    for (int axis = 0; axis < 3; ++axis) {
        if (q.mode_numbers[axis] == 0) continue;  // no boundary along this axis
        // Structural factors first; the chain coefficients are only needed
        // (and only well-defined) when some factor survives.
        double sum_d2 = 0.0, sum_c67 = 0.0, sum_cross = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double gi = q.mode_numbers[i] * df_dl(i) * length_rates[i];
            sum_d2 += std::abs(gi * d2h(i, i));
            if (i != axis) sum_c67 += std::abs(gi * ns_half);
            for (int j = 0; j < 3; ++j)
                if (j != i)
                    sum_cross += std::abs(q.mode_numbers[j] * df_dl(j) *
                                          d2h(j, i) * length_rates[j]);
        }
        if (sum_d2 == 0.0 && sum_c67 == 0.0 && sum_cross == 0.0) {
            force[axis] = 0.0;
            continue;
        }
        const DynamicalCoefficients c = dynamical_coefficients(q, axis);
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            double bracket = c.c5 * d2h(i, i);
            if (i != axis) bracket += (c.c6 - c.c7 * ns_half * k[i]) * ns_half;
            acc += q.mode_numbers[i] * df_dl(i) * bracket * length_rates[i];
            for (int j = 0; j < 3; ++j)
                if (j != i)
                    acc += c.c5 * q.mode_numbers[j] * df_dl(j) * d2h(j, i) *
                           length_rates[j];
        }
        force[axis] = acc;
    }
    return force;
}

double dynamical_force_1d(const FieldQuantization& q, double length_rate) {
    q.validate();
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (q.mode_numbers[i] > 0) {
            if (axis >= 0)
                throw validation_error("dynamical_force_1d: state must be single-axis");
            axis = i;
        }
    }
    const double dh_dk = occupation_factor(q);  // H linear in k for one axis
    const double df = -kPi / (q.lengths[axis] * q.lengths[axis]);
    return q.mode_numbers[axis] / kC * df * dh_dk * length_rate;
}

PlateSystem1D plate_coefficients(const std::array<FieldQuantization, 3>& regions,
                                 double mass_rp, double mass_lp,
                                 const std::array<int, 3>& signs_rp,
                                 const std::array<int, 3>& signs_lp) {
    if (!(mass_rp > 0.0) || !(mass_lp > 0.0))
        throw validation_error("plate_coefficients: masses must be positive");
    for (int s : signs_rp)
        if (s != 1 && s != -1) throw validation_error("plate_coefficients: signs are +-1");
    for (int s : signs_lp)
        if (s != 1 && s != -1) throw validation_error("plate_coefficients: signs are +-1");

    PlateSystem1D sys;
    sys.mass_rp = mass_rp;
    sys.mass_lp = mass_lp;
    sys.signs_rp = signs_rp;
    sys.signs_lp = signs_lp;
    for (int r = 0; r < 3; ++r) {
        const FieldQuantization& q = regions[r];
        q.validate();
        int axis = -1;
        for (int i = 0; i < 3; ++i) {
            if (q.mode_numbers[i] > 0) {
                if (axis >= 0)
                    throw validation_error("plate_coefficients: regions must be single-axis");
                axis = i;
            }
        }
        const double df = -kPi / (q.lengths[axis] * q.lengths[axis]);
        sys.couplings[r] = q.mode_numbers[axis] / kC * df * occupation_factor(q);
    }
    const double g1 = sys.couplings[0], g2 = sys.couplings[1], g3 = sys.couplings[2];
    sys.eta[0] = (signs_rp[1] * g2 - signs_rp[2] * g3) / mass_rp;
    sys.eta[1] = -signs_rp[1] * g2 / mass_rp;
    sys.eta[2] = (signs_lp[0] * g1 - signs_lp[1] * g2) / mass_lp;
    sys.eta[3] = signs_lp[1] * g2 / mass_lp;
    sys.drive_rp = signs_rp[2] * g3 / mass_rp;
    sys.drive_lp = -signs_lp[0] * g1 / mass_lp;
    return sys;
}

Eigenvalues eigenvalues(const PlateSystem1D& sys) {
    const double e1 = sys.eta[0], e2 = sys.eta[1], e3 = sys.eta[2], e4 = sys.eta[3];
    const std::complex<double> disc(0.25 * (e1 - e3) * (e1 - e3) + e2 * e4, 0.0);
    const std::complex<double> root = std::sqrt(disc);
    Eigenvalues ev;
    ev.lambda3 = 0.5 * (e1 + e3) + root;
    ev.lambda4 = 0.5 * (e1 + e3) - root;
    ev.complex_pair = disc.real() < 0.0;
    return ev;
}

Mat2 principal_matrix(double t, double t0, const PlateSystem1D& sys) {
    return psi_of(real_eigen(sys, "principal_matrix"), t, t0);
}

std::vector<PlateEvolution> evolve_plates_series(const PlateSystem1D& sys,
                                                 double t0, double t1, int samples,
                                                 const DriveFunction& driver_velocity) {
    if (samples < 1) throw validation_error("evolve_plates: need at least one sample");
    if (!(t1 > t0)) throw validation_error("evolve_plates: need t1 > t0");
    const EigenData ed = real_eigen(sys, "evolve_plates");

    // Integration grid: fine enough for the cumulative trapezoid of both the
    // drive convolution and the position integral; a multiple of `samples`
    // keeps output times on grid points.
    const int per = std::max(1, (8192 + samples - 1) / samples);
    const int n = per * samples;
    const double h = (t1 - t0) / n;

    const double d0 = (ed.rho - 1.0) * std::exp((ed.l3 + ed.l4) * t0);
    const double v1 = sys.state[2] / d0;
    const double v2 = sys.state[3] / d0;

    std::vector<PlateEvolution> out;
    out.reserve(static_cast<std::size_t>(samples) + 1);

    double i1 = 0.0, i2 = 0.0;   // cumulative psi^{-1} xi
    double p1 = sys.state[0], p2 = sys.state[1];
    double prev_g1 = 0.0, prev_g2 = 0.0, prev_u1 = 0.0, prev_u2 = 0.0;
    for (int step = 0; step <= n; ++step) {
        const double tau = t0 + step * h;
        const Mat2 psi = psi_of(ed, tau, t0);
        const double det = psi.m11 * psi.m22 - psi.m12 * psi.m21;
        const double xr = sys.drive_rp * (driver_velocity ? driver_velocity(tau) : 1.0);
        const double xl = sys.drive_lp;
        const double g1 = (psi.m22 * xr - psi.m12 * xl) / det;
        const double g2 = (psi.m11 * xl - psi.m21 * xr) / det;
        if (step > 0) {
            i1 += 0.5 * h * (prev_g1 + g1);
            i2 += 0.5 * h * (prev_g2 + g2);
        }
        prev_g1 = g1;
        prev_g2 = g2;

        const double u1 = psi.m11 * (v1 + i1) + psi.m12 * (v2 + i2);
        const double u2 = psi.m21 * (v1 + i1) + psi.m22 * (v2 + i2);
        if (step > 0) {
            p1 += 0.5 * h * (prev_u1 + u1);
            p2 += 0.5 * h * (prev_u2 + u2);
        }
        prev_u1 = u1;
        prev_u2 = u2;

        if (step % per == 0) out.push_back({u1, u2, p1, p2});
    }
    return out;
}

PlateEvolution evolve_plates(const PlateSystem1D& sys, double t0, double t,
                             const DriveFunction& driver_velocity) {
    if (t == t0) return {sys.state[2], sys.state[3], sys.state[0], sys.state[1]};
    return evolve_plates_series(sys, t0, t, 1, driver_velocity).back();
}

std::vector<PlateEvolution> reference_evolution(const PlateSystem1D& sys,
                                                double t0, double t1, int samples,
                                                const DriveFunction& driver_velocity,
                                                int substeps) {
    if (samples < 1 || substeps < 1)
        throw validation_error("reference_evolution: bad sampling");
    const double h = (t1 - t0) / (static_cast<double>(samples) * substeps);
    std::array<double, 4> y = sys.state;  // R1, R2, R3, R4
    auto rhs = [&](double t, const std::array<double, 4>& s) {
        const double xr = sys.drive_rp * (driver_velocity ? driver_velocity(t) : 1.0);
        return std::array<double, 4>{
            s[2], s[3], sys.eta[0] * s[2] + sys.eta[1] * s[3] + xr,
            sys.eta[3] * s[2] + sys.eta[2] * s[3] + sys.drive_lp};
    };
    std::vector<PlateEvolution> out;
    out.reserve(static_cast<std::size_t>(samples) + 1);
    out.push_back({y[2], y[3], y[0], y[1]});
    double t = t0;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < substeps; ++i) {
            const auto k1 = rhs(t, y);
            std::array<double, 4> y2, y3, y4;
            for (int j = 0; j < 4; ++j) y2[j] = y[j] + 0.5 * h * k1[j];
            const auto k2 = rhs(t + 0.5 * h, y2);
            for (int j = 0; j < 4; ++j) y3[j] = y[j] + 0.5 * h * k2[j];
            const auto k3 = rhs(t + 0.5 * h, y3);
            for (int j = 0; j < 4; ++j) y4[j] = y[j] + h * k3[j];
            const auto k4 = rhs(t + h, y4);
            for (int j = 0; j < 4; ++j)
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t += h;
        }
        out.push_back({y[2], y[3], y[0], y[1]});
    }
    return out;
}

std::pair<double, double> initial_velocities(const std::array<double, 3>& region_energies,
                                             double mass_rp, double mass_lp) {
    if (!(mass_rp > 0.0) || !(mass_lp > 0.0))
        throw validation_error("initial_velocities: masses must be positive");
    for (double e : region_energies)
        if (e < 0.0) throw validation_error("initial_velocities: energies must be >= 0");
    const double v_rp = 2.0 * std::abs(region_energies[2] - region_energies[1]) /
                        (mass_rp * kC);
    const double v_lp = 2.0 * std::abs(region_energies[0] - region_energies[1]) /
                        (mass_lp * kC);
    return {v_rp, v_lp};
}

double unruh_temperature(double acceleration, double wave_number) {
    if (!(wave_number > 0.0))
        throw validation_error("unruh_temperature: wave number must be positive");
    return kHbar * std::abs(acceleration) / (2.0 * kPi * kC * wave_number);
}

}  // namespace vacref
