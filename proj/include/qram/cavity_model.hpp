#pragma once

#include <complex>
#include <span>
#include <utility>

#include "qram/sweep.hpp"

namespace qram::cavity {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kHbar = 1.054571817e-34;            // J s
inline constexpr double kBohrMagneton = 9.2740100783e-24;   // J/T
inline constexpr double kLandeG = 2.0;

// Atom-cavity tuple. All rates and frequencies are angular (rad/s); the
// config layer converts Table defaults from ordinary frequency by 2*pi.
struct CavityParams {
    double g;         // atom-cavity coupling
    double gamma;     // emitter spontaneous emission rate
    double kappa;     // total cavity decay rate
    double kappa_wg;  // waveguide-cavity coupling rate
    double omega_c;   // cavity resonance
    double delta;     // Zeeman splitting between the spin transitions

    double cooperativity() const { return 4.0 * g * g / (kappa * gamma); }
    void validate() const;

    // C is the user-facing knob; g = sqrt(C*kappa*gamma)/2. delta defaults to
    // the optimal splitting for the resulting parameter set.
    static CavityParams from_cooperativity(double cooperativity, double kappa, double gamma, double kappa_wg,
                                           double omega_c);
};

// fractional deviation from the optimal magnetic field, e.g. -0.10 for -10%
struct FieldDeviation {
    double delta_b = 0.0;
    void validate() const;
};

struct ReflectionTriple {
    cplx r_on;   // probed transition resonant
    cplx r_off;  // probed transition detuned by the Zeeman splitting
    cplx r_m;    // mirror arm
};

enum class Spin { down, up };

// r(w) = 1 - kappa_wg (i Da + gamma/2) / [(i Dc + kappa/2)(i Da + gamma/2) + g^2]
// with Da = atomic_transition - probe and Dc = omega_c - probe.
cplx reflectivity(const CavityParams& params, double probe, double atomic_transition);

// Delta = sqrt(2 [g^2 - (gamma/2)(kappa_wg/2 - kappa)]); the raw form exists
// for algebraic limit checks outside the validated parameter domain
double splitting_formula(double g, double gamma, double kappa, double kappa_wg);
double optimal_splitting(const CavityParams& params);

// B = hbar * Delta / (mu_B * g_L), g_L = 2
double field_from_splitting(double delta);
double optimal_field(const CavityParams& params);

// Probes track the transitions at the deviated splitting D' = D_opt (1+dB);
// the cavity stays centered, transitions at omega_c +- D'/2.
ReflectionTriple reflection_triple(const CavityParams& params, FieldDeviation dev, cplx mirror_amplitude);

// (R_cav, R_m): mean branch reflectance and mirror reflectance
std::pair<double, double> reflection_coefficients(const ReflectionTriple& triple);

// rows: (omega-omega_c)/kappa, Re r, Im r, |r|^2
SweepResult fano_sweep(const CavityParams& params, Spin spin, std::span<const double> probe_grid);

}  // namespace qram::cavity
