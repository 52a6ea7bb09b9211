#pragma once

#include <array>
#include <complex>
#include <span>

#include "qram/sweep.hpp"

namespace qram::filter {

using cplx = std::complex<double>;

// MZI (interferometric) coupler: through-amplitude nu, phase shifter
// delta_phi, arm length difference delta_L. The mirror-side coupler of the
// add-drop filter carries an intrinsic pi via delta_L so that delta_phi_m = 0
// is the fully decoupled (bar) state, matching the published phase maps.
struct CouplerSetting {
    double nu = 0.7071067811865476;  // 1/sqrt(2), balanced
    double delta_phi = 0.0;          // radians
    double delta_L = 0.0;            // meters
    void validate() const;
};

struct RingGeometry {
    double circumference;  // L_c, meters
    double ring_radius;    // meters
    double n_eff;
    double n_g;
    double delta_phi_r = 0.0;  // intra-ring phase shifter
    double omega_ref;          // dispersion expansion point, rad/s

    void validate() const;
    // L_c = 2 pi R
    static RingGeometry from_radius(double radius, double n_eff, double n_g, double omega_ref);
};

struct FilterResponse {
    cplx s_out;  // through port
    cplx s_m;    // mirror port
};

// k(w) = (n_eff/c) w0 + (n_g/c)(w - w0)
double propagation_constant(const RingGeometry& ring, double omega);

// phi_n(w) = k(w) dL_n + dphi_n
double coupler_phase(const CouplerSetting& setting, const RingGeometry& ring, double omega);

// zeta_n = nu^2 - e^{i phi}(1 - nu^2)
cplx coupler_through_factor(const CouplerSetting& setting, const RingGeometry& ring, double omega);

// 2x2 MZI transfer matrix, row-major; unitary for any setting
std::array<cplx, 4> mzi_transfer(const CouplerSetting& setting, const RingGeometry& ring, double omega);

// ring round-trip phase: k(w) L_c + delta_phi_r
double ring_round_trip_phase(const RingGeometry& ring, double omega);

// delta_phi_r that puts the loop resonance (arg of e^{i phi_c} zeta_i zeta_m)
// at zero for omega_ref, so sweeps are centered on resonance
double tune_ring_resonance(const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                           const RingGeometry& ring);

// delta_phi_r with the bare round-trip phase k(omega_ref) L_c cancelled; the
// phase maps over (dphi_i, dphi_m) hold this single setting fixed
double bare_ring_shift(const RingGeometry& ring);

// mirror coupler with k(omega_ref) dL = pi
CouplerSetting make_mirror_coupler(double delta_phi, const RingGeometry& ring);

FilterResponse filter_response(double omega, const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                               const RingGeometry& ring);

// rows: dphi_i, dphi_m, |s_m|^2, |s_out|^2, evaluated on ring resonance
SweepResult routing_phase_condition(std::span<const double> dphi_i_grid, std::span<const double> dphi_m_grid,
                                    const RingGeometry& ring);

// Loaded linewidth (FWHM, rad/s) of the through-port resonance near
// omega_ref. Uses the half-depth width of the |s_out|^2 dip when the filter
// has two open channels; in the single-channel (all-pass) regime the dip
// vanishes and the width of the group-delay resonance is returned instead.
double resonator_linewidth(const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                           const RingGeometry& ring);

// phase of one transit through the resonator section, including delta_phi_r
double single_pass_phase(const RingGeometry& ring, double omega);

// delta_phi_r making single_pass_phase(omega_ref) = pi/2 (mod 2 pi)
double solve_half_pi_ring_shift(const RingGeometry& ring);

}  // namespace qram::filter
