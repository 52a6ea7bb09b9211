#include "qram/adddrop_filter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qram/cavity_model.hpp"

namespace qram::filter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kC = cavity::kSpeedOfLight;

double wrap_2pi(double phase) {
    double w = std::fmod(phase, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w;
}
}  // namespace

void CouplerSetting::validate() const {
    if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("CouplerSetting: nu outside [0,1]");
}

void RingGeometry::validate() const {
    if (!(circumference > 0.0)) throw std::invalid_argument("RingGeometry: circumference must be positive");
    if (!(n_eff > 1.0) || !(n_g > 1.0)) throw std::invalid_argument("RingGeometry: indices must exceed 1");
    if (!(omega_ref > 0.0)) throw std::invalid_argument("RingGeometry: omega_ref must be positive");
}

RingGeometry RingGeometry::from_radius(double radius, double n_eff, double n_g, double omega_ref) {
    RingGeometry r;
    r.ring_radius = radius;
    r.circumference = 2.0 * kPi * radius;
    r.n_eff = n_eff;
    r.n_g = n_g;
    r.delta_phi_r = 0.0;
    r.omega_ref = omega_ref;
    r.validate();
    return r;
}

double propagation_constant(const RingGeometry& ring, double omega) {
    return (ring.n_eff / kC) * ring.omega_ref + (ring.n_g / kC) * (omega - ring.omega_ref);
}

double coupler_phase(const CouplerSetting& setting, const RingGeometry& ring, double omega) {
    return propagation_constant(ring, omega) * setting.delta_L + setting.delta_phi;
}

cplx coupler_through_factor(const CouplerSetting& setting, const RingGeometry& ring, double omega) {
    setting.validate();
    const double nu2 = setting.nu * setting.nu;
    return nu2 - std::polar(1.0, coupler_phase(setting, ring, omega)) * (1.0 - nu2);
}

std::array<cplx, 4> mzi_transfer(const CouplerSetting& setting, const RingGeometry& ring, double omega) {
    setting.validate();
    const double nu = setting.nu;
    const double cross = nu * std::sqrt(1.0 - nu * nu);
    const cplx e = std::polar(1.0, coupler_phase(setting, ring, omega));
    const cplx one_plus_e = 1.0 + e;
    return {one_plus_e * nu * nu - 1.0, cplx{0.0, 1.0} * one_plus_e * cross, cplx{0.0, 1.0} * one_plus_e * cross,
            nu * nu - e * (1.0 - nu * nu)};
}

double ring_round_trip_phase(const RingGeometry& ring, double omega) {
    return propagation_constant(ring, omega) * ring.circumference + ring.delta_phi_r;
}

double tune_ring_resonance(const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                           const RingGeometry& ring) {
    const double omega = ring.omega_ref;
    RingGeometry untuned = ring;
    untuned.delta_phi_r = 0.0;
    const cplx zz = coupler_through_factor(input_coupler, untuned, omega) *
                    coupler_through_factor(mirror_coupler, untuned, omega);
    if (std::abs(zz) == 0.0) return 0.0;
    return wrap_2pi(-(ring_round_trip_phase(untuned, omega) + std::arg(zz)));
}

double bare_ring_shift(const RingGeometry& ring) {
    RingGeometry untuned = ring;
    untuned.delta_phi_r = 0.0;
    return wrap_2pi(-ring_round_trip_phase(untuned, ring.omega_ref));
}

CouplerSetting make_mirror_coupler(double delta_phi, const RingGeometry& ring) {
    CouplerSetting m;
    m.delta_phi = delta_phi;
    m.delta_L = kPi / propagation_constant(ring, ring.omega_ref);
    return m;
}

FilterResponse filter_response(double omega, const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                               const RingGeometry& ring) {
    ring.validate();
    const auto ti = mzi_transfer(input_coupler, ring, omega);
    const auto tm = mzi_transfer(mirror_coupler, ring, omega);
    const cplx zeta_i = coupler_through_factor(input_coupler, ring, omega);
    const cplx zeta_m = coupler_through_factor(mirror_coupler, ring, omega);
    const double phi_c = ring_round_trip_phase(ring, omega);
    const cplx loop = std::polar(1.0, phi_c) * zeta_i * zeta_m;
    const cplx den = 1.0 - loop;
    if (std::abs(den) < 1e-12)
        throw std::runtime_error("filter_response: singular resonance (decoupled lossless ring driven on resonance)");
    FilterResponse r;
    r.s_out = ti[0] + std::polar(1.0, phi_c) * zeta_m * ti[1] * ti[2] / den;
    // arc from the input coupler to the mirror coupler carries half the loop
    r.s_m = std::polar(1.0, phi_c / 2.0) * tm[1] * ti[2] / den;
    return r;
}

SweepResult routing_phase_condition(std::span<const double> dphi_i_grid, std::span<const double> dphi_m_grid,
                                    const RingGeometry& ring) {
    SweepResult out;
    out.name = "routing_phase_condition";
    out.columns = {"dphi_i", "dphi_m", "s_m_sq", "s_out_sq"};
    out.rows.reserve(dphi_i_grid.size() * dphi_m_grid.size());
    RingGeometry tuned = ring;
    tuned.delta_phi_r = bare_ring_shift(ring);
    for (double di : dphi_i_grid) {
        for (double dm : dphi_m_grid) {
            CouplerSetting in;
            in.delta_phi = di;
            const CouplerSetting mir = make_mirror_coupler(dm, ring);
            double sm_sq = 0.0, sout_sq = 1.0;
            try {
                const FilterResponse r = filter_response(ring.omega_ref, in, mir, tuned);
                sm_sq = std::norm(r.s_m);
                sout_sq = std::norm(r.s_out);
            } catch (const std::runtime_error&) {
                // fully decoupled singular point: nothing enters the ring
                sm_sq = 0.0;
                sout_sq = 1.0;
            }
            out.rows.push_back({di, dm, sm_sq, sout_sq});
        }
    }
    return out;
}

namespace {

double through_intensity(double omega, const CouplerSetting& in, const CouplerSetting& mir, const RingGeometry& ring) {
    return std::norm(filter_response(omega, in, mir, ring).s_out);
}

double through_phase(double omega, const CouplerSetting& in, const CouplerSetting& mir, const RingGeometry& ring) {
    return std::arg(filter_response(omega, in, mir, ring).s_out);
}

// group delay d(arg s_out)/d omega by central difference
double group_delay(double omega, double h, const CouplerSetting& in, const CouplerSetting& mir,
                   const RingGeometry& ring) {
    double dp = through_phase(omega + h, in, mir, ring) - through_phase(omega - h, in, mir, ring);
    while (dp > kPi) dp -= 2.0 * kPi;
    while (dp < -kPi) dp += 2.0 * kPi;
    return dp / (2.0 * h);
}

template <typename F>
double bisect_crossing(F&& f, double lo, double hi, double level, int iters = 80) {
    double flo = f(lo) - level;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid) - level;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double resonator_linewidth(const CouplerSetting& input_coupler, const CouplerSetting& mirror_coupler,
                           const RingGeometry& ring) {
    ring.validate();
    const double fsr = 2.0 * kPi * kC / (ring.n_g * ring.circumference);
    const int samples = 4001;
    const double lo = ring.omega_ref - fsr / 2.0, hi = ring.omega_ref + fsr / 2.0;

    // locate the resonance as the minimum of |1 - loop|
    double best_omega = ring.omega_ref, best = 1e300;
    for (int i = 0; i < samples; ++i) {
        const double w = lo + (hi - lo) * i / (samples - 1);
        const cplx loop = std::polar(1.0, ring_round_trip_phase(ring, w)) *
                          coupler_through_factor(input_coupler, ring, w) *
                          coupler_through_factor(mirror_coupler, ring, w);
        const double d = std::abs(1.0 - loop);
        if (d < best) {
            best = d;
            best_omega = w;
        }
    }
    if (best > 1.0) throw std::runtime_error("resonator_linewidth: no resonance within one FSR of omega_ref");

    auto intensity = [&](double w) { return through_intensity(w, input_coupler, mirror_coupler, ring); };

    double imin = 1e300, imax = 0.0, wmin = best_omega;
    for (int i = 0; i < samples; ++i) {
        const double w = lo + (hi - lo) * i / (samples - 1);
        const double v = intensity(w);
        if (v < imin) {
            imin = v;
            wmin = w;
        }
        if (v > imax) imax = v;
    }

    if (imax - imin > 1e-3 * std::max(imax, 1e-30)) {
        // two open channels: half-depth width of the through-port dip
        const double level = 0.5 * (imax + imin);
        const double wl = bisect_crossing(intensity, wmin, lo, level);
        const double wr = bisect_crossing(intensity, wmin, hi, level);
        return wr - wl;
    }

    // single-channel all-pass: |s_out| is flat, extract the width of the
    // group-delay resonance instead
    const double h = fsr * 1e-7;
    auto delay = [&](double w) { return group_delay(w, h, input_coupler, mirror_coupler, ring); };
    double dmax = 0.0, wpeak = best_omega;
    for (int i = -200; i <= 200; ++i) {
        const double w = best_omega + fsr * 0.25 * i / 200.0;
        const double d = std::abs(delay(w));
        if (d > dmax) {
            dmax = d;
            wpeak = w;
        }
    }
    const double baseline = std::abs(delay(wpeak + fsr * 0.45));
    if (dmax < 1.05 * baseline) throw std::runtime_error("resonator_linewidth: no resonance feature found");
    auto absdelay = [&](double w) { return std::abs(delay(w)); };
    const double level = dmax / 2.0;
    const double wl = bisect_crossing(absdelay, wpeak, wpeak - fsr * 0.45, level);
    const double wr = bisect_crossing(absdelay, wpeak, wpeak + fsr * 0.45, level);
    return wr - wl;
}

double single_pass_phase(const RingGeometry& ring, double omega) {
    return wrap_2pi(propagation_constant(ring, omega) * ring.circumference / 2.0 + ring.delta_phi_r);
}

double solve_half_pi_ring_shift(const RingGeometry& ring) {
    return wrap_2pi(kPi / 2.0 - propagation_constant(ring, ring.omega_ref) * ring.circumference / 2.0);
}

}  // namespace qram::filter
