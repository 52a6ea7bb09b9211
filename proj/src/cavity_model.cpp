#include "qram/cavity_model.hpp"

#include <cmath>
#include <stdexcept>

namespace qram::cavity {

void CavityParams::validate() const {
    if (!(g >= 0.0)) throw std::invalid_argument("CavityParams: g must be >= 0");
    if (!(gamma > 0.0) || !(kappa > 0.0) || !(omega_c > 0.0))
        throw std::invalid_argument("CavityParams: rates and omega_c must be positive");
    if (!(kappa_wg >= 0.0) || kappa_wg > kappa * (1.0 + 1e-12))
        throw std::invalid_argument("CavityParams: kappa_wg must lie in [0, kappa]");
}

CavityParams CavityParams::from_cooperativity(double cooperativity, double kappa, double gamma, double kappa_wg,
                                              double omega_c) {
    if (!(cooperativity > 0.0)) throw std::invalid_argument("from_cooperativity: C must be positive");
    CavityParams p;
    p.g = std::sqrt(cooperativity * kappa * gamma) / 2.0;
    p.gamma = gamma;
    p.kappa = kappa;
    p.kappa_wg = kappa_wg;
    p.omega_c = omega_c;
    p.delta = 0.0;
    p.validate();
    p.delta = optimal_splitting(p);
    return p;
}

void FieldDeviation::validate() const {
    if (!(delta_b > -1.0)) throw std::invalid_argument("FieldDeviation: delta_b must exceed -1");
}

cplx reflectivity(const CavityParams& params, double probe, double atomic_transition) {
    params.validate();
    const double delta_a = atomic_transition - probe;
    const double delta_c = params.omega_c - probe;
    const cplx atom{params.gamma / 2.0, delta_a};
    const cplx cav{params.kappa / 2.0, delta_c};
    return 1.0 - params.kappa_wg * atom / (cav * atom + params.g * params.g);
}

double splitting_formula(double g, double gamma, double kappa, double kappa_wg) {
    const double radicand = 2.0 * (g * g - (gamma / 2.0) * (kappa_wg / 2.0 - kappa));
    if (!(radicand > 0.0)) throw std::domain_error("optimal_splitting: non-positive radicand");
    return std::sqrt(radicand);
}

double optimal_splitting(const CavityParams& params) {
    params.validate();
    return splitting_formula(params.g, params.gamma, params.kappa, params.kappa_wg);
}

double field_from_splitting(double delta) { return kHbar * delta / (kBohrMagneton * kLandeG); }

double optimal_field(const CavityParams& params) { return field_from_splitting(optimal_splitting(params)); }

ReflectionTriple reflection_triple(const CavityParams& params, FieldDeviation dev, cplx mirror_amplitude) {
    dev.validate();
    if (std::abs(mirror_amplitude) > 1.0 + 1e-12)
        throw std::invalid_argument("reflection_triple: mirror amplitude modulus exceeds 1");
    const double delta = optimal_splitting(params) * (1.0 + dev.delta_b);
    ReflectionTriple t;
    // on: probe at omega_c + D'/2 with its resonant transition at the same frequency
    t.r_on = reflectivity(params, params.omega_c + delta / 2.0, params.omega_c + delta / 2.0);
    // off: probe at omega_c - D'/2 against the transition detuned by D'
    t.r_off = reflectivity(params, params.omega_c - delta / 2.0, params.omega_c + delta / 2.0);
    t.r_m = mirror_amplitude;
    return t;
}

std::pair<double, double> reflection_coefficients(const ReflectionTriple& triple) {
    const double r_cav = (std::norm(triple.r_on) + std::norm(triple.r_off)) / 2.0;
    return {r_cav, std::norm(triple.r_m)};
}

SweepResult fano_sweep(const CavityParams& params, Spin spin, std::span<const double> probe_grid) {
    params.validate();
    const double transition =
        spin == Spin::down ? params.omega_c + params.delta / 2.0 : params.omega_c - params.delta / 2.0;
    SweepResult out;
    out.name = spin == Spin::down ? "fano_spin_down" : "fano_spin_up";
    out.columns = {"omega_rel_over_kappa", "re_r", "im_r", "abs_r_sq"};
    out.rows.reserve(probe_grid.size());
    for (double probe : probe_grid) {
        const cplx r = reflectivity(params, probe, transition);
        out.rows.push_back({(probe - params.omega_c) / params.kappa, r.real(), r.imag(), std::norm(r)});
    }
    return out;
}

}  // namespace qram::cavity
