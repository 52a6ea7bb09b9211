#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qram/glm_analytics.hpp"
#include "qram/sweep.hpp"

namespace qram::teleport {

// Event-simulation inputs for one tree size. Times in seconds.
struct TeleportConfig {
    int depth;
    double p_ep;                   // Bell-attempt success probability
    double reset_time;             // tau_reset charged on every failed heralded attempt
    double swap_to_nuclear_time;   // t_e->n
    double swap_to_broker_time;    // t_n->e
    double attempt_time;           // one heralded entanglement attempt
    std::vector<double> query_probabilities;  // per-layer p_i, for reference output
    double retrieval_success;      // step-3 probability, ~ eta_det * eta_r^n * e^{-eta_p L(n)}
    double bus_round_trip_time;

    void validate() const;
};

struct FitModel {
    double a = 1.7094;
    double b = 0.79386;
};

struct CoherenceModel {
    double t2_nuclear;            // seconds
    double t2_electron;           // seconds
    double calibration_constant;  // dimensionless, see calibrate_decoherence_constant
};

// GHZ creation across one layer: odd/even pairs first, bridge links second,
// each round closing with the electron->nuclear swap. Returns elapsed time.
double simulate_ghz_layer(int num_nodes, const TeleportConfig& cfg, std::uint64_t seed);

// analytic counterpart with every heralded stage at its geometric mean 1/p
double analytic_ghz_layer_time(int num_nodes, const TeleportConfig& cfg);

// the four-step query: setup (GHZ || QC links), teleport, retrieval retries,
// teleport back
double simulate_query(const TeleportConfig& cfg, std::uint64_t seed);
double analytic_query_time(const TeleportConfig& cfg);

struct TeleportCurveInputs {
    double kappa;
    double gamma;
    double omega_c;
    double cooperativity;
    glm::TreeConfig tree_template;   // layered template (depth re-derived per n)
    glm::LossModel loss_template;    // r_cav/r_m overwritten per coupling
    double eta_path_override = 0.0;  // <= 0: use the layer-1 propagation efficiency
    double swap_to_nuclear_time;     // t_e->n
    double swap_to_broker_time;      // t_n->e
    double attempt_time;
    FitModel fit;
    CoherenceModel coherence;
};

// columns: N_memories, kappa_wg_over_kappa, rate_sim_hz, rate_fit_hz,
// rate_glm_hz, fq_decoherence
SweepResult teleport_rate_curve(std::span<const int> depth_range, std::span<const double> coupling_values,
                                std::uint64_t trials, std::uint64_t seed, const TeleportCurveInputs& inputs);

// builds the per-size event-simulation config from the cavity-derived losses
TeleportConfig make_teleport_config(int depth, double r_cav, double r_m, const TeleportCurveInputs& inputs);

// GHZ dephasing estimate, floored at the maximally mixed baseline 0.5
double decoherence_fidelity(double n_memories, const CoherenceModel& model, double swap_to_nuclear_time);

// calibration constant such that F_q = 0.5 at N = 10^3, T2n = 1 s, T2e = 10 ms
double calibrate_decoherence_constant(double swap_to_nuclear_time);

enum class ErrorMode { bucket_brigade, all_active };

// all_active: F = (1-eps)^(2^n - 1); bucket_brigade: 1 - c eps n^2 (placeholder
// scaling for eps^{O(log N)}, c configurable)
double physical_error_fidelity(int depth, double epsilon, ErrorMode mode, double bucket_coefficient = 1.0);

}  // namespace qram::teleport
