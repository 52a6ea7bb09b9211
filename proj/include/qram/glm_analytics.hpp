#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qram/sweep.hpp"

namespace qram::glm {

// Tree geometry and timing. Segment lengths are round-trip lengths L(i),
// i.e. twice the distance between layer i and the root, stored per layer.
struct TreeConfig {
    int depth;
    std::vector<double> pic_segment_lengths;  // meters, round trip
    std::vector<double> dmd_segment_lengths;  // meters, round trip
    double group_velocity_pic;                // m/s
    double group_velocity_dmd;                // m/s
    double reset_time;                        // seconds

    void validate() const;

    // layered layout: L_PIC(i) = 2 i ell_pic, L_dmd(i) = 2 ell_dmd
    static TreeConfig layered(int depth, double ell_pic, double ell_dmd, double n_g_pic, double n_g_dmd,
                              double reset_time);
};

struct LossModel {
    double propagation_loss_straight_db_per_m;
    double propagation_loss_bend_db_per_m;
    double detection_efficiency;  // linear
    double path_efficiency;       // teleportation-scheme path term, linear
    double r_cav;
    double r_m;
    int bends_per_layer = 2;
    double bend_length = 10e-6;  // meters per bend

    void validate() const;
    // natural-log propagation rate per meter
    double eta_p() const;
    // eta_s = eta_det (R_m + R_cav)/2
    double eta_s() const;
    // eta_r = R_cav
    double eta_r() const { return r_cav; }
    // fixed per-layer bend penalty, linear
    double bend_factor() const;
};

// p_i = e^{-eta_p L(i)} eta_r^(i-1) eta_s, with the per-layer bend charge
double layer_probability(int i, const TreeConfig& cfg, const LossModel& loss);
double success_probability(const TreeConfig& cfg, const LossModel& loss);
// t_i = L_PIC(i)/v_PIC + L_dmd(i)/v_dmd
double travel_time(int i, const TreeConfig& cfg);
// T = sum_i t_i / prod_{j=i..n} p_j + tau / prod_j p_j - tau
double expected_query_time(const TreeConfig& cfg, const LossModel& loss);
double query_rate(const TreeConfig& cfg, const LossModel& loss);
// without loss detection: [ (sum_i t_i + tau)/prod_i p_i - tau ]^{-1}
double query_rate_no_loss_detection(const TreeConfig& cfg, const LossModel& loss);

// Monte Carlo oracle for the retry process behind the closed form
struct RetryStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};
RetryStats simulate_retry_process(const TreeConfig& cfg, const LossModel& loss, std::uint64_t trials,
                                  std::uint64_t seed);

// cavity-derived rate/fidelity curves; columns
// (n, N_memories, kappa_wg_over_kappa, C, rate_hz, rate_no_ld_hz, fidelity)
SweepResult rate_curve(std::span<const int> depth_range, std::span<const double> coupling_values, double cooperativity,
                       double kappa, double gamma, double omega_c, const TreeConfig& cfg_template,
                       const LossModel& loss_template);

}  // namespace qram::glm
