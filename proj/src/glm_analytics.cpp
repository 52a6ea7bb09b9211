#include "qram/glm_analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "qram/cavity_model.hpp"
#include "qram/rng.hpp"
#include "qram/transfer_protocols.hpp"

namespace qram::glm {

namespace {
constexpr double kDbToNat = 0.23025850929940457;  // ln(10)/10
}

void TreeConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("TreeConfig: depth must be >= 1");
    if (pic_segment_lengths.size() != static_cast<std::size_t>(depth) ||
        dmd_segment_lengths.size() != static_cast<std::size_t>(depth))
        throw std::invalid_argument("TreeConfig: need one segment length per layer");
    for (double l : pic_segment_lengths)
        if (l < 0.0) throw std::invalid_argument("TreeConfig: negative segment length");
    for (double l : dmd_segment_lengths)
        if (l < 0.0) throw std::invalid_argument("TreeConfig: negative segment length");
    if (!(group_velocity_pic > 0.0) || !(group_velocity_dmd > 0.0))
        throw std::invalid_argument("TreeConfig: group velocities must be positive");
    if (reset_time < 0.0) throw std::invalid_argument("TreeConfig: negative reset time");
}

TreeConfig TreeConfig::layered(int depth, double ell_pic, double ell_dmd, double n_g_pic, double n_g_dmd,
                               double reset_time) {
    TreeConfig cfg;
    cfg.depth = depth;
    for (int i = 1; i <= depth; ++i) {
        cfg.pic_segment_lengths.push_back(2.0 * i * ell_pic);
        cfg.dmd_segment_lengths.push_back(2.0 * ell_dmd);
    }
    cfg.group_velocity_pic = cavity::kSpeedOfLight / n_g_pic;
    cfg.group_velocity_dmd = cavity::kSpeedOfLight / n_g_dmd;
    cfg.reset_time = reset_time;
    cfg.validate();
    return cfg;
}

void LossModel::validate() const {
    if (propagation_loss_straight_db_per_m < 0.0 || propagation_loss_bend_db_per_m < 0.0)
        throw std::invalid_argument("LossModel: negative propagation loss");
    const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(detection_efficiency) || !in_unit(path_efficiency) || !in_unit(r_cav) || !in_unit(r_m))
        throw std::invalid_argument("LossModel: linear efficiencies must lie in [0,1]");
    if (bends_per_layer < 0 || bend_length < 0.0) throw std::invalid_argument("LossModel: invalid bend accounting");
}

double LossModel::eta_p() const { return propagation_loss_straight_db_per_m * kDbToNat; }

double LossModel::eta_s() const { return detection_efficiency * (r_m + r_cav) / 2.0; }

double LossModel::bend_factor() const {
    const double db = propagation_loss_bend_db_per_m * bends_per_layer * bend_length * 2.0;  // round trip
    return std::exp(-db * kDbToNat);
}

double layer_probability(int i, const TreeConfig& cfg, const LossModel& loss) {
    cfg.validate();
    loss.validate();
    if (i < 1 || i > cfg.depth) throw std::invalid_argument("layer_probability: layer index out of range");
    const double length =
        cfg.pic_segment_lengths[static_cast<std::size_t>(i - 1)] + cfg.dmd_segment_lengths[static_cast<std::size_t>(i - 1)];
    return std::exp(-loss.eta_p() * length) * loss.bend_factor() * std::pow(loss.eta_r(), i - 1) * loss.eta_s();
}

double success_probability(const TreeConfig& cfg, const LossModel& loss) {
    double p = 1.0;
    for (int i = 1; i <= cfg.depth; ++i) p *= layer_probability(i, cfg, loss);
    return p;
}

double travel_time(int i, const TreeConfig& cfg) {
    cfg.validate();
    if (i < 1 || i > cfg.depth) throw std::invalid_argument("travel_time: layer index out of range");
    return cfg.pic_segment_lengths[static_cast<std::size_t>(i - 1)] / cfg.group_velocity_pic +
           cfg.dmd_segment_lengths[static_cast<std::size_t>(i - 1)] / cfg.group_velocity_dmd;
}

double expected_query_time(const TreeConfig& cfg, const LossModel& loss) {
    const int n = cfg.depth;
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        p[static_cast<std::size_t>(i - 1)] = layer_probability(i, cfg, loss);
        if (p[static_cast<std::size_t>(i - 1)] <= 0.0)
            throw std::domain_error("expected_query_time: diverges, a layer probability is zero");
    }
    double total = 0.0;
    double tail = 1.0;  // prod_{j=i..n} p_j built from the back
    for (int i = n; i >= 1; --i) {
        tail *= p[static_cast<std::size_t>(i - 1)];
        total += travel_time(i, cfg) / tail;
    }
    total += cfg.reset_time / tail - cfg.reset_time;
    return total;
}

double query_rate(const TreeConfig& cfg, const LossModel& loss) { return 1.0 / expected_query_time(cfg, loss); }

double query_rate_no_loss_detection(const TreeConfig& cfg, const LossModel& loss) {
    const int n = cfg.depth;
    double prod = 1.0, sum_t = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double pi = layer_probability(i, cfg, loss);
        if (pi <= 0.0) throw std::domain_error("query_rate_no_loss_detection: diverges");
        prod *= pi;
        sum_t += travel_time(i, cfg);
    }
    return 1.0 / ((sum_t + cfg.reset_time) / prod - cfg.reset_time);
}

RetryStats simulate_retry_process(const TreeConfig& cfg, const LossModel& loss, std::uint64_t trials,
                                  std::uint64_t seed) {
    cfg.validate();
    const int n = cfg.depth;
    std::vector<double> p(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        p[static_cast<std::size_t>(i - 1)] = layer_probability(i, cfg, loss);
        t[static_cast<std::size_t>(i - 1)] = travel_time(i, cfg);
    }

    Rng rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        double elapsed = 0.0;
        bool done = false;
        while (!done) {
            done = true;
            for (int i = 0; i < n; ++i) {
                elapsed += t[static_cast<std::size_t>(i)];
                if (rng.uniform() >= p[static_cast<std::size_t>(i)]) {
                    elapsed += cfg.reset_time;
                    done = false;
                    break;
                }
            }
        }
        sum += elapsed;
        sum_sq += elapsed * elapsed;
    }
    RetryStats stats;
    stats.trials = trials;
    stats.mean = sum / static_cast<double>(trials);
    const double var = (sum_sq - sum * sum / static_cast<double>(trials)) / static_cast<double>(trials - 1);
    stats.std_error = std::sqrt(var / static_cast<double>(trials));
    return stats;
}

SweepResult rate_curve(std::span<const int> depth_range, std::span<const double> coupling_values, double cooperativity,
                       double kappa, double gamma, double omega_c, const TreeConfig& cfg_template,
                       const LossModel& loss_template) {
    SweepResult out;
    out.name = "rate_curve";
    out.columns = {"n", "N_memories", "kappa_wg_over_kappa", "C", "rate_hz", "rate_no_ld_hz", "fidelity"};
    for (double ratio : coupling_values) {
        const auto params = cavity::CavityParams::from_cooperativity(cooperativity, kappa, gamma, ratio * kappa, omega_c);
        protocol::ReflectionTriple triple = cavity::reflection_triple(params, {}, {-1.0, 0.0});
        const double m = protocol::optimal_mirror_modulus(triple.r_on, triple.r_off);
        triple.r_m = {-m, 0.0};
        const auto [r_cav, r_m] = cavity::reflection_coefficients(triple);
        const double fidelity = protocol::transfer_fidelity(triple).mean;

        LossModel loss = loss_template;
        loss.r_cav = r_cav;
        loss.r_m = r_m;
        for (int n : depth_range) {
            TreeConfig cfg = TreeConfig::layered(
                n, cfg_template.pic_segment_lengths.front() / 2.0, cfg_template.dmd_segment_lengths.front() / 2.0,
                cavity::kSpeedOfLight / cfg_template.group_velocity_pic,
                cavity::kSpeedOfLight / cfg_template.group_velocity_dmd, cfg_template.reset_time);
            out.rows.push_back({static_cast<double>(n), std::ldexp(1.0, n), ratio, cooperativity,
                                query_rate(cfg, loss), query_rate_no_loss_detection(cfg, loss), fidelity});
        }
    }
    return out;
}

}  // namespace qram::glm
