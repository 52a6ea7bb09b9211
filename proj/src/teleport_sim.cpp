#include "qram/teleport_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qram/cavity_model.hpp"
#include "qram/rng.hpp"
#include "qram/transfer_protocols.hpp"

namespace qram::teleport {

void TeleportConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("TeleportConfig: depth must be >= 1");
    if (!(p_ep > 0.0) || p_ep > 1.0) throw std::domain_error("TeleportConfig: p_ep outside (0,1]");
    if (reset_time < 0.0 || swap_to_nuclear_time < 0.0 || swap_to_broker_time < 0.0 || attempt_time < 0.0 ||
        bus_round_trip_time < 0.0)
        throw std::invalid_argument("TeleportConfig: negative time constant");
    if (!(retrieval_success > 0.0) || retrieval_success > 1.0)
        throw std::domain_error("TeleportConfig: retrieval success outside (0,1]");
}

namespace {

double link_time(std::uint64_t attempts, const TeleportConfig& cfg) {
    return static_cast<double>(attempts - 1) * (cfg.attempt_time + cfg.reset_time) + cfg.attempt_time;
}

double mean_link_time(const TeleportConfig& cfg) {
    return (1.0 / cfg.p_ep - 1.0) * (cfg.attempt_time + cfg.reset_time) + cfg.attempt_time;
}

// parallel heralded links: elapsed time is set by the slowest one
double max_link_time(int links, const TeleportConfig& cfg, Rng& rng) {
    double worst = 0.0;
    for (int i = 0; i < links; ++i) worst = std::max(worst, link_time(rng.geometric_attempts(cfg.p_ep), cfg));
    return worst;
}

int ghz_rounds(int num_nodes) { return num_nodes < 2 ? 0 : (num_nodes == 2 ? 1 : 2); }

}  // namespace

double simulate_ghz_layer(int num_nodes, const TeleportConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (num_nodes < 2) return 0.0;
    Rng rng(seed);
    const int first_round = num_nodes / 2;
    const int second_round = num_nodes - 1 - first_round;
    double elapsed = max_link_time(first_round, cfg, rng) + cfg.swap_to_nuclear_time;
    if (second_round > 0) elapsed += max_link_time(second_round, cfg, rng) + cfg.swap_to_nuclear_time;
    return elapsed;
}

double analytic_ghz_layer_time(int num_nodes, const TeleportConfig& cfg) {
    cfg.validate();
    return ghz_rounds(num_nodes) * (mean_link_time(cfg) + cfg.swap_to_nuclear_time);
}

namespace {

template <typename LinkMax, typename Retrieval>
double query_time(const TeleportConfig& cfg, double ghz_time, LinkMax&& qc_links, Retrieval&& retrieval_attempts) {
    const int largest_layer = 1 << (cfg.depth - 1);
    const int ghz_nodes = largest_layer - 1;  // leftmost node joins later

    // steps 1 and 2 run concurrently
    double elapsed = std::max(ghz_time, qc_links(cfg.depth) + cfg.swap_to_nuclear_time);
    // entangle the leftmost node with the layer GHZ, then local BSMs teleport
    // the addresses in
    if (ghz_nodes >= 1) elapsed += qc_links(1);
    elapsed += cfg.swap_to_broker_time;

    // step 3: swap addresses onto brokers, run the bus until it survives
    elapsed += cfg.swap_to_broker_time;
    const double attempts = retrieval_attempts();
    elapsed += (attempts - 1.0) * (cfg.bus_round_trip_time + cfg.reset_time) + cfg.bus_round_trip_time;

    // step 4: swap back, re-entangle each layer with the QC, local BSMs
    elapsed += cfg.swap_to_nuclear_time + qc_links(cfg.depth) + cfg.swap_to_broker_time;
    return elapsed;
}

}  // namespace

double simulate_query(const TeleportConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    const int largest_layer = 1 << (cfg.depth - 1);
    const double ghz = simulate_ghz_layer(largest_layer - 1, cfg, rng.next_u64());
    return query_time(
        cfg, ghz, [&](int links) { return max_link_time(links, cfg, rng); },
        [&] { return static_cast<double>(rng.geometric_attempts(cfg.retrieval_success)); });
}

double analytic_query_time(const TeleportConfig& cfg) {
    cfg.validate();
    const int largest_layer = 1 << (cfg.depth - 1);
    const double ghz = analytic_ghz_layer_time(largest_layer - 1, cfg);
    return query_time(
        cfg, ghz, [&](int) { return mean_link_time(cfg); }, [&] { return 1.0 / cfg.retrieval_success; });
}

TeleportConfig make_teleport_config(int depth, double r_cav, double r_m, const TeleportCurveInputs& inputs) {
    const glm::TreeConfig tree = glm::TreeConfig::layered(
        depth, inputs.tree_template.pic_segment_lengths.front() / 2.0,
        inputs.tree_template.dmd_segment_lengths.front() / 2.0,
        cavity::kSpeedOfLight / inputs.tree_template.group_velocity_pic,
        cavity::kSpeedOfLight / inputs.tree_template.group_velocity_dmd, inputs.tree_template.reset_time);
    glm::LossModel loss = inputs.loss_template;
    loss.r_cav = r_cav;
    loss.r_m = r_m;

    TeleportConfig cfg;
    cfg.depth = depth;
    const double layer1_propagation =
        std::exp(-loss.eta_p() * (tree.pic_segment_lengths.front() + tree.dmd_segment_lengths.front())) *
        loss.bend_factor();
    const double eta_path = inputs.eta_path_override > 0.0 ? inputs.eta_path_override : layer1_propagation;
    cfg.p_ep = eta_path * loss.eta_s() * loss.eta_s() * loss.detection_efficiency;
    cfg.reset_time = tree.reset_time;
    cfg.swap_to_nuclear_time = inputs.swap_to_nuclear_time;
    cfg.swap_to_broker_time = inputs.swap_to_broker_time;
    cfg.attempt_time = inputs.attempt_time;
    for (int i = 1; i <= depth; ++i) cfg.query_probabilities.push_back(glm::layer_probability(i, tree, loss));

    double bus_propagation = std::exp(-loss.eta_p() * (tree.pic_segment_lengths.back() + tree.dmd_segment_lengths.back()));
    for (int i = 0; i < depth; ++i) bus_propagation *= loss.bend_factor();
    cfg.retrieval_success = loss.detection_efficiency * std::pow(loss.eta_r(), depth) * bus_propagation;
    cfg.bus_round_trip_time = glm::travel_time(depth, tree);
    return cfg;
}

SweepResult teleport_rate_curve(std::span<const int> depth_range, std::span<const double> coupling_values,
                                std::uint64_t trials, std::uint64_t seed, const TeleportCurveInputs& inputs) {
    if (trials < 1) throw std::invalid_argument("teleport_rate_curve: need at least one trial");
    SweepResult out;
    out.name = "teleport_rate_curve";
    out.columns = {"N_memories", "kappa_wg_over_kappa", "rate_sim_hz", "rate_fit_hz", "rate_glm_hz", "fq_decoherence"};

    for (double ratio : coupling_values) {
        const auto params = cavity::CavityParams::from_cooperativity(inputs.cooperativity, inputs.kappa, inputs.gamma,
                                                                     ratio * inputs.kappa, inputs.omega_c);
        protocol::ReflectionTriple triple = cavity::reflection_triple(params, {}, {-1.0, 0.0});
        const double m = protocol::optimal_mirror_modulus(triple.r_on, triple.r_off);
        triple.r_m = {-m, 0.0};
        const auto [r_cav, r_m] = cavity::reflection_coefficients(triple);

        for (int n : depth_range) {
            const TeleportConfig cfg = make_teleport_config(n, r_cav, r_m, inputs);

            double total = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t)
                total += simulate_query(cfg, Rng::stream(seed, (static_cast<std::uint64_t>(n) << 32) ^ t).next_u64());
            const double rate_sim = static_cast<double>(trials) / total;
            const double largest_layer = std::ldexp(1.0, n - 1);
            const double rate_fit =
                inputs.fit.a * std::pow(largest_layer, -inputs.fit.b) / analytic_query_time(cfg);

            const glm::TreeConfig tree = glm::TreeConfig::layered(
                n, inputs.tree_template.pic_segment_lengths.front() / 2.0,
                inputs.tree_template.dmd_segment_lengths.front() / 2.0,
                cavity::kSpeedOfLight / inputs.tree_template.group_velocity_pic,
                cavity::kSpeedOfLight / inputs.tree_template.group_velocity_dmd, inputs.tree_template.reset_time);
            glm::LossModel loss = inputs.loss_template;
            loss.r_cav = r_cav;
            loss.r_m = r_m;
            const double rate_glm = glm::query_rate(tree, loss);
            const double fq =
                decoherence_fidelity(std::ldexp(1.0, n), inputs.coherence, inputs.swap_to_nuclear_time);
            out.rows.push_back({std::ldexp(1.0, n), ratio, rate_sim, rate_fit, rate_glm, fq});
        }
    }
    return out;
}

double decoherence_fidelity(double n_memories, const CoherenceModel& model, double swap_to_nuclear_time) {
    if (!(n_memories >= 2.0)) throw std::invalid_argument("decoherence_fidelity: need at least two memories");
    if (!(model.t2_nuclear > 0.0) || !(model.t2_electron > 0.0))
        throw std::invalid_argument("decoherence_fidelity: coherence times must be positive");
    const int depth = static_cast<int>(std::ceil(std::log2(n_memories)));
    double exponent = 0.0;
    for (int i = 1; i <= depth; ++i) {
        const double nodes = std::ldexp(1.0, i - 1);
        exponent += nodes * swap_to_nuclear_time * (1.0 / model.t2_electron + 1.0 / model.t2_nuclear);
    }
    return std::max(0.5, std::exp(-model.calibration_constant * exponent));
}

double calibrate_decoherence_constant(double swap_to_nuclear_time) {
    const double nodes = std::ldexp(1.0, 10) - 1.0;  // N = 10^3 -> depth 10 tree
    const double raw = nodes * swap_to_nuclear_time * (1.0 / 0.01 + 1.0 / 1.0);
    return std::log(2.0) / raw;
}

double physical_error_fidelity(int depth, double epsilon, ErrorMode mode, double bucket_coefficient) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("physical_error_fidelity: epsilon outside [0,1]");
    if (depth < 1) throw std::invalid_argument("physical_error_fidelity: depth must be >= 1");
    if (mode == ErrorMode::all_active) return std::pow(1.0 - epsilon, std::ldexp(1.0, depth) - 1.0);
    return std::max(0.0, 1.0 - bucket_coefficient * epsilon * depth * depth);
}

}  // namespace qram::teleport
