// Acceptance suite: runs each gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qram/adddrop_filter.hpp"
#include "qram/cavity_model.hpp"
#include "qram/config.hpp"
#include "qram/glm_analytics.hpp"
#include "qram/quantum_core.hpp"
#include "qram/rng.hpp"
#include "qram/teleport_sim.hpp"
#include "qram/transfer_protocols.hpp"

using namespace qram;
using quantum::cplx;
using quantum::StateVector;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

RunConfig g_cfg;

cavity::ReflectionTriple optimized_triple(double cooperativity, double ratio, double delta_b = 0.0) {
    const auto params = cavity::CavityParams::from_cooperativity(cooperativity, g_cfg.kappa(), g_cfg.gamma(),
                                                                 ratio * g_cfg.kappa(), g_cfg.omega_c());
    auto t = cavity::reflection_triple(params, {delta_b}, {-1.0, 0.0});
    t.r_m = {-protocol::optimal_mirror_modulus(t.r_on, t.r_off), 0.0};
    return t;
}

glm::LossModel loss_for(const cavity::ReflectionTriple& t) {
    glm::LossModel loss = g_cfg.loss_model();
    const auto [r_cav, r_m] = cavity::reflection_coefficients(t);
    loss.r_cav = r_cav;
    loss.r_m = r_m;
    return loss;
}

void criterion_1_fano_limit() {
    bool pass = true;
    std::ostringstream detail;
    for (double c : {1e2, 1e3, 1e4}) {
        const auto p =
            cavity::CavityParams::from_cooperativity(c, g_cfg.kappa(), g_cfg.gamma(), g_cfg.kappa(), g_cfg.omega_c());
        const cplx r = cavity::reflectivity(p, p.omega_c, p.omega_c);
        const double err = std::abs(r - (c - 1.0) / (c + 1.0));
        if (err > 10.0 / c) pass = false;
        detail << "C=" << c << " err=" << format_double(err) << " ";
    }
    report(1, "Fano limit law (C-1)/(C+1)", pass, detail.str());
}

void criterion_2_fidelity_contour() {
    Timer timer;
    auto grid_value = [&](double c, double ratio, double delta_b) {
        return protocol::transfer_fidelity(optimized_triple(c, ratio, delta_b)).mean;
    };
    bool region_ok = true;
    double worst = 1.0;
    for (int i = 0; i < 50; ++i) {
        const double c = 2.0 + 98.0 * i / 49.0;
        if (c <= 20.0) continue;
        for (int j = 0; j < 50; ++j) {
            const double ratio = 0.80 + 0.20 * j / 49.0;
            if (ratio <= 0.94) continue;
            const double f = grid_value(c, ratio, 0.0);
            worst = std::min(worst, f);
            if (f <= 0.999) region_ok = false;
        }
    }
    double deviated_max = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double c = 2.0 + 98.0 * i / 49.0;
        for (int j = 0; j < 50; ++j) {
            const double ratio = 0.80 + 0.20 * j / 49.0;
            deviated_max = std::max(deviated_max, grid_value(c, ratio, 0.10));
        }
    }
    const bool pass = region_ok && deviated_max < 0.999;
    std::ostringstream detail;
    detail << "min F over C>20, kwg/k>0.94: " << format_double(worst)
           << "; max F at deltaB=+0.10: " << format_double(deviated_max) << "; " << format_double(timer.seconds())
           << " s";
    report(2, "fidelity contour thresholds", pass, detail.str());
}

void criterion_3_tradeoff() {
    Timer timer;
    double best_f = -1.0, best_ratio = 0.0, prev_rate = 0.0;
    bool rate_monotone = true;
    const auto tree = g_cfg.tree_config(6);
    for (int i = 0; i <= 38; ++i) {
        const double ratio = 0.90 + 0.0025 * i;
        const auto triple = optimized_triple(100.0, ratio);
        const double f = protocol::transfer_fidelity(triple).mean;
        if (f > best_f) {
            best_f = f;
            best_ratio = ratio;
        }
        const double rate = glm::query_rate(tree, loss_for(triple));
        if (rate <= prev_rate) rate_monotone = false;
        prev_rate = rate;
    }
    const bool peak_ok = std::abs(best_ratio - 0.97) <= 0.02;
    std::ostringstream detail;
    detail << "fidelity argmax at kwg/k=" << format_double(best_ratio) << " (window 0.97 +- 0.02), rate monotone="
           << (rate_monotone ? "yes" : "no") << "; " << format_double(timer.seconds()) << " s";
    report(3, "fidelity-rate trade-off at depth 6", peak_ok && rate_monotone, detail.str());
}

void criterion_4_glm_rates() {
    Timer timer;
    const auto tree6 = g_cfg.tree_config(6);
    const double rate_097 = glm::query_rate(tree6, loss_for(optimized_triple(100.0, 0.97)));
    const bool khz = rate_097 > 1000.0;

    const auto loss_hi = loss_for(optimized_triple(100.0, 0.995));
    const auto loss_lo = loss_for(optimized_triple(100.0, 0.95));
    bool ratio_ok = true;
    double min_ratio = 1e300;
    for (int n = 7; n <= 10; ++n) {
        const auto tree = g_cfg.tree_config(n);
        const double ratio = glm::query_rate(tree, loss_hi) / glm::query_rate(tree, loss_lo);
        min_ratio = std::min(min_ratio, ratio);
        if (ratio <= 10.0) ratio_ok = false;
    }
    std::ostringstream detail;
    detail << "rate(n=6, kwg/k=0.97)=" << format_double(rate_097) << " Hz; min 0.995/0.95 ratio for N>1e2: "
           << format_double(min_ratio) << "; " << format_double(timer.seconds()) << " s";
    report(4, "sequential-scheme rates exceed 1 kHz and split by >10x", khz && ratio_ok, detail.str());
}

void criterion_5_expected_time() {
    Timer timer;
    Rng rng(2024);
    bool special_ok = true;
    for (int it = 0; it < 1000 && special_ok; ++it) {
        auto tree = glm::TreeConfig::layered(2, 1e-4 + rng.uniform() * 1e-3, 1e-5, 2.3862, 2.4513,
                                             rng.uniform() * 1e-5);
        glm::LossModel loss = g_cfg.loss_model();
        loss.r_cav = 0.3 + 0.7 * rng.uniform();
        loss.r_m = 0.3 + 0.7 * rng.uniform();
        loss.detection_efficiency = 0.3 + 0.7 * rng.uniform();
        const double p1 = glm::layer_probability(1, tree, loss);
        const double p2 = glm::layer_probability(2, tree, loss);
        const double t1 = glm::travel_time(1, tree), t2 = glm::travel_time(2, tree);
        const double special = (t1 + tree.reset_time) / (p1 * p2) + t2 / p2 - tree.reset_time;
        const double closed = glm::expected_query_time(tree, loss);
        if (std::abs(closed - special) > 1e-9 * std::abs(special)) special_ok = false;
    }

    bool mc_ok = true;
    std::ostringstream mc_detail;
    const auto triple = optimized_triple(100.0, 0.97);
    for (int n = 1; n <= 3; ++n) {
        const auto tree = g_cfg.tree_config(n);
        const auto loss = loss_for(triple);
        const double closed = glm::expected_query_time(tree, loss);
        const auto stats = glm::simulate_retry_process(tree, loss, 1000000, 555 + static_cast<std::uint64_t>(n));
        const double sigmas = std::abs(stats.mean - closed) / stats.std_error;
        mc_detail << "n=" << n << ": " << format_double(sigmas) << " sigma; ";
        if (sigmas > 3.0) mc_ok = false;
    }
    std::ostringstream detail;
    detail << "two-layer identity over 1e3 tuples: " << (special_ok ? "ok" : "broken") << "; MC " << mc_detail.str()
           << format_double(timer.seconds()) << " s";
    report(5, "expected-time closed form vs special case and retry oracle", special_ok && mc_ok, detail.str());
}

void criterion_6_ld_dominance() {
    Timer timer;
    Rng rng(31);
    bool pass = true;
    for (int it = 0; it < 10000 && pass; ++it) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        auto tree = glm::TreeConfig::layered(n, 1e-4 + rng.uniform() * 1e-3, 1e-5, 2.3862, 2.4513,
                                             1e-8 + rng.uniform() * 1e-5);
        glm::LossModel loss = g_cfg.loss_model();
        loss.r_cav = 0.3 + 0.7 * rng.uniform();
        loss.r_m = 0.3 + 0.7 * rng.uniform();
        loss.detection_efficiency = 0.3 + 0.7 * rng.uniform();
        if (glm::query_rate(tree, loss) < glm::query_rate_no_loss_detection(tree, loss) * (1.0 - 1e-12)) pass = false;
    }
    // lossless equality
    glm::LossModel unity = g_cfg.loss_model();
    unity.propagation_loss_straight_db_per_m = 0.0;
    unity.propagation_loss_bend_db_per_m = 0.0;
    unity.detection_efficiency = 1.0;
    unity.bends_per_layer = 0;
    const auto tree = g_cfg.tree_config(4);
    const double a = glm::query_rate(tree, unity);
    const double b = glm::query_rate_no_loss_detection(tree, unity);
    const bool equal = std::abs(a - b) <= 1e-9 * a;
    std::ostringstream detail;
    detail << "1e4 random configs dominated; lossless equality gap " << format_double(std::abs(a - b) / a) << "; "
           << format_double(timer.seconds()) << " s";
    report(6, "loss-detection dominance", pass && equal, detail.str());
}

void criterion_7_protocol_exactness() {
    Timer timer;
    const cavity::ReflectionTriple ideal{{1, 0}, {-1, 0}, {-1, 0}};
    const double inv = 1.0 / std::sqrt(2.0);
    bool pass = true;
    std::ostringstream detail;

    {
        const auto bell = protocol::bell_create(ideal, ideal);
        const StateVector phi_plus(2, {inv, 0, 0, inv});
        if (quantum::overlap_fidelity(bell.omega0.post_state, phi_plus) < 1.0 - 1e-10 ||
            quantum::overlap_fidelity(bell.omega1.post_state, phi_plus) < 1.0 - 1e-10) {
            pass = false;
            detail << "bell_create off target; ";
        }
    }
    {
        const StateVector bell(2, {inv, 0, 0, inv});
        const std::array factors{bell, bell, bell, bell, bell};
        StateVector s = StateVector::product(factors);
        const std::array<int, 2> left{0, 1}, mid{2, 3}, tail{4, 5};
        s = protocol::ghz_link(s, left, mid, {6, 7}, 0.25, 0.75);
        const std::array<int, 4> four{0, 1, 2, 3};
        s = protocol::ghz_link(s, four, tail, {8, 9}, 0.75, 0.25);
        s = quantum::drop_qubit(s, 9, 0);
        s = quantum::drop_qubit(s, 8, 1);
        s = quantum::drop_qubit(s, 7, 1);
        s = quantum::drop_qubit(s, 6, 0);
        StateVector ghz6(6, std::vector<cplx>(64, 0.0));
        ghz6.amplitude_ref(0) = inv;
        ghz6.amplitude_ref(63) = inv;
        if (quantum::overlap_fidelity(s, ghz6) < 1.0 - 1e-10) {
            pass = false;
            detail << "ghz_link(6) off target; ";
        }
    }
    {
        Rng rng(8);
        std::vector<cplx> addr(4);
        double norm = 0.0;
        for (auto& a : addr) {
            a = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
            norm += std::norm(a);
        }
        for (auto& a : addr) a /= std::sqrt(norm);
        const auto oracle = protocol::teleported_tree_oracle(addr, 2);
        for (int branch = 0; branch < 16; ++branch) {
            const std::array<int, 4> outcomes{(branch >> 3) & 1, (branch >> 2) & 1, (branch >> 1) & 1, branch & 1};
            const auto res = protocol::teleport_addresses_branch(addr, 2, outcomes);
            if (quantum::overlap_fidelity(res.tree_state, oracle) < 1.0 - 1e-10) {
                pass = false;
                detail << "teleport branch " << branch << " off target; ";
            }
        }
    }
    {
        Rng rng(88);
        std::vector<cplx> addr(4);
        double norm = 0.0;
        for (auto& a : addr) {
            a = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
            norm += std::norm(a);
        }
        for (auto& a : addr) a /= std::sqrt(norm);
        std::vector<int> data;
        for (int i = 0; i < 4; ++i) data.push_back(static_cast<int>(rng.next_u64() % 2));
        const auto oracle = protocol::query_output_oracle(addr, data, 2);
        for (int branch = 0; branch < 16; ++branch) {
            const std::vector<int> heralds{(branch >> 3) & 1, (branch >> 2) & 1, (branch >> 1) & 1, branch & 1};
            const auto res = protocol::full_query_sim(addr, data, 2, ideal, heralds, {});
            if (quantum::overlap_fidelity(res.state, oracle) < 1.0 - 1e-10) {
                pass = false;
                detail << "full_query branch " << branch << " off target; ";
            }
        }
    }
    detail << format_double(timer.seconds()) << " s";
    report(7, "protocol exactness against brute-force oracles", pass, detail.str());
}

void criterion_8_filter_physics() {
    Timer timer;
    const auto ring = filter::RingGeometry::from_radius(g_cfg.get("r_resonator_um") * 1e-6, g_cfg.get("n_eff"),
                                                        g_cfg.get("n_g_pic"), g_cfg.omega_c());
    Rng rng(13);
    bool conserve = true;
    for (int it = 0; it < 1000 && conserve; ++it) {
        filter::CouplerSetting in;
        in.delta_phi = rng.uniform() * 2 * kPi;
        const auto mir = filter::make_mirror_coupler(rng.uniform() * 2 * kPi, ring);
        filter::RingGeometry tuned = ring;
        tuned.delta_phi_r = rng.uniform() * 2 * kPi;
        try {
            const auto r =
                filter::filter_response(g_cfg.omega_c() + (rng.uniform() - 0.5) * 4e12, in, mir, tuned);
            if (std::abs(std::norm(r.s_out) + std::norm(r.s_m) - 1.0) > 1e-9) conserve = false;
        } catch (const std::runtime_error&) {
        }
    }

    bool ridge = true;
    filter::RingGeometry bare = ring;
    bare.delta_phi_r = filter::bare_ring_shift(ring);
    for (double di : {0.35 * kPi, 0.60 * kPi, 0.95 * kPi}) {
        filter::CouplerSetting in;
        in.delta_phi = di;
        double best = -1.0, best_dm = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double dm = -kPi + 2 * kPi * i / 400.0;
            const auto mir = filter::make_mirror_coupler(dm, ring);
            double v = 0.0;
            try {
                v = std::norm(filter::filter_response(g_cfg.omega_c(), in, mir, bare).s_m);
            } catch (const std::runtime_error&) {
                continue;
            }
            if (v > best) {
                best = v;
                best_dm = dm;
            }
        }
        double residual = std::fmod(di + best_dm - kPi, 2 * kPi);
        if (residual > kPi) residual -= 2 * kPi;
        if (residual < -kPi) residual += 2 * kPi;
        if (std::abs(residual) > kPi / 200.0 + 1e-12) ridge = false;
    }

    filter::CouplerSetting in;
    in.delta_phi = 0.95 * kPi;
    const auto mir_setting = filter::make_mirror_coupler(0.05 * kPi, ring);
    const auto mir_routing = filter::make_mirror_coupler(0.0, ring);
    filter::RingGeometry tuned = ring;
    tuned.delta_phi_r = filter::tune_ring_resonance(in, mir_setting, ring);
    const double setting_width = filter::resonator_linewidth(in, mir_setting, tuned);
    tuned.delta_phi_r = filter::tune_ring_resonance(in, mir_routing, ring);
    const double routing_width = filter::resonator_linewidth(in, mir_routing, tuned);

    const bool pass = conserve && ridge && routing_width < setting_width;
    std::ostringstream detail;
    detail << "conservation " << (conserve ? "ok" : "broken") << ", ridge " << (ridge ? "ok" : "broken")
           << ", widths routing/setting " << format_double(routing_width) << "/" << format_double(setting_width)
           << " rad/s; " << format_double(timer.seconds()) << " s";
    report(8, "add-drop filter physics", pass, detail.str());
}

void criterion_9_teleport_scaling() {
    Timer timer;
    auto inputs = g_cfg.teleport_inputs();
    const std::uint64_t trials = 1000;

    auto sim_rate = [&](int n, double ratio) {
        const auto triple = optimized_triple(100.0, ratio);
        const auto [r_cav, r_m] = cavity::reflection_coefficients(triple);
        const auto cfg = teleport::make_teleport_config(n, r_cav, r_m, inputs);
        double total = 0.0;
        for (std::uint64_t t = 0; t < trials; ++t)
            total += teleport::simulate_query(cfg, Rng::stream(4242, (static_cast<std::uint64_t>(n) << 32) ^ t).next_u64());
        return static_cast<double>(trials) / total;
    };
    auto geo_rate = [&](int n, double ratio) {
        const auto triple = optimized_triple(100.0, ratio);
        const auto [r_cav, r_m] = cavity::reflection_coefficients(triple);
        return 1.0 / teleport::analytic_query_time(teleport::make_teleport_config(n, r_cav, r_m, inputs));
    };
    auto glm_rate = [&](int n, double ratio) {
        return glm::query_rate(g_cfg.tree_config(n), loss_for(optimized_triple(100.0, ratio)));
    };

    // crossover bracketing on the strongly over-coupled comparison curve;
    // both bracket ends must sit inside [1e2, 1e4]
    const double ratio0 = g_cfg.kappa_wg_ratio();
    double crossover = -1.0;
    bool bracket_ok = false;
    bool glm_was_faster = false;
    double prev_n_mem = 0.0;
    for (int n = 7; n <= 14; ++n) {
        const double tel = sim_rate(n, 0.995), glm_r = glm_rate(n, 0.995);
        const double n_mem = std::ldexp(1.0, n);
        if (glm_r > tel) {
            glm_was_faster = true;
            prev_n_mem = n_mem;
        } else if (glm_was_faster) {
            crossover = n_mem;
            bracket_ok = prev_n_mem >= 1e2 && crossover <= 1e4;
            break;
        }
    }
    const bool crossover_ok = bracket_ok;

    // absolute rate at 1e5 memories, strongly over-coupled
    const double rate_1e5 = sim_rate(17, 0.995);
    const bool khz_ok = rate_1e5 > 1000.0;

    // fitted roll-off exponent of the simulated/analytic ratio
    std::vector<double> xs, ys;
    for (int n = 4; n <= 15; ++n) {
        xs.push_back(std::log(std::ldexp(1.0, n - 1)));
        ys.push_back(std::log(sim_rate(n, ratio0) / geo_rate(n, ratio0)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double count = static_cast<double>(xs.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double b = g_cfg.get("fit_b");
    const bool slope_ok = std::abs(slope + b) <= 0.3;

    std::ostringstream detail;
    detail << "crossover N*=" << format_double(crossover) << "; rate(N=1e5, kwg/k=0.995)=" << format_double(rate_1e5)
           << " Hz; regressed exponent " << format_double(slope) << " vs -b=" << format_double(-b) << "; "
           << format_double(timer.seconds()) << " s";
    report(9, "teleportation-scheme scaling", crossover_ok && khz_ok && slope_ok, detail.str());
}

void criterion_10_decoherence() {
    Timer timer;
    const double t_en = g_cfg.t_e_to_n();
    teleport::CoherenceModel model{1.0, 0.01, teleport::calibrate_decoherence_constant(t_en)};
    const double anchor = teleport::decoherence_fidelity(1000.0, model, t_en);
    teleport::CoherenceModel improved{10.0, 0.1, model.calibration_constant};
    const double better = teleport::decoherence_fidelity(1000.0, improved, t_en);
    const double infidelity = 1.0 - teleport::physical_error_fidelity(10, 1e-4, teleport::ErrorMode::all_active);
    const bool pass = std::abs(anchor - 0.5) <= 0.1 && better > 0.9 && std::abs(infidelity - 0.0974) <= 5e-4;
    std::ostringstream detail;
    detail << "anchor F=" << format_double(anchor) << ", improved F=" << format_double(better)
           << ", physical-error infidelity " << format_double(infidelity) << "; " << format_double(timer.seconds())
           << " s";
    report(10, "decoherence and physical-error anchors", pass, detail.str());
}

void criterion_11_determinism() {
    Timer timer;
    auto make_csv = [&] {
        auto inputs = g_cfg.teleport_inputs();
        const std::array depths{4, 6, 8};
        const std::array couplings{0.98};
        SweepResult sweep = teleport::teleport_rate_curve(depths, couplings, 50, 7, inputs);
        const std::array c_grid{40.0, 100.0};
        const std::array k_grid{0.95, 0.98};
        SweepResult contour =
            protocol::fidelity_contour(c_grid, k_grid, {0.0}, g_cfg.kappa(), g_cfg.gamma(), g_cfg.omega_c());
        std::ostringstream csv;
        sweep.write_csv(csv);
        contour.write_csv(csv);
        return csv.str();
    };
    const std::string first = make_csv();
    const std::string second = make_csv();
    const bool pass = first == second && !first.empty();
    std::ostringstream detail;
    detail << first.size() << " bytes, rerun " << (pass ? "identical" : "differs") << "; "
           << format_double(timer.seconds()) << " s";
    report(11, "seeded reruns are byte-identical", pass, detail.str());
}

}  // namespace

int main() {
    std::printf("acceptance suite: cavity-assisted qRAM models\n");
    criterion_1_fano_limit();
    criterion_2_fidelity_contour();
    criterion_3_tradeoff();
    criterion_4_glm_rates();
    criterion_5_expected_time();
    criterion_6_ld_dominance();
    criterion_7_protocol_exactness();
    criterion_8_filter_physics();
    criterion_9_teleport_scaling();
    criterion_10_decoherence();
    criterion_11_determinism();
    if (g_failures == 0) {
        std::printf("all acceptance criteria hold\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
