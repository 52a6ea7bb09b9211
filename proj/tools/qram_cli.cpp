// qram: config-driven experiment runner for the cavity-assisted qRAM models.
// Every experiment writes deterministic CSV given a seed; `verify` runs the
// module invariant suites.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qram/adddrop_filter.hpp"
#include "qram/cavity_model.hpp"
#include "qram/config.hpp"
#include "qram/glm_analytics.hpp"
#include "qram/quantum_core.hpp"
#include "qram/rng.hpp"
#include "qram/sweep.hpp"
#include "qram/teleport_sim.hpp"
#include "qram/transfer_protocols.hpp"
#include "qram/verify.hpp"

namespace {

using namespace qram;
constexpr double kPi = std::numbers::pi;

struct RunOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000;
    int threads = 0;
    double delta_b = 0.0;
    int depth = 2;
    std::string address = "uniform";
    std::string data = "0110";
    bool dump_config = false;
};

RunConfig load_config(const RunOptions& opts) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig() : RunConfig::load(opts.config_path);
    cfg.apply_env_overrides();
    return cfg;
}

std::string hash_hex(const RunConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(cfg.hash()));
    return buf;
}

void stamp(SweepResult& sweep, const RunConfig& cfg, const RunOptions& opts) {
    sweep.add_metadata("config_hash", hash_hex(cfg));
    sweep.add_metadata("seed", std::to_string(opts.seed));
}

void run_in_pool(std::size_t jobs, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return v;
}

cavity::ReflectionTriple optimized_triple(const RunConfig& cfg, double coupling, double delta_b) {
    const auto params = cavity::CavityParams::from_cooperativity(cfg.cooperativity(), cfg.kappa(), cfg.gamma(),
                                                                 coupling * cfg.kappa(), cfg.omega_c());
    auto triple = cavity::reflection_triple(params, {delta_b}, {-1.0, 0.0});
    const double m = protocol::optimal_mirror_modulus(triple.r_on, triple.r_off);
    triple.r_m = {-m, 0.0};
    return triple;
}

int run_fig3(const RunConfig& cfg, const RunOptions& opts) {
    const auto c_grid = linspace(2.0, 100.0, 50);
    const auto k_grid = linspace(0.80, 1.0, 50);
    std::vector<SweepResult> parts(c_grid.size());
    run_in_pool(c_grid.size(), opts.threads, [&](std::size_t i) {
        const std::array one{c_grid[i]};
        parts[i] = protocol::fidelity_contour(one, k_grid, {opts.delta_b}, cfg.kappa(), cfg.gamma(), cfg.omega_c());
    });
    SweepResult out;
    out.name = "fig3_fidelity_contour";
    out.columns = parts.front().columns;
    for (auto& p : parts)
        for (auto& row : p.rows) out.rows.push_back(std::move(row));
    stamp(out, cfg, opts);
    out.add_metadata("delta_b", format_double(opts.delta_b));
    out.save(opts.out_dir);
    return 0;
}

int run_fig4a(const RunConfig& cfg, const RunOptions& opts) {
    std::vector<int> depths;
    for (int n = 1; n <= 10; ++n) depths.push_back(n);
    const std::array couplings{0.95, 0.965, 0.98, 0.995};
    SweepResult out = glm::rate_curve(depths, couplings, cfg.cooperativity(), cfg.kappa(), cfg.gamma(), cfg.omega_c(),
                                      cfg.tree_config(1), cfg.loss_model());
    out.name = "fig4a_rate_curve";
    stamp(out, cfg, opts);
    out.save(opts.out_dir);
    return 0;
}

int run_fig4c(const RunConfig& cfg, const RunOptions& opts) {
    SweepResult out;
    out.name = "fig4c_tradeoff";
    out.columns = {"kappa_wg_over_kappa", "rate_hz", "rate_no_ld_hz", "fidelity"};
    const auto grid = linspace(0.90, 0.995, 39);
    std::vector<std::vector<double>> rows(grid.size());
    run_in_pool(grid.size(), opts.threads, [&](std::size_t i) {
        const auto triple = optimized_triple(cfg, grid[i], 0.0);
        const auto [r_cav, r_m] = cavity::reflection_coefficients(triple);
        glm::LossModel loss = cfg.loss_model();
        loss.r_cav = r_cav;
        loss.r_m = r_m;
        const auto tree = cfg.tree_config(6);
        rows[i] = {grid[i], glm::query_rate(tree, loss), glm::query_rate_no_loss_detection(tree, loss),
                   protocol::transfer_fidelity(triple).mean};
    });
    out.rows = std::move(rows);
    stamp(out, cfg, opts);
    out.save(opts.out_dir);
    return 0;
}

int run_fig5(const RunConfig& cfg, const RunOptions& opts) {
    std::vector<int> depths;
    for (int n = 4; n <= 17; ++n) depths.push_back(n);
    const std::array couplings{0.95, 0.965, 0.98, 0.995};
    auto inputs = cfg.teleport_inputs();
    std::vector<SweepResult> parts(couplings.size());
    run_in_pool(couplings.size(), opts.threads, [&](std::size_t i) {
        const std::array one{couplings[i]};
        parts[i] = teleport::teleport_rate_curve(depths, one, opts.trials, opts.seed, inputs);
    });
    SweepResult out;
    out.name = "fig5_scheme_comparison";
    out.columns = parts.front().columns;
    for (auto& p : parts)
        for (auto& row : p.rows) out.rows.push_back(std::move(row));
    stamp(out, cfg, opts);
    out.add_metadata("trials", std::to_string(opts.trials));
    out.add_metadata("decoherence_calibration", format_double(inputs.coherence.calibration_constant));
    out.save(opts.out_dir);

    std::ofstream sidecar(std::filesystem::path(opts.out_dir) / "fig5_scheme_comparison.meta.txt");
    sidecar << "seed " << opts.seed << "\ntrials " << opts.trials << "\ncalibration_constant "
            << format_double(inputs.coherence.calibration_constant) << "\nconfig_hash " << hash_hex(cfg) << "\n";
    return 0;
}

int run_figS1(const RunConfig& cfg, const RunOptions& opts) {
    const auto params = cavity::CavityParams::from_cooperativity(cfg.cooperativity(), cfg.kappa(), cfg.gamma(),
                                                                 cfg.kappa_wg_ratio() * cfg.kappa(), cfg.omega_c());
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(params.omega_c + (i / 1000.0 - 1.0) * 3.0 * params.kappa);
    for (auto spin : {cavity::Spin::down, cavity::Spin::up}) {
        SweepResult sweep = cavity::fano_sweep(params, spin, grid);
        sweep.name = "figS1_" + sweep.name;
        stamp(sweep, cfg, opts);
        sweep.save(opts.out_dir);
    }
    return 0;
}

int run_figS2(const RunConfig& cfg, const RunOptions& opts) {
    const auto ring = filter::RingGeometry::from_radius(cfg.get("r_resonator_um") * 1e-6, cfg.get("n_eff"),
                                                        cfg.get("n_g_pic"), cfg.omega_c());
    const auto grid_i = linspace(0.0, 2.0 * kPi, 201);
    const auto grid_m = linspace(-kPi, kPi, 201);
    SweepResult out = filter::routing_phase_condition(grid_i, grid_m, ring);
    out.name = "figS2_routing_phase_condition";
    stamp(out, cfg, opts);
    out.save(opts.out_dir);
    return 0;
}

int run_figS3(const RunConfig& cfg, const RunOptions& opts) {
    const auto ring = filter::RingGeometry::from_radius(cfg.get("r_resonator_um") * 1e-6, cfg.get("n_eff"),
                                                        cfg.get("n_g_pic"), cfg.omega_c());
    SweepResult out;
    out.name = "figS3_linewidth";
    out.columns = {"dphi_i",          "setting_kappa_rad_s", "setting_fwhm_ghz", "routing_kappa_rad_s",
                   "routing_fwhm_ghz"};
    const auto grid = linspace(0.55 * kPi, 0.99 * kPi, 45);
    std::vector<std::vector<double>> rows(grid.size());
    run_in_pool(grid.size(), opts.threads, [&](std::size_t i) {
        filter::CouplerSetting in;
        in.delta_phi = grid[i];
        const auto mir_setting = filter::make_mirror_coupler(kPi - grid[i], ring);
        const auto mir_routing = filter::make_mirror_coupler(0.0, ring);
        filter::RingGeometry tuned = ring;
        tuned.delta_phi_r = filter::tune_ring_resonance(in, mir_setting, ring);
        const double setting = filter::resonator_linewidth(in, mir_setting, tuned);
        tuned.delta_phi_r = filter::tune_ring_resonance(in, mir_routing, ring);
        const double routing = filter::resonator_linewidth(in, mir_routing, tuned);
        rows[i] = {grid[i], setting, setting / (2.0 * kPi * 1e9), routing, routing / (2.0 * kPi * 1e9)};
    });
    out.rows = std::move(rows);
    stamp(out, cfg, opts);
    out.save(opts.out_dir);
    return 0;
}

int run_figS6_demo(const RunConfig& cfg, const RunOptions& opts) {
    const auto triple = optimized_triple(cfg, cfg.kappa_wg_ratio(), 0.0);
    const cavity::ReflectionTriple ideal{{1, 0}, {-1, 0}, {-1, 0}};
    SweepResult out;
    out.name = "figS6_protocol_demo";
    out.columns = {"stage", "herald_port", "probability", "fidelity"};

    const double inv = 1.0 / std::sqrt(2.0);
    quantum::StateVector phi_plus(2, {inv, 0, 0, inv});
    int stage = 0;
    for (const auto* t : {&ideal, &triple}) {
        const auto bell = protocol::bell_create(*t, *t);
        out.rows.push_back({static_cast<double>(stage), 0, bell.omega0.branch_probability,
                            quantum::overlap_fidelity(bell.omega0.post_state, phi_plus)});
        out.rows.push_back({static_cast<double>(stage), 1, bell.omega1.branch_probability,
                            quantum::overlap_fidelity(bell.omega1.post_state, phi_plus)});
        ++stage;
    }
    // address teleportation demo on the 2-level tree, sampled branch
    std::vector<protocol::cplx> addr{0.5, 0.5, 0.5, 0.5};
    Rng rng(opts.seed);
    const std::array draws{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    const auto tree = protocol::teleport_addresses(addr, 2, draws);
    const auto oracle = protocol::teleported_tree_oracle(addr, 2);
    out.rows.push_back({static_cast<double>(stage), -1, 1.0, quantum::overlap_fidelity(tree, oracle)});
    stamp(out, cfg, opts);
    out.save(opts.out_dir);
    std::cout << "bell/teleport demo fidelities written to figS6_protocol_demo.csv\n";
    return 0;
}

int run_figS7(const RunConfig& cfg, const RunOptions& opts) {
    SweepResult out;
    out.name = "figS7_decoherence";
    out.columns = {"N_memories", "fq_base_times", "fq_tenfold_times"};
    const auto coherence = cfg.coherence_model();
    teleport::CoherenceModel improved = coherence;
    improved.t2_nuclear *= 10.0;
    improved.t2_electron *= 10.0;
    for (int n = 2; n <= 14; ++n) {
        const double mem = std::ldexp(1.0, n);
        out.rows.push_back({mem, teleport::decoherence_fidelity(mem, coherence, cfg.t_e_to_n()),
                            teleport::decoherence_fidelity(mem, improved, cfg.t_e_to_n())});
    }
    stamp(out, cfg, opts);
    out.add_metadata("calibration_constant", format_double(coherence.calibration_constant));
    out.save(opts.out_dir);
    return 0;
}

int run_query_demo(const RunConfig& cfg, const RunOptions& opts) {
    const int n = opts.depth;
    const std::size_t cells = std::size_t{1} << n;
    if (opts.data.size() != cells) {
        std::cerr << "query-demo: --data needs exactly " << cells << " bits\n";
        return 2;
    }
    std::vector<int> data;
    for (char c : opts.data) data.push_back(c == '1' ? 1 : 0);
    std::vector<protocol::cplx> addr(cells, 0.0);
    if (opts.address == "uniform") {
        for (auto& a : addr) a = 1.0 / std::sqrt(static_cast<double>(cells));
    } else {
        const std::size_t j = std::stoul(opts.address);
        if (j >= cells) {
            std::cerr << "query-demo: address index out of range\n";
            return 2;
        }
        addr[j] = 1.0;
    }

    Rng rng(opts.seed);
    std::vector<double> draws;
    for (int i = 0; i < 4 * n + 4; ++i) draws.push_back(rng.uniform());
    const auto triple = optimized_triple(cfg, cfg.kappa_wg_ratio(), 0.0);
    const cavity::ReflectionTriple ideal{{1, 0}, {-1, 0}, {-1, 0}};
    const auto result = protocol::full_query_sim(addr, data, n, ideal, {}, draws);
    const auto oracle = protocol::query_output_oracle(addr, data, n);

    std::cout << "query-demo: depth " << n << ", address " << opts.address << ", data " << opts.data << "\n";
    std::cout << "ideal-cavity output fidelity to the target state: "
              << format_double(quantum::overlap_fidelity(result.state, oracle)) << "\n";
    std::cout << "branch probability of the sampled herald sequence: " << format_double(result.probability) << "\n";
    std::cout << "address  bus  |amplitude|^2\n";
    const int node_qubits = protocol::tree_node_count(n);
    for (std::uint64_t idx = 0; idx < result.state.dim(); ++idx) {
        const double p = std::norm(result.state.amplitude(idx));
        if (p < 1e-12) continue;
        const std::uint64_t j = idx >> (node_qubits + 1);
        const int bus = static_cast<int>(idx & 1);
        std::printf("%7llu  %3d  %.6f\n", static_cast<unsigned long long>(j), bus, p);
    }

    SweepResult out;
    out.name = "query_demo";
    out.columns = {"address", "bus", "probability"};
    for (std::uint64_t idx = 0; idx < result.state.dim(); ++idx) {
        const double p = std::norm(result.state.amplitude(idx));
        if (p < 1e-12) continue;
        out.rows.push_back({static_cast<double>(idx >> (node_qubits + 1)), static_cast<double>(idx & 1), p});
    }
    stamp(out, cfg, opts);
    const auto fid = protocol::transfer_fidelity(triple);
    out.add_metadata("single_setting_fidelity", format_double(fid.mean));
    out.save(opts.out_dir);
    return 0;
}

int run_verify(const RunConfig& cfg, const std::string& suite, std::uint64_t seed) {
    const bool full = suite == "full";
    const auto results = verify::run_invariant_suite(cfg, full, seed);
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "ok   " : "FAIL ") << r.module << ": " << r.invariant;
        if (!r.passed && !r.detail.empty()) std::cout << " [" << r.detail << "]";
        std::cout << "\n";
        if (!r.passed) ++failures;
    }
    std::cout << results.size() - static_cast<std::size_t>(failures) << "/" << results.size() << " invariants hold\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity-assisted qRAM simulator and analysis toolkit"};
    app.require_subcommand(1);

    RunOptions opts;
    std::string experiment;
    std::string suite = "fast";

    auto* run = app.add_subcommand("run", "run a named experiment and write CSV data");
    run->add_option("experiment", experiment,
                    "one of: fig3 fig4a fig4c fig5 figS1 figS2 figS3 figS6-demo figS7 query-demo")
        ->required();
    run->add_option("--config", opts.config_path, "config file path");
    run->add_option("--out", opts.out_dir, "output directory");
    run->add_option("--seed", opts.seed, "RNG seed");
    run->add_option("--trials", opts.trials, "Monte Carlo trials per grid point");
    run->add_option("--threads", opts.threads, "worker pool size (0 = hardware threads)");
    run->add_option("--deltaB", opts.delta_b, "fractional magnetic-field deviation (fig3)");
    run->add_option("--depth", opts.depth, "tree depth (query-demo)");
    run->add_option("--address", opts.address, "'uniform' or a cell index (query-demo)");
    run->add_option("--data", opts.data, "database bits, one per cell (query-demo)");
    run->add_flag("--dump-config", opts.dump_config, "print the effective config and exit");

    auto* verify_cmd = app.add_subcommand("verify", "run the module invariant suites");
    verify_cmd->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    verify_cmd->add_option("--config", opts.config_path, "config file path");
    verify_cmd->add_option("--seed", opts.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = load_config(opts);
        if (verify_cmd->parsed()) return run_verify(cfg, suite, opts.seed);

        if (opts.dump_config) {
            cfg.dump(std::cout);
            return 0;
        }
        if (experiment == "fig3") return run_fig3(cfg, opts);
        if (experiment == "fig4a") return run_fig4a(cfg, opts);
        if (experiment == "fig4c") return run_fig4c(cfg, opts);
        if (experiment == "fig5") return run_fig5(cfg, opts);
        if (experiment == "figS1") return run_figS1(cfg, opts);
        if (experiment == "figS2") return run_figS2(cfg, opts);
        if (experiment == "figS3") return run_figS3(cfg, opts);
        if (experiment == "figS6-demo") return run_figS6_demo(cfg, opts);
        if (experiment == "figS7") return run_figS7(cfg, opts);
        if (experiment == "query-demo") return run_query_demo(cfg, opts);
        std::cerr << "unknown experiment '" << experiment << "'\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
