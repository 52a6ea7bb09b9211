#include "qram/transfer_protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace qram::protocol {

using quantum::ApplyResult;
using quantum::ControlTerm;
using quantum::Gate;

namespace {

constexpr double kNormTol = 1e-9;

// Setting-mode interaction over (photon, spin): the omega0 component reflects
// off the mirror arm, omega1 off the cavity with a spin-dependent amplitude.
Gate cavity_cz(const ReflectionTriple& t) { return Gate::diagonal2(t.r_m, t.r_m, t.r_off, t.r_on); }

StateVector plus_state() {
    StateVector s = StateVector::basis_state(1, 0);
    return quantum::apply(s, Gate::hadamard(), {0}).state;
}

StateVector qubit_state(cplx a, cplx b) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTol)
        throw std::invalid_argument("qubit state is not normalized");
    return StateVector(1, {a, b});
}

}  // namespace

std::array<std::pair<cplx, cplx>, 6> six_bloch_states() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{1.0, 0.0},
             {0.0, 1.0},
             {s, s},
             {s, -s},
             {s, cplx{0.0, s}},
             {s, cplx{0.0, -s}}}};
}

SettingResult setting_step(cplx alpha, cplx beta, const ReflectionTriple& triple) {
    const std::array factors{qubit_state(alpha, beta), plus_state()};
    StateVector joint = StateVector::product(factors);  // qubit 0 photon, qubit 1 spin

    const ApplyResult reflected = quantum::apply(joint, cavity_cz(triple), {0, 1});
    const double survival = reflected.branch_probability;

    SettingResult result;
    result.loss_probability = 1.0 - survival;
    if (survival <= 0.0) {
        result.omega0.detected_port = HeraldPort::omega0;
        result.omega1.detected_port = HeraldPort::omega1;
        return result;
    }

    const StateVector mixed = quantum::apply(reflected.state, Gate::hadamard(), {0}).state;
    for (int port = 0; port < 2; ++port) {
        auto [p, projected] = quantum::project(mixed, 0, port);
        HeraldOutcome& out = port == 0 ? result.omega0 : result.omega1;
        out.detected_port = port == 0 ? HeraldPort::omega0 : HeraldPort::omega1;
        out.branch_probability = survival * p;
        if (p <= 0.0) {
            out.post_state = StateVector::basis_state(1, 0);
            continue;
        }
        StateVector spin = quantum::drop_qubit(projected, 0, port);
        spin = quantum::apply(spin, Gate::hadamard(), {0}).state;
        out.corrections_applied.push_back("H");
        if (port == 1) {
            spin = quantum::apply(spin, Gate::pauli_z(), {0}).state;
            out.corrections_applied.push_back("Z");
        }
        out.post_state = std::move(spin);
    }
    return result;
}

SixStateFidelity transfer_fidelity(const ReflectionTriple& triple) {
    SixStateFidelity result;
    const auto states = six_bloch_states();
    double sum = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto [a, b] = states[i];
        const SettingResult sr = setting_step(a, b, triple);
        const double herald = sr.omega0.branch_probability + sr.omega1.branch_probability;
        if (herald <= 1e-15) throw std::domain_error("transfer_fidelity: all herald probabilities vanish");
        const StateVector target = qubit_state(a, b);
        const double f0 = quantum::overlap_fidelity(sr.omega0.post_state, target);
        const double f1 = quantum::overlap_fidelity(sr.omega1.post_state, target);
        result.per_state[i] = (sr.omega0.branch_probability * f0 + sr.omega1.branch_probability * f1) / herald;
        sum += result.per_state[i];
    }
    result.mean = sum / 6.0;
    return result;
}

double optimal_mirror_modulus(cplx r_on, cplx r_off, double tol) {
    const auto mean_at = [&](double m) {
        return transfer_fidelity(ReflectionTriple{r_on, r_off, cplx{-m, 0.0}}).mean;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = mean_at(c), fd = mean_at(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = mean_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = mean_at(d);
        }
    }
    return (a + b) / 2.0;
}

SweepResult fidelity_contour(std::span<const double> cooperativity_grid, std::span<const double> coupling_grid,
                             FieldDeviation dev, double kappa, double gamma, double omega_c) {
    SweepResult out;
    out.name = "fidelity_contour";
    out.columns = {"cooperativity", "kappa_wg_over_kappa", "delta_b", "r_m_opt", "mean_fidelity"};
    out.rows.reserve(cooperativity_grid.size() * coupling_grid.size());
    for (double c : cooperativity_grid) {
        for (double ratio : coupling_grid) {
            const CavityParams params = CavityParams::from_cooperativity(c, kappa, gamma, ratio * kappa, omega_c);
            ReflectionTriple triple = cavity::reflection_triple(params, dev, cplx{-1.0, 0.0});
            const double m = optimal_mirror_modulus(triple.r_on, triple.r_off);
            triple.r_m = cplx{-m, 0.0};
            out.rows.push_back({c, ratio, dev.delta_b, m, transfer_fidelity(triple).mean});
        }
    }
    return out;
}

std::pair<cplx, cplx> routing_step(double net_phase) {
    return {std::cos(net_phase / 2.0), -std::sin(net_phase / 2.0)};
}

std::pair<cplx, cplx> routing_output(cplx cavity_amp, cplx mirror_amp) {
    return {(cavity_amp + mirror_amp) / 2.0, cplx{0.0, 1.0} * (cavity_amp - mirror_amp) / 2.0};
}

SpinToPhotonResult spin_to_photon(cplx alpha, cplx beta, const ReflectionTriple& triple) {
    // qubit 0: output photon, qubit 1: spin, qubit 2: readout photon
    const std::array factors{plus_state(), qubit_state(alpha, beta), StateVector::basis_state(1, 0)};
    StateVector joint = StateVector::product(factors);

    double survival = 1.0;
    auto r1 = quantum::apply(joint, cavity_cz(triple), {0, 1});
    survival *= r1.branch_probability;
    StateVector s = std::move(r1.state);
    s = quantum::apply(s, Gate::hadamard(), {1}).state;
    s = quantum::apply(s, Gate::hadamard(), {0}).state;
    s = quantum::apply(s, Gate::hadamard(), {2}).state;  // readout photon to |+>
    auto r2 = quantum::apply(s, cavity_cz(triple), {2, 1});
    survival *= r2.branch_probability;
    s = std::move(r2.state);
    s = quantum::apply(s, Gate::hadamard(), {2}).state;

    SpinToPhotonResult result;
    result.loss_probability = 1.0 - survival;
    for (int port = 0; port < 2; ++port) {
        auto [p, projected] = quantum::project(s, 2, port);
        HeraldOutcome& out = port == 0 ? result.omega0 : result.omega1;
        out.detected_port = port == 0 ? HeraldPort::omega0 : HeraldPort::omega1;
        out.branch_probability = survival * p;
        if (p <= 0.0) {
            out.post_state = StateVector::basis_state(1, 0);
            continue;
        }
        StateVector reduced = quantum::drop_qubit(projected, 2, port);
        reduced = quantum::drop_qubit(reduced, 1, port);  // spin projects with the herald
        if (port == 1) {
            reduced = quantum::apply(reduced, Gate::pauli_z(), {0}).state;
            out.corrections_applied.push_back("Z");
        }
        out.post_state = std::move(reduced);
    }
    return result;
}

BellResult bell_create(const ReflectionTriple& triple_a, const ReflectionTriple& triple_b) {
    const std::array factors{plus_state(), plus_state(), plus_state()};
    StateVector joint = StateVector::product(factors);  // photon, spin A, spin B

    double survival = 1.0;
    auto ra = quantum::apply(joint, cavity_cz(triple_a), {0, 1});
    survival *= ra.branch_probability;
    auto rb = quantum::apply(ra.state, cavity_cz(triple_b), {0, 2});
    survival *= rb.branch_probability;
    StateVector s = quantum::apply(rb.state, Gate::hadamard(), {0}).state;

    BellResult result;
    result.loss_probability = 1.0 - survival;
    for (int port = 0; port < 2; ++port) {
        auto [p, projected] = quantum::project(s, 0, port);
        HeraldOutcome& out = port == 0 ? result.omega0 : result.omega1;
        out.detected_port = port == 0 ? HeraldPort::omega0 : HeraldPort::omega1;
        out.branch_probability = survival * p;
        if (p <= 0.0) {
            out.post_state = StateVector::basis_state(2, 0);
            continue;
        }
        StateVector spins = quantum::drop_qubit(projected, 0, port);
        if (port == 1) {
            spins = quantum::apply(spins, Gate::pauli_x(), {1}).state;
            out.corrections_applied.push_back("X on second spin");
        }
        out.post_state = std::move(spins);
    }
    return result;
}

SwapResult broker_memory_swap(const StateVector& state, const NodeState& node, SwapDirection direction,
                              double random_draw) {
    if (node.broker == node.memory) throw std::invalid_argument("broker_memory_swap: broker equals memory");
    const int source = direction == SwapDirection::to_memory ? node.broker : node.memory;
    const int target = direction == SwapDirection::to_memory ? node.memory : node.broker;
    if (quantum::probability_of_outcome(state, target, 1) > 1e-9)
        throw std::invalid_argument("broker_memory_swap: swap target is not initialized to |0>");

    StateVector s = quantum::apply(state, Gate::cnot(), {source, target}).state;
    auto [record, measured] = quantum::measure_x(s, source, random_draw);
    if (record.outcome == 1) measured = quantum::apply(measured, Gate::pauli_z(), {target}).state;
    return {std::move(measured), record};
}

StateVector ghz_link(const StateVector& state, std::span<const int> left_nuclei, std::span<const int> right_nuclei,
                     std::pair<int, int> bridge_bell, double draw_left, double draw_right) {
    if (left_nuclei.empty() || right_nuclei.empty()) throw std::invalid_argument("ghz_link: empty fragment");
    for (int q : left_nuclei)
        for (int r : right_nuclei)
            if (q == r) throw std::invalid_argument("ghz_link: fragments overlap");
    if (bridge_bell.first == bridge_bell.second) throw std::invalid_argument("ghz_link: degenerate bridge");

    StateVector s = quantum::apply(state, Gate::cnot(), {left_nuclei.back(), bridge_bell.first}).state;
    auto [left_rec, after_left] = quantum::measure(s, bridge_bell.first, draw_left);
    s = std::move(after_left);
    if (left_rec.outcome == 1) s = quantum::apply(s, Gate::pauli_x(), {bridge_bell.second}).state;

    s = quantum::apply(s, Gate::cnot(), {right_nuclei.front(), bridge_bell.second}).state;
    auto [right_rec, after_right] = quantum::measure(s, bridge_bell.second, draw_right);
    s = std::move(after_right);
    if (right_rec.outcome == 1)
        for (int q : right_nuclei) s = quantum::apply(s, Gate::pauli_x(), {q}).state;
    return s;
}

namespace {

int layer_width(int layer) { return 1 << (layer - 1); }

struct TeleportLayout {
    int depth;
    int anc(int layer) const { return depth + (layer - 1) + (layer_width(layer) - 1); }
    int node(int layer, int pos) const { return anc(layer) + 1 + pos; }
    int total() const { return depth + depth + ((1 << depth) - 1); }
};

StateVector ghz_state(int qubits) {
    std::vector<cplx> amp(std::uint64_t{1} << qubits, cplx{0.0, 0.0});
    const double s = 1.0 / std::sqrt(2.0);
    amp.front() = s;
    amp.back() = s;
    return StateVector(qubits, std::move(amp));
}

}  // namespace

TeleportBranch teleport_addresses_branch(std::span<const cplx> address_amplitudes, int depth,
                                         std::span<const int> forced_outcomes) {
    if (depth < 1) throw std::invalid_argument("teleport_addresses: depth must be >= 1");
    if (address_amplitudes.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("teleport_addresses: amplitude count != 2^depth");
    if (forced_outcomes.size() != 2 * static_cast<std::size_t>(depth))
        throw std::invalid_argument("teleport_addresses: need two outcomes per layer");

    const TeleportLayout lay{depth};
    std::vector<StateVector> factors;
    factors.push_back(StateVector(depth, {address_amplitudes.begin(), address_amplitudes.end()}));
    for (int i = 1; i <= depth; ++i) factors.push_back(ghz_state(1 + layer_width(i)));
    StateVector s = StateVector::product(factors);

    TeleportBranch branch;
    branch.probability = 1.0;
    for (int i = 1; i <= depth; ++i) {
        const int reg = i - 1;
        const int anc = lay.anc(i);
        s = quantum::apply(s, Gate::cnot(), {reg, anc}).state;
        s = quantum::apply(s, Gate::hadamard(), {reg}).state;

        const int x = forced_outcomes[2 * static_cast<std::size_t>(i - 1)];
        const int z = forced_outcomes[2 * static_cast<std::size_t>(i - 1) + 1];
        auto [px, sx] = quantum::project(s, anc, x);
        auto [pz, sz] = quantum::project(sx, reg, z);
        branch.probability *= px * pz;
        branch.bsm_outcomes.push_back(x);
        branch.bsm_outcomes.push_back(z);
        if (px * pz <= 0.0) {
            branch.tree_state = StateVector::basis_state(1, 0);
            branch.probability = 0.0;
            return branch;
        }
        s = std::move(sz);
        if (x == 1)
            for (int p = 0; p < layer_width(i); ++p) s = quantum::apply(s, Gate::pauli_x(), {lay.node(i, p)}).state;
        if (z == 1) s = quantum::apply(s, Gate::pauli_z(), {lay.node(i, 0)}).state;
    }

    // peel off the measured registers and ancillas, leaving nodes layer-major
    for (int i = depth; i >= 1; --i) {
        const int x = branch.bsm_outcomes[2 * static_cast<std::size_t>(i - 1)];
        s = quantum::drop_qubit(s, lay.anc(i), x);
    }
    for (int i = depth; i >= 1; --i) {
        const int z = branch.bsm_outcomes[2 * static_cast<std::size_t>(i - 1) + 1];
        s = quantum::drop_qubit(s, i - 1, z);
    }
    branch.tree_state = std::move(s);
    return branch;
}

StateVector teleport_addresses(std::span<const cplx> address_amplitudes, int depth, std::span<const double> draws) {
    if (draws.size() < 2 * static_cast<std::size_t>(depth))
        throw std::invalid_argument("teleport_addresses: need two draws per layer");
    // sample the BSM outcomes layer by layer using the exact branch probabilities
    std::vector<int> outcomes;
    outcomes.reserve(2 * static_cast<std::size_t>(depth));
    const TeleportLayout lay{depth};
    std::vector<StateVector> factors;
    factors.push_back(StateVector(depth, {address_amplitudes.begin(), address_amplitudes.end()}));
    for (int i = 1; i <= depth; ++i) factors.push_back(ghz_state(1 + layer_width(i)));
    StateVector s = StateVector::product(factors);
    for (int i = 1; i <= depth; ++i) {
        const int reg = i - 1;
        const int anc = lay.anc(i);
        s = quantum::apply(s, Gate::cnot(), {reg, anc}).state;
        s = quantum::apply(s, Gate::hadamard(), {reg}).state;
        auto [xr, sx] = quantum::measure(s, anc, draws[2 * static_cast<std::size_t>(i - 1)]);
        auto [zr, sz] = quantum::measure(sx, reg, draws[2 * static_cast<std::size_t>(i - 1) + 1]);
        s = std::move(sz);
        outcomes.push_back(xr.outcome);
        outcomes.push_back(zr.outcome);
        if (xr.outcome == 1)
            for (int p = 0; p < layer_width(i); ++p) s = quantum::apply(s, Gate::pauli_x(), {lay.node(i, p)}).state;
        if (zr.outcome == 1) s = quantum::apply(s, Gate::pauli_z(), {lay.node(i, 0)}).state;
    }
    for (int i = depth; i >= 1; --i) s = quantum::drop_qubit(s, lay.anc(i), outcomes[2 * static_cast<std::size_t>(i - 1)]);
    for (int i = depth; i >= 1; --i)
        s = quantum::drop_qubit(s, i - 1, outcomes[2 * static_cast<std::size_t>(i - 1) + 1]);
    return s;
}

StateVector teleported_tree_oracle(std::span<const cplx> address_amplitudes, int depth) {
    const int nodes = tree_node_count(depth);
    std::vector<cplx> amp(std::uint64_t{1} << nodes, cplx{0.0, 0.0});
    for (std::uint64_t j = 0; j < address_amplitudes.size(); ++j) {
        std::uint64_t index = 0;
        int offset = 0;
        for (int i = 1; i <= depth; ++i) {
            const int bit = static_cast<int>((j >> (depth - i)) & 1u);
            for (int p = 0; p < layer_width(i); ++p) {
                if (bit) index |= std::uint64_t{1} << (nodes - 1 - (offset + p));
            }
            offset += layer_width(i);
        }
        amp[index] += address_amplitudes[j];
    }
    StateVector s(nodes, std::move(amp));
    s.normalize();
    return s;
}

int tree_node_count(int depth) { return (1 << depth) - 1; }

int tree_node_index(int layer, int position) { return (layer_width(layer) - 1) + position; }

namespace {

struct QueryLayout {
    int depth;
    int node(int layer, int pos) const { return depth + tree_node_index(layer, pos); }
    int bus() const { return depth + tree_node_count(depth); }
    int anc() const { return bus() + 1; }
    int total() const { return anc() + 1; }

    std::vector<ControlTerm> ancestors(int layer, int pos) const {
        std::vector<ControlTerm> c;
        for (int j = 1; j < layer; ++j)
            c.push_back({node(j, pos >> (layer - j)), (pos >> (layer - 1 - j)) & 1});
        return c;
    }
};

class HeraldSequencer {
  public:
    HeraldSequencer(std::span<const int> forced, std::span<const double> draws) : forced_(forced), draws_(draws) {}

    // projects `qubit` onto the next herald outcome; returns (outcome, prob)
    std::pair<int, double> consume(StateVector& s, int qubit) {
        if (!forced_.empty()) {
            if (index_ >= forced_.size()) throw std::invalid_argument("full_query_sim: not enough forced heralds");
            const int outcome = forced_[index_++];
            auto [p, projected] = quantum::project(s, qubit, outcome);
            if (p <= 0.0) return {outcome, 0.0};
            s = std::move(projected);
            return {outcome, p};
        }
        if (index_ >= draws_.size()) throw std::invalid_argument("full_query_sim: not enough random draws");
        auto [rec, measured] = quantum::measure(s, qubit, draws_[index_++]);
        s = std::move(measured);
        return {rec.outcome, rec.probability};
    }

  private:
    std::span<const int> forced_;
    std::span<const double> draws_;
    std::size_t index_ = 0;
};

}  // namespace

QueryResult full_query_sim(std::span<const cplx> address_amplitudes, std::span<const int> data_bits, int depth,
                           const ReflectionTriple& triple, std::span<const int> forced_heralds,
                           std::span<const double> draws) {
    if (depth < 1 || depth > 3) throw std::length_error("full_query_sim: depth must be in [1,3]");
    if (address_amplitudes.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("full_query_sim: amplitude count != 2^depth");
    if (data_bits.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("full_query_sim: data cell count != 2^depth");

    const QueryLayout lay{depth};
    const Gate cz = cavity_cz(triple);
    const Gate h = Gate::hadamard();
    // round-trip routing weights per port (conjugate-pair traversals)
    const double w_down = std::norm((triple.r_off + triple.r_m) / 2.0);
    const double w_up = std::norm((triple.r_on - triple.r_m) / 2.0);
    const bool ideal_routing = std::abs(w_down - 1.0) < 1e-14 && std::abs(w_up - 1.0) < 1e-14;
    const Gate routing_weight = Gate::diagonal1(w_down, w_up);

    const std::array factors{StateVector(depth, {address_amplitudes.begin(), address_amplitudes.end()}),
                             StateVector::basis_state(lay.total() - depth, 0)};
    StateVector s = StateVector::product(factors);

    QueryResult result;
    result.probability = 1.0;
    HeraldSequencer heralds(forced_heralds, draws);

    const auto charge = [&](double p, const std::string& stage, int outcome) {
        result.probability *= p;
        result.trace.push_back({stage, outcome, p});
        if (p <= 0.0) result.lost = true;
    };

    const auto routing_pass = [&](int through_layers, const std::string& stage) {
        if (ideal_routing) return;
        for (int j = 1; j <= through_layers; ++j) {
            for (int p = 0; p < (1 << (j - 1)); ++p) {
                const auto controls = lay.ancestors(j, p);
                auto r = quantum::apply_controlled(s, routing_weight, std::array{lay.node(j, p)}, controls);
                s = std::move(r.state);
                if (r.branch_probability < 1.0) charge(r.branch_probability, stage + "_route", -1);
            }
        }
    };

    // forward pass: set layer i from register i
    for (int i = 1; i <= depth; ++i) {
        const int reg = i - 1;
        routing_pass(i - 1, "set_layer_" + std::to_string(i));
        for (int p = 0; p < (1 << (i - 1)); ++p) {
            const auto controls = lay.ancestors(i, p);
            const int node = lay.node(i, p);
            s = quantum::apply_controlled(s, h, std::array{node}, controls).state;
            auto r = quantum::apply_controlled(s, cz, std::array{reg, node}, controls);
            s = std::move(r.state);
            charge(r.branch_probability, "set_layer_" + std::to_string(i) + "_reflect", -1);
        }
        s = quantum::apply(s, h, {reg}).state;
        auto [outcome, p] = heralds.consume(s, reg);
        charge(p, "set_layer_" + std::to_string(i) + "_herald", outcome);
        if (result.lost) return result;
        for (int pnode = 0; pnode < (1 << (i - 1)); ++pnode) {
            const auto controls = lay.ancestors(i, pnode);
            const int node = lay.node(i, pnode);
            s = quantum::apply_controlled(s, h, std::array{node}, controls).state;
            if (outcome == 1) s = quantum::apply_controlled(s, Gate::pauli_z(), std::array{node}, controls).state;
        }
        if (outcome == 1) s = quantum::apply(s, Gate::pauli_x(), {reg}).state;  // reset to |0>
    }

    // bus descent, data imprint, return
    routing_pass(depth, "bus");
    for (std::uint64_t j = 0; j < data_bits.size(); ++j) {
        if (!data_bits[j]) continue;
        std::vector<ControlTerm> chain;
        for (int i = 1; i <= depth; ++i)
            chain.push_back({lay.node(i, static_cast<int>(j >> (depth - i + 1))),
                             static_cast<int>((j >> (depth - i)) & 1u)});
        s = quantum::apply_controlled(s, Gate::pauli_x(), std::array{lay.bus()}, chain).state;
    }

    // backward pass: read each layer back onto a fresh register photon
    for (int i = depth; i >= 1; --i) {
        const int reg = i - 1;
        routing_pass(i - 1, "read_layer_" + std::to_string(i));
        s = quantum::apply(s, h, {reg}).state;  // fresh photon |+>
        for (int p = 0; p < (1 << (i - 1)); ++p) {
            const auto controls = lay.ancestors(i, p);
            const int node = lay.node(i, p);
            auto r = quantum::apply_controlled(s, cz, std::array{reg, node}, controls);
            s = std::move(r.state);
            charge(r.branch_probability, "read_layer_" + std::to_string(i) + "_reflect", -1);
            s = quantum::apply_controlled(s, h, std::array{node}, controls).state;
        }
        s = quantum::apply(s, h, {reg}).state;
        // second photon performs the projective measurement on the path spin
        // and makes its own round trip through the routers
        routing_pass(i - 1, "read_layer_" + std::to_string(i) + "_probe");
        s = quantum::apply(s, h, {lay.anc()}).state;
        for (int p = 0; p < (1 << (i - 1)); ++p) {
            const auto controls = lay.ancestors(i, p);
            auto r = quantum::apply_controlled(s, cz, std::array{lay.anc(), lay.node(i, p)}, controls);
            s = std::move(r.state);
            charge(r.branch_probability, "read_layer_" + std::to_string(i) + "_readout", -1);
        }
        s = quantum::apply(s, h, {lay.anc()}).state;
        auto [outcome, p] = heralds.consume(s, lay.anc());
        charge(p, "read_layer_" + std::to_string(i) + "_herald", outcome);
        if (result.lost) return result;
        if (outcome == 1) {
            s = quantum::apply(s, Gate::pauli_z(), {reg}).state;
            for (int pnode = 0; pnode < (1 << (i - 1)); ++pnode)
                s = quantum::apply_controlled(s, Gate::pauli_x(), std::array{lay.node(i, pnode)},
                                              lay.ancestors(i, pnode))
                        .state;
            s = quantum::apply(s, Gate::pauli_x(), {lay.anc()}).state;  // reset readout photon
        }
    }

    result.state = quantum::drop_qubit(s, lay.anc(), 0);
    return result;
}

StateVector query_output_oracle(std::span<const cplx> address_amplitudes, std::span<const int> data_bits, int depth) {
    const int qubits = depth + tree_node_count(depth) + 1;
    std::vector<cplx> amp(std::uint64_t{1} << qubits, cplx{0.0, 0.0});
    for (std::uint64_t j = 0; j < address_amplitudes.size(); ++j) {
        const std::uint64_t index =
            (j << (tree_node_count(depth) + 1)) | static_cast<std::uint64_t>(data_bits[j] & 1);
        amp[index] += address_amplitudes[j];
    }
    StateVector s(qubits, std::move(amp));
    s.normalize();
    return s;
}

}  // namespace qram::protocol
