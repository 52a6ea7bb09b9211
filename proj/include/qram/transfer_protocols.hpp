#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qram/cavity_model.hpp"
#include "qram/quantum_core.hpp"
#include "qram/sweep.hpp"

namespace qram::protocol {

using cavity::CavityParams;
using cavity::FieldDeviation;
using cavity::ReflectionTriple;
using quantum::cplx;
using quantum::StateVector;

enum class HeraldPort { omega0, omega1, lost };

struct HeraldOutcome {
    HeraldPort detected_port = HeraldPort::lost;
    double branch_probability = 0.0;
    StateVector post_state;
    std::vector<std::string> corrections_applied;
};

// heralded photon -> spin transfer (setting mode)
struct SettingResult {
    HeraldOutcome omega0;
    HeraldOutcome omega1;
    double loss_probability = 0.0;
};

SettingResult setting_step(cplx alpha, cplx beta, const ReflectionTriple& triple);

// the six Bloch-axis states |phi_1..6>: |0>, |1>, (|0>+-|1>)/sqrt2, (|0>+-i|1>)/sqrt2
std::array<std::pair<cplx, cplx>, 6> six_bloch_states();

struct SixStateFidelity {
    std::array<double, 6> per_state{};
    double mean = 0.0;
};

// herald-weighted six-state transfer fidelity, conditioned on no loss
SixStateFidelity transfer_fidelity(const ReflectionTriple& triple);

// golden-section search of |r_m| on [0,1] maximizing the mean fidelity
double optimal_mirror_modulus(cplx r_on, cplx r_off, double tol = 1e-4);

// rows: C, kappa_wg_over_kappa, delta_b, r_m_opt, mean_fidelity
SweepResult fidelity_contour(std::span<const double> cooperativity_grid, std::span<const double> coupling_grid,
                             FieldDeviation dev, double kappa, double gamma, double omega_c);

// single traversal of the routing interferometer, net relative phase phi
// between the cavity and mirror arms: (top, bottom) = (cos(phi/2), -sin(phi/2))
std::pair<cplx, cplx> routing_step(double net_phase);

// general arm amplitudes (cavity, mirror); ports carry the interference
std::pair<cplx, cplx> routing_output(cplx cavity_amp, cplx mirror_amp);

// spin -> photon readout via two ancillary photons
struct SpinToPhotonResult {
    HeraldOutcome omega0;  // post_state is the single photonic qubit
    HeraldOutcome omega1;
    double loss_probability = 0.0;
};
SpinToPhotonResult spin_to_photon(cplx alpha, cplx beta, const ReflectionTriple& triple);

// photon-assisted Bell creation across two cavities; post_state is the
// corrected two-spin state
struct BellResult {
    HeraldOutcome omega0;
    HeraldOutcome omega1;
    double loss_probability = 0.0;
};
BellResult bell_create(const ReflectionTriple& triple_a, const ReflectionTriple& triple_b);

struct NodeState {
    int broker;
    int memory;
    int layer = 0;
    int position = 0;
};

enum class SwapDirection { to_memory, to_broker };

struct SwapResult {
    StateVector state;
    quantum::MeasurementRecord measurement;
};

// CNOT(source -> target), X-measurement on source, conditional Pauli-Z fixup.
// The swap target must start in |0>.
SwapResult broker_memory_swap(const StateVector& state, const NodeState& node, SwapDirection direction,
                              double random_draw);

// Fuse two nuclear GHZ fragments through an electron Bell bridge:
// CNOT(n_left_end -> bridge_left), Z-measure, conditional X on bridge_right;
// CNOT(n_right_end -> bridge_right), Z-measure, conditional X on the right
// fragment's nuclei. Bridge qubits end in basis states.
StateVector ghz_link(const StateVector& state, std::span<const int> left_nuclei, std::span<const int> right_nuclei,
                     std::pair<int, int> bridge_bell, double draw_left, double draw_right);

// Address teleportation onto a binary tree of depth n. Layer i hosts 2^(i-1)
// nodes plus one QC-side ancilla; each register/ancilla pair undergoes a BSM
// with the standard conditional Pauli corrections. Outcomes may be forced
// (verification) or drawn.
struct TeleportBranch {
    double probability = 0.0;
    StateVector tree_state;               // nodes only, layer-major order
    std::vector<int> bsm_outcomes;        // [z_1, x_1, z_2, x_2, ...]
};

TeleportBranch teleport_addresses_branch(std::span<const cplx> address_amplitudes, int depth,
                                         std::span<const int> forced_outcomes);
StateVector teleport_addresses(std::span<const cplx> address_amplitudes, int depth, std::span<const double> draws);

// expected tree state: sum_j alpha_j prod_i |bit_i(j)>^(x layer width)
StateVector teleported_tree_oracle(std::span<const cplx> address_amplitudes, int depth);

// Full bucket-brigade query on the state-vector engine: program the tree with
// the address registers, route the bus, imprint the data, uncompute.
struct HeraldRecord {
    std::string stage;
    int outcome = 0;
    double probability = 0.0;
};

struct QueryResult {
    StateVector state;  // layout: regs [0..n), nodes [n..n+2^n-1), bus last
    double probability = 0.0;
    std::vector<HeraldRecord> trace;
    bool lost = false;
};

// forced_heralds: 2n entries (forward then backward), each 0/1; empty = all
// branches sampled from draws
QueryResult full_query_sim(std::span<const cplx> address_amplitudes, std::span<const int> data_bits, int depth,
                           const ReflectionTriple& triple, std::span<const int> forced_heralds,
                           std::span<const double> draws);

// expected output: sum_j alpha_j |j>_regs |0...0>_nodes |D_j>_bus
StateVector query_output_oracle(std::span<const cplx> address_amplitudes, std::span<const int> data_bits, int depth);

int tree_node_count(int depth);
int tree_node_index(int layer, int position);  // layer >= 1, position in [0, 2^(layer-1))

}  // namespace qram::protocol
