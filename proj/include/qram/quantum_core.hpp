#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qram::quantum {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;

// Dense state vector over a register of two-level systems. Qubit 0 is the
// most significant bit of the basis index; that convention is fixed here and
// used by every protocol module.
class StateVector {
  public:
    StateVector() = default;
    StateVector(int num_qubits, std::vector<cplx> amplitudes);

    static StateVector basis_state(int num_qubits, std::uint64_t basis_index);
    // |q0 q1 ... qn-1> from per-qubit kets; amplitudes = outer product
    static StateVector product(std::span<const StateVector> factors);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
    std::span<const cplx> amplitudes() const { return amp_; }
    cplx amplitude(std::uint64_t index) const { return amp_[index]; }
    cplx& amplitude_ref(std::uint64_t index) { return amp_[index]; }

    double norm_squared() const;
    void normalize();

    static int bit_of(std::uint64_t index, int qubit, int num_qubits) {
        return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
    }

  private:
    int num_qubits_ = 0;
    std::vector<cplx> amp_;
};

// 2^k x 2^k matrix, k = 1 or 2. unitary=false admits the non-unitary
// spin-dependent reflection map; applying one contracts the state norm.
struct Gate {
    int arity = 1;
    bool unitary = true;
    std::array<cplx, 16> m{};  // row-major

    cplx at(int row, int col) const { return m[static_cast<std::size_t>(row * (1 << arity) + col)]; }
    bool is_unitary(double tol = 1e-12) const;

    static Gate identity();
    static Gate hadamard();
    static Gate pauli_x();
    static Gate pauli_y();
    static Gate pauli_z();
    static Gate phase(double theta);  // diag(1, e^{i theta})
    static Gate single(cplx m00, cplx m01, cplx m10, cplx m11, bool unitary_flag = true);
    static Gate diagonal1(cplx d0, cplx d1, bool unitary_flag = false);
    static Gate cnot();
    static Gate cz();
    static Gate diagonal2(cplx d00, cplx d01, cplx d10, cplx d11, bool unitary_flag = false);
};

struct MeasurementRecord {
    int qubit_index = 0;
    int outcome = 0;
    double probability = 0.0;  // squared norm of the projected branch before renormalization
};

struct ApplyResult {
    StateVector state;
    double branch_probability = 1.0;  // 1 for unitary gates
};

struct ControlTerm {
    int qubit;
    int value;  // 0 or 1
};

ApplyResult apply(const StateVector& state, const Gate& gate, std::span<const int> targets);
ApplyResult apply_controlled(const StateVector& state, const Gate& gate, std::span<const int> targets,
                             std::span<const ControlTerm> controls);

inline ApplyResult apply(const StateVector& s, const Gate& g, std::initializer_list<int> t) {
    return apply(s, g, std::span<const int>(t.begin(), t.size()));
}

double probability_of_outcome(const StateVector& state, int qubit, int outcome);

// projective Z-basis measurement; outcome 0 iff random_draw < P(0)
std::pair<MeasurementRecord, StateVector> measure(const StateVector& state, int qubit, double random_draw);
// X-basis measurement expressed as H then Z-basis measure
std::pair<MeasurementRecord, StateVector> measure_x(const StateVector& state, int qubit, double random_draw);

// force a given outcome; returns its probability and the renormalized projection
std::pair<double, StateVector> project(const StateVector& state, int qubit, int outcome);

// remove a qubit known to be in the basis state `outcome` (post-measurement)
StateVector drop_qubit(const StateVector& state, int qubit, int outcome);

// |<target|state>|^2
double overlap_fidelity(const StateVector& state, const StateVector& target);

}  // namespace qram::quantum
