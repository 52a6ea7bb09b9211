#include "qram/quantum_core.hpp"

#include <cmath>
#include <stdexcept>

namespace qram::quantum {

namespace {
constexpr double kNormTol = 1e-12;
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("StateVector: qubit count outside [1," + std::to_string(kMaxQubits) + "]");
    if (amp_.size() != (std::uint64_t{1} << num_qubits))
        throw std::invalid_argument("StateVector: amplitude length is not 2^num_qubits");
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t basis_index) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("basis_state: qubit count outside [1," + std::to_string(kMaxQubits) + "]");
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    if (basis_index >= dim) throw std::invalid_argument("basis_state: index out of range");
    std::vector<cplx> amp(dim, cplx{0.0, 0.0});
    amp[basis_index] = cplx{1.0, 0.0};
    return StateVector(num_qubits, std::move(amp));
}

StateVector StateVector::product(std::span<const StateVector> factors) {
    if (factors.empty()) throw std::invalid_argument("product: empty factor list");
    std::vector<cplx> amp{cplx{1.0, 0.0}};
    int total = 0;
    for (const auto& f : factors) {
        total += f.num_qubits();
        std::vector<cplx> next(amp.size() * f.dim());
        for (std::size_t i = 0; i < amp.size(); ++i)
            for (std::uint64_t j = 0; j < f.dim(); ++j) next[i * f.dim() + j] = amp[i] * f.amplitude(j);
        amp = std::move(next);
    }
    return StateVector(total, std::move(amp));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

void StateVector::normalize() {
    const double n2 = norm_squared();
    if (n2 <= 0.0) throw std::runtime_error("normalize: zero-norm state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amp_) a *= inv;
}

bool Gate::is_unitary(double tol) const {
    const int d = 1 << arity;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < d; ++k) acc += std::conj(at(k, i)) * at(k, j);
            const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

Gate Gate::identity() { return single(1, 0, 0, 1); }

Gate Gate::hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return single(s, s, s, -s);
}

Gate Gate::pauli_x() { return single(0, 1, 1, 0); }
Gate Gate::pauli_y() { return single(0, cplx{0, -1}, cplx{0, 1}, 0); }
Gate Gate::pauli_z() { return single(1, 0, 0, -1); }
Gate Gate::phase(double theta) { return single(1, 0, 0, std::polar(1.0, theta)); }

Gate Gate::single(cplx m00, cplx m01, cplx m10, cplx m11, bool unitary_flag) {
    Gate g;
    g.arity = 1;
    g.unitary = unitary_flag;
    g.m[0] = m00;
    g.m[1] = m01;
    g.m[2] = m10;
    g.m[3] = m11;
    if (unitary_flag && !g.is_unitary()) throw std::invalid_argument("Gate::single: matrix is not unitary");
    return g;
}

Gate Gate::diagonal1(cplx d0, cplx d1, bool unitary_flag) { return single(d0, 0, 0, d1, unitary_flag); }

Gate Gate::cnot() {
    Gate g;
    g.arity = 2;
    g.unitary = true;
    g.m.fill(cplx{0.0, 0.0});
    g.m[0 * 4 + 0] = 1;
    g.m[1 * 4 + 1] = 1;
    g.m[2 * 4 + 3] = 1;
    g.m[3 * 4 + 2] = 1;
    return g;
}

Gate Gate::cz() { return diagonal2(1, 1, 1, -1, true); }

Gate Gate::diagonal2(cplx d00, cplx d01, cplx d10, cplx d11, bool unitary_flag) {
    Gate g;
    g.arity = 2;
    g.unitary = unitary_flag;
    g.m.fill(cplx{0.0, 0.0});
    g.m[0 * 4 + 0] = d00;
    g.m[1 * 4 + 1] = d01;
    g.m[2 * 4 + 2] = d10;
    g.m[3 * 4 + 3] = d11;
    if (unitary_flag && !g.is_unitary()) throw std::invalid_argument("diagonal2: matrix is not unitary");
    return g;
}

namespace {

void check_targets(const StateVector& state, const Gate& gate, std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != gate.arity)
        throw std::invalid_argument("apply: target count does not match gate arity");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= state.num_qubits())
            throw std::invalid_argument("apply: target qubit out of range");
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j]) throw std::invalid_argument("apply: duplicate target qubit");
    }
}

}  // namespace

ApplyResult apply_controlled(const StateVector& state, const Gate& gate, std::span<const int> targets,
                             std::span<const ControlTerm> controls) {
    check_targets(state, gate, targets);
    const int n = state.num_qubits();
    std::uint64_t control_mask = 0, control_want = 0;
    for (const auto& c : controls) {
        if (c.qubit < 0 || c.qubit >= n) throw std::invalid_argument("apply: control qubit out of range");
        for (int t : targets)
            if (t == c.qubit) throw std::invalid_argument("apply: control overlaps target");
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - c.qubit);
        control_mask |= bit;
        if (c.value) control_want |= bit;
    }

    const int k = gate.arity;
    const int d = 1 << k;
    std::vector<std::uint64_t> tbit(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) tbit[static_cast<std::size_t>(i)] = std::uint64_t{1} << (n - 1 - targets[i]);

    std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
    const std::uint64_t dim = state.dim();
    std::uint64_t tmask = 0;
    for (auto b : tbit) tmask |= b;

    std::array<cplx, 4> in{};
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & tmask) continue;                              // enumerate each target-block once
        if ((base & control_mask) != control_want) continue;     // controls live outside targets
        for (int r = 0; r < d; ++r) {
            std::uint64_t idx = base;
            for (int q = 0; q < k; ++q)
                if ((r >> (k - 1 - q)) & 1) idx |= tbit[static_cast<std::size_t>(q)];
            in[static_cast<std::size_t>(r)] = out[idx];
        }
        for (int r = 0; r < d; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < d; ++c) acc += gate.at(r, c) * in[static_cast<std::size_t>(c)];
            std::uint64_t idx = base;
            for (int q = 0; q < k; ++q)
                if ((r >> (k - 1 - q)) & 1) idx |= tbit[static_cast<std::size_t>(q)];
            out[idx] = acc;
        }
    }

    StateVector result(n, std::move(out));
    if (gate.unitary) return {std::move(result), 1.0};
    const double branch = result.norm_squared();
    if (branch > 0.0) result.normalize();
    return {std::move(result), branch};
}

ApplyResult apply(const StateVector& state, const Gate& gate, std::span<const int> targets) {
    return apply_controlled(state, gate, targets, {});
}

double probability_of_outcome(const StateVector& state, int qubit, int outcome) {
    if (qubit < 0 || qubit >= state.num_qubits()) throw std::invalid_argument("measure: qubit out of range");
    const int n = state.num_qubits();
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - qubit);
    double p = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < state.dim(); ++i)
        if (((i & bit) != 0) == (outcome != 0)) p += std::norm(amps[i]);
    return p;
}

std::pair<double, StateVector> project(const StateVector& state, int qubit, int outcome) {
    const int n = state.num_qubits();
    if (qubit < 0 || qubit >= n) throw std::invalid_argument("project: qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - qubit);
    std::vector<cplx> amp(state.amplitudes().begin(), state.amplitudes().end());
    double p = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (((i & bit) != 0) == (outcome != 0)) {
            p += std::norm(amp[i]);
        } else {
            amp[i] = cplx{0.0, 0.0};
        }
    }
    StateVector projected(n, std::move(amp));
    if (p > 0.0) projected.normalize();
    return {p, std::move(projected)};
}

std::pair<MeasurementRecord, StateVector> measure(const StateVector& state, int qubit, double random_draw) {
    const double p0 = probability_of_outcome(state, qubit, 0);
    const int outcome = (random_draw < p0) ? 0 : 1;
    auto [p, projected] = project(state, qubit, outcome);
    if (p <= kNormTol * kNormTol)
        throw std::runtime_error("measure: selected a zero-probability branch (numerical corruption)");
    return {MeasurementRecord{qubit, outcome, p}, std::move(projected)};
}

std::pair<MeasurementRecord, StateVector> measure_x(const StateVector& state, int qubit, double random_draw) {
    auto rotated = apply(state, Gate::hadamard(), {qubit});
    return measure(rotated.state, qubit, random_draw);
}

StateVector drop_qubit(const StateVector& state, int qubit, int outcome) {
    const int n = state.num_qubits();
    if (n < 2) throw std::invalid_argument("drop_qubit: need at least two qubits");
    if (qubit < 0 || qubit >= n) throw std::invalid_argument("drop_qubit: qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - qubit);
    const std::uint64_t low_mask = bit - 1;
    std::vector<cplx> amp(state.dim() >> 1);
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (((i & bit) != 0) != (outcome != 0)) continue;
        const std::uint64_t reduced = ((i >> 1) & ~low_mask) | (i & low_mask);
        amp[reduced] = state.amplitude(i);
    }
    return StateVector(n - 1, std::move(amp));
}

double overlap_fidelity(const StateVector& state, const StateVector& target) {
    if (state.num_qubits() != target.num_qubits())
        throw std::invalid_argument("overlap_fidelity: dimension mismatch");
    cplx acc{0.0, 0.0};
    const auto a = state.amplitudes();
    const auto b = target.amplitudes();
    for (std::uint64_t i = 0; i < state.dim(); ++i) acc += std::conj(b[i]) * a[i];
    return std::norm(acc);
}

}  // namespace qram::quantum
