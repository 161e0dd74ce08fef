#include "gapscope/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gapscope/limits.hpp"
#include "gapscope/rng.hpp"

namespace gapscope {

void NoiseModel::validate() const {
    if (!(t1_s > 0)) throw std::invalid_argument("NoiseModel: T1 > 0 required");
    if (!(t2_s > 0 && t2_s <= 2 * t1_s))
        throw std::invalid_argument("NoiseModel: 0 < T2 <= 2 T1 required");
    if (!(gate_time_1q_s > 0) || !(gate_time_2q_s > 0))
        throw std::invalid_argument("NoiseModel: gate times must be positive");
    if (!(fidelity_1q > 0.25 && fidelity_1q <= 1.0))
        throw std::invalid_argument("NoiseModel: fidelity_1q must be in (0.25, 1]");
    if (!(fidelity_2q > 0.2 && fidelity_2q <= 1.0))
        throw std::invalid_argument("NoiseModel: fidelity_2q must be in (0.2, 1]");
    if (!(readout_flip >= 0.0 && readout_flip <= 1.0))
        throw std::invalid_argument("NoiseModel: readout_flip must be in [0, 1]");
}

DepolarizingP depolarizing_p(double fidelity, double gate_time_s, double t1_s, double t2_s) {
    const double eps = 1.0 - fidelity;
    const double d = std::exp(-gate_time_s / t1_s) + 2.0 * std::exp(-gate_time_s / t2_s);
    const double raw = 1.0 + 3.0 * (2.0 * eps - 1.0) / d;
    DepolarizingP out;
    out.p = std::clamp(raw, 0.0, 1.0);
    out.clamped = raw != out.p;
    return out;
}

DensityMatrix::DensityMatrix(int n_qubits_in) : n_qubits(n_qubits_in) {
    if (n_qubits < 1 || n_qubits > kMaxDensityQubits)
        throw std::invalid_argument("DensityMatrix: qubit count out of range [1, " +
                                    std::to_string(kMaxDensityQubits) + "]");
    const auto d = static_cast<Eigen::Index>(dim());
    elements = Eigen::MatrixXcd::Zero(d, d);
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    DensityMatrix rho(psi.n_qubits());
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = psi[std::uint64_t(i)];
    rho.elements = v * v.adjoint();
    return rho;
}

double DensityMatrix::trace_real() const {
    return elements.trace().real();
}

void DensityMatrix::validate() const {
    if ((elements - elements.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("DensityMatrix: not Hermitian within 1e-10");
    if (std::abs(trace_real() - 1.0) > 1e-10)
        throw std::runtime_error("DensityMatrix: trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(elements,
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9)
        throw std::runtime_error("DensityMatrix: negative eigenvalue below -1e-9");
}

std::vector<double> DensityMatrix::diagonal_probabilities() const {
    std::vector<double> probs(dim());
    for (std::uint64_t b = 0; b < dim(); ++b)
        probs[b] = elements(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real();
    return probs;
}

namespace {

std::uint64_t qubit_mask(int n_qubits, int q) {
    if (q < 0 || q >= n_qubits) throw std::out_of_range("density op: qubit index out of range");
    return std::uint64_t{1} << (n_qubits - 1 - q);
}

void left_apply_1q(DensityMatrix& rho, int q, const Eigen::Matrix2cd& u) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const std::uint64_t bit = qubit_mask(rho.n_qubits, q);
    for (Eigen::Index col = 0; col < d; ++col) {
        for (std::uint64_t r = 0; r < std::uint64_t(d); ++r) {
            if (r & bit) continue;
            const auto r0 = static_cast<Eigen::Index>(r);
            const auto r1 = static_cast<Eigen::Index>(r | bit);
            const cplx a0 = rho.elements(r0, col), a1 = rho.elements(r1, col);
            rho.elements(r0, col) = u(0, 0) * a0 + u(0, 1) * a1;
            rho.elements(r1, col) = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
}

void right_apply_1q_dagger(DensityMatrix& rho, int q, const Eigen::Matrix2cd& u) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const std::uint64_t bit = qubit_mask(rho.n_qubits, q);
    for (Eigen::Index row = 0; row < d; ++row) {
        for (std::uint64_t c = 0; c < std::uint64_t(d); ++c) {
            if (c & bit) continue;
            const auto c0 = static_cast<Eigen::Index>(c);
            const auto c1 = static_cast<Eigen::Index>(c | bit);
            const cplx a0 = rho.elements(row, c0), a1 = rho.elements(row, c1);
            rho.elements(row, c0) = a0 * std::conj(u(0, 0)) + a1 * std::conj(u(0, 1));
            rho.elements(row, c1) = a0 * std::conj(u(1, 0)) + a1 * std::conj(u(1, 1));
        }
    }
}

void left_apply_2q(DensityMatrix& rho, int qa, int qb, const Eigen::Matrix4cd& u) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const std::uint64_t ba = qubit_mask(rho.n_qubits, qa);
    const std::uint64_t bb = qubit_mask(rho.n_qubits, qb);
    for (Eigen::Index col = 0; col < d; ++col) {
        for (std::uint64_t r = 0; r < std::uint64_t(d); ++r) {
            if (r & (ba | bb)) continue;
            const Eigen::Index i00 = static_cast<Eigen::Index>(r);
            const Eigen::Index i01 = static_cast<Eigen::Index>(r | bb);
            const Eigen::Index i10 = static_cast<Eigen::Index>(r | ba);
            const Eigen::Index i11 = static_cast<Eigen::Index>(r | ba | bb);
            const cplx a00 = rho.elements(i00, col), a01 = rho.elements(i01, col);
            const cplx a10 = rho.elements(i10, col), a11 = rho.elements(i11, col);
            rho.elements(i00, col) = u(0, 0) * a00 + u(0, 1) * a01 + u(0, 2) * a10 + u(0, 3) * a11;
            rho.elements(i01, col) = u(1, 0) * a00 + u(1, 1) * a01 + u(1, 2) * a10 + u(1, 3) * a11;
            rho.elements(i10, col) = u(2, 0) * a00 + u(2, 1) * a01 + u(2, 2) * a10 + u(2, 3) * a11;
            rho.elements(i11, col) = u(3, 0) * a00 + u(3, 1) * a01 + u(3, 2) * a10 + u(3, 3) * a11;
        }
    }
}

void right_apply_2q_dagger(DensityMatrix& rho, int qa, int qb, const Eigen::Matrix4cd& u) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const std::uint64_t ba = qubit_mask(rho.n_qubits, qa);
    const std::uint64_t bb = qubit_mask(rho.n_qubits, qb);
    for (Eigen::Index row = 0; row < d; ++row) {
        for (std::uint64_t c = 0; c < std::uint64_t(d); ++c) {
            if (c & (ba | bb)) continue;
            const Eigen::Index i00 = static_cast<Eigen::Index>(c);
            const Eigen::Index i01 = static_cast<Eigen::Index>(c | bb);
            const Eigen::Index i10 = static_cast<Eigen::Index>(c | ba);
            const Eigen::Index i11 = static_cast<Eigen::Index>(c | ba | bb);
            const cplx a00 = rho.elements(row, i00), a01 = rho.elements(row, i01);
            const cplx a10 = rho.elements(row, i10), a11 = rho.elements(row, i11);
            rho.elements(row, i00) = a00 * std::conj(u(0, 0)) + a01 * std::conj(u(0, 1)) +
                                     a10 * std::conj(u(0, 2)) + a11 * std::conj(u(0, 3));
            rho.elements(row, i01) = a00 * std::conj(u(1, 0)) + a01 * std::conj(u(1, 1)) +
                                     a10 * std::conj(u(1, 2)) + a11 * std::conj(u(1, 3));
            rho.elements(row, i10) = a00 * std::conj(u(2, 0)) + a01 * std::conj(u(2, 1)) +
                                     a10 * std::conj(u(2, 2)) + a11 * std::conj(u(2, 3));
            rho.elements(row, i11) = a00 * std::conj(u(3, 0)) + a01 * std::conj(u(3, 1)) +
                                     a10 * std::conj(u(3, 2)) + a11 * std::conj(u(3, 3));
        }
    }
}

} // namespace

void apply_gate(DensityMatrix& rho, const NativeGate& g) {
    if (g.kind == GateKind::MS) {
        const Eigen::Matrix4cd u = gate_matrix(g);
        left_apply_2q(rho, g.q0, g.q1, u);
        right_apply_2q_dagger(rho, g.q0, g.q1, u);
    } else {
        const Eigen::Matrix2cd u = gate_matrix(g);
        left_apply_1q(rho, g.q0, u);
        right_apply_1q_dagger(rho, g.q0, u);
    }
}

void apply_depolarizing(DensityMatrix& rho, int qubit, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("apply_depolarizing: p in [0,1]");
    if (p == 0.0) return;
    const std::uint64_t bit = qubit_mask(rho.n_qubits, qubit);
    const std::uint64_t d = rho.dim();
    for (std::uint64_t r = 0; r < d; ++r) {
        if (r & bit) continue;
        for (std::uint64_t c = 0; c < d; ++c) {
            if (c & bit) continue;
            const auto r0 = static_cast<Eigen::Index>(r), r1 = static_cast<Eigen::Index>(r | bit);
            const auto c0 = static_cast<Eigen::Index>(c), c1 = static_cast<Eigen::Index>(c | bit);
            const cplx avg = 0.5 * (rho.elements(r0, c0) + rho.elements(r1, c1));
            rho.elements(r0, c0) = (1 - p) * rho.elements(r0, c0) + p * avg;
            rho.elements(r1, c1) = (1 - p) * rho.elements(r1, c1) + p * avg;
            rho.elements(r0, c1) *= (1 - p);
            rho.elements(r1, c0) *= (1 - p);
        }
    }
}

void apply_joint_depolarizing(DensityMatrix& rho, int qubit_a, int qubit_b, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("apply_joint_depolarizing: p in [0,1]");
    if (p == 0.0) return;
    const std::uint64_t ba = qubit_mask(rho.n_qubits, qubit_a);
    const std::uint64_t bb = qubit_mask(rho.n_qubits, qubit_b);
    const std::uint64_t d = rho.dim();
    const std::uint64_t pair = ba | bb;
    for (std::uint64_t r = 0; r < d; ++r) {
        if (r & pair) continue;
        for (std::uint64_t c = 0; c < d; ++c) {
            if (c & pair) continue;
            const std::uint64_t offsets[4] = {0, bb, ba, ba | bb};
            cplx avg{0, 0};
            for (std::uint64_t off : offsets)
                avg += rho.elements(static_cast<Eigen::Index>(r | off),
                                    static_cast<Eigen::Index>(c | off));
            avg *= 0.25;
            for (std::uint64_t ro : offsets) {
                for (std::uint64_t co : offsets) {
                    auto& el = rho.elements(static_cast<Eigen::Index>(r | ro),
                                            static_cast<Eigen::Index>(c | co));
                    el *= (1 - p);
                    if (ro == co) el += p * avg;
                }
            }
        }
    }
}

std::vector<double> apply_readout_flip(std::vector<double> probabilities, double flip) {
    if (!(flip >= 0.0 && flip <= 1.0))
        throw std::invalid_argument("apply_readout_flip: flip in [0,1]");
    const std::uint64_t d = probabilities.size();
    if (d == 0 || (d & (d - 1)) != 0)
        throw std::invalid_argument("apply_readout_flip: length must be a power of two");
    if (flip == 0.0) return probabilities;
    const int n_qubits = std::countr_zero(d);
    for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
        for (std::uint64_t b = 0; b < d; ++b) {
            if (b & bit) continue;
            const double p0 = probabilities[b], p1 = probabilities[b | bit];
            probabilities[b] = (1 - flip) * p0 + flip * p1;
            probabilities[b | bit] = (1 - flip) * p1 + flip * p0;
        }
    }
    return probabilities;
}

namespace {

void apply_channels_after_gate(DensityMatrix& rho, const NativeGate& g, const NoiseModel& noise,
                               const DepolarizingP& p1q, const DepolarizingP& p2q) {
    if (g.is_two_qubit()) {
        if (noise.joint_two_qubit_channel) {
            apply_joint_depolarizing(rho, g.q0, g.q1, p2q.p);
        } else {
            apply_depolarizing(rho, g.q0, p2q.p);
            apply_depolarizing(rho, g.q1, p2q.p);
        }
    } else {
        apply_depolarizing(rho, g.q0, p1q.p);
    }
}

void note_clamps(const NoiseModel& noise, const DepolarizingP& p1q, const DepolarizingP& p2q,
                 std::vector<std::string>* warnings) {
    if (!warnings) return;
    if (p1q.clamped)
        warnings->push_back("depolarizing p clamped for 1q gates (F=" +
                            std::to_string(noise.fidelity_1q) + ")");
    if (p2q.clamped)
        warnings->push_back("depolarizing p clamped for 2q gates (F=" +
                            std::to_string(noise.fidelity_2q) + ")");
}

} // namespace

DensityMatrix execute_noisy(const StateVector& psi0, const CircuitIR& circ,
                            const NoiseModel& noise, std::vector<std::string>* warnings) {
    noise.validate();
    if (circ.n_qubits != psi0.n_qubits())
        throw std::invalid_argument("execute_noisy: qubit count mismatch");
    const DepolarizingP p1q =
        depolarizing_p(noise.fidelity_1q, noise.gate_time_1q_s, noise.t1_s, noise.t2_s);
    const DepolarizingP p2q =
        depolarizing_p(noise.fidelity_2q, noise.gate_time_2q_s, noise.t1_s, noise.t2_s);
    note_clamps(noise, p1q, p2q, warnings);
    DensityMatrix rho = DensityMatrix::from_state(psi0);
    for (const auto& g : circ.gates) {
        apply_gate(rho, g);
        apply_channels_after_gate(rho, g, noise, p1q, p2q);
    }
    return rho;
}

DensityBackend::DensityBackend(StateVector psi0, NoiseModel noise)
    : rho_(DensityMatrix::from_state(psi0)), noise_(noise) {
    noise_.validate();
    p1q_ = depolarizing_p(noise_.fidelity_1q, noise_.gate_time_1q_s, noise_.t1_s, noise_.t2_s);
    p2q_ = depolarizing_p(noise_.fidelity_2q, noise_.gate_time_2q_s, noise_.t1_s, noise_.t2_s);
    note_clamps(noise_, p1q_, p2q_, &warnings_);
}

void DensityBackend::apply_circuit(const CircuitIR& circ) {
    if (circ.n_qubits != rho_.n_qubits)
        throw std::invalid_argument("DensityBackend: qubit count mismatch");
    for (const auto& g : circ.gates) {
        apply_gate(rho_, g);
        apply_channels_after_gate(rho_, g, noise_, p1q_, p2q_);
    }
    if (std::abs(rho_.trace_real() - 1.0) > 1e-9)
        throw std::runtime_error("DensityBackend: trace drift above 1e-9");
}

double DensityBackend::expectation_of(const PauliSum& o) const {
    const Eigen::MatrixXcd obs = to_dense_matrix(o);
    const cplx v = (obs * rho_.elements).trace();
    return v.real();
}

CircuitIR measurement_basis_circuit(const PauliSum& o) {
    if (o.size() != 1)
        throw std::invalid_argument("measurement basis: a single Pauli string is required");
    const PauliTerm& term = o.terms()[0];
    CircuitIR circ;
    circ.n_qubits = o.n_qubits();
    for (int q = 0; q < term.n_qubits(); ++q) {
        switch (term.axes[q]) {
            case Axis::I:
            case Axis::Z: break;
            case Axis::X:
                circ.gates.push_back(NativeGate::gpi2(q, -std::numbers::pi / 2));
                break;
            case Axis::Y: circ.gates.push_back(NativeGate::gpi2(q, 0.0)); break;
        }
    }
    return circ;
}

namespace {

double parity_expectation(const std::vector<double>& probs, int n_qubits,
                          const PauliTerm& term) {
    std::uint64_t mask = 0;
    for (int q = 0; q < term.n_qubits(); ++q)
        if (term.axes[q] != Axis::I) mask |= std::uint64_t{1} << (n_qubits - 1 - q);
    double m = 0.0;
    for (std::uint64_t b = 0; b < probs.size(); ++b)
        m += (std::popcount(b & mask) & 1) ? -probs[b] : probs[b];
    return m;
}

const PauliTerm& single_unit_term(const PauliSum& o) {
    if (o.size() != 1 || std::abs(std::abs(o.terms()[0].coefficient) - 1.0) > 1e-12)
        throw std::invalid_argument("measurement: a single +/-1 Pauli string is required");
    return o.terms()[0];
}

} // namespace

double DensityBackend::measured_expectation(const PauliSum& o) {
    const PauliTerm& term = single_unit_term(o);
    DensityBackend snapshot = *this;
    snapshot.apply_circuit(measurement_basis_circuit(o));
    std::vector<double> probs = snapshot.rho_.diagonal_probabilities();
    probs = apply_readout_flip(std::move(probs), noise_.readout_flip);
    return term.coefficient * parity_expectation(probs, rho_.n_qubits, term);
}

TrajectoryBackend::TrajectoryBackend(const StateVector& psi0, NoiseModel noise,
                                     int n_trajectories, std::uint64_t seed)
    : noise_(noise), seed_(seed) {
    noise_.validate();
    if (n_trajectories < 1)
        throw std::invalid_argument("TrajectoryBackend: n_trajectories >= 1 required");
    p1q_ = depolarizing_p(noise_.fidelity_1q, noise_.gate_time_1q_s, noise_.t1_s, noise_.t2_s);
    p2q_ = depolarizing_p(noise_.fidelity_2q, noise_.gate_time_2q_s, noise_.t1_s, noise_.t2_s);
    note_clamps(noise_, p1q_, p2q_, &warnings_);
    states_.assign(n_trajectories, psi0);
    channel_counters_.assign(n_trajectories, 0);
}

namespace {

// Pauli applied in place; the global phase of Y is irrelevant here.
void apply_pauli_1q(StateVector& psi, int q, Axis axis) {
    const int L = psi.n_qubits();
    const std::uint64_t bit = std::uint64_t{1} << (L - 1 - q);
    const std::uint64_t dim = psi.dim();
    switch (axis) {
        case Axis::I: return;
        case Axis::X:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (!(b & bit)) std::swap(psi[b], psi[b | bit]);
            return;
        case Axis::Y:
            for (std::uint64_t b = 0; b < dim; ++b) {
                if (b & bit) continue;
                const cplx a0 = psi[b], a1 = psi[b | bit];
                psi[b] = cplx{0, -1} * a1;
                psi[b | bit] = cplx{0, 1} * a0;
            }
            return;
        case Axis::Z:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (b & bit) psi[b] = -psi[b];
            return;
    }
}

void sample_depolarizing_branch(StateVector& psi, int q, double p, std::uint64_t seed,
                                std::uint64_t traj, std::uint64_t counter) {
    if (p == 0.0) return;
    const double u =
        static_cast<double>(rng::key(seed, traj, counter) >> 11) * 0x1.0p-53;
    if (u >= 0.75 * p) return;  // identity branch: probability 1 - 3p/4
    if (u < 0.25 * p)
        apply_pauli_1q(psi, q, Axis::X);
    else if (u < 0.5 * p)
        apply_pauli_1q(psi, q, Axis::Y);
    else
        apply_pauli_1q(psi, q, Axis::Z);
}

double pairwise_mean(std::vector<double> values) {
    // pairwise reduction: deterministic regardless of traversal order
    std::size_t n = values.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) values[i] += values[i + half];
        n = half;
    }
    return values[0] / static_cast<double>(values.size());
}

} // namespace

void TrajectoryBackend::apply_circuit(const CircuitIR& circ) {
    for (std::size_t t = 0; t < states_.size(); ++t) {
        StateVector& psi = states_[t];
        std::uint64_t& counter = channel_counters_[t];
        for (const auto& g : circ.gates) {
            apply_gate(psi, g);
            if (g.is_two_qubit()) {
                sample_depolarizing_branch(psi, g.q0, p2q_.p, seed_, t, counter++);
                sample_depolarizing_branch(psi, g.q1, p2q_.p, seed_, t, counter++);
            } else {
                sample_depolarizing_branch(psi, g.q0, p1q_.p, seed_, t, counter++);
            }
        }
    }
}

double TrajectoryBackend::expectation_of(const PauliSum& o) const {
    std::vector<double> vals;
    vals.reserve(states_.size());
    for (const auto& psi : states_) vals.push_back(expectation(o, psi));
    return pairwise_mean(std::move(vals));
}

double TrajectoryBackend::measured_expectation(const PauliSum& o) const {
    const PauliTerm& term = single_unit_term(o);
    const CircuitIR basis = measurement_basis_circuit(o);
    const double readout_factor = std::pow(1.0 - 2.0 * noise_.readout_flip, term.weight());
    PauliTerm z_term = term;
    for (auto& a : z_term.axes)
        if (a != Axis::I) a = Axis::Z;
    z_term.coefficient = 1.0;
    const PauliSum z_parity(o.n_qubits(), {z_term});

    // Measurement branches draw from a separate key space so the main
    // evolution stream is not re-consumed.
    const std::uint64_t branch_seed = rng::mix(seed_ ^ 0xb4515c4a6e5ULL);
    std::vector<double> vals;
    vals.reserve(states_.size());
    for (std::size_t t = 0; t < states_.size(); ++t) {
        StateVector psi = states_[t];
        std::uint64_t counter = channel_counters_[t];
        for (const auto& g : basis.gates) {
            apply_gate(psi, g);
            sample_depolarizing_branch(psi, g.q0, p1q_.p, branch_seed, t, counter++);
        }
        vals.push_back(expectation(z_parity, psi));
    }
    return term.coefficient * readout_factor * pairwise_mean(std::move(vals));
}

double execute_noisy_trajectories(const StateVector& psi0, const CircuitIR& circ,
                                  const NoiseModel& noise, const PauliSum& o, int n_trajectories,
                                  std::uint64_t seed) {
    TrajectoryBackend backend(psi0, noise, n_trajectories, seed);
    backend.apply_circuit(circ);
    return backend.expectation_of(o);
}

} // namespace gapscope
