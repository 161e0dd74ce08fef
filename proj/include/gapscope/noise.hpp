#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gapscope/circuit.hpp"
#include "gapscope/pauli.hpp"
#include "gapscope/statevector.hpp"

namespace gapscope {

/// Hardware-style error budget. Thermal relaxation enters only through the
/// d-term of the depolarizing probability; readout is a per-qubit bit flip.
struct NoiseModel {
    double t1_s = 100.0;
    double t2_s = 1.0;
    double gate_time_1q_s = 135e-6;
    double gate_time_2q_s = 600e-6;
    double fidelity_1q = 1.0;
    double fidelity_2q = 1.0;
    double readout_flip = 0.0;
    /// Replace the two independent single-qubit channels after an MS gate by
    /// one joint two-qubit depolarizing channel.
    bool joint_two_qubit_channel = false;

    void validate() const;
};

struct DepolarizingP {
    double p = 0.0;
    bool clamped = false;
};

/// p = 1 + 3 (2 eps - 1) / d with eps = 1 - F and
/// d = exp(-Tg/T1) + 2 exp(-Tg/T2), clamped into [0, 1].
DepolarizingP depolarizing_p(double fidelity, double gate_time_s, double t1_s, double t2_s);

/// 2^L x 2^L density operator.
struct DensityMatrix {
    int n_qubits = 0;
    Eigen::MatrixXcd elements;

    explicit DensityMatrix(int n_qubits);
    static DensityMatrix from_state(const StateVector& psi);

    std::uint64_t dim() const { return std::uint64_t{1} << n_qubits; }
    double trace_real() const;
    /// Hermiticity within 1e-10, trace 1 within 1e-10, eigenvalues >= -1e-9.
    void validate() const;

    /// Computational-basis probabilities (the real diagonal).
    std::vector<double> diagonal_probabilities() const;
};

/// rho -> U rho U^dag for one native gate.
void apply_gate(DensityMatrix& rho, const NativeGate& g);

/// (1-p) rho + p (I/2 on `qubit`) (x) tr_qubit(rho); trace preserving for any
/// p in [0, 1].
void apply_depolarizing(DensityMatrix& rho, int qubit, double p);

/// Joint variant on a qubit pair: (1-p) rho + p (I/4) (x) tr_pair(rho).
void apply_joint_depolarizing(DensityMatrix& rho, int qubit_a, int qubit_b, double p);

/// Independent per-qubit bit flips on a basis distribution; stays normalized.
std::vector<double> apply_readout_flip(std::vector<double> probabilities, double flip);

/// Density-matrix execution: after every 1q gate one depolarizing channel on
/// its qubit, after every MS either independent channels on both qubits or
/// the joint variant. Clamping events are appended to `warnings`.
DensityMatrix execute_noisy(const StateVector& psi0, const CircuitIR& circ,
                            const NoiseModel& noise, std::vector<std::string>* warnings = nullptr);

/// Stateful density backend for incremental pipelines (L <= 10).
class DensityBackend {
public:
    DensityBackend(StateVector psi0, NoiseModel noise);

    void apply_circuit(const CircuitIR& circ);
    /// tr(rho O), no measurement noise.
    double expectation_of(const PauliSum& o) const;
    /// Single +/-1 Pauli string measured through noisy basis-change gates and
    /// readout flips.
    double measured_expectation(const PauliSum& o);

    const DensityMatrix& state() const { return rho_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    DensityMatrix rho_;
    NoiseModel noise_;
    DepolarizingP p1q_;
    DepolarizingP p2q_;
    std::vector<std::string> warnings_;
};

/// Stochastic Kraus-trajectory backend: each trajectory is a pure state and
/// every channel application samples one Kraus branch from {I, X, Y, Z}.
/// Draws are keyed by (seed, trajectory, channel counter), so results do not
/// depend on evaluation order; averages use pairwise summation.
class TrajectoryBackend {
public:
    TrajectoryBackend(const StateVector& psi0, NoiseModel noise, int n_trajectories,
                      std::uint64_t seed);

    void apply_circuit(const CircuitIR& circ);
    /// Trajectory-averaged measured expectation of a single +/-1 Pauli
    /// string, including noisy basis-change gates and the readout factor.
    double measured_expectation(const PauliSum& o) const;
    /// Trajectory-averaged plain expectation (no measurement noise).
    double expectation_of(const PauliSum& o) const;

    int n_trajectories() const { return static_cast<int>(states_.size()); }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::vector<StateVector> states_;
    NoiseModel noise_;
    DepolarizingP p1q_;
    DepolarizingP p2q_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> channel_counters_;
    std::vector<std::string> warnings_;
};

/// Averaged-observable interface of the trajectories backend for one-shot
/// circuits.
double execute_noisy_trajectories(const StateVector& psi0, const CircuitIR& circ,
                                  const NoiseModel& noise, const PauliSum& o, int n_trajectories,
                                  std::uint64_t seed);

/// Basis-change circuit mapping each X/Y factor of a Pauli string to Z.
CircuitIR measurement_basis_circuit(const PauliSum& o);

} // namespace gapscope
