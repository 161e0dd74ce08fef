#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gapscope/pauli.hpp"
#include "gapscope/statevector.hpp"

namespace gapscope {

enum class GateKind { GPI2, VIRTUAL_Z, MS };

/// Trapped-ion native gate. GPI2 and VIRTUAL_Z take one qubit and one angle;
/// MS takes two qubits and (phi0, phi1, theta).
struct NativeGate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;
    double p0 = 0.0;  // GPI2 phi / VIRTUAL_Z theta / MS phi0
    double p1 = 0.0;  // MS phi1
    double p2 = 0.0;  // MS theta

    static NativeGate gpi2(int q, double phi) { return {GateKind::GPI2, q, -1, phi, 0, 0}; }
    static NativeGate virtual_z(int q, double theta) {
        return {GateKind::VIRTUAL_Z, q, -1, theta, 0, 0};
    }
    static NativeGate ms(int qa, int qb, double phi0, double phi1, double theta) {
        return {GateKind::MS, qa, qb, phi0, phi1, theta};
    }

    bool is_two_qubit() const { return kind == GateKind::MS; }
};

/// Ordered gate list plus step markers (gate indices at which a Trotter step
/// begins) used for accounting and noise insertion.
struct CircuitIR {
    int n_qubits = 0;
    std::vector<NativeGate> gates;
    std::vector<std::size_t> step_marks;

    void append(const CircuitIR& other);
    void mark_step() { step_marks.push_back(gates.size()); }
};

/// Exact unitary of a native gate (2x2 or 4x4).
Eigen::MatrixXcd gate_matrix(const NativeGate& g);

/// In-place application of one gate. Norm is preserved to machine precision.
void apply_gate(StateVector& psi, const NativeGate& g);

/// In-place exp(-i * angle * P) for the unit-coefficient Pauli string of
/// `term` (the stored coefficient is ignored). Fast path used by the
/// noiseless engine; works for arbitrary strings.
void apply_pauli_exponential(StateVector& psi, const PauliTerm& term, double angle);

/// Sequential application of all gates.
void execute(StateVector& psi, const CircuitIR& circ);

/// Circuit with every gate inverted, in reverse order.
CircuitIR inverse_circuit(const CircuitIR& circ);

struct CircuitStats {
    std::size_t gate_count = 0;
    std::size_t ms_count = 0;
    std::size_t one_qubit_count = 0;
    /// Greedy layering of MS gates on disjoint qubits; the two-qubit depth.
    std::size_t entangling_depth = 0;
};
CircuitStats circuit_stats(const CircuitIR& circ);

/// One gate per line: `GPI2 q phi`, `VIRTUAL_Z q theta`, `MS q0 q1 phi0 phi1
/// theta`, with `BARRIER step <k>` at step marks.
std::string format_circuit(const CircuitIR& circ);

} // namespace gapscope
