#pragma once

#include <vector>

#include "gapscope/circuit.hpp"
#include "gapscope/pauli.hpp"

namespace gapscope {

struct UnsupportedTermError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic term order inside one first-order step: single-qubit Z by
/// qubit, single-qubit X by qubit, two-qubit bonds with even lower site, then
/// odd, then all remaining terms in lexicographic axes order.
std::vector<PauliTerm> step_schedule(const std::vector<PauliTerm>& terms);

/// Compile exp(-i dt c_k P_k), one factor per scheduled term, to native
/// gates. Supports strings over {I,X,Z} with weight 1 or 2: Z -> VIRTUAL_Z,
/// X -> GPI2-conjugated VIRTUAL_Z, XX -> MS, and Z factors of two-qubit
/// terms handled by GPI2 basis conjugation. Identity terms are a global
/// phase and are dropped. Anything else throws UnsupportedTermError; general
/// strings run through the amplitude-level fast path instead.
CircuitIR compile_trotter_step(const std::vector<PauliTerm>& terms, int n_qubits, double dt);
CircuitIR compile_trotter_step(const PauliSum& h, double dt);

/// n_steps identical first-order steps of duration t/n_steps, with step marks.
CircuitIR compile_trotter_evolution(const PauliSum& h, double t, int n_steps);

/// Fast path: one first-order step applied directly to amplitudes, same term
/// order as the compiler. Handles arbitrary Pauli strings.
void apply_trotter_step(StateVector& psi, const std::vector<PauliTerm>& terms, double dt);
void apply_trotter_step(StateVector& psi, const PauliSum& h, double dt);

/// n_steps first-order steps of duration t/n_steps on the fast path.
void evolve_trotter(StateVector& psi, const PauliSum& h, double t, int n_steps);

} // namespace gapscope
