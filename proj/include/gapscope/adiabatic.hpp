#pragma once

#include <cstdint>
#include <vector>

#include "gapscope/pauli.hpp"
#include "gapscope/statevector.hpp"

namespace gapscope {

/// Discretized interpolation schedule from h0 to h_target: q_ap first-order
/// Trotter steps of duration tau / q_ap, evaluating the interpolated
/// Hamiltonian at s = q / (q_ap + 1).
struct ApSchedule {
    int q_ap = 0;
    double tau = 0.0;
    PauliSum h0;
    PauliSum h_target;

    ApSchedule(int steps, double duration, PauliSum h0_in, PauliSum target);
};

/// Squared overlaps of a prepared state with the target eigenpair. For a
/// degenerate cluster the fidelity is the squared projection onto the whole
/// eigenspace, except when i and j share one cluster, where the individual
/// (parity-rotated) eigenvectors are used so the three numbers still sum to 1.
struct PrepReport {
    double fidelity_ground = 0.0;
    double fidelity_excited = 0.0;
    double leakage = 0.0;
};

/// |+>^{(x) L}: the analytic superposition seed for the transverse-field
/// Ising family.
StateVector initial_state_ising(int sites);

/// (|b_i> + |b_j>)/sqrt(2) where b_i, b_j are the basis states at sorted
/// positions i and j of the diagonal of h0; ties break by basis index.
StateVector initial_state_diagonal(const PauliSum& h0, int i, int j);

/// Run the discretized adiabatic schedule on the amplitude-level fast path.
/// Returns the final state, normalized.
StateVector run_ap(StateVector psi, const ApSchedule& sched);

PrepReport prep_report(const StateVector& psi, const PauliSum& h, int i, int j);

struct PrepErrorRow {
    double epsilon = 0.0;
    double max_series_deviation = 0.0;
    double infidelity = 0.0;
};

/// Perturb the exact superposition |Psi(i,j)> by epsilon along a fixed unit
/// vector orthogonal to span{Omega_i, Omega_j} and report how far the exact
/// observable series moves, plus the infidelity of the perturbed state.
std::vector<PrepErrorRow> prep_error_scan(const std::vector<double>& epsilons, const PauliSum& h,
                                          const PauliSum& o, int i = 0, int j = 1,
                                          std::uint64_t seed = 20250809);

} // namespace gapscope
