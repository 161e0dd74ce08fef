#pragma once

#include <functional>
#include <vector>

#include "gapscope/gap.hpp"
#include "gapscope/pauli.hpp"
#include "gapscope/statevector.hpp"

namespace gapscope {

/// Lowest-k eigenpairs of a dense Hermitian realization, energies ascending.
/// Degenerate clusters are rotated to the Z-parity eigenbasis (+1 sector
/// first) so the reported pair at a degeneracy is deterministic; each vector
/// is phase-fixed so its largest amplitude is real positive.
struct SpectrumSlice {
    std::vector<double> energies;
    std::vector<StateVector> eigenvectors;
    double degeneracy_tol = 0.0;
};

SpectrumSlice diagonalize(const PauliSum& h, int k);

/// |E_i - E_j| from the dense spectrum.
double exact_gap(const PauliSum& h, int i, int j);

/// (|Omega_i> + |Omega_j>)/sqrt(2) from the dense spectrum.
StateVector exact_superposition(const PauliSum& h, int i, int j);

/// <psi| e^{iHt} O e^{-iHt} |psi> via spectral decomposition, no Trotter
/// error. Sigmas are zero, shots exact.
TimeSeries exact_series(const PauliSum& h, const PauliSum& o, const StateVector& psi,
                        const std::vector<double>& times);

struct AmplitudePoint {
    double parameter = 0.0;
    double amplitude = 0.0;
};

/// |<Omega_1|O|Omega_0>| along a parameterized Hamiltonian family.
std::vector<AmplitudePoint> amplitude_scan(const std::function<PauliSum(double)>& h_family,
                                           const PauliSum& o, const std::vector<double>& grid);

} // namespace gapscope
