#pragma once

namespace gapscope {

// Dense realizations (matrices, eigensolvers, density backend) are capped at
// this qubit count. GAPSCOPE_MAX_DENSE_QUBITS overrides the default of 12.
int max_dense_qubits();

inline constexpr int kMaxStateQubits = 24;
inline constexpr int kMaxDensityQubits = 10;

} // namespace gapscope
