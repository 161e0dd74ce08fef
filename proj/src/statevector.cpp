#include "gapscope/statevector.hpp"

#include <cmath>
#include <stdexcept>

#include "gapscope/limits.hpp"

namespace gapscope {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
        throw std::invalid_argument("StateVector: qubit count out of range [1, " +
                                    std::to_string(kMaxStateQubits) + "]");
    }
    amps_.assign(std::uint64_t{1} << n_qubits, cplx{0.0, 0.0});
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector psi(n_qubits);
    if (index >= psi.dim()) throw std::out_of_range("basis_state: index out of range");
    psi[index] = cplx{1.0, 0.0};
    return psi;
}

StateVector StateVector::plus_state(int n_qubits) {
    StateVector psi(n_qubits);
    const double a = std::pow(2.0, -0.5 * n_qubits);
    for (auto& amp : psi.amps_) amp = cplx{a, 0.0};
    return psi;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::normalize() {
    const double n = std::sqrt(norm_sq());
    if (n == 0.0) throw std::runtime_error("normalize: zero vector");
    for (auto& a : amps_) a /= n;
}

cplx StateVector::inner(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s{0.0, 0.0};
    for (std::uint64_t i = 0; i < dim(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

double StateVector::fidelity(const StateVector& other) const {
    return std::norm(inner(other));
}

} // namespace gapscope
