#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace gapscope {

using cplx = std::complex<double>;

/// Complex amplitudes over the 2^L computational basis.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
/// the basis index: bit of qubit k in index b is (b >> (L-1-k)) & 1.
class StateVector {
public:
    explicit StateVector(int n_qubits);

    static StateVector basis_state(int n_qubits, std::uint64_t index);
    /// |+>^{(x) L}: every amplitude 2^{-L/2}.
    static StateVector plus_state(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }

    cplx& operator[](std::uint64_t i) { return amps_[i]; }
    const cplx& operator[](std::uint64_t i) const { return amps_[i]; }

    std::vector<cplx>& amplitudes() { return amps_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    double norm_sq() const;
    void normalize();

    /// <this|other>
    cplx inner(const StateVector& other) const;
    /// |<this|other>|^2
    double fidelity(const StateVector& other) const;

    static int qubit_bit(int n_qubits, std::uint64_t index, int qubit) {
        return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1ULL);
    }

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

} // namespace gapscope
