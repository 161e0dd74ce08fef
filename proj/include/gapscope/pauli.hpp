#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapscope/statevector.hpp"

namespace gapscope {

enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_char(Axis a);
Axis axis_from_char(char c);

struct DenseLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One weighted Pauli string: coefficient * (sigma^{a_0} (x) ... (x) sigma^{a_{L-1}}).
/// Qubit 0 is the leftmost factor.
struct PauliTerm {
    double coefficient = 0.0;
    std::vector<Axis> axes;

    PauliTerm() = default;
    PauliTerm(double c, std::vector<Axis> a) : coefficient(c), axes(std::move(a)) {}
    /// Parse axes from a string over {I,X,Y,Z}, e.g. PauliTerm(-0.5, "XXII").
    PauliTerm(double c, const std::string& a);

    int n_qubits() const { return static_cast<int>(axes.size()); }
    /// Number of non-identity factors.
    int weight() const;
    /// All axes in {I, Z}.
    bool is_diagonal() const;
    std::string axes_string() const;
};

/// Canonical weighted sum of Pauli strings: terms merged on identical axes,
/// sorted lexicographically, coefficients below 1e-14 dropped.
class PauliSum {
public:
    explicit PauliSum(int n_qubits);
    PauliSum(int n_qubits, std::vector<PauliTerm> terms);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Sum of |coefficient| over all terms; bounds any expectation value.
    double coefficient_l1() const;
    /// All terms diagonal.
    bool is_diagonal() const;

    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator-=(const PauliSum& other);
    PauliSum& operator*=(double factor);

    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, double f) { return a *= f; }
    friend PauliSum operator*(double f, PauliSum a) { return a *= f; }

    static constexpr double kDropTolerance = 1e-14;

private:
    void canonicalize(std::vector<PauliTerm> terms);

    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// h0 + s * (h - h0)
PauliSum interpolate(const PauliSum& h0, const PauliSum& h, double s);

/// Dense 2^L x 2^L realization. Throws DenseLimitError above the dense cap.
Eigen::MatrixXcd to_dense_matrix(const PauliSum& h);
Eigen::MatrixXcd to_dense_matrix(const PauliTerm& term);

/// Re<psi|O|psi> for a normalized state; the imaginary residual must be below
/// 1e-10 (guaranteed for real coefficients) and is discarded.
double expectation(const PauliSum& o, const StateVector& psi);

/// <bra|O|ket>; modulus and argument are the amplitude and phase of the
/// oscillation a two-eigenstate superposition produces.
cplx matrix_element(const PauliSum& o, const StateVector& bra, const StateVector& ket);

/// Energies of all 2^L basis states for a diagonal sum.
std::vector<double> diagonal_values(const PauliSum& h);

/// Text format: one `<coeff> <axes>` pair per line, `#` starts a comment.
PauliSum parse_pauli_sum(const std::string& text);
std::string format_pauli_sum(const PauliSum& sum);
PauliSum load_pauli_sum(const std::string& path);

} // namespace gapscope
