#include "gapscope/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "gapscope/limits.hpp"

namespace gapscope {

namespace {

struct EigenSystem {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;  // columns
};

EigenSystem dense_eigensystem(const PauliSum& h) {
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// (-1)^{popcount(b)}: eigenvalue of Z^{(x)L} on basis state b.
int z_parity(std::uint64_t b) { return (std::popcount(b) & 1) ? -1 : 1; }

void fix_phase(Eigen::VectorXcd& v) {
    Eigen::Index best = 0;
    double best_mag = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::norm(v(i));
        if (mag > best_mag + 1e-15) {
            best_mag = mag;
            best = i;
        }
    }
    const cplx a = v(best);
    const double mag = std::abs(a);
    if (mag > 0) v *= std::conj(a) / mag;
}

// Rotate each degenerate cluster to the eigenbasis of Z^{(x)L} restricted to
// it, +1 sector first, which pins the basis the symmetry argument uses for
// the twofold-degenerate ground space at zero transverse field.
void rotate_degenerate_clusters(EigenSystem& sys, double tol) {
    const Eigen::Index n = sys.energies.size();
    Eigen::Index lo = 0;
    while (lo < n) {
        Eigen::Index hi = lo + 1;
        while (hi < n && sys.energies(hi) - sys.energies(hi - 1) <= tol) ++hi;
        const Eigen::Index k = hi - lo;
        if (k > 1) {
            Eigen::MatrixXcd block = sys.vectors.middleCols(lo, k);
            Eigen::MatrixXcd parity_in_block(k, k);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) {
                    cplx s{0, 0};
                    for (Eigen::Index r = 0; r < block.rows(); ++r) {
                        s += std::conj(block(r, a)) * double(z_parity(std::uint64_t(r))) *
                             block(r, b);
                    }
                    parity_in_block(a, b) = s;
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ps(parity_in_block);
            Eigen::MatrixXcd rotated = block * ps.eigenvectors();
            // SelfAdjointEigenSolver sorts ascending; want +1 parity first.
            for (Eigen::Index c = 0; c < k; ++c)
                sys.vectors.col(lo + c) = rotated.col(k - 1 - c);
        }
        lo = hi;
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::VectorXcd v = sys.vectors.col(c);
        fix_phase(v);
        sys.vectors.col(c) = v;
    }
}

double spectral_scale(const EigenSystem& sys) {
    double s = 0.0;
    if (sys.energies.size() > 0)
        s = std::max(std::abs(sys.energies(0)), std::abs(sys.energies(sys.energies.size() - 1)));
    return std::max(s, 1.0);
}

void check_dense(const PauliSum& h, const char* who) {
    if (h.n_qubits() > max_dense_qubits())
        throw DenseLimitError(std::string(who) + ": " + std::to_string(h.n_qubits()) +
                              " qubits exceeds dense cap " + std::to_string(max_dense_qubits()) +
                              "; use the estimator pipeline instead");
}

} // namespace

SpectrumSlice diagonalize(const PauliSum& h, int k) {
    check_dense(h, "diagonalize");
    if (k < 1) throw std::invalid_argument("diagonalize: k >= 1 required");
    EigenSystem sys = dense_eigensystem(h);
    const double tol = 1e-9 * spectral_scale(sys);
    rotate_degenerate_clusters(sys, tol);
    const int n = static_cast<int>(sys.energies.size());
    k = std::min(k, n);
    SpectrumSlice slice;
    slice.degeneracy_tol = tol;
    slice.energies.reserve(k);
    slice.eigenvectors.reserve(k);
    for (int c = 0; c < k; ++c) {
        slice.energies.push_back(sys.energies(c));
        StateVector v(h.n_qubits());
        for (std::uint64_t b = 0; b < v.dim(); ++b)
            v[b] = sys.vectors(static_cast<Eigen::Index>(b), c);
        slice.eigenvectors.push_back(std::move(v));
    }
    return slice;
}

double exact_gap(const PauliSum& h, int i, int j) {
    const int k = std::max(i, j) + 1;
    const SpectrumSlice slice = diagonalize(h, k);
    if (static_cast<int>(slice.energies.size()) < k)
        throw std::invalid_argument("exact_gap: eigenpair index out of range");
    return std::abs(slice.energies[i] - slice.energies[j]);
}

StateVector exact_superposition(const PauliSum& h, int i, int j) {
    const int k = std::max(i, j) + 1;
    const SpectrumSlice slice = diagonalize(h, k);
    StateVector psi(h.n_qubits());
    const double r = 1.0 / std::sqrt(2.0);
    for (std::uint64_t b = 0; b < psi.dim(); ++b)
        psi[b] = r * (slice.eigenvectors[i][b] + slice.eigenvectors[j][b]);
    psi.normalize();
    return psi;
}

TimeSeries exact_series(const PauliSum& h, const PauliSum& o, const StateVector& psi,
                        const std::vector<double>& times) {
    check_dense(h, "exact_series");
    if (psi.n_qubits() != h.n_qubits() || o.n_qubits() != h.n_qubits())
        throw std::invalid_argument("exact_series: dimension mismatch");
    EigenSystem sys = dense_eigensystem(h);
    const auto dim = static_cast<Eigen::Index>(psi.dim());
    Eigen::VectorXcd psi_vec(dim);
    for (Eigen::Index b = 0; b < dim; ++b) psi_vec(b) = psi[std::uint64_t(b)];
    const Eigen::VectorXcd coeffs = sys.vectors.adjoint() * psi_vec;

    TimeSeries series;
    series.shots = TimeSeries::kExact;
    for (double t : times) {
        Eigen::VectorXcd evolved_coeffs(dim);
        for (Eigen::Index m = 0; m < dim; ++m)
            evolved_coeffs(m) = coeffs(m) * std::exp(cplx{0.0, -sys.energies(m) * t});
        const Eigen::VectorXcd evolved = sys.vectors * evolved_coeffs;
        StateVector phi(psi.n_qubits());
        for (Eigen::Index b = 0; b < dim; ++b) phi[std::uint64_t(b)] = evolved(b);
        const cplx v = matrix_element(o, phi, phi);
        series.times.push_back(t);
        series.values.push_back(v.real());
        series.sigmas.push_back(0.0);
    }
    return series;
}

std::vector<AmplitudePoint> amplitude_scan(const std::function<PauliSum(double)>& h_family,
                                           const PauliSum& o, const std::vector<double>& grid) {
    std::vector<AmplitudePoint> table;
    table.reserve(grid.size());
    for (double param : grid) {
        const PauliSum h = h_family(param);
        const SpectrumSlice slice = diagonalize(h, 2);
        const cplx me = matrix_element(o, slice.eigenvectors[1], slice.eigenvectors[0]);
        table.push_back({param, std::abs(me)});
    }
    return table;
}

} // namespace gapscope
