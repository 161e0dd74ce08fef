#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <cmath>

#include "gapscope/models.hpp"
#include "gapscope/oracle.hpp"
#include "test_helpers.hpp"

using namespace gapscope;

TEST_CASE("decoupled spins: ground energy -2 and gap 1") {
    std::vector<PauliTerm> terms;
    for (int q = 0; q < 4; ++q) {
        std::vector<Axis> axes(4, Axis::I);
        axes[q] = Axis::Z;
        terms.emplace_back(-0.5, axes);
    }
    const PauliSum h(4, terms);
    const SpectrumSlice slice = diagonalize(h, 2);
    CHECK(slice.energies[0] == doctest::Approx(-2.0));
    CHECK(slice.energies[1] - slice.energies[0] == doctest::Approx(1.0));
}

TEST_CASE("zero transverse field gives a twofold-degenerate ground space") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 0.0));
    const SpectrumSlice slice = diagonalize(h, 2);
    CHECK(std::abs(slice.energies[1] - slice.energies[0]) < 1e-12);
}

TEST_CASE("gap approaches h3 deep in the large-field phase") {
    // leading correction is the single-flip hopping energy -J1
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 1000.0));
    CHECK(exact_gap(h, 0, 1) == doctest::Approx(1000.0).epsilon(2e-3));
    CHECK(exact_gap(h, 0, 1) == doctest::Approx(999.0).epsilon(1e-5));
}

TEST_CASE("dense limit errors direct users to the estimator path") {
    const PauliSum h = build_ising(IsingSpec::chain(20, 1.0, 1.0));
    CHECK_THROWS_AS(exact_gap(h, 0, 1), DenseLimitError);
}

TEST_CASE("eigenpairs satisfy the residual bound") {
    const PauliSum h = build_ising(IsingSpec::chain(6, 1.0, 1.7));
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    const double scale = m.cwiseAbs().maxCoeff() * m.rows();
    const SpectrumSlice slice = diagonalize(h, 8);
    for (std::size_t k = 0; k < slice.energies.size(); ++k) {
        const Eigen::VectorXcd v = gapscope::testing::to_eigen(slice.eigenvectors[k]);
        const double residual = (m * v - slice.energies[k] * v).norm();
        CHECK(residual < 1e-9 * scale);
    }
}

TEST_CASE("eigenvectors are orthonormal") {
    const PauliSum h = build_ising(IsingSpec::chain(5, 1.0, 0.6));
    const SpectrumSlice slice = diagonalize(h, 6);
    for (std::size_t a = 0; a < slice.eigenvectors.size(); ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            const cplx ip = slice.eigenvectors[a].inner(slice.eigenvectors[b]);
            CHECK(std::abs(ip - (a == b ? cplx{1, 0} : cplx{0, 0})) < 1e-9);
        }
    }
}

TEST_CASE("degenerate ground pair spans the parity basis at zero field") {
    const int sites = 4;
    const PauliSum h = build_ising(IsingSpec::chain(sites, 1.0, 0.0));
    const SpectrumSlice slice = diagonalize(h, 2);

    StateVector phi_plus(sites), phi_minus(sites);
    for (std::uint64_t b = 0; b < phi_plus.dim(); ++b) {
        const bool even = (std::popcount(b) & 1) == 0;
        phi_plus[b] = even ? cplx{1, 0} : cplx{0, 0};
        phi_minus[b] = even ? cplx{0, 0} : cplx{1, 0};
    }
    phi_plus.normalize();
    phi_minus.normalize();

    // projector onto the reported pair vs projector onto {Phi+, Phi-}
    const auto proj = [](const StateVector& a, const StateVector& b) {
        const Eigen::VectorXcd va = gapscope::testing::to_eigen(a);
        const Eigen::VectorXcd vb = gapscope::testing::to_eigen(b);
        return (va * va.adjoint() + vb * vb.adjoint()).eval();
    };
    const Eigen::MatrixXcd p_pair = proj(slice.eigenvectors[0], slice.eigenvectors[1]);
    const Eigen::MatrixXcd p_phi = proj(phi_plus, phi_minus);
    CHECK((p_pair - p_phi).cwiseAbs().maxCoeff() < 1e-9);

    // the parity rotation pins the pair to (Phi+, Phi-) individually
    CHECK(slice.eigenvectors[0].fidelity(phi_plus) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(slice.eigenvectors[1].fidelity(phi_minus) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact series of a stationary state is constant") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 2.0));
    const SpectrumSlice slice = diagonalize(h, 1);
    const PauliSum obs(4, {PauliTerm(1.0, "XIII")});
    const TimeSeries series =
        exact_series(h, obs, slice.eigenvectors[0], {0.0, 0.5, 1.0, 1.5, 2.0});
    for (std::size_t k = 1; k < series.size(); ++k)
        CHECK(series.values[k] == doctest::Approx(series.values[0]).epsilon(1e-10));
}

TEST_CASE("amplitude law on chains: floor 1/sqrt(L) and both limits") {
    for (int sites : {4, 6, 8}) {
        const PauliSum obs(sites,
                           {PauliTerm(1.0, "X" + std::string(std::size_t(sites) - 1, 'I'))});
        const auto family = [&](double ratio) {
            return build_ising(IsingSpec::chain(sites, 1.0, ratio));
        };
        const std::vector<double> grid{0.0, 0.3, 1.0, 3.0, 10.0, 100.0};
        const auto table = amplitude_scan(family, obs, grid);
        const double floor = 1.0 / std::sqrt(double(sites));
        for (const auto& point : table) CHECK(point.amplitude >= floor - 1e-6);
        CHECK(table.front().amplitude == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(table.back().amplitude == doctest::Approx(floor).epsilon(1e-2));
    }
}
