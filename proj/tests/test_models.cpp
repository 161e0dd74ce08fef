#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "gapscope/models.hpp"
#include "gapscope/oracle.hpp"
#include "test_helpers.hpp"

using namespace gapscope;

#ifndef GAPSCOPE_REPO_ROOT
#define GAPSCOPE_REPO_ROOT "."
#endif

namespace {
const std::string kRoot = GAPSCOPE_REPO_ROOT;
}

TEST_CASE("chain Ising terms carry the -J1/2 and -h3/2 prefactors") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 0.5));
    int xx = 0, z = 0;
    for (const auto& t : h.terms()) {
        if (t.weight() == 2) {
            CHECK(t.coefficient == doctest::Approx(-0.5));
            ++xx;
        } else {
            CHECK(t.coefficient == doctest::Approx(-0.25));
            ++z;
        }
    }
    CHECK(xx == 4);
    CHECK(z == 4);
}

TEST_CASE("h3 = 0 recovers the auxiliary Hamiltonian exactly") {
    const IsingSpec spec = IsingSpec::chain(6, 1.3, 0.0);
    const PauliSum h = build_ising(spec);
    const PauliSum h0 = build_ising_h0(IsingSpec::chain(6, 1.3, 2.2));
    REQUIRE(h.size() == h0.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        CHECK(h.terms()[k].axes == h0.terms()[k].axes);
        CHECK(h.terms()[k].coefficient == h0.terms()[k].coefficient);
    }
    CHECK(h0.size() == 6);
    for (const auto& t : h0.terms()) CHECK(t.coefficient == doctest::Approx(-0.65));
}

TEST_CASE("transverse split: full Hamiltonian is coupling part plus field part") {
    const IsingSpec spec = IsingSpec::chain(5, 0.8, 1.7);
    const PauliSum h = build_ising(spec);
    const PauliSum h0 = build_ising_h0(spec);
    const PauliSum field = h - h0;
    for (const auto& t : field.terms()) {
        CHECK(t.weight() == 1);
        CHECK(t.coefficient == doctest::Approx(-0.85));
    }
    const PauliSum recombined = h0 + field;
    REQUIRE(recombined.size() == h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        CHECK(recombined.terms()[k].coefficient ==
              doctest::Approx(h.terms()[k].coefficient).epsilon(1e-14));
}

TEST_CASE("L=2 chain merges the two directed bonds") {
    const PauliSum h0 = build_ising_h0(IsingSpec::chain(2, 1.0, 0.0));
    REQUIRE(h0.size() == 1);
    CHECK(h0.terms()[0].axes_string() == "XX");
    CHECK(h0.terms()[0].coefficient == doctest::Approx(-1.0));
}

TEST_CASE("2x2 lattice bond multiset doubles into merged coefficients") {
    const IsingSpec spec = IsingSpec::lattice(2, 2, 1.0, 0.0);
    CHECK(ising_bonds(spec).size() == 8);
    const PauliSum h0 = build_ising_h0(spec);
    REQUIRE(h0.size() == 4);
    for (const auto& t : h0.terms()) CHECK(t.coefficient == doctest::Approx(-1.0));
}

TEST_CASE("invariant violations are rejected") {
    CHECK_THROWS_AS(IsingSpec::chain(1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IsingSpec::chain(4, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IsingSpec::chain(4, 1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(IsingSpec::lattice(1, 3, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("single-mode number operator maps to (I - Z)/2") {
    FermionIntegrals ints(1, 0.0);
    const double e = 0.731;
    ints.set_one_body(0, 0, e);
    const PauliSum h = jordan_wigner(ints);
    REQUIRE(h.size() == 2);
    CHECK(h.terms()[0].axes_string() == "I");
    CHECK(h.terms()[0].coefficient == doctest::Approx(e / 2));
    CHECK(h.terms()[1].axes_string() == "Z");
    CHECK(h.terms()[1].coefficient == doctest::Approx(-e / 2));
}

TEST_CASE("two-mode hopping has ground energy -|t|") {
    FermionIntegrals ints(2, 0.0);
    const double t = 0.37;
    ints.set_one_body(0, 1, t);
    ints.set_one_body(1, 0, t);
    const PauliSum h = jordan_wigner(ints);
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-t).epsilon(1e-12));
}

TEST_CASE("H2 fixture reproduces its Fock-space reference energies") {
    const std::string path = kRoot + "/fixtures/h2/h2_0.735.json";
    const FermionIntegrals ints = load_molecule_json(path);
    CHECK(ints.n_orbitals() == 4);
    const PauliSum h = jordan_wigner(ints);
    const SpectrumSlice slice = diagonalize(h, 2);

    std::ifstream in(path);
    const nlohmann::json meta = nlohmann::json::parse(in)["provenance"];
    CHECK(slice.energies[0] ==
          doctest::Approx(meta["fock_space_ground_energy_hartree"].get<double>()).epsilon(1e-8));
    const double gap = exact_gap(h, 0, 1);
    CHECK(gap == doctest::Approx(meta["fock_space_gap_hartree"].get<double>()).epsilon(1e-8));
}

TEST_CASE("jordan_wigner output is Hermitian and parity-symmetric") {
    const FermionIntegrals ints = load_molecule_json(kRoot + "/fixtures/h2/h2_0.735.json");
    const PauliSum h = jordan_wigner(ints);
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    const PauliSum parity(h.n_qubits(), {PauliTerm(1.0, std::string(h.n_qubits(), 'Z'))});
    const Eigen::MatrixXcd p = to_dense_matrix(parity);
    CHECK((m * p - p * m).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("diagonal_part keeps exactly the I/Z terms") {
    const PauliSum mixed(2, {PauliTerm(1.0, "ZZ"), PauliTerm(0.3, "XX")});
    const PauliSum diag = diagonal_part(mixed);
    REQUIRE(diag.size() == 1);
    CHECK(diag.terms()[0].axes_string() == "ZZ");

    const PauliSum ising = build_ising(IsingSpec::chain(4, 1.0, 0.9));
    const PauliSum field = diagonal_part(ising);
    CHECK(field.size() == 4);
    for (const auto& t : field.terms()) {
        CHECK(t.weight() == 1);
        CHECK(t.coefficient == doctest::Approx(-0.45));
    }
}

TEST_CASE("molecule diagonal part realizes a diagonal dense matrix") {
    const FermionIntegrals ints = load_molecule_json(kRoot + "/fixtures/h2/h2_0.735.json");
    const PauliSum diag = diagonal_part(jordan_wigner(ints));
    const Eigen::MatrixXcd m = to_dense_matrix(diag);
    double off = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (r != c) off = std::max(off, std::abs(m(r, c)));
    CHECK(off < 1e-12);
}

TEST_CASE("molecule json loader validates its input") {
    CHECK_THROWS(parse_molecule_json("{}"));
    CHECK_THROWS(parse_molecule_json(R"({"n_orbitals": 2, "nuclear_repulsion": 0.0,
        "one_body": [[0, 1, 0.5]]})"));  // asymmetric h_pq
    CHECK_THROWS(parse_molecule_json(R"({"n_orbitals": 2, "nuclear_repulsion": 0.0,
        "one_body": [[0, 5, 0.5]]})"));  // index out of range
}
