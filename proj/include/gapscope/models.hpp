#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gapscope/pauli.hpp"

namespace gapscope {

/// Transverse-field Ising model with periodic boundary conditions:
/// H = -(J1/2) sum_<ij> X_i X_j - (h3/2) sum_i Z_i.
struct IsingSpec {
    enum class Topology { Chain, SquareLattice };

    Topology topology = Topology::Chain;
    int length = 0;  // chain sites
    int rows = 0;    // lattice extents
    int cols = 0;
    double j1 = 1.0;
    double h3 = 0.0;
    bool pbc = true;

    int n_sites() const;
    void validate() const;

    static IsingSpec chain(int sites, double j1, double h3);
    static IsingSpec lattice(int rows, int cols, double j1, double h3);
};

/// Nearest-neighbour bond multiset before canonical merging. Wraparound on
/// extent-2 axes yields duplicate pairs, kept so per-step gate counts match
/// the torus bond count.
std::vector<std::pair<int, int>> ising_bonds(const IsingSpec& spec);

/// Term multiset (bonds + fields) before canonical merging; feeds the gate
/// compiler directly.
std::vector<PauliTerm> ising_terms(const IsingSpec& spec);

PauliSum build_ising(const IsingSpec& spec);
/// The h3 = 0 coupling part, the auxiliary Hamiltonian for the Ising runs.
PauliSum build_ising_h0(const IsingSpec& spec);

/// One- and two-body coefficients over spin orbitals (Hartree). The two-body
/// array multiplies c_p^dag c_q^dag c_r c_s with a global 1/2 prefactor.
class FermionIntegrals {
public:
    FermionIntegrals(int n_orbitals, double nuclear_repulsion);

    int n_orbitals() const { return n_; }
    double nuclear_repulsion() const { return nuclear_repulsion_; }

    double one_body(int p, int q) const { return one_[idx2(p, q)]; }
    double two_body(int p, int q, int r, int s) const { return two_[idx4(p, q, r, s)]; }
    void set_one_body(int p, int q, double v) { one_[idx2(p, q)] = v; }
    void set_two_body(int p, int q, int r, int s, double v) { two_[idx4(p, q, r, s)] = v; }

    /// Symmetry of h_pq within 1e-10 and finite entries.
    void validate() const;

private:
    std::size_t idx2(int p, int q) const;
    std::size_t idx4(int p, int q, int r, int s) const;

    int n_;
    double nuclear_repulsion_;
    std::vector<double> one_;
    std::vector<double> two_;
};

/// `molecule.json`: {n_orbitals, nuclear_repulsion, one_body: [[p,q,v]...],
/// two_body: [[p,q,r,s,v]...]}; extra keys are provenance and are ignored.
FermionIntegrals load_molecule_json(const std::string& path);
FermionIntegrals parse_molecule_json(const std::string& text);

/// Qubit Hamiltonian on n_orbitals qubits, with the nuclear repulsion as an
/// identity term. Mode p maps to qubit p with Z strings on lower modes.
PauliSum jordan_wigner(const FermionIntegrals& ints);

/// Terms whose axes lie in {I, Z}: the auxiliary Hamiltonian for molecules.
PauliSum diagonal_part(const PauliSum& h);

} // namespace gapscope
