#include "gapscope/models.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace gapscope {

int IsingSpec::n_sites() const {
    return topology == Topology::Chain ? length : rows * cols;
}

void IsingSpec::validate() const {
    if (!(j1 > 0)) throw std::invalid_argument("IsingSpec: J1 must be positive");
    if (!(h3 >= 0)) throw std::invalid_argument("IsingSpec: h3 must be non-negative");
    if (!pbc) throw std::invalid_argument("IsingSpec: only periodic boundaries are supported");
    if (topology == Topology::Chain) {
        if (length < 2) throw std::invalid_argument("IsingSpec: chain needs length >= 2");
    } else {
        if (rows < 2 || cols < 2)
            throw std::invalid_argument("IsingSpec: lattice needs extents >= 2");
    }
}

IsingSpec IsingSpec::chain(int sites, double j1, double h3) {
    IsingSpec s;
    s.topology = Topology::Chain;
    s.length = sites;
    s.j1 = j1;
    s.h3 = h3;
    s.validate();
    return s;
}

IsingSpec IsingSpec::lattice(int rows, int cols, double j1, double h3) {
    IsingSpec s;
    s.topology = Topology::SquareLattice;
    s.rows = rows;
    s.cols = cols;
    s.j1 = j1;
    s.h3 = h3;
    s.validate();
    return s;
}

std::vector<std::pair<int, int>> ising_bonds(const IsingSpec& spec) {
    spec.validate();
    std::vector<std::pair<int, int>> bonds;
    if (spec.topology == IsingSpec::Topology::Chain) {
        for (int i = 0; i < spec.length; ++i) bonds.emplace_back(i, (i + 1) % spec.length);
    } else {
        const auto site = [&](int r, int c) {
            return ((r + spec.rows) % spec.rows) * spec.cols + ((c + spec.cols) % spec.cols);
        };
        for (int r = 0; r < spec.rows; ++r) {
            for (int c = 0; c < spec.cols; ++c) {
                bonds.emplace_back(site(r, c), site(r, c + 1));
                bonds.emplace_back(site(r, c), site(r + 1, c));
            }
        }
    }
    return bonds;
}

std::vector<PauliTerm> ising_terms(const IsingSpec& spec) {
    const int n = spec.n_sites();
    std::vector<PauliTerm> terms;
    for (const auto& [a, b] : ising_bonds(spec)) {
        std::vector<Axis> axes(n, Axis::I);
        axes[std::min(a, b)] = Axis::X;
        axes[std::max(a, b)] = Axis::X;
        terms.emplace_back(-spec.j1 / 2.0, std::move(axes));
    }
    if (spec.h3 != 0.0) {
        for (int q = 0; q < n; ++q) {
            std::vector<Axis> axes(n, Axis::I);
            axes[q] = Axis::Z;
            terms.emplace_back(-spec.h3 / 2.0, std::move(axes));
        }
    }
    return terms;
}

PauliSum build_ising(const IsingSpec& spec) {
    return PauliSum(spec.n_sites(), ising_terms(spec));
}

PauliSum build_ising_h0(const IsingSpec& spec) {
    IsingSpec h0 = spec;
    h0.h3 = 0.0;
    return build_ising(h0);
}

FermionIntegrals::FermionIntegrals(int n_orbitals, double nuclear_repulsion)
    : n_(n_orbitals), nuclear_repulsion_(nuclear_repulsion) {
    if (n_ < 1) throw std::invalid_argument("FermionIntegrals: n_orbitals >= 1 required");
    one_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    two_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
}

std::size_t FermionIntegrals::idx2(int p, int q) const {
    if (p < 0 || q < 0 || p >= n_ || q >= n_)
        throw std::out_of_range("FermionIntegrals: orbital index out of range");
    return static_cast<std::size_t>(p) * n_ + q;
}

std::size_t FermionIntegrals::idx4(int p, int q, int r, int s) const {
    if (p < 0 || q < 0 || r < 0 || s < 0 || p >= n_ || q >= n_ || r >= n_ || s >= n_)
        throw std::out_of_range("FermionIntegrals: orbital index out of range");
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
}

void FermionIntegrals::validate() const {
    if (!std::isfinite(nuclear_repulsion_))
        throw std::invalid_argument("FermionIntegrals: non-finite nuclear repulsion");
    for (double v : one_)
        if (!std::isfinite(v)) throw std::invalid_argument("FermionIntegrals: non-finite h_pq");
    for (double v : two_)
        if (!std::isfinite(v)) throw std::invalid_argument("FermionIntegrals: non-finite h_pqrs");
    for (int p = 0; p < n_; ++p) {
        for (int q = 0; q < n_; ++q) {
            if (std::abs(one_body(p, q) - one_body(q, p)) > 1e-10)
                throw std::invalid_argument("FermionIntegrals: h_pq is not symmetric");
        }
    }
}

FermionIntegrals parse_molecule_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("n_orbitals") || !j.contains("nuclear_repulsion"))
        throw std::invalid_argument("molecule json: n_orbitals and nuclear_repulsion required");
    FermionIntegrals ints(j.at("n_orbitals").get<int>(), j.at("nuclear_repulsion").get<double>());
    if (j.contains("one_body")) {
        for (const auto& entry : j.at("one_body")) {
            if (!entry.is_array() || entry.size() != 3)
                throw std::invalid_argument("molecule json: one_body entries are [p,q,value]");
            ints.set_one_body(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>());
        }
    }
    if (j.contains("two_body")) {
        for (const auto& entry : j.at("two_body")) {
            if (!entry.is_array() || entry.size() != 5)
                throw std::invalid_argument("molecule json: two_body entries are [p,q,r,s,value]");
            ints.set_two_body(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>(),
                              entry[3].get<int>(), entry[4].get<double>());
        }
    }
    ints.validate();
    return ints;
}

FermionIntegrals load_molecule_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open molecule file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_molecule_json(ss.str());
}

namespace {

// Weighted Pauli string with a complex coefficient; only an intermediate for
// operator products, the final Hamiltonian must come out real.
struct CTerm {
    cplx coeff;
    std::vector<Axis> axes;
};

// sigma_a * sigma_b = phase * sigma_c
void axis_product(Axis a, Axis b, Axis& c, cplx& phase) {
    static const cplx one{1, 0}, i{0, 1}, mi{0, -1};
    if (a == Axis::I) {
        c = b;
        phase = one;
        return;
    }
    if (b == Axis::I) {
        c = a;
        phase = one;
        return;
    }
    if (a == b) {
        c = Axis::I;
        phase = one;
        return;
    }
    const int ia = static_cast<int>(a), ib = static_cast<int>(b);
    // X=1, Y=2, Z=3: cyclic (1,2,3) -> +i, anticyclic -> -i
    c = static_cast<Axis>(6 - ia - ib);
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    phase = cyclic ? i : mi;
}

std::vector<CTerm> multiply(const std::vector<CTerm>& lhs, const std::vector<CTerm>& rhs) {
    std::vector<CTerm> out;
    out.reserve(lhs.size() * rhs.size());
    for (const auto& a : lhs) {
        for (const auto& b : rhs) {
            CTerm t;
            t.coeff = a.coeff * b.coeff;
            t.axes.resize(a.axes.size());
            for (std::size_t q = 0; q < a.axes.size(); ++q) {
                Axis c;
                cplx phase;
                axis_product(a.axes[q], b.axes[q], c, phase);
                t.axes[q] = c;
                t.coeff *= phase;
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

// c_p (ladder = +1) or c_p^dag (ladder = -1):
// (prod_{k<p} Z_k) (X_p + ladder * i Y_p) / 2
std::vector<CTerm> jw_ladder(int p, int n, double ladder) {
    std::vector<Axis> base(n, Axis::I);
    for (int k = 0; k < p; ++k) base[k] = Axis::Z;
    CTerm x{cplx{0.5, 0.0}, base};
    x.axes[p] = Axis::X;
    CTerm y{cplx{0.0, 0.5 * ladder}, base};
    y.axes[p] = Axis::Y;
    return {x, y};
}

std::vector<CTerm> annihilation(int p, int n) { return jw_ladder(p, n, 1.0); }
std::vector<CTerm> creation(int p, int n) { return jw_ladder(p, n, -1.0); }

} // namespace

PauliSum jordan_wigner(const FermionIntegrals& ints) {
    ints.validate();
    const int n = ints.n_orbitals();
    std::map<std::vector<Axis>, cplx> acc;
    const auto absorb = [&](const std::vector<CTerm>& terms, double weight) {
        for (const auto& t : terms) acc[t.axes] += weight * t.coeff;
    };

    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const double h = ints.one_body(p, q);
            if (h == 0.0) continue;
            absorb(multiply(creation(p, n), annihilation(q, n)), h);
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    const double h = ints.two_body(p, q, r, s);
                    if (h == 0.0) continue;
                    const auto two_creations = multiply(creation(p, n), creation(q, n));
                    const auto two_annihilations = multiply(annihilation(r, n), annihilation(s, n));
                    absorb(multiply(two_creations, two_annihilations), 0.5 * h);
                }
            }
        }
    }
    acc[std::vector<Axis>(n, Axis::I)] += ints.nuclear_repulsion();

    std::vector<PauliTerm> terms;
    double scale = 1.0;
    for (const auto& [axes, c] : acc) scale = std::max(scale, std::abs(c));
    for (const auto& [axes, c] : acc) {
        if (std::abs(c.imag()) > 1e-10 * scale)
            throw std::runtime_error("jordan_wigner: non-Hermitian result, check integrals");
        terms.emplace_back(c.real(), axes);
    }
    return PauliSum(n, std::move(terms));
}

PauliSum diagonal_part(const PauliSum& h) {
    std::vector<PauliTerm> kept;
    for (const auto& t : h.terms())
        if (t.is_diagonal()) kept.push_back(t);
    return PauliSum(h.n_qubits(), std::move(kept));
}

} // namespace gapscope
