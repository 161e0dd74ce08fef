#include "gapscope/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gapscope/limits.hpp"

namespace gapscope {

char axis_char(Axis a) {
    switch (a) {
        case Axis::I: return 'I';
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'I': return Axis::I;
        case 'X': return Axis::X;
        case 'Y': return Axis::Y;
        case 'Z': return Axis::Z;
        default: throw std::invalid_argument(std::string("invalid Pauli axis '") + c + "'");
    }
}

PauliTerm::PauliTerm(double c, const std::string& a) : coefficient(c) {
    axes.reserve(a.size());
    for (char ch : a) axes.push_back(axis_from_char(ch));
}

int PauliTerm::weight() const {
    int w = 0;
    for (Axis a : axes)
        if (a != Axis::I) ++w;
    return w;
}

bool PauliTerm::is_diagonal() const {
    return std::all_of(axes.begin(), axes.end(),
                       [](Axis a) { return a == Axis::I || a == Axis::Z; });
}

std::string PauliTerm::axes_string() const {
    std::string s;
    s.reserve(axes.size());
    for (Axis a : axes) s.push_back(axis_char(a));
    return s;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("PauliSum: n_qubits must be >= 1");
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : PauliSum(n_qubits) {
    canonicalize(std::move(terms));
}

void PauliSum::canonicalize(std::vector<PauliTerm> terms) {
    std::map<std::vector<Axis>, double> merged;
    for (auto& t : terms) {
        if (t.n_qubits() != n_qubits_)
            throw std::invalid_argument("PauliSum: term length " + std::to_string(t.n_qubits()) +
                                        " does not match n_qubits " + std::to_string(n_qubits_));
        if (!std::isfinite(t.coefficient))
            throw std::invalid_argument("PauliSum: non-finite coefficient");
        merged[t.axes] += t.coefficient;
    }
    terms_.clear();
    for (auto& [axes, c] : merged) {
        if (std::abs(c) < kDropTolerance) continue;
        terms_.emplace_back(c, axes);
    }
}

double PauliSum::coefficient_l1() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
}

bool PauliSum::is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PauliTerm& t) { return t.is_diagonal(); });
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.n_qubits_ != n_qubits_)
        throw std::invalid_argument("PauliSum: qubit count mismatch in sum");
    std::vector<PauliTerm> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    canonicalize(std::move(all));
    return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
    PauliSum neg = other;
    neg *= -1.0;
    return *this += neg;
}

PauliSum& PauliSum::operator*=(double factor) {
    if (!std::isfinite(factor)) throw std::invalid_argument("PauliSum: non-finite factor");
    std::vector<PauliTerm> scaled = terms_;
    for (auto& t : scaled) t.coefficient *= factor;
    canonicalize(std::move(scaled));
    return *this;
}

PauliSum interpolate(const PauliSum& h0, const PauliSum& h, double s) {
    return h0 + s * (h - h0);
}

namespace {

struct TermMasks {
    std::uint64_t flip = 0;  // X or Y sites
    std::uint64_t sign = 0;  // Y or Z sites: (-1)^{popcount(b & sign)}
    int y_count = 0;
};

TermMasks masks_of(const PauliTerm& t) {
    TermMasks m;
    const int L = t.n_qubits();
    for (int q = 0; q < L; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (L - 1 - q);
        switch (t.axes[q]) {
            case Axis::I: break;
            case Axis::X: m.flip |= bit; break;
            case Axis::Y:
                m.flip |= bit;
                m.sign |= bit;
                ++m.y_count;
                break;
            case Axis::Z: m.sign |= bit; break;
        }
    }
    return m;
}

// i^k
cplx i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

} // namespace

Eigen::MatrixXcd to_dense_matrix(const PauliTerm& term) {
    const int L = term.n_qubits();
    if (L > max_dense_qubits())
        throw DenseLimitError("to_dense_matrix: " + std::to_string(L) + " qubits exceeds dense cap " +
                              std::to_string(max_dense_qubits()));
    const std::uint64_t dim = std::uint64_t{1} << L;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    const TermMasks tm = masks_of(term);
    const cplx phase0 = i_power(tm.y_count);
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int par = std::popcount(b & tm.sign) & 1;
        const cplx v = term.coefficient * phase0 * (par ? -1.0 : 1.0);
        m(static_cast<Eigen::Index>(b ^ tm.flip), static_cast<Eigen::Index>(b)) += v;
    }
    return m;
}

Eigen::MatrixXcd to_dense_matrix(const PauliSum& h) {
    const int L = h.n_qubits();
    if (L > max_dense_qubits())
        throw DenseLimitError("to_dense_matrix: " + std::to_string(L) + " qubits exceeds dense cap " +
                              std::to_string(max_dense_qubits()));
    const std::uint64_t dim = std::uint64_t{1} << L;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto& t : h.terms()) {
        const TermMasks tm = masks_of(t);
        const cplx phase0 = i_power(tm.y_count);
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int par = std::popcount(b & tm.sign) & 1;
            m(static_cast<Eigen::Index>(b ^ tm.flip), static_cast<Eigen::Index>(b)) +=
                t.coefficient * phase0 * (par ? -1.0 : 1.0);
        }
    }
    return m;
}

cplx matrix_element(const PauliSum& o, const StateVector& bra, const StateVector& ket) {
    if (o.n_qubits() != bra.n_qubits() || o.n_qubits() != ket.n_qubits())
        throw std::invalid_argument("matrix_element: dimension mismatch");
    const std::uint64_t dim = ket.dim();
    cplx acc{0.0, 0.0};
    for (const auto& t : o.terms()) {
        const TermMasks tm = masks_of(t);
        const cplx phase0 = t.coefficient * i_power(tm.y_count);
        cplx s{0.0, 0.0};
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int par = std::popcount(b & tm.sign) & 1;
            const cplx v = par ? -ket[b] : ket[b];
            s += std::conj(bra[b ^ tm.flip]) * v;
        }
        acc += phase0 * s;
    }
    return acc;
}

double expectation(const PauliSum& o, const StateVector& psi) {
    if (o.n_qubits() != psi.n_qubits())
        throw std::invalid_argument("expectation: dimension mismatch");
    if (std::abs(psi.norm_sq() - 1.0) > 1e-10)
        throw std::invalid_argument("expectation: state is not normalized");
    const cplx v = matrix_element(o, psi, psi);
    if (std::abs(v.imag()) > 1e-10)
        throw std::runtime_error("expectation: imaginary residual above 1e-10");
    return v.real();
}

std::vector<double> diagonal_values(const PauliSum& h) {
    if (!h.is_diagonal())
        throw std::invalid_argument("diagonal_values: sum has off-diagonal terms");
    const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
    std::vector<double> vals(dim, 0.0);
    for (const auto& t : h.terms()) {
        const TermMasks tm = masks_of(t);
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int par = std::popcount(b & tm.sign) & 1;
            vals[b] += par ? -t.coefficient : t.coefficient;
        }
    }
    return vals;
}

PauliSum parse_pauli_sum(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<PauliTerm> terms;
    int n_qubits = -1;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        double coeff;
        std::string axes;
        if (!(ls >> coeff))
            throw std::invalid_argument("pauli sum line " + std::to_string(line_no) +
                                        ": expected `<coeff> <axes>`");
        if (!(ls >> axes))
            throw std::invalid_argument("pauli sum line " + std::to_string(line_no) +
                                        ": missing axes string");
        PauliTerm t(coeff, axes);
        if (n_qubits < 0) n_qubits = t.n_qubits();
        if (t.n_qubits() != n_qubits)
            throw std::invalid_argument("pauli sum line " + std::to_string(line_no) +
                                        ": inconsistent string length");
        terms.push_back(std::move(t));
    }
    if (n_qubits < 1) throw std::invalid_argument("pauli sum text: no terms found");
    return PauliSum(n_qubits, std::move(terms));
}

std::string format_pauli_sum(const PauliSum& sum) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& t : sum.terms()) out << t.coefficient << " " << t.axes_string() << "\n";
    return out.str();
}

PauliSum load_pauli_sum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pauli sum file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pauli_sum(ss.str());
}

} // namespace gapscope
