#include "gapscope/circuit.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gapscope {

void CircuitIR::append(const CircuitIR& other) {
    if (other.n_qubits != n_qubits)
        throw std::invalid_argument("CircuitIR::append: qubit count mismatch");
    const std::size_t base = gates.size();
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    for (std::size_t m : other.step_marks) step_marks.push_back(base + m);
}

Eigen::MatrixXcd gate_matrix(const NativeGate& g) {
    const cplx mi{0.0, -1.0};
    switch (g.kind) {
        case GateKind::GPI2: {
            const double phi = g.p0;
            Eigen::MatrixXcd m(2, 2);
            const double r = 1.0 / std::sqrt(2.0);
            m << r, r * mi * std::exp(cplx{0.0, -phi}), r * mi * std::exp(cplx{0.0, phi}), r;
            return m;
        }
        case GateKind::VIRTUAL_Z: {
            const double th = g.p0;
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
            m(0, 0) = std::exp(cplx{0.0, -th / 2});
            m(1, 1) = std::exp(cplx{0.0, th / 2});
            return m;
        }
        case GateKind::MS: {
            const double c = std::cos(g.p2 / 2), s = std::sin(g.p2 / 2);
            const cplx e_pp = mi * std::exp(cplx{0.0, -(g.p0 + g.p1)}) * s;
            const cplx e_pm = mi * std::exp(cplx{0.0, -(g.p0 - g.p1)}) * s;
            const cplx e_mp = mi * std::exp(cplx{0.0, (g.p0 - g.p1)}) * s;
            const cplx e_mm = mi * std::exp(cplx{0.0, (g.p0 + g.p1)}) * s;
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
            m(0, 0) = c;
            m(1, 1) = c;
            m(2, 2) = c;
            m(3, 3) = c;
            m(0, 3) = e_pp;
            m(1, 2) = e_pm;
            m(2, 1) = e_mp;
            m(3, 0) = e_mm;
            return m;
        }
    }
    throw std::logic_error("gate_matrix: unknown gate kind");
}

namespace {

void apply_1q(StateVector& psi, int q, const Eigen::Matrix2cd& u) {
    const int L = psi.n_qubits();
    if (q < 0 || q >= L) throw std::out_of_range("apply_gate: qubit index out of range");
    const std::uint64_t dim = psi.dim();
    const std::uint64_t bit = std::uint64_t{1} << (L - 1 - q);
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        const std::uint64_t b1 = b | bit;
        const cplx a0 = psi[b], a1 = psi[b1];
        psi[b] = u(0, 0) * a0 + u(0, 1) * a1;
        psi[b1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void apply_2q(StateVector& psi, int qa, int qb, const Eigen::Matrix4cd& u) {
    const int L = psi.n_qubits();
    if (qa < 0 || qa >= L || qb < 0 || qb >= L)
        throw std::out_of_range("apply_gate: qubit index out of range");
    if (qa == qb) throw std::invalid_argument("apply_gate: two-qubit gate needs distinct qubits");
    const std::uint64_t dim = psi.dim();
    const std::uint64_t bit_a = std::uint64_t{1} << (L - 1 - qa);
    const std::uint64_t bit_b = std::uint64_t{1} << (L - 1 - qb);
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & (bit_a | bit_b)) continue;
        const std::uint64_t i00 = b;
        const std::uint64_t i01 = b | bit_b;
        const std::uint64_t i10 = b | bit_a;
        const std::uint64_t i11 = b | bit_a | bit_b;
        const cplx a00 = psi[i00], a01 = psi[i01], a10 = psi[i10], a11 = psi[i11];
        psi[i00] = u(0, 0) * a00 + u(0, 1) * a01 + u(0, 2) * a10 + u(0, 3) * a11;
        psi[i01] = u(1, 0) * a00 + u(1, 1) * a01 + u(1, 2) * a10 + u(1, 3) * a11;
        psi[i10] = u(2, 0) * a00 + u(2, 1) * a01 + u(2, 2) * a10 + u(2, 3) * a11;
        psi[i11] = u(3, 0) * a00 + u(3, 1) * a01 + u(3, 2) * a10 + u(3, 3) * a11;
    }
}

} // namespace

void apply_gate(StateVector& psi, const NativeGate& g) {
    if (g.kind == GateKind::MS) {
        const Eigen::Matrix4cd u = gate_matrix(g);
        apply_2q(psi, g.q0, g.q1, u);
    } else {
        const Eigen::Matrix2cd u = gate_matrix(g);
        apply_1q(psi, g.q0, u);
    }
}

void apply_pauli_exponential(StateVector& psi, const PauliTerm& term, double angle) {
    if (term.n_qubits() != psi.n_qubits())
        throw std::invalid_argument("apply_pauli_exponential: dimension mismatch");
    if (!std::isfinite(angle))
        throw std::invalid_argument("apply_pauli_exponential: non-finite angle");
    const int L = psi.n_qubits();
    std::uint64_t flip = 0, sign = 0;
    int y_count = 0;
    for (int q = 0; q < L; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (L - 1 - q);
        switch (term.axes[q]) {
            case Axis::I: break;
            case Axis::X: flip |= bit; break;
            case Axis::Y:
                flip |= bit;
                sign |= bit;
                ++y_count;
                break;
            case Axis::Z: sign |= bit; break;
        }
    }
    const double c = std::cos(angle), s = std::sin(angle);
    const cplx iy = [&]() -> cplx {
        switch (y_count % 4) {
            case 0: return {1, 0};
            case 1: return {0, 1};
            case 2: return {-1, 0};
            default: return {0, -1};
        }
    }();
    const std::uint64_t dim = psi.dim();
    if (flip == 0) {
        // P diagonal: amplitude-wise phase exp(-i*angle*(+/-1))
        const cplx e_minus{c, -s}, e_plus{c, s};
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int par = std::popcount(b & sign) & 1;
            psi[b] *= par ? e_plus : e_minus;
        }
        return;
    }
    // exp(-i a P) = cos(a) I - i sin(a) P, applied pairwise on (b, b^flip)
    const cplx mis = cplx{0.0, -1.0} * s;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const std::uint64_t t = b ^ flip;
        if (t < b) continue;
        const int par_b = std::popcount(b & sign) & 1;
        const int par_t = std::popcount(t & sign) & 1;
        const cplx pb = iy * (par_b ? -1.0 : 1.0);  // <t|P|b>
        const cplx pt = iy * (par_t ? -1.0 : 1.0);  // <b|P|t>
        const cplx ab = psi[b], at = psi[t];
        psi[b] = c * ab + mis * pt * at;
        psi[t] = c * at + mis * pb * ab;
    }
}

void execute(StateVector& psi, const CircuitIR& circ) {
    if (circ.n_qubits != psi.n_qubits())
        throw std::invalid_argument("execute: qubit count mismatch");
    for (const auto& g : circ.gates) apply_gate(psi, g);
}

CircuitIR inverse_circuit(const CircuitIR& circ) {
    CircuitIR inv;
    inv.n_qubits = circ.n_qubits;
    for (auto it = circ.gates.rbegin(); it != circ.gates.rend(); ++it) {
        NativeGate g = *it;
        switch (g.kind) {
            case GateKind::GPI2:
                // GPI2(phi)^-1 = GPI2(phi + pi)
                g.p0 += std::acos(-1.0);
                break;
            case GateKind::VIRTUAL_Z: g.p0 = -g.p0; break;
            case GateKind::MS: g.p2 = -g.p2; break;
        }
        inv.gates.push_back(g);
    }
    return inv;
}

CircuitStats circuit_stats(const CircuitIR& circ) {
    CircuitStats st;
    st.gate_count = circ.gates.size();
    std::uint64_t layer_mask = 0;
    for (const auto& g : circ.gates) {
        if (g.is_two_qubit()) {
            ++st.ms_count;
            const std::uint64_t m =
                (std::uint64_t{1} << g.q0) | (std::uint64_t{1} << g.q1);
            if (layer_mask & m) {
                ++st.entangling_depth;
                layer_mask = m;
            } else {
                if (layer_mask == 0) ++st.entangling_depth;
                layer_mask |= m;
            }
        } else {
            ++st.one_qubit_count;
        }
    }
    return st;
}

std::string format_circuit(const CircuitIR& circ) {
    std::ostringstream out;
    out.precision(17);
    std::size_t mark = 0, step = 0;
    for (std::size_t i = 0; i <= circ.gates.size(); ++i) {
        while (mark < circ.step_marks.size() && circ.step_marks[mark] == i) {
            out << "BARRIER step " << step++ << "\n";
            ++mark;
        }
        if (i == circ.gates.size()) break;
        const auto& g = circ.gates[i];
        switch (g.kind) {
            case GateKind::GPI2: out << "GPI2 " << g.q0 << " " << g.p0 << "\n"; break;
            case GateKind::VIRTUAL_Z: out << "VIRTUAL_Z " << g.q0 << " " << g.p0 << "\n"; break;
            case GateKind::MS:
                out << "MS " << g.q0 << " " << g.q1 << " " << g.p0 << " " << g.p1 << " " << g.p2
                    << "\n";
                break;
        }
    }
    return out.str();
}

} // namespace gapscope
