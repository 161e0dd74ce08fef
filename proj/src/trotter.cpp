#include "gapscope/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gapscope {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct TermShape {
    int weight = 0;
    int q0 = -1;  // first non-identity site
    int q1 = -1;  // second non-identity site
    Axis a0 = Axis::I;
    Axis a1 = Axis::I;
};

TermShape shape_of(const PauliTerm& t) {
    TermShape s;
    for (int q = 0; q < t.n_qubits(); ++q) {
        if (t.axes[q] == Axis::I) continue;
        ++s.weight;
        if (s.q0 < 0) {
            s.q0 = q;
            s.a0 = t.axes[q];
        } else if (s.q1 < 0) {
            s.q1 = q;
            s.a1 = t.axes[q];
        }
    }
    return s;
}

enum class Category { SingleZ = 0, SingleX = 1, EvenBond = 2, OddBond = 3, General = 4 };

Category category_of(const TermShape& s) {
    if (s.weight == 1 && s.a0 == Axis::Z) return Category::SingleZ;
    if (s.weight == 1 && s.a0 == Axis::X) return Category::SingleX;
    if (s.weight == 2) {
        // Ring bonds (i, i+1) take the parity of i; the wraparound bond
        // (0, L-1) and longer-range pairs take the parity of the far site,
        // which keeps the two chain layers disjoint.
        const int parity_site = (s.q1 == s.q0 + 1) ? s.q0 : s.q1;
        return (parity_site % 2 == 0) ? Category::EvenBond : Category::OddBond;
    }
    return Category::General;
}

} // namespace

std::vector<PauliTerm> step_schedule(const std::vector<PauliTerm>& terms) {
    struct Keyed {
        Category cat;
        std::vector<Axis> axes;
        std::size_t pos;
        const PauliTerm* term;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const TermShape s = shape_of(terms[i]);
        keyed.push_back({category_of(s), terms[i].axes, i, &terms[i]});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.cat != b.cat) return static_cast<int>(a.cat) < static_cast<int>(b.cat);
        if (a.axes != b.axes) return a.axes < b.axes;
        return a.pos < b.pos;
    });
    std::vector<PauliTerm> out;
    out.reserve(terms.size());
    for (const auto& k : keyed) out.push_back(*k.term);
    return out;
}

CircuitIR compile_trotter_step(const std::vector<PauliTerm>& terms, int n_qubits, double dt) {
    CircuitIR circ;
    circ.n_qubits = n_qubits;
    circ.mark_step();
    for (const auto& t : step_schedule(terms)) {
        const TermShape s = shape_of(t);
        const double angle = t.coefficient * dt;
        if (s.weight == 0) continue;  // global phase
        if (s.weight == 1 && s.a0 == Axis::Z) {
            circ.gates.push_back(NativeGate::virtual_z(s.q0, 2 * angle));
            continue;
        }
        if (s.weight == 1 && s.a0 == Axis::X) {
            circ.gates.push_back(NativeGate::gpi2(s.q0, -kHalfPi));
            circ.gates.push_back(NativeGate::virtual_z(s.q0, 2 * angle));
            circ.gates.push_back(NativeGate::gpi2(s.q0, kHalfPi));
            continue;
        }
        if (s.weight == 2 && (s.a0 == Axis::X || s.a0 == Axis::Z) &&
            (s.a1 == Axis::X || s.a1 == Axis::Z)) {
            // Z factors are MS-conjugated into the X basis per qubit.
            if (s.a0 == Axis::Z) circ.gates.push_back(NativeGate::gpi2(s.q0, kHalfPi));
            if (s.a1 == Axis::Z) circ.gates.push_back(NativeGate::gpi2(s.q1, kHalfPi));
            circ.gates.push_back(NativeGate::ms(s.q0, s.q1, 0.0, 0.0, 2 * angle));
            if (s.a0 == Axis::Z) circ.gates.push_back(NativeGate::gpi2(s.q0, -kHalfPi));
            if (s.a1 == Axis::Z) circ.gates.push_back(NativeGate::gpi2(s.q1, -kHalfPi));
            continue;
        }
        throw UnsupportedTermError("compile_trotter_step: unsupported term shape " +
                                   t.axes_string());
    }
    return circ;
}

CircuitIR compile_trotter_step(const PauliSum& h, double dt) {
    return compile_trotter_step(h.terms(), h.n_qubits(), dt);
}

CircuitIR compile_trotter_evolution(const PauliSum& h, double t, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("compile_trotter_evolution: n_steps >= 1");
    const CircuitIR step = compile_trotter_step(h, t / n_steps);
    CircuitIR circ;
    circ.n_qubits = h.n_qubits();
    for (int q = 0; q < n_steps; ++q) circ.append(step);
    return circ;
}

void apply_trotter_step(StateVector& psi, const std::vector<PauliTerm>& terms, double dt) {
    for (const auto& t : step_schedule(terms)) {
        apply_pauli_exponential(psi, t, t.coefficient * dt);
    }
}

void apply_trotter_step(StateVector& psi, const PauliSum& h, double dt) {
    apply_trotter_step(psi, h.terms(), dt);
}

void evolve_trotter(StateVector& psi, const PauliSum& h, double t, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("evolve_trotter: n_steps >= 1");
    const auto scheduled = step_schedule(h.terms());
    const double dt = t / n_steps;
    for (int q = 0; q < n_steps; ++q) {
        for (const auto& term : scheduled) {
            apply_pauli_exponential(psi, term, term.coefficient * dt);
        }
    }
}

} // namespace gapscope
