#include "gapscope/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gapscope/oracle.hpp"
#include "gapscope/rng.hpp"
#include "gapscope/trotter.hpp"

namespace gapscope {

ApSchedule::ApSchedule(int steps, double duration, PauliSum h0_in, PauliSum target)
    : q_ap(steps), tau(duration), h0(std::move(h0_in)), h_target(std::move(target)) {
    if (q_ap < 1) throw std::invalid_argument("ApSchedule: q_ap >= 1 required");
    if (!(tau > 0)) throw std::invalid_argument("ApSchedule: tau > 0 required");
    if (h0.n_qubits() != h_target.n_qubits())
        throw std::invalid_argument("ApSchedule: Hamiltonian qubit counts differ");
}

StateVector initial_state_ising(int sites) {
    return StateVector::plus_state(sites);
}

StateVector initial_state_diagonal(const PauliSum& h0, int i, int j) {
    if (!h0.is_diagonal())
        throw std::invalid_argument("initial_state_diagonal: h0 has off-diagonal terms");
    if (i < 0 || j < 0 || i == j)
        throw std::invalid_argument("initial_state_diagonal: need distinct indices >= 0");
    const std::vector<double> diag = diagonal_values(h0);
    if (std::max(i, j) >= static_cast<int>(diag.size()))
        throw std::invalid_argument("initial_state_diagonal: eigen-index out of range");
    std::vector<std::uint64_t> order(diag.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        if (diag[a] != diag[b]) return diag[a] < diag[b];
        return a < b;
    });
    StateVector psi(h0.n_qubits());
    const double r = 1.0 / std::sqrt(2.0);
    psi[order[i]] = r;
    psi[order[j]] = r;
    return psi;
}

StateVector run_ap(StateVector psi, const ApSchedule& sched) {
    const double dt = sched.tau / sched.q_ap;
    for (int q = 1; q <= sched.q_ap; ++q) {
        const double s = static_cast<double>(q) / (sched.q_ap + 1);
        const PauliSum h_step = interpolate(sched.h0, sched.h_target, s);
        apply_trotter_step(psi, h_step, dt);
    }
    psi.normalize();
    return psi;
}

PrepReport prep_report(const StateVector& psi, const PauliSum& h, int i, int j) {
    if (i == j) throw std::invalid_argument("prep_report: need distinct indices");
    const int k = std::max(i, j) + 1;
    // Over-fetch so the clusters containing i and j are complete.
    const int dim = 1 << h.n_qubits();
    const int fetch = std::min(dim, k + 8);
    SpectrumSlice slice = diagonalize(h, fetch);
    const auto cluster_of = [&](int idx) {
        int lo = idx, hi = idx;
        while (lo > 0 && slice.energies[lo] - slice.energies[lo - 1] <= slice.degeneracy_tol) --lo;
        while (hi + 1 < static_cast<int>(slice.energies.size()) &&
               slice.energies[hi + 1] - slice.energies[hi] <= slice.degeneracy_tol)
            ++hi;
        std::vector<int> members;
        for (int m = lo; m <= hi; ++m) members.push_back(m);
        return members;
    };
    const std::vector<int> ci = cluster_of(i);
    const std::vector<int> cj = cluster_of(j);
    const bool shared = ci == cj;

    const auto project = [&](const std::vector<int>& members) {
        double f = 0.0;
        for (int m : members) f += std::norm(slice.eigenvectors[m].inner(psi));
        return f;
    };
    PrepReport rep;
    if (shared) {
        rep.fidelity_ground = std::norm(slice.eigenvectors[i].inner(psi));
        rep.fidelity_excited = std::norm(slice.eigenvectors[j].inner(psi));
    } else {
        rep.fidelity_ground = project(ci);
        rep.fidelity_excited = project(cj);
    }
    rep.leakage = std::max(0.0, 1.0 - rep.fidelity_ground - rep.fidelity_excited);
    return rep;
}

std::vector<PrepErrorRow> prep_error_scan(const std::vector<double>& epsilons, const PauliSum& h,
                                          const PauliSum& o, int i, int j, std::uint64_t seed) {
    const SpectrumSlice slice = diagonalize(h, std::max(i, j) + 1);
    const StateVector& omega_i = slice.eigenvectors[i];
    const StateVector& omega_j = slice.eigenvectors[j];
    StateVector target(h.n_qubits());
    const double r = 1.0 / std::sqrt(2.0);
    for (std::uint64_t b = 0; b < target.dim(); ++b)
        target[b] = r * (omega_i[b] + omega_j[b]);
    target.normalize();

    // Fixed pseudo-random direction orthogonal to span{Omega_i, Omega_j}.
    RngStream stream(rng::key(seed, 0x9e1));
    StateVector chi(h.n_qubits());
    for (std::uint64_t b = 0; b < chi.dim(); ++b) chi[b] = cplx{stream.normal(), stream.normal()};
    for (const StateVector* v : {&omega_i, &omega_j}) {
        const cplx overlap = v->inner(chi);
        for (std::uint64_t b = 0; b < chi.dim(); ++b) chi[b] -= overlap * (*v)[b];
    }
    chi.normalize();

    const double gap = std::abs(slice.energies[j] - slice.energies[i]);
    const double window = gap > 1e-12 ? 1.5 * 2.0 * std::numbers::pi / gap : 10.0;
    std::vector<double> grid;
    for (int t = 0; t <= 40; ++t) grid.push_back(window * t / 40.0);
    const TimeSeries base = exact_series(h, o, target, grid);

    std::vector<PrepErrorRow> table;
    table.reserve(epsilons.size());
    for (double eps : epsilons) {
        StateVector nu(h.n_qubits());
        for (std::uint64_t b = 0; b < nu.dim(); ++b) nu[b] = target[b] + eps * chi[b];
        nu.normalize();
        const TimeSeries perturbed = exact_series(h, o, nu, grid);
        double dev = 0.0;
        for (std::size_t t = 0; t < grid.size(); ++t)
            dev = std::max(dev, std::abs(perturbed.values[t] - base.values[t]));
        PrepErrorRow row;
        row.epsilon = eps;
        row.max_series_deviation = dev;
        row.infidelity = 1.0 - std::norm(nu.inner(target));
        table.push_back(row);
    }
    return table;
}

} // namespace gapscope
