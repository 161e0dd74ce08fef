#!/usr/bin/env python3
"""Generate molecular integral fixtures (fixtures/h2, fixtures/he2).

Restricted Hartree-Fock over s-type contracted Gaussians, closed-form
primitive integrals, four-index transform to molecular spin orbitals, and a
brute-force Fock-space diagonalization that records reference energies in
each fixture. Everything is standard textbook machinery; the output JSON is
what the simulator consumes, with the reference energies kept as provenance.

Conventions written into the fixtures:
  - spin orbital 2*P   = spatial MO P, spin up
    spin orbital 2*P+1 = spatial MO P, spin down
  - H = sum_pq h_pq c_p^dag c_q
      + (1/2) sum_pqrs h_pqrs c_p^dag c_q^dag c_r c_s
      + E_nuc
    with h_pqrs = <pq|v|sr> (physicist bra-ket with the last two indices
    swapped so the operator string reads c_r c_s).

Run from the repository root:  python3 tools/make_molecule_fixtures.py
"""

import json
import math
import os

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

# exponents, contraction coefficients (renormalized below)
BASIS = {
    "H@sto-3g": [
        ([3.42525091, 0.62391373, 0.16885540],
         [0.15432897, 0.53532814, 0.44463454]),
    ],
    "He@6-31g": [
        ([38.4216340, 5.7780300, 1.2417740],
         [0.0237660, 0.1546790, 0.4696300]),
        ([0.2979640], [1.0]),
    ],
}

CHARGE = {"H": 1, "He": 2}


def boys_f0(x):
    if x < 1e-12:
        return 1.0 - x / 3.0
    return 0.5 * math.sqrt(math.pi / x) * math.erf(math.sqrt(x))


def prim_norm(a):
    return (2.0 * a / math.pi) ** 0.75


class Shell:
    def __init__(self, center, exps, coeffs):
        self.center = np.asarray(center, dtype=float)
        self.exps = list(exps)
        raw = [c * prim_norm(a) for a, c in zip(exps, coeffs)]
        # renormalize the contraction
        s = 0.0
        for a, ca in zip(exps, raw):
            for b, cb in zip(exps, raw):
                s += ca * cb * (math.pi / (a + b)) ** 1.5
        self.coeffs = [c / math.sqrt(s) for c in raw]


def overlap_kinetic(sh_a, sh_b):
    s_tot = t_tot = 0.0
    ab2 = float(np.dot(sh_a.center - sh_b.center, sh_a.center - sh_b.center))
    for a, ca in zip(sh_a.exps, sh_a.coeffs):
        for b, cb in zip(sh_b.exps, sh_b.coeffs):
            p = a + b
            mu = a * b / p
            k = math.exp(-mu * ab2)
            s = (math.pi / p) ** 1.5 * k
            t = mu * (3.0 - 2.0 * mu * ab2) * s
            s_tot += ca * cb * s
            t_tot += ca * cb * t
    return s_tot, t_tot


def nuclear(sh_a, sh_b, nuclei):
    v_tot = 0.0
    ab2 = float(np.dot(sh_a.center - sh_b.center, sh_a.center - sh_b.center))
    for a, ca in zip(sh_a.exps, sh_a.coeffs):
        for b, cb in zip(sh_b.exps, sh_b.coeffs):
            p = a + b
            mu = a * b / p
            k = math.exp(-mu * ab2)
            pc = (a * sh_a.center + b * sh_b.center) / p
            for z, center in nuclei:
                r2 = float(np.dot(pc - center, pc - center))
                v_tot += ca * cb * (-2.0 * math.pi / p) * z * k * boys_f0(p * r2)
    return v_tot


def eri(sh_a, sh_b, sh_c, sh_d):
    # chemist notation (ab|cd)
    total = 0.0
    ab2 = float(np.dot(sh_a.center - sh_b.center, sh_a.center - sh_b.center))
    cd2 = float(np.dot(sh_c.center - sh_d.center, sh_c.center - sh_d.center))
    for a, ca in zip(sh_a.exps, sh_a.coeffs):
        for b, cb in zip(sh_b.exps, sh_b.coeffs):
            p = a + b
            kp = math.exp(-a * b / p * ab2)
            pp = (a * sh_a.center + b * sh_b.center) / p
            for c, cc in zip(sh_c.exps, sh_c.coeffs):
                for d, cd in zip(sh_d.exps, sh_d.coeffs):
                    q = c + d
                    kq = math.exp(-c * d / q * cd2)
                    qq = (c * sh_c.center + d * sh_d.center) / q
                    pq2 = float(np.dot(pp - qq, pp - qq))
                    pref = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
                    total += (ca * cb * cc * cd * pref * kp * kq *
                              boys_f0(p * q / (p + q) * pq2))
    return total


def run_rhf(shells, nuclei, n_electrons):
    n = len(shells)
    s_mat = np.zeros((n, n))
    h_core = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s, t = overlap_kinetic(shells[i], shells[j])
            s_mat[i, j] = s
            h_core[i, j] = t + nuclear(shells[i], shells[j], nuclei)
    g = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    g[i, j, k, l] = eri(shells[i], shells[j], shells[k], shells[l])

    e_nuc = 0.0
    for i, (zi, ri) in enumerate(nuclei):
        for zj, rj in nuclei[i + 1:]:
            e_nuc += zi * zj / float(np.linalg.norm(ri - rj))

    evals, evecs = np.linalg.eigh(s_mat)
    x = evecs @ np.diag(evals ** -0.5) @ evecs.T
    n_occ = n_electrons // 2
    dens = np.zeros((n, n))
    energy = 0.0
    for _ in range(200):
        fock = h_core + np.einsum("ls,mnsl->mn", dens, g) - 0.5 * np.einsum(
            "ls,mlsn->mn", dens, g)
        fp = x.T @ fock @ x
        _, cp = np.linalg.eigh(fp)
        coeff = x @ cp
        dens_new = 2.0 * coeff[:, :n_occ] @ coeff[:, :n_occ].T
        e_new = 0.5 * np.sum(dens_new * (h_core + fock)) + e_nuc
        if abs(e_new - energy) < 1e-12 and np.max(np.abs(dens_new - dens)) < 1e-10:
            dens, energy = dens_new, e_new
            break
        dens, energy = dens_new, e_new
    h_mo = coeff.T @ h_core @ coeff
    g_mo = np.einsum("mi,nj,pk,ql,mnpq->ijkl", coeff, coeff, coeff, coeff, g,
                     optimize=True)
    # g_mo[i,j,k,l] = (ij|kl) in MO chemist notation
    return energy, e_nuc, h_mo, g_mo


def spin_orbital_integrals(h_mo, g_mo):
    n_mo = h_mo.shape[0]
    n_so = 2 * n_mo
    h1 = np.zeros((n_so, n_so))
    h2 = np.zeros((n_so, n_so, n_so, n_so))
    for p in range(n_so):
        for q in range(n_so):
            if p % 2 == q % 2:
                h1[p, q] = h_mo[p // 2, q // 2]
    # h_pqrs = <pq|v|sr> = (PS|QR) delta(sp,ss) delta(sq,sr)
    for p in range(n_so):
        for q in range(n_so):
            for r in range(n_so):
                for s in range(n_so):
                    if p % 2 == s % 2 and q % 2 == r % 2:
                        h2[p, q, r, s] = g_mo[p // 2, s // 2, q // 2, r // 2]
    return h1, h2


def fock_space_hamiltonian(h1, h2, e_nuc):
    """Dense 2^n x 2^n matrix from occupation-number rules with explicit
    fermionic signs; independent of any qubit mapping."""
    n = h1.shape[0]
    dim = 1 << n

    def annihilate(state_vec, p):
        out = {}
        for idx, amp in state_vec.items():
            if not (idx >> p) & 1:
                continue
            sign = (-1) ** bin(idx & ((1 << p) - 1)).count("1")
            out[idx & ~(1 << p)] = out.get(idx & ~(1 << p), 0.0) + sign * amp
        return out

    def create(state_vec, p):
        out = {}
        for idx, amp in state_vec.items():
            if (idx >> p) & 1:
                continue
            sign = (-1) ** bin(idx & ((1 << p) - 1)).count("1")
            out[idx | (1 << p)] = out.get(idx | (1 << p), 0.0) + sign * amp
        return out

    ham = np.zeros((dim, dim))
    for col in range(dim):
        acc = {col: e_nuc}
        base = {col: 1.0}
        for p in range(n):
            for q in range(n):
                if h1[p, q] == 0.0:
                    continue
                vec = create(annihilate(base, q), p)
                for idx, amp in vec.items():
                    acc[idx] = acc.get(idx, 0.0) + h1[p, q] * amp
        for p in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(n):
                        v = h2[p, q, r, s]
                        if v == 0.0:
                            continue
                        vec = create(create(annihilate(annihilate(base, s), r), q), p)
                        for idx, amp in vec.items():
                            acc[idx] = acc.get(idx, 0.0) + 0.5 * v * amp
        for idx, amp in acc.items():
            ham[idx, col] += amp
    return ham


def make_fixture(name, symbols, bond_angstrom, basis_keys, n_electrons, out_dir):
    bond_bohr = bond_angstrom * ANGSTROM_TO_BOHR
    centers = [np.array([0.0, 0.0, 0.0]), np.array([0.0, 0.0, bond_bohr])]
    shells = []
    nuclei = []
    for sym, key, center in zip(symbols, basis_keys, centers):
        nuclei.append((float(CHARGE[sym]), center))
        for exps, coeffs in BASIS[key]:
            shells.append(Shell(center, exps, coeffs))

    e_scf, e_nuc, h_mo, g_mo = run_rhf(shells, nuclei, n_electrons)
    h1, h2 = spin_orbital_integrals(h_mo, g_mo)
    n_so = h1.shape[0]

    ham = fock_space_hamiltonian(h1, h2, e_nuc)
    assert np.max(np.abs(ham - ham.T)) < 1e-10
    energies = np.linalg.eigvalsh(ham)

    one_body = [[p, q, float(h1[p, q])]
                for p in range(n_so) for q in range(n_so)
                if abs(h1[p, q]) > 1e-12]
    two_body = [[p, q, r, s, float(h2[p, q, r, s])]
                for p in range(n_so) for q in range(n_so)
                for r in range(n_so) for s in range(n_so)
                if abs(h2[p, q, r, s]) > 1e-12]

    fixture = {
        "n_orbitals": n_so,
        "nuclear_repulsion": float(e_nuc),
        "one_body": one_body,
        "two_body": two_body,
        "provenance": {
            "molecule": name,
            "bond_length_angstrom": bond_angstrom,
            "basis": basis_keys[0].split("@")[1],
            "n_electrons": n_electrons,
            "spin_orbital_order": "interleaved (2P = P-up, 2P+1 = P-down)",
            "two_body_convention":
                "H2body = (1/2) sum h_pqrs c_p^dag c_q^dag c_r c_s",
            "scf_energy_hartree": float(e_scf),
            "fock_space_ground_energy_hartree": float(energies[0]),
            "fock_space_first_excited_energy_hartree": float(energies[1]),
            "fock_space_gap_hartree": float(energies[1] - energies[0]),
            "generator": "tools/make_molecule_fixtures.py",
        },
    }
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name.lower()}_{bond_angstrom:.3f}.json")
    with open(path, "w") as f:
        json.dump(fixture, f, indent=1)
    print(f"{path}: E_scf={e_scf:.6f} E0={energies[0]:.6f} "
          f"gap={energies[1]-energies[0]:.6f}")
    return path


def main():
    h2_grid = [0.50, 0.60, 0.735, 0.90, 1.10, 1.30, 1.60, 1.90, 2.20, 2.50]
    he2_grid = [1.00, 1.50, 2.00, 2.50, 3.00]
    for r in h2_grid:
        make_fixture("H2", ["H", "H"], r, ["H@sto-3g", "H@sto-3g"], 2,
                     "fixtures/h2")
    for r in he2_grid:
        make_fixture("He2", ["He", "He"], r, ["He@6-31g", "He@6-31g"], 4,
                     "fixtures/he2")


if __name__ == "__main__":
    main()
