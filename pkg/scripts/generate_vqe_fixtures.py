"""Regenerate the bundled VQE Hamiltonian fixtures.

Needs pyscf, openfermion and openfermionpyscf, which are *not* dependencies of
noisyvqa; run it from a separate environment:

    pip install pyscf openfermion openfermionpyscf
    python scripts/generate_vqe_fixtures.py src/noisyvqa/data

Each fixture is written in the Pauli-term text format with a header carrying
the ground energy inside the fixed-electron-number sector.
"""
import itertools
import sys
from pathlib import Path

import numpy as np
from openfermion import MolecularData, get_fermion_operator, jordan_wigner
from openfermionpyscf import run_pyscf

MOLECULES = {
    # name: (geometry, electrons kept, occupied core orbitals, active orbitals)
    "h2": ([("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 0.735))], None, None),
    "lih": ([("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.595))], [0], [1, 2, 5]),
    "beh2": (
        [("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.326)), ("H", (0.0, 0.0, -1.326))],
        [0],
        [1, 2, 3, 4],
    ),
}


def pauli_lines(qubit_op, n):
    lines = []
    for term, coeff in sorted(qubit_op.terms.items()):
        if abs(coeff.imag) > 1e-10:
            raise ValueError(f"complex coefficient {coeff} on {term}")
        if abs(coeff.real) < 1e-12:
            continue
        letters = ["I"] * n
        for q, p in term:
            letters[n - 1 - q] = p
        lines.append(f"{coeff.real:.16e} {''.join(letters)}")
    return lines


def sector_ground_energy(lines, n, electrons):
    dim = 2**n
    idx = [i for i in range(dim) if bin(i).count("1") == electrons]
    paulis = {
        "I": np.eye(2),
        "X": np.array([[0, 1], [1, 0]]),
        "Y": np.array([[0, -1j], [1j, 0]]),
        "Z": np.diag([1, -1]),
    }
    H = np.zeros((dim, dim), dtype=complex)
    for line in lines:
        c, s = line.split()
        m = np.array([[1.0]])
        for ch in s:
            m = np.kron(m, paulis[ch])
        H += float(c) * m
    return float(np.linalg.eigvalsh(H[np.ix_(idx, idx)])[0])


def main(out_dir):
    out = Path(out_dir)
    for name, (geometry, core, active) in MOLECULES.items():
        mol = run_pyscf(MolecularData(geometry, "sto-3g", 1, 0), run_scf=True)
        ham = mol.get_molecular_hamiltonian(occupied_indices=core, active_indices=active)
        n_active = 2 * len(active) if active else 2 * mol.n_orbitals
        electrons = mol.n_electrons - (2 * len(core) if core else 0)
        qubit_op = jordan_wigner(get_fermion_operator(ham))
        lines = pauli_lines(qubit_op, n_active)
        energy = sector_ground_energy(lines, n_active, electrons)
        header = [
            f"# {name} sto-3g, Jordan-Wigner, {n_active} qubits, qubit 0 rightmost",
            f"# ground_energy={energy:.12f} electrons={electrons}",
        ]
        (out / f"{name}_jw.txt").write_text("\n".join(header + lines) + "\n")
        print(name, n_active, electrons, energy, len(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
