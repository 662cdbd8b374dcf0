"""Brute-force reference values for the two-product mixture experiment.

Builds 1/2 |0><0|^{x3} + 1/2 |+><+|^{x3} with plain numpy Kronecker products,
measures the copy after the first n with the tetrahedral qubit POVM and
writes branch probabilities, branch states and both distances to
oracle_mixture.json. Run from this directory: python3 oracle_mixture.py
"""

import json

import numpy as np

I2 = np.eye(2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

S2 = np.sqrt(2.0)
BLOCH = [
    (0.0, 0.0, 1.0),
    (2 * S2 / 3, 0.0, -1 / 3),
    (-S2 / 3, np.sqrt(2 / 3), -1 / 3),
    (-S2 / 3, -np.sqrt(2 / 3), -1 / 3),
]
SIC = [0.25 * (I2 + x * SX + y * SY + z * SZ) for (x, y, z) in BLOCH]


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def ptrace(rho, keep, n):
    """Reduced state of qubits `keep` (sorted) of an n-qubit operator."""
    t = rho.reshape([2] * (2 * n))
    cur = n
    for q in reversed(range(n)):
        if q in keep:
            continue
        t = np.trace(t, axis1=q, axis2=q + cur)
        cur -= 1
    d = 2 ** len(keep)
    return t.reshape(d, d)


def tdist(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()


def case(n):
    zero = np.array([[1, 0], [0, 0]], dtype=complex)
    plus = 0.5 * np.ones((2, 2), dtype=complex)
    rho3 = 0.5 * kron_all([zero] * 3) + 0.5 * kron_all([plus] * 3)
    rho = ptrace(rho3, list(range(n + 1)), 3)  # n + k copies, k = 1
    branches = []
    eq, ec = 0.0, 0.0
    mix = np.zeros((2**n, 2**n), dtype=complex)
    for z, f in enumerate(SIC):
        op = kron_all([I2] * n + [f]) @ rho
        cond = ptrace(op, list(range(n)), n + 1)
        p = np.trace(cond).real
        state = cond / p
        one = ptrace(state, [0], n) if n > 1 else state
        prod = kron_all([one] * n)
        qd = tdist(state, prod)
        stats = np.array([np.trace(g @ one).real for g in SIC])
        cd = 0.5 * np.abs(stats - np.eye(4)[z]).sum()
        eq += p * qd
        ec += p * cd
        mix += p * prod
        branches.append(
            {
                "outcome": [str(z)],
                "probability": p,
                "state": [[[v.real, v.imag] for v in row] for row in state],
                "quantum_distance": qd,
                "classical_distance": cd,
            }
        )
    target = ptrace(rho, list(range(n)), n + 1)
    return {
        "n": n,
        "k": 1,
        "branches": branches,
        "expectations": {"quantum": eq, "classical": ec},
        "mixture_distance": tdist(target, mix),
    }


if __name__ == "__main__":
    with open("oracle_mixture.json", "w") as fh:
        json.dump({"cases": [case(1), case(2)]}, fh, indent=1)
        fh.write("\n")
