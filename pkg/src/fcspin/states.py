"""Reference Kraus families: AKLT, product states, rotation-covariant MPS,
and random unital families used as negative controls."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fcs import FcsState, KrausFamily, fixed_point

__all__ = [
    "aklt_kraus",
    "aklt_state",
    "product_kraus",
    "product_state",
    "covariant_kraus",
    "covariant_state",
    "random_unital_kraus",
    "random_fcs_state",
    "direct_sum",
    "gauge_transform",
]


def aklt_kraus():
    """AKLT tensors on a 2-dimensional bond space, real gauge.

    Physical basis ordered m = 1, 0, -1; the three matrices are
    sqrt(2/3) s_plus, -sqrt(1/3) s_z, -sqrt(2/3) s_minus.
    """
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = np.array([[0, 0], [1, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return KrausFamily((
        np.sqrt(2 / 3) * sp,
        -np.sqrt(1 / 3) * sz,
        -np.sqrt(2 / 3) * sm,
    ))


def aklt_state():
    return fixed_point(aklt_kraus())


def product_kraus(xi):
    """Rank-one family of a unit vector xi: one-site expectations <xi, A xi>."""
    xi = np.asarray(xi, dtype=complex)
    xi = xi / np.linalg.norm(xi)
    return KrausFamily(tuple(np.array([[c.conjugate()]]) for c in xi))


def product_state(xi):
    return fixed_point(product_kraus(xi))


@lru_cache(maxsize=None)
def _cg_table(two_s, two_j):
    """Clebsch-Gordan block <s m, j mu | j nu> as a (d, k, k) float array."""
    from sympy import Rational
    from sympy.physics.quantum.cg import CG

    s = Rational(two_s, 2)
    j = Rational(two_j, 2)
    d = two_s + 1
    k = two_j + 1
    out = np.zeros((d, k, k))
    for i in range(d):            # m = s - i
        m = s - i
        for a in range(k):        # mu = j - a
            mu = j - a
            for b in range(k):    # nu = j - b
                nu = j - b
                if m + mu != nu:
                    continue
                out[i, a, b] = float(CG(s, m, j, mu, j, nu).doit())
    return out


def covariant_kraus(s, j):
    """Rotation-covariant family: the unique isometry of the bond irrep j
    into the physical (x) bond product, for integer physical spin s <= 2j
    (the bond spin j may be half-integer).  Multiplicity-one makes the
    isometry unique up to phase."""
    two_s = int(round(2 * Fraction(s)))
    two_j = int(round(2 * Fraction(j)))
    if two_s < 1:
        raise ValueError("physical spin must be positive")
    if two_s % 2 != 0:
        raise ValueError(
            f"spin {s} (x) spin {j} does not contain spin {j}: the physical "
            "spin must be an integer"
        )
    if two_s > 2 * two_j:
        raise ValueError(f"spin {s} (x) spin {j} does not contain spin {j} "
                         "unless s <= 2j")
    cg = _cg_table(two_s, two_j)
    # rows of the isometry are (v_i*)_{mu nu}; v_i = adjoint of that block
    return KrausFamily(tuple(cg[i].T.astype(complex) for i in range(two_s + 1)))


def covariant_state(s, j):
    return fixed_point(covariant_kraus(s, j))


def random_unital_kraus(d, k, rng):
    """Generic unital family from a Haar-random isometry C^k -> C^d (x) C^k."""
    z = rng.normal(size=(d * k, k)) + 1j * rng.normal(size=(d * k, k))
    q, r = np.linalg.qr(z)
    q = q * np.sign(np.diag(r).real)  # deterministic gauge of the QR factor
    blocks = q.reshape(d, k, k)
    return KrausFamily(tuple(b.conj().T for b in blocks))


def random_fcs_state(d, k, rng, tol=1e-9):
    return fixed_point(random_unital_kraus(d, k, rng), tol)


def direct_sum(fam_a, fam_b):
    """Blockwise direct sum of two families with equal physical dimension."""
    if fam_a.d != fam_b.d:
        raise ValueError("families must share the physical dimension")
    ka, kb = fam_a.k, fam_b.k
    mats = []
    for a, b in zip(fam_a.v, fam_b.v):
        m = np.zeros((ka + kb, ka + kb), dtype=complex)
        m[:ka, :ka] = a
        m[ka:, ka:] = b
        mats.append(m)
    return KrausFamily(tuple(mats))


def gauge_transform(state, W):
    """Conjugate the family and rho by a bond unitary; the state is unchanged."""
    W = np.asarray(W, dtype=complex)
    fam = KrausFamily(tuple(W @ v @ W.conj().T for v in state.kraus.v))
    return FcsState(kraus=fam, rho=W @ state.rho @ W.conj().T, ergodic=state.ergodic)
