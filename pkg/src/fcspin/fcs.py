"""Finitely correlated states from unital Kraus families.

A family v_1..v_d of k x k matrices with sum_i v_i v_i* = I, together with
an invariant faithful density matrix rho (sum_i v_i* rho v_i = rho), defines
a translation-invariant state of the two-sided chain.  Expectations of an
observable supported on a window of length m are computed from the window
tensor W[I, J] = trace(rho v_{i1}..v_{im} v*_{jm}..v*_{j1}).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError

__all__ = [
    "KrausFamily",
    "FcsState",
    "ModularData",
    "LocalObservable",
    "ValidationReport",
    "validate",
    "fixed_point",
    "transfer_matrix",
    "dual_transfer_matrix",
    "evaluate_monomial",
    "window_expectations",
    "evaluate_local",
    "modular_data",
    "dual_family",
    "max_window_entries",
    "MAX_WINDOW_LEN",
]

MAX_WINDOW_LEN = 12


def max_window_entries():
    """Size cap for window tensors, overridable via FCS_MAX_DIM."""
    return int(os.environ.get("FCS_MAX_DIM", 4_000_000))


@dataclass(frozen=True)
class KrausFamily:
    """d complex k x k matrices v_1..v_d with sum_i v_i v_i* = I."""

    v: tuple

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex) for m in self.v)
        k = mats[0].shape[0]
        for i, m in enumerate(mats):
            if m.shape != (k, k):
                raise ValueError(
                    f"Kraus matrix {i + 1} has shape {m.shape}, expected ({k}, {k})"
                )
        object.__setattr__(self, "v", mats)

    @property
    def d(self):
        return len(self.v)

    @property
    def k(self):
        return self.v[0].shape[0]

    def stacked(self):
        """The matrices as a (d, k, k) array."""
        return np.stack(self.v)


@dataclass(frozen=True)
class ValidationReport:
    defect: float
    tol: float

    @property
    def passed(self):
        return self.defect <= self.tol


@dataclass(frozen=True)
class FcsState:
    """A Kraus family together with its invariant faithful state rho."""

    kraus: KrausFamily
    rho: np.ndarray
    ergodic: bool

    @property
    def d(self):
        return self.kraus.d

    @property
    def k(self):
        return self.kraus.k


@dataclass(frozen=True)
class ModularData:
    """Finite-dimensional modular data of (M, phi).

    The GNS space is realized as k x k matrices y (the vector of an algebra
    element a is a rho^{1/2}) with the Hilbert-Schmidt inner product; the
    cyclic vector is rho^{1/2}.  Delta acts by y -> rho y rho^{-1} and the
    modular conjugation by the antilinear map y -> y* (descriptor Jconj).
    The duals vtilde_k act from the right: y -> y (rho^{1/2} v_k rho^{-1/2}).
    """

    gns_dim: int
    Delta: np.ndarray
    Jconj: str
    vtilde: tuple
    rho: np.ndarray
    delta_defect: float = field(default=0.0)

    @property
    def delta_trivial(self):
        return self.delta_defect <= 1e-10


@dataclass(frozen=True)
class LocalObservable:
    """An observable on the lattice window [a, b], as a d^(b-a+1) square matrix."""

    support: tuple
    tensor: np.ndarray

    def __post_init__(self):
        a, b = self.support
        if b < a:
            raise ValueError(f"empty support [{a}, {b}]")
        object.__setattr__(self, "tensor", np.asarray(self.tensor, dtype=complex))

    @property
    def length(self):
        return self.support[1] - self.support[0] + 1


def validate(kraus, tol=1e-10):
    """Check the unitality defect ||sum_i v_i v_i* - I||_max."""
    acc = sum(v @ v.conj().T for v in kraus.v)
    defect = float(np.abs(acc - np.eye(kraus.k)).max())
    return ValidationReport(defect=defect, tol=tol)


def transfer_matrix(kraus):
    """Matrix of x -> sum_i v_i x v_i* on row-major vec(x)."""
    return sum(np.kron(v, v.conj()) for v in kraus.v)


def dual_transfer_matrix(kraus):
    """Matrix of x -> sum_i v_i* x v_i on row-major vec(x)."""
    return sum(np.kron(v.conj().T, v.T) for v in kraus.v)


def _fixed_space_projector(M, tol):
    """Spectral projector of M onto the eigenvalue-1 eigenspace."""
    w, V = np.linalg.eig(M)
    sel = np.abs(w - 1.0) <= tol
    if not sel.any():
        raise ValueError("transfer map has no fixed point within tolerance")
    Vinv = np.linalg.inv(V)
    return (V[:, sel] @ Vinv[sel, :]), int(sel.sum())


def fixed_point(kraus, tol=1e-9):
    """Invariant state of the dual transfer map.

    Returns an FcsState with ergodic=True when the fixed point of the
    transfer map is unique.  For degenerate families the maximum-entropy
    fixed point (spectral projection of I/k) is returned with ergodic=False.
    Raises ValueError if the resulting rho is not faithful.
    """
    rep = validate(kraus, tol)
    if not rep.passed:
        raise ValueError(f"Kraus family is not unital, defect {rep.defect:g}")
    k = kraus.k
    P, mult = _fixed_space_projector(dual_transfer_matrix(kraus), tol)
    rho_vec = P @ (np.eye(k) / k).reshape(-1)
    rho = rho_vec.reshape(k, k)
    rho = (rho + rho.conj().T) / 2
    w, U = np.linalg.eigh(rho)
    w = np.where(w < 0, np.where(w > -tol, 0.0, w), w)
    if (w < 0).any():
        raise ValueError("fixed point is not positive semidefinite")
    rho = (U * w) @ U.conj().T
    tr = rho.trace().real
    if tr <= tol:
        raise ValueError("fixed point has vanishing trace")
    rho = rho / tr
    if np.linalg.eigvalsh(rho).min() <= tol:
        raise ValueError(
            "fixed point is not faithful; the family leaves the assumed "
            "support-projection setting"
        )
    return FcsState(kraus=kraus, rho=rho, ergodic=(mult == 1))


def evaluate_monomial(state, I, J):
    """trace(rho v_I v*_J) with v_I = v_{i1}..v_{im}, 1-based indices.

    For |I| != |J| the value is not gauge invariant; it is still returned
    and belongs to the gauge-extended state.
    """
    d, k = state.d, state.k
    for idx in tuple(I) + tuple(J):
        if not 1 <= idx <= d:
            raise ValueError(f"monomial index {idx} out of range 1..{d}")
    left = np.eye(k, dtype=complex)
    for i in I:
        left = left @ state.kraus.v[i - 1]
    right = np.eye(k, dtype=complex)
    for j in reversed(J):
        right = right @ state.kraus.v[j - 1].conj().T
    return complex(np.trace(state.rho @ left @ right))


def window_expectations(state, m):
    """The d^m x d^m tensor W[I, J] = omega(|e_I><e_J|) on a length-m window."""
    d, k = state.d, state.k
    if m < 1:
        raise ValueError("window length must be >= 1")
    if m > MAX_WINDOW_LEN or (d ** m) ** 2 > max_window_entries():
        raise ResourceLimitError(
            f"window of length {m} at d={d} exceeds the configured cap"
        )
    V = state.kraus.stacked()
    Vc = V.conj()
    # F[I, J] = v_{i1}..v_{im} v*_{jm}..v*_{j1}, built by prepending one site
    F = np.einsum("iab,jcb->ijac", V, Vc)
    dim = d
    for _ in range(m - 1):
        F = np.einsum("iab,xybe,jce->ixjyac", V, F.reshape(dim, dim, k, k), Vc,
                      optimize=True)
        dim *= d
        F = F.reshape(dim, dim, k, k)
    W = np.einsum("pq,xyqp->xy", state.rho, F.reshape(dim, dim, k, k), optimize=True)
    return W


def evaluate_local(state, obs):
    """Translation-invariant expectation of a LocalObservable."""
    m = obs.length
    D = state.d ** m
    if obs.tensor.shape != (D, D):
        raise ValueError(
            f"observable tensor has shape {obs.tensor.shape}, expected ({D}, {D})"
        )
    W = window_expectations(state, m)
    return complex(np.sum(obs.tensor * W))


def _rho_roots(rho):
    w, U = np.linalg.eigh(rho)
    if w.min() <= 0:
        raise ValueError("rho is not faithful")
    sq = (U * np.sqrt(w)) @ U.conj().T
    inv_sq = (U / np.sqrt(w)) @ U.conj().T
    inv = (U / w) @ U.conj().T
    return sq, inv_sq, inv


def modular_data(state):
    """Delta, the conjugation descriptor, and the dual family vtilde."""
    rho = state.rho
    k = state.k
    sq, inv_sq, inv = _rho_roots(rho)
    Delta = np.kron(rho, inv.conj())
    vtilde = tuple(sq @ v @ inv_sq for v in state.kraus.v)
    defect = float(np.abs(Delta - np.eye(k * k)).max())
    return ModularData(
        gns_dim=k * k,
        Delta=Delta,
        Jconj="antilinear adjoint y -> y* on the Hilbert-Schmidt GNS space",
        vtilde=vtilde,
        rho=rho,
        delta_defect=defect,
    )


def dual_family(md):
    """The duals as a unital Kraus family (adjoints of the right factors)."""
    return KrausFamily(tuple(w.conj().T for w in md.vtilde))
