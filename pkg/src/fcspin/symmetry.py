"""Finite-window symmetry certification for finitely correlated states.

Each check decides, on windows up to a stated length and at a stated
tolerance, one invariance property of the state: reality (transpose
invariance in the fixed basis), lattice reflection with a twist,
reflection positivity with a twist, and rotation invariance.  Structural
checks decide the algebraic consequences: triviality of the modular
operator, self-adjointness of the transfer operator, the twisted-adjoint
relation of the Kraus family, and existence of a covariance intertwiner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .fcs import max_window_entries, modular_data, window_expectations
from .su2 import TwistMatrix, build_spin_rep, build_twist, random_group_elements
from .transfer import build_transfer, decay_certificate, gap

__all__ = [
    "SymmetryVerdict",
    "IntertwinerReport",
    "AuditClause",
    "AuditReport",
    "check_real",
    "check_lattice_twist",
    "check_reflection_positive",
    "check_su2",
    "check_kraus_twist_relation",
    "find_intertwiner",
    "theorem_audit",
]


@dataclass(frozen=True)
class SymmetryVerdict:
    """Outcome of one finite-window symmetry check.

    status is "pass", "fail", or "indeterminate"; for the decidable checks
    pass holds exactly when defect <= tol.  details maps sub-checks
    (per window length, per sample) to their worst violations.
    """

    name: str
    window: int
    defect: float
    tol: float
    status: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class IntertwinerReport:
    """Bond-space generators X_a implementing the rotation covariance."""

    generators: tuple
    residual: float
    exp_residual: float
    tol: float

    @property
    def found(self):
        return self.residual <= self.tol and self.exp_residual <= 10 * self.tol


@dataclass(frozen=True)
class AuditClause:
    name: str
    kind: str  # "hypothesis" or "conclusion"
    status: str
    value: float
    note: str = ""


@dataclass(frozen=True)
class AuditReport:
    clauses: tuple
    delta: float

    def clause(self, name):
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_pass(self):
        return all(c.status == "pass" for c in self.clauses)


def _as_twist_matrix(twist, d):
    """Accept a TwistMatrix or a bare unitary with square equal to I."""
    if isinstance(twist, TwistMatrix):
        r0 = twist.r0
    else:
        r0 = np.asarray(twist, dtype=complex)
    if r0.shape != (d, d):
        raise ValueError(f"twist has shape {r0.shape}, expected ({d}, {d})")
    if np.abs(r0 @ r0 - np.eye(d)).max() > 1e-10:
        raise ValueError("twist does not square to the identity")
    if np.abs(r0 @ r0.conj().T - np.eye(d)).max() > 1e-10:
        raise ValueError("twist is not unitary")
    return r0


def _site_reversal_perm(d, m):
    """Permutation sending a base-d multi-index to its site reversal."""
    idx = np.arange(d ** m).reshape((d,) * m)
    return idx.transpose(tuple(reversed(range(m)))).reshape(-1)


def _kron_power(a, m):
    out = np.ones((1, 1), dtype=complex)
    for _ in range(m):
        out = np.kron(out, a)
    return out


def _reflect_twist_matrix(r0, m):
    """Matrix of site reversal followed by the per-site twist on C^(d^m)."""
    d = r0.shape[0]
    return _kron_power(r0, m)[:, _site_reversal_perm(d, m)]


def _verdict(name, window, defect, tol, details):
    status = "pass" if defect <= tol else "fail"
    return SymmetryVerdict(name=name, window=window, defect=float(defect),
                           tol=tol, status=status, details=details)


def check_real(state, m, tol=1e-9):
    """Transpose invariance in the fixed basis on windows of length <= m."""
    details = {}
    for length in range(1, m + 1):
        W = window_expectations(state, length)
        details[length] = float(np.abs(W - W.T).max())
    return _verdict("real", m, max(details.values()), tol, details)


def check_lattice_twist(state, twist, m, tol=1e-9):
    """Invariance under site reversal about a bond with a per-site twist."""
    r0 = _as_twist_matrix(twist, state.d)
    details = {}
    for length in range(1, m + 1):
        W = window_expectations(state, length)
        RP = _reflect_twist_matrix(r0, length)
        details[length] = float(np.abs(RP.T @ W @ RP.conj() - W).max())
    return _verdict("lattice-twist", m, max(details.values()), tol, details)


def check_reflection_positive(state, twist, m, tol=1e-9):
    """Positivity of the twisted-reflection Gram form on length-m windows.

    The Gram matrix over the matrix-unit basis of a length-m window pairs
    each basis element against its twisted mirror image on the opposite
    side of the bond; the verdict requires the (hermitized) matrix to have
    smallest eigenvalue >= -tol.
    """
    r0 = _as_twist_matrix(twist, state.d)
    d = state.d
    if m == 0:
        return SymmetryVerdict(name="reflection-positive", window=0, defect=0.0,
                               tol=tol, status="pass",
                               details={"min_eig": 1.0, "herm_defect": 0.0})
    if (d ** m) ** 4 > max_window_entries() ** 2:
        raise ResourceLimitError(
            f"reflection-positivity Gram at window {m}, d={d} exceeds the cap"
        )
    D = d ** m
    W4 = window_expectations(state, 2 * m).reshape(D, D, D, D)
    Rr = _reflect_twist_matrix(r0, m)
    G = np.einsum("ia,jb,ixjy->abxy", Rr.conj(), Rr, W4,
                  optimize=True).reshape(D * D, D * D)
    herm_defect = float(np.abs(G - G.conj().T).max())
    G = (G + G.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(G).min())
    defect = max(0.0, -min_eig)
    status = "pass" if defect <= tol and herm_defect <= 100 * tol else "fail"
    return SymmetryVerdict(
        name="reflection-positive", window=m, defect=defect, tol=tol,
        status=status, details={"min_eig": min_eig, "herm_defect": herm_defect},
    )


def check_su2(state, rep, samples, m, tol=1e-8, rng=None):
    """Invariance under the product rotation action on windows <= m.

    samples is a sequence of GroupElement (or an integer count, drawn with
    rng); the Lie-algebra form of the invariance is checked as well, so a
    pass certifies the full one-parameter orbits and not just the samples.
    """
    if rep.d != state.d:
        raise ValueError(
            f"representation dimension {rep.d} != physical dimension {state.d}"
        )
    if isinstance(samples, (int, np.integer)):
        rng = np.random.default_rng(0) if rng is None else rng
        samples = random_group_elements(rep, int(samples), rng)
    details = {}
    worst = 0.0
    for length in range(1, m + 1):
        W = window_expectations(state, length)
        scale = max(1.0, float(np.abs(W).max()))
        for gi, g in enumerate(samples):
            U = _kron_power(g.u, length)
            val = float(np.abs(U.T @ W @ U.conj() - W).max()) / scale
            details[(length, "sample", gi)] = val
            worst = max(worst, val)
        for label, S in zip("xyz", rep.generators()):
            A = sum(
                np.kron(np.kron(np.eye(rep.d ** p), S),
                        np.eye(rep.d ** (length - 1 - p)))
                for p in range(length)
            )
            val = float(np.abs(A.T @ W - W @ A.conj()).max()) / scale
            details[(length, "generator", label)] = val
            worst = max(worst, val)
    return _verdict("su2-invariant", m, worst, tol, details)


def _polar_unitary(M):
    u, _, vh = np.linalg.svd(M)
    return u @ vh


def _twist_combination(kraus, r_real):
    """c_i = sum_j r[j, i] v_j for a real twist matrix r."""
    V = kraus.stacked()
    return np.einsum("ji,jab->iab", r_real.astype(complex), V)


def check_kraus_twist_relation(state, twist, tol=1e-8, rng=None,
                               restarts=8, iters=200):
    """Gauge search for the twisted-adjoint relation of the Kraus family.

    Decides whether there exist a bond unitary W and a phase lam with
    v_i* = lam * W (sum_j r[j,i] v_j) W* for all i, where r is the real
    form of the twist.  The residual is minimized by alternating the
    optimal phase with a polar-decomposition update of W; failure to reach
    tol is reported as "fail" only when the best residual is clearly large,
    otherwise "indeterminate".
    """
    tw = twist if isinstance(twist, TwistMatrix) else build_twist(build_spin_rep(state.d))
    if tw.d != state.d:
        raise ValueError(f"twist dimension {tw.d} != physical dimension {state.d}")
    r_real = tw.real_form
    k = state.k
    targets = np.stack([v.conj().T for v in state.kraus.v])
    C = _twist_combination(state.kraus, r_real)
    rng = np.random.default_rng(12345) if rng is None else rng

    seeds = [np.eye(k, dtype=complex)]
    if k >= 2:
        from scipy.linalg import expm
        bond = build_spin_rep(k)
        seeds.append(expm(1j * np.pi * bond.Sy).astype(complex))
    while len(seeds) < restarts:
        z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        seeds.append(_polar_unitary(z))

    def residual(W, lam):
        M = np.einsum("ab,ibc,dc->iad", W, C, W.conj(), optimize=True)
        return max(
            float(np.linalg.norm(targets[i] - lam * M[i], 2))
            for i in range(state.d)
        )

    best = (np.inf, None, None)
    for W in seeds:
        W = W.copy()
        lam = 1.0 + 0j
        prev = np.inf
        for _ in range(iters):
            M = np.einsum("ab,ibc,dc->iad", W, C, W.conj(), optimize=True)
            h = complex(np.einsum("iab,iab->", M.conj(), targets))
            lam = h / abs(h) if abs(h) > 1e-14 else 1.0 + 0j
            # descent step on W for sum_i ||v_i* W - lam W c_i||_F^2
            G = lam * np.einsum("iab,bc,icd->ad", np.conj(targets.transpose(0, 2, 1)),
                                W, C, optimize=True)
            W = _polar_unitary(G)
            cur = residual(W, lam)
            if abs(prev - cur) < 1e-14:
                break
            prev = cur
        cur = residual(W, lam)
        if cur < best[0]:
            best = (cur, W, lam)

    defect, W, lam = best
    if defect <= tol:
        status = "pass"
    elif defect >= 1e-3:
        status = "fail"
    else:
        status = "indeterminate"
    return SymmetryVerdict(
        name="twist-adjoint-relation", window=1, defect=float(defect), tol=tol,
        status=status, details={"gauge": W, "phase": lam},
    )


def find_intertwiner(state, rep, tol=1e-8, rng=None, samples=6):
    """Bond generators X_a of the rotation covariance of the Kraus family.

    Solves, in the least-squares sense, the linear equations
    sum_j (S_a)_{ij} v_j* + [X_a, v_i*] = 0 for Hermitian X_a, then verifies
    the exponentiated covariance sum_j u(g)_{ji} v_j = U_g v_i U_g* on
    sampled group elements with U_g = exp(i sum theta_a X_a).
    """
    if rep.d != state.d:
        raise ValueError(
            f"representation dimension {rep.d} != physical dimension {state.d}"
        )
    from scipy.linalg import expm

    k = state.k
    eye = np.eye(k)
    Vdag = np.stack([v.conj().T for v in state.kraus.v])
    scale = max(1.0, float(max(np.linalg.norm(S, 2) for S in rep.generators())))
    gens = []
    residual = 0.0
    for S in rep.generators():
        # vec(X M - M X) = (I (x) M^T - M (x) I) vec(X), row-major
        rows = [np.kron(eye, Vdag[i].T) - np.kron(Vdag[i], eye)
                for i in range(state.d)]
        A = np.vstack(rows)
        b = np.concatenate([
            -np.einsum("j,jab->ab", S[i], Vdag).reshape(-1)
            for i in range(state.d)
        ])
        x, *_ = np.linalg.lstsq(A, b, rcond=None)
        X = x.reshape(k, k)
        X = X - (np.trace(X) / k) * eye
        X = (X + X.conj().T) / 2
        res = float(np.abs(A @ X.reshape(-1) - b).max()) / scale
        residual = max(residual, res)
        gens.append(X)

    rng = np.random.default_rng(7) if rng is None else rng
    exp_residual = 0.0
    for g in random_group_elements(rep, samples, rng):
        Ug = expm(1j * sum(t * X for t, X in zip(g.theta, gens)))
        lhs = np.einsum("ji,jab->iab", g.u, state.kraus.stacked())
        rhs = np.stack([Ug @ v @ Ug.conj().T for v in state.kraus.v])
        exp_residual = max(exp_residual, float(np.abs(lhs - rhs).max()))
    return IntertwinerReport(generators=tuple(gens), residual=residual,
                             exp_residual=exp_residual, tol=tol)


def theorem_audit(state, rep, twist, windows=2, tol=1e-8, rng=None,
                  samples=6, rp_window=2, n_max=12):
    """Composite report: symmetry hypotheses, then structural conclusions.

    Hypotheses: reality, lattice reflection with twist, reflection
    positivity with twist, rotation invariance.  Conclusions: trivial
    modular operator, unique transfer fixed point, self-adjoint transfer
    operator, twisted-adjoint Kraus relation, and exponential decay of
    two-point correlations.  Clause order is fixed for stable output.
    """
    rng = np.random.default_rng(2024) if rng is None else rng
    clauses = []

    v = check_real(state, windows, tol)
    clauses.append(AuditClause("real", "hypothesis", v.status, v.defect))
    v = check_lattice_twist(state, twist, windows, tol)
    clauses.append(AuditClause("lattice-twist", "hypothesis", v.status, v.defect))
    v = check_reflection_positive(state, twist, min(windows, rp_window), tol)
    clauses.append(AuditClause(
        "reflection-positive", "hypothesis", v.status, v.defect,
        note=f"min eigenvalue {v.details['min_eig']:.3e}"))
    v = check_su2(state, rep, samples, windows, tol, rng=rng)
    clauses.append(AuditClause("su2-invariant", "hypothesis", v.status, v.defect))

    md = modular_data(state)
    clauses.append(AuditClause(
        "modular-trivial", "conclusion",
        "pass" if md.delta_defect <= 10 * tol else "fail", md.delta_defect))

    t = build_transfer(state)
    rep_gap = gap(t)
    clauses.append(AuditClause(
        "ergodic", "conclusion",
        "pass" if rep_gap.fixed_multiplicity == 1 else "fail",
        float(rep_gap.fixed_multiplicity)))
    clauses.append(AuditClause(
        "transfer-selfadjoint", "conclusion",
        "pass" if rep_gap.selfadjoint_defect <= 10 * tol else "fail",
        rep_gap.selfadjoint_defect))

    v = check_kraus_twist_relation(state, twist, tol, rng=rng)
    clauses.append(AuditClause("twist-adjoint-relation", "conclusion",
                               v.status, v.defect))

    Sz = rep.Sz
    cert = decay_certificate(state, Sz, Sz, n_max)
    clauses.append(AuditClause(
        "exponential-decay", "conclusion",
        "pass" if cert.passed and cert.delta < 1.0 else "fail", cert.delta,
        note=cert.reason))
    return AuditReport(clauses=tuple(clauses), delta=cert.delta)
