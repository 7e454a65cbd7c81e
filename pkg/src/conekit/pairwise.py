"""Cones of matrix pairs sharing a diagonal, and their membership tests.

A pair (A, B) couples a real matrix A with a hermitian matrix B whose
diagonals agree.  The cones tested here are, in decreasing strength:

    PCP  (pairwise completely positive)
      subset of  CLDUI+  (A entrywise nonneg, B psd)
      subset of  PDEC    (pairwise decomposable)
      subset of  COPCP   (pairwise copositive).

COPCP membership means the sesquilinear form

    <v o conj(v), A (w o conj(w))> + <v o w, ring(B) (v o w)>  >= 0

for all complex vectors v, w, where `o` is the entrywise product and
ring(B) denotes B with its diagonal removed.  Exact COPCP membership is
intractable in general; the oracle combines sufficient routes with a
refutation search and returns UNKNOWN when neither side lands.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from .linalg import (
    Tolerance,
    as_square,
    as_tolerance,
    check_hermitian,
    inner,
    is_entrywise_nonneg,
    is_psd,
    min_eig,
    off_diag,
    symmetrize,
)
from . import cones
from .cones import ConeVerdict, Effort, Verdict
from .optim import SdpProblem, SdpStatus, solve_sdp, verify_sdp

__all__ = [
    "DiagonalMismatch",
    "PreconditionError",
    "MatrixPair",
    "PairVerdict",
    "pair_form",
    "copcp_form_value",
    "form_value_batch",
    "pair_inner",
    "necessary_filters",
    "is_copcp",
    "lift_check",
    "is_pdec",
    "pdec_sufficient",
    "spn_lift_check",
    "is_pdnn",
    "is_cldui_plus",
    "pcp_checks",
    "verify_pair",
]


class DiagonalMismatch(ValueError):
    """The two matrices of a pair must share a real diagonal."""


class PreconditionError(ValueError):
    """A lifting theorem's hypotheses do not hold for the given input."""


@dataclass(frozen=True)
class MatrixPair:
    """A validated pair (A real, B hermitian) with matching diagonals."""

    A: np.ndarray
    B: np.ndarray
    n: int

    def ring_b(self) -> np.ndarray:
        return off_diag(self.B)

    def scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.A))) + float(np.max(np.abs(self.B)))


@dataclass
class PairVerdict:
    status: Verdict
    cone: str
    certificate: dict
    value: Optional[float] = None
    detail: str = ""

    @property
    def is_member(self) -> bool:
        return self.status is Verdict.MEMBER


def pair_form(A, B, tol=None) -> MatrixPair:
    """Validate and package a pair; raises DiagonalMismatch when invalid."""
    A = as_square(A)
    if np.iscomplexobj(A):
        if float(np.max(np.abs(A.imag))) > 1e-12:
            raise ValueError("A must be real")
        A = A.real.copy()
    A = A.astype(float)
    B = check_hermitian(B)
    if A.shape != B.shape:
        raise DiagonalMismatch("A and B must have the same shape")
    dA, dB = np.diag(A), np.diag(B)
    if float(np.max(np.abs(dB.imag))) > 1e-12:
        raise DiagonalMismatch("diagonal of B must be real")
    if float(np.max(np.abs(dA - dB.real))) > 1e-12:
        raise DiagonalMismatch("diag(A) and diag(B) must agree")
    A.setflags(write=False)
    B.setflags(write=False)
    return MatrixPair(A, B, A.shape[0])


def copcp_form_value(pair: MatrixPair, v, w) -> float:
    """The defining form of pairwise copositivity at vectors v, w."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    w = np.asarray(w, dtype=complex).reshape(-1)
    if v.shape != (pair.n,) or w.shape != (pair.n,):
        raise ValueError("vector length mismatch")
    pv = np.abs(v) ** 2
    pw = np.abs(w) ** 2
    z = v * w
    val = pv @ pair.A @ pw + np.vdot(z, pair.ring_b() @ z)
    if abs(val.imag) > 1e-10 * pair.scale():
        raise ArithmeticError("form value has a non-negligible imaginary part")
    return float(val.real)


def form_value_batch(pair: MatrixPair, V, W) -> np.ndarray:
    """copcp_form_value across rows of V and W (k x n arrays)."""
    V = np.asarray(V, dtype=complex)
    W = np.asarray(W, dtype=complex)
    PV = np.abs(V) ** 2
    PW = np.abs(W) ** 2
    Z = V * W
    t1 = np.einsum("ki,ij,kj->k", PV, pair.A, PW)
    Bo = pair.ring_b()
    t2 = np.einsum("ki,ij,kj->k", Z.conj(), Bo, Z)
    return (t1 + t2).real


def pair_inner(p: MatrixPair, q: MatrixPair) -> float:
    """<(A1,B1),(A2,B2)> = <A1,A2> + <ring B1, ring B2>."""
    return inner(p.A, q.A) + inner(p.ring_b(), q.ring_b())


# ---------------------------------------------------------------------------
# necessary conditions


def necessary_filters(pair: MatrixPair, tol=None, effort="default",
                      seed: int = 0) -> dict:
    """Three conditions every pairwise copositive pair satisfies.

    Any FAIL certifies non-membership; all-PASS is inconclusive.
    """
    tol = as_tolerance(tol)
    eff = Effort.of(effort)
    A, B, n = pair.A, pair.B, pair.n
    scale = pair.scale()
    report: dict = {}

    worst = float(np.min(A))
    if worst < -tol.feas_tol * scale:
        i, j = np.unravel_index(int(np.argmin(A)), A.shape)
        report["A_entrywise"] = ("FAIL", {"entry": (int(i), int(j)),
                                          "value": worst})
    else:
        report["A_entrywise"] = ("PASS", {"min_entry": worst})

    S = A + A.T + 2 * np.real(off_diag(B))
    cop = cones.is_cop(S, tol=tol, effort=eff, seed=seed)
    tag = {Verdict.MEMBER: "PASS", Verdict.NON_MEMBER: "FAIL",
           Verdict.UNKNOWN: "UNKNOWN"}[cop.status]
    report["symmetrized_cop"] = (tag, {"verdict": cop})

    worst_pair, worst_val = None, np.inf
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            g = (np.sqrt(max(A[i, i] * A[j, j], 0.0))
                 + np.sqrt(max(A[i, j] * A[j, i], 0.0))
                 - abs(B[i, j]))
            if g < worst_val:
                worst_val, worst_pair = g, (i, j)
    if worst_val < -tol.feas_tol * scale:
        report["entry_inequality"] = ("FAIL", {"entry": worst_pair,
                                               "margin": float(worst_val)})
    else:
        report["entry_inequality"] = ("PASS", {"margin": float(worst_val)})
    return report


# ---------------------------------------------------------------------------
# refutation search for the copositive-type form


def _phase_sweep(Bo, m, psi, sweeps=2):
    n = len(m)
    for _ in range(sweeps):
        for i in range(n):
            ci = Bo[i] @ m - Bo[i, i] * m[i]
            if abs(ci) > 1e-15:
                psi[i] = np.pi + np.angle(ci)
                m[i] = abs(m[i]) * np.exp(1j * psi[i])
    return m, psi


def _magnitude_descent(A, G, a, b, iters=40):
    def f(a, b):
        ab = a * b
        return (a ** 2) @ A @ (b ** 2) + ab @ G @ ab

    cur = f(a, b)
    step = 0.5
    for _ in range(iters):
        ab = a * b
        Gab = G @ ab
        ga = 2 * a * (A @ (b ** 2)) + 2 * b * Gab
        gb = 2 * b * (A.T @ (a ** 2)) + 2 * a * Gab
        moved = False
        while step > 1e-8:
            na = np.clip(a - step * ga, 0.0, None)
            nb = np.clip(b - step * gb, 0.0, None)
            sa, sb = np.linalg.norm(na), np.linalg.norm(nb)
            if sa < 1e-12 or sb < 1e-12:
                step *= 0.5
                continue
            na, nb = na / sa, nb / sb
            val = f(na, nb)
            if val < cur - 1e-14:
                a, b, cur = na, nb, val
                moved = True
                step *= 1.3
                break
            step *= 0.5
        if not moved:
            break
    return a, b, cur


def _refute_copcp(pair: MatrixPair, tol: Tolerance, eff: Effort, seed: int,
                  support=None):
    """Search for vectors making the pairwise form negative.

    Magnitudes live on unit spheres (the form is biquadratic), phases enter
    only through the combined angle of v o w and are optimized by cyclic
    exact updates; magnitudes follow by projected gradient.
    Returns (best value, v, w).
    """
    n = pair.n
    idx = np.arange(n) if support is None else np.asarray(support, dtype=int)
    k = len(idx)
    A = pair.A[np.ix_(idx, idx)]
    Bo = pair.ring_b()[np.ix_(idx, idx)]
    rng = np.random.default_rng(seed)
    best = (np.inf, None, None)

    starts = []
    u = np.ones(k) / np.sqrt(k)
    starts.append((u.copy(), u.copy(), np.zeros(k)))
    starts.append((u.copy(), u.copy(), rng.uniform(0, 2 * np.pi, size=k)))
    for _ in range(eff.pair_refute_starts):
        a = np.sqrt(rng.dirichlet(np.ones(k)))
        b = np.sqrt(rng.dirichlet(np.ones(k)))
        psi = rng.uniform(0, 2 * np.pi, size=k)
        starts.append((a, b, psi))

    for a, b, psi in starts:
        for _ in range(4):
            m = a * b * np.exp(1j * psi)
            m, psi = _phase_sweep(Bo, m, psi)
            ph = np.exp(1j * (psi[None, :] - psi[:, None]))
            G = np.real(Bo * ph)
            a, b, val = _magnitude_descent(A, G, a, b)
        if val < best[0]:
            v = np.zeros(n, dtype=complex)
            w = np.zeros(n, dtype=complex)
            v[idx] = a
            w[idx] = b * np.exp(1j * psi)
            val_exact = copcp_form_value(pair, v, w)
            if val_exact < best[0]:
                best = (val_exact, v, w)
    return best


# ---------------------------------------------------------------------------
# COPCP oracle


def is_copcp(pair: MatrixPair, tol=None, effort="default",
             seed: int = 0) -> PairVerdict:
    """Tri-state pairwise copositivity test.

    Membership routes, cheapest first: the entrywise/psd sufficient
    condition, pairwise decomposability, and the copositive lifting that
    applies when the off-diagonal of B is entrywise nonpositive.  On the
    refutation side, failed necessary filters are converted into explicit
    violating vectors whenever possible, and a multistart search over
    (v, w) is run last.
    """
    tol = as_tolerance(tol)
    eff = Effort.of(effort)
    A, B = pair.A, pair.B
    scale = pair.scale()

    report = necessary_filters(pair, tol=tol, effort=eff, seed=seed)
    tag, info = report["A_entrywise"]
    if tag == "FAIL":
        i, j = info["entry"]
        v = np.zeros(pair.n)
        w = np.zeros(pair.n)
        v[i] = 1.0
        w[j] = 1.0
        return PairVerdict(
            Verdict.NON_MEMBER, "copcp",
            {"v": v.astype(complex), "w": w.astype(complex),
             "value": float(A[i, j]), "filter": "A_entrywise"},
            value=float(A[i, j]),
            detail="negative entry of A refutes the form at unit vectors",
        )
    tag, info = report["symmetrized_cop"]
    if tag == "FAIL":
        x = info["verdict"].certificate.get("vector")
        if x is not None:
            s = np.sqrt(np.clip(np.asarray(x, dtype=float), 0.0, None))
            val = copcp_form_value(pair, s, s)
            if val < -tol.feas_tol * scale:
                return PairVerdict(
                    Verdict.NON_MEMBER, "copcp",
                    {"v": s.astype(complex), "w": s.astype(complex),
                     "value": val, "filter": "symmetrized_cop"},
                    value=val,
                    detail="copositivity refuter on A+A^T+2Re(ring B)",
                )
    tag, info = report["entry_inequality"]
    if tag == "FAIL":
        val, v, w = _refute_copcp(pair, tol, eff, seed,
                                  support=list(info["entry"]))
        if val < -tol.feas_tol * scale:
            return PairVerdict(
                Verdict.NON_MEMBER, "copcp",
                {"v": v, "w": w, "value": val, "filter": "entry_inequality"},
                value=val, detail="two-coordinate refutation",
            )

    if is_cldui_plus(pair, tol=tol):
        return PairVerdict(
            Verdict.MEMBER, "copcp", {"route": "cldui+"},
            detail="A entrywise nonneg and B psd",
        )
    dec = is_pdec(pair, tol=tol)
    if dec.status is Verdict.MEMBER:
        cert = dict(dec.certificate)
        cert["route"] = "pdec"
        return PairVerdict(Verdict.MEMBER, "copcp", cert,
                           detail="pairwise decomposable")

    symmetric_A = bool(np.max(np.abs(A - A.T)) <= 1e-12)
    b_real = bool(np.max(np.abs(B.imag)) <= 1e-12)
    ringB = np.real(off_diag(B))
    if symmetric_A and b_real and float(np.max(ringB)) <= tol.feas_tol:
        target = symmetrize(A + ringB)
        cop = cones.is_cop(target, tol=tol, effort=eff, seed=seed)
        if cop.status is Verdict.MEMBER:
            return PairVerdict(
                Verdict.MEMBER, "copcp",
                {"route": "lift", "cop": cop, "lifted": target},
                detail="lifting: A + ring(B) copositive with -ring(B) "
                       "entrywise nonneg",
            )
        if cop.status is Verdict.NON_MEMBER:
            x = np.asarray(cop.certificate["vector"], dtype=float)
            s = np.sqrt(np.clip(x, 0.0, None))
            val = copcp_form_value(pair, s, s)
            if val < -tol.feas_tol * scale:
                return PairVerdict(
                    Verdict.NON_MEMBER, "copcp",
                    {"v": s.astype(complex), "w": s.astype(complex),
                     "value": val, "filter": "lift"},
                    value=val, detail="lifted copositivity refuted",
                )

    val, v, w = _refute_copcp(pair, tol, eff, seed)
    if val < -tol.feas_tol * scale:
        return PairVerdict(
            Verdict.NON_MEMBER, "copcp",
            {"v": v, "w": w, "value": val}, value=val,
            detail="refutation search found a violating pair of vectors",
        )
    return PairVerdict(
        Verdict.UNKNOWN, "copcp",
        {"filters": report, "search_min": val},
        value=val,
        detail="no membership route fired and no violation found",
    )


def lift_check(A, N, tol=None, effort="default", seed: int = 0) -> PairVerdict:
    """Decide (N, A - ring N) in COPCP via copositivity of A.

    Requires diag(N) = diag(A) and N, N - A entrywise nonnegative; under
    those hypotheses the pair is in COPCP exactly when A is copositive.
    """
    tol = as_tolerance(tol)
    A = symmetrize(check_hermitian(A).real)
    N = symmetrize(check_hermitian(N).real)
    if A.shape != N.shape:
        raise PreconditionError("A and N must have the same shape")
    if float(np.max(np.abs(np.diag(N) - np.diag(A)))) > 1e-10:
        raise PreconditionError("diag(N) must equal diag(A)")
    if not is_entrywise_nonneg(N, tol):
        raise PreconditionError("N must be entrywise nonnegative")
    if not is_entrywise_nonneg(N - A, tol):
        raise PreconditionError("N - A must be entrywise nonnegative")
    pair = pair_form(N, A - off_diag(N))
    cop = cones.is_cop(A, tol=tol, effort=effort, seed=seed)
    if cop.status is Verdict.MEMBER:
        return PairVerdict(Verdict.MEMBER, "copcp",
                           {"route": "lift", "cop": cop},
                           detail="A copositive transfers to the pair")
    if cop.status is Verdict.NON_MEMBER:
        x = np.asarray(cop.certificate["vector"], dtype=float)
        s = np.sqrt(np.clip(x, 0.0, None))
        val = copcp_form_value(pair, s, s)
        return PairVerdict(Verdict.NON_MEMBER, "copcp",
                           {"v": s.astype(complex), "w": s.astype(complex),
                            "value": val, "cop": cop},
                           value=val,
                           detail="copositivity refuted, pair refuted")
    return PairVerdict(Verdict.UNKNOWN, "copcp", {"cop": cop},
                       detail="copositivity undecided")


# ---------------------------------------------------------------------------
# PDEC


def _pick_re(n, i, j):
    C = np.zeros((n, n), dtype=complex)
    C[i, j] = 0.5
    C[j, i] = 0.5
    return C


def _pick_im(n, i, j):
    C = np.zeros((n, n), dtype=complex)
    C[i, j] = 0.5j
    C[j, i] = -0.5j
    return C


def _pick_diag(n, i):
    C = np.zeros((n, n))
    C[i, i] = 1.0
    return C


def is_pdec(pair: MatrixPair, tol=None) -> PairVerdict:
    """Pairwise decomposability: B = B1 + B2 with B1 psd, B2 hermitian,
    nonnegative diagonal, and |B2_ij|^2 <= A_ij A_ji off the diagonal.

    Decided by one feasibility SDP after exact presolve of the entries
    forced by zero diagonals or zero entry bounds.
    """
    tol = as_tolerance(tol)
    A, B, n = pair.A, pair.B, pair.n
    scale = pair.scale()
    if n > 24:
        raise cones.SizeLimit("pairwise decomposability capped at n = 24")

    if float(np.min(A)) < -tol.feas_tol * scale:
        i, j = np.unravel_index(int(np.argmin(A)), A.shape)
        return PairVerdict(
            Verdict.NON_MEMBER, "pdec",
            {"reason": "A_entrywise", "entry": (int(i), int(j)),
             "value": float(A[i, j])},
            detail="definition requires A entrywise nonnegative",
        )

    R = np.sqrt(np.clip(A * A.T, 0.0, None))
    np.fill_diagonal(R, 0.0)

    # indices whose diagonal forces the psd part to vanish on that row/col
    diag = np.real(np.diag(B))
    forced = diag <= tol.feas_tol * scale
    keep = [i for i in range(n) if not forced[i]]

    # entries with a forced-zero psd part must satisfy the bound directly
    for i in range(n):
        for j in range(i + 1, n):
            if forced[i] or forced[j]:
                gap = R[i, j] - abs(B[i, j])
                if gap < -tol.feas_tol * scale:
                    return PairVerdict(
                        Verdict.NON_MEMBER, "pdec",
                        {"reason": "forced_entry", "entry": (i, j),
                         "margin": float(gap)},
                        detail="zero diagonal forces B1=0 on this entry, "
                               "and |B_ij| exceeds the bound",
                    )

    if not keep:
        B1 = np.zeros((n, n), dtype=complex)
        return PairVerdict(
            Verdict.MEMBER, "pdec",
            {"B1": B1, "B2": np.asarray(B, dtype=complex).copy()},
            detail="psd part vanishes identically; bounds hold entrywise",
        )

    k = len(keep)
    pos = {v: t for t, v in enumerate(keep)}
    prob = SdpProblem()
    bone = prob.add_hpsd(k, "B1")
    slack = prob.add_nn(k, "diag-slack")
    pair_refs = {}
    for ii in range(k):
        i = keep[ii]
        e = np.zeros(k)
        e[ii] = 1.0
        prob.add_eq(float(diag[i]), (bone, _pick_diag(k, ii)), (slack, e))
    for i in range(n):
        for j in range(i + 1, n):
            if forced[i] or forced[j]:
                continue
            ii, jj = pos[i], pos[j]
            if R[i, j] <= tol.feas_tol * scale:
                # modulus bound is zero: B1 must carry the whole entry
                prob.add_eq(float(B[i, j].real), (bone, _pick_re(k, ii, jj)))
                prob.add_eq(float(B[i, j].imag), (bone, _pick_im(k, ii, jj)))
                continue
            blk = prob.add_hpsd(2, f"bound-{i}-{j}")
            pair_refs[(i, j)] = blk
            prob.add_eq(float(R[i, j]), (blk, _pick_diag(2, 0)))
            prob.add_eq(float(R[i, j]), (blk, _pick_diag(2, 1)))
            prob.add_eq(float(B[i, j].real), (blk, _pick_re(2, 0, 1)),
                        (bone, _pick_re(k, ii, jj)))
            prob.add_eq(float(B[i, j].imag), (blk, _pick_im(2, 0, 1)),
                        (bone, _pick_im(k, ii, jj)))
    prob.set_cost(bone, np.eye(k))

    sol = solve_sdp(prob)
    if sol.status is SdpStatus.OPTIMAL:
        B1 = np.zeros((n, n), dtype=complex)
        Bk = sol.block(bone)
        for i in keep:
            for j in keep:
                B1[i, j] = Bk[pos[i], pos[j]]
        B2 = np.asarray(B, dtype=complex) - B1
        margin = min(
            min_eig(B1),
            float(np.min(np.real(np.diag(B2)))),
            float(np.min(R - np.abs(off_diag(B2)))),
        )
        return PairVerdict(
            Verdict.MEMBER, "pdec",
            {"B1": B1, "B2": B2, "margin": float(margin),
             "solution": sol, "problem": prob},
            detail="explicit decomposition found by SDP",
        )
    if sol.status is SdpStatus.PRIMAL_INFEASIBLE:
        return PairVerdict(
            Verdict.NON_MEMBER, "pdec",
            {"reason": "infeasible", "farkas": sol.certificate,
             "solution": sol, "problem": prob},
            detail="decomposition constraints are infeasible "
                   "(Farkas certificate attached)",
        )
    return PairVerdict(Verdict.UNKNOWN, "pdec",
                       {"solver_status": sol.status.value},
                       detail="solver did not resolve the feasibility SDP")


def pdec_sufficient(pair: MatrixPair) -> bool:
    """Entrywise sufficient condition for pairwise decomposability:
    sqrt(A_ii A_jj)/(n-1) + sqrt(A_ij A_ji) >= |B_ij| for all i != j."""
    A, B, n = pair.A, pair.B, pair.n
    if n < 2 or float(np.min(A)) < 0:
        return False
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            lhs = (np.sqrt(max(A[i, i] * A[j, j], 0.0)) / (n - 1)
                   + np.sqrt(max(A[i, j] * A[j, i], 0.0)))
            if lhs - abs(B[i, j]) < -1e-12:
                return False
    return True


def spn_lift_check(A, N, tol=None) -> PairVerdict:
    """Decide (N, A - ring N) in PDEC through the psd+nonneg cone.

    With N entrywise nonneg, diag(N) = diag(A), and
    N_ij >= A_ij/2 + (A_ii + A_jj)/4 off the diagonal, the pair is
    pairwise decomposable exactly when A is a sum of a psd and an
    entrywise nonnegative matrix.  Two one-sided shortcuts apply when A is
    psd (any such N works) or A is entrywise nonneg with N - A/2 nonneg.
    """
    tol = as_tolerance(tol)
    A = symmetrize(check_hermitian(A).real)
    N = symmetrize(check_hermitian(N).real)
    if A.shape != N.shape:
        raise PreconditionError("A and N must have the same shape")
    n = A.shape[0]
    if float(np.max(np.abs(np.diag(N) - np.diag(A)))) > 1e-10:
        raise PreconditionError("diag(N) must equal diag(A)")
    if not is_entrywise_nonneg(N, tol):
        raise PreconditionError("N must be entrywise nonnegative")
    ringN = off_diag(N)
    pairNB = pair_form(N, A - ringN)

    main = True
    for i in range(n):
        for j in range(n):
            if i != j and N[i, j] < 0.5 * A[i, j] + 0.25 * (
                A[i, i] + A[j, j]
            ) - tol.feas_tol:
                main = False
                break
        if not main:
            break
    if main:
        spn = cones.is_spn(A, tol=tol)
        if spn.status is Verdict.MEMBER:
            P = spn.certificate["P"]
            E = spn.certificate["E"]
            B1 = P.astype(complex)
            B2 = (A - ringN).astype(complex) - B1
            return PairVerdict(Verdict.MEMBER, "pdec",
                               {"route": "spn-lift", "spn": spn,
                                "B1": B1, "B2": B2, "E": E},
                               detail="psd+nonneg split of A transfers")
        if spn.status is Verdict.NON_MEMBER:
            return PairVerdict(Verdict.NON_MEMBER, "pdec",
                               {"route": "spn-lift", "spn": spn},
                               detail="A outside psd+nonneg refutes the pair")
        return PairVerdict(Verdict.UNKNOWN, "pdec", {"spn": spn},
                           detail="inner membership undecided")
    if is_psd(A, tol):
        B1 = A.astype(complex)
        B2 = -ringN.astype(complex)
        return PairVerdict(Verdict.MEMBER, "pdec",
                           {"route": "psd-shortcut", "B1": B1, "B2": B2},
                           detail="A psd: take the psd part to be A itself")
    if is_entrywise_nonneg(A, tol) and is_entrywise_nonneg(N - A / 2, tol):
        B1 = np.zeros((n, n), dtype=complex)
        B2 = (A - ringN).astype(complex)
        return PairVerdict(Verdict.MEMBER, "pdec",
                           {"route": "ewp-shortcut", "B1": B1, "B2": B2},
                           detail="A entrywise nonneg with N >= A/2")
    raise PreconditionError(
        "no applicable hypothesis: need N_ij >= A_ij/2 + (A_ii+A_jj)/4, "
        "or A psd, or A entrywise nonneg with N - A/2 entrywise nonneg"
    )


# ---------------------------------------------------------------------------
# closed-form cones


def is_pdnn(pair: MatrixPair, tol=None) -> bool:
    """A entrywise nonneg, B psd, and A_ij A_ji >= |B_ij|^2 off-diagonal."""
    tol = as_tolerance(tol)
    A, B, n = pair.A, pair.B, pair.n
    scale = pair.scale()
    if float(np.min(A)) < -tol.feas_tol * scale:
        return False
    if not is_psd(B, tol):
        return False
    for i in range(n):
        for j in range(n):
            if i != j and A[i, j] * A[j, i] - abs(B[i, j]) ** 2 < (
                -tol.feas_tol * scale * scale
            ):
                return False
    return True


def is_cldui_plus(pair: MatrixPair, tol=None) -> bool:
    """A entrywise nonnegative and B positive semidefinite."""
    tol = as_tolerance(tol)
    scale = pair.scale()
    if float(np.min(pair.A)) < -tol.feas_tol * scale:
        return False
    return is_psd(pair.B, tol)


# ---------------------------------------------------------------------------
# PCP heuristics


def _atom(v, w):
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    Aat = np.outer(np.abs(v) ** 2, np.abs(w) ** 2)
    z = v * w
    Bat = np.outer(z, z.conj())
    return Aat, Bat


def _pair_vec(A, B, n):
    parts = [np.asarray(A, dtype=float).reshape(-1)]
    Bo = off_diag(np.asarray(B, dtype=complex))
    iu = np.triu_indices(n, k=1)
    parts.append(np.sqrt(2.0) * Bo[iu].real)
    parts.append(np.sqrt(2.0) * Bo[iu].imag)
    return np.concatenate(parts)


def _derive_atom(A, B, n):
    """Best-effort rank-one atom matching the leading structure of (A, B)."""
    Ac = np.clip(np.asarray(A, dtype=float), 0.0, None)
    U, S, Vt = np.linalg.svd(Ac)
    p = np.abs(U[:, 0]) * np.sqrt(S[0])
    q = np.abs(Vt[0])
    wB, VB = np.linalg.eigh(check_hermitian(B))
    zeta = VB[:, -1] * np.sqrt(max(wB[-1], 0.0))
    v = np.sqrt(p)
    mag_w = np.sqrt(q)
    w = mag_w * np.exp(1j * np.angle(zeta))
    return v.astype(complex), w


def pcp_checks(pair: MatrixPair, tol=None, effort="default",
               seed: int = 0) -> PairVerdict:
    """Heuristic pairwise complete positivity test.

    NON_MEMBER when a necessary condition fails (the pdnn filter, the
    Schur-pair rule for diagonal A, the equal-pair reduction to the
    completely positive cone, or a negative pairing against a known
    pairwise copositive witness).  MEMBER only when an explicit atomic
    decomposition is found by greedy fitting; otherwise UNKNOWN.
    """
    tol = as_tolerance(tol)
    eff = Effort.of(effort)
    A, B, n = pair.A, pair.B, pair.n
    scale = pair.scale()

    if not is_pdnn(pair, tol=tol):
        return PairVerdict(Verdict.NON_MEMBER, "pcp",
                           {"reason": "pdnn"},
                           detail="fails a necessary entrywise/psd filter")
    ringA = off_diag(A)
    ringB = pair.ring_b()
    if float(np.max(np.abs(ringA))) <= 1e-12 and float(
        np.max(np.abs(ringB))
    ) > tol.feas_tol * scale:
        return PairVerdict(
            Verdict.NON_MEMBER, "pcp",
            {"reason": "schur-pair"},
            detail="diagonal A forces B diagonal for membership",
        )
    # pairing against the off-diagonal reflection witness
    Nw = ((ringA - np.real(ringB)) < 0).astype(float)
    Nw = np.maximum(Nw, Nw.T)
    np.fill_diagonal(Nw, 0.0)
    if Nw.any():
        val = inner(ringA, Nw) - inner(np.real(ringB), Nw)
        if val < -tol.feas_tol * scale:
            return PairVerdict(
                Verdict.NON_MEMBER, "pcp",
                {"reason": "witness", "witness": (Nw, -Nw),
                 "pairing": float(val)},
                detail="negative pairing with a pairwise copositive witness",
            )
    sym_equal = (np.max(np.abs(A - A.T)) <= 1e-12
                 and np.max(np.abs(np.asarray(B) - A)) <= 1e-12)
    if sym_equal:
        cp = cones.is_cp(A, tol=tol, effort=eff, seed=seed)
        if cp.status is Verdict.MEMBER:
            return PairVerdict(Verdict.MEMBER, "pcp",
                               {"route": "cp-equal", "cp": cp},
                               detail="equal pair reduces to the completely "
                                      "positive cone")
        if cp.status is Verdict.NON_MEMBER:
            return PairVerdict(Verdict.NON_MEMBER, "pcp",
                               {"route": "cp-equal", "cp": cp},
                               detail="equal pair outside the completely "
                                      "positive cone")

    # greedy atomic fitting
    rng = np.random.default_rng(seed)
    target = _pair_vec(A, B, n)
    tscale = max(1.0, float(np.linalg.norm(target)))
    atoms = []
    for i in range(n):
        for j in range(n):
            v = np.zeros(n)
            w = np.zeros(n)
            v[i] = 1.0
            w[j] = 1.0
            atoms.append((v.astype(complex), w.astype(complex)))
    atoms.append((np.ones(n, dtype=complex), np.ones(n, dtype=complex)))
    for _ in range(32):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        w = rng.normal(size=n) + 1j * rng.normal(size=n)
        atoms.append((v, w))

    def fit(atom_list):
        M = np.stack([_pair_vec(*_atom(v, w), n) for v, w in atom_list],
                     axis=1)
        lam, res = nnls(M, target)
        return lam, res

    RA, RB = A, B
    best = None
    for _ in range(50):
        va, wa = _derive_atom(RA, RB, n)
        atoms.append((va, wa))
        lam, res = fit(atoms)
        if best is None or res < best[1] - 1e-15:
            best = (lam.copy(), res)
        if res <= tol.feas_tol * tscale:
            chosen = [(atoms[t][0], atoms[t][1], float(lam[t]))
                      for t in range(len(atoms)) if lam[t] > 1e-12]
            return PairVerdict(
                Verdict.MEMBER, "pcp",
                {"route": "atoms", "atoms": chosen, "residual": float(res)},
                detail="explicit atomic decomposition found",
            )
        cur_A = sum(l * _atom(v, w)[0]
                    for (v, w), l in zip(atoms, lam) if l > 0)
        cur_B = sum(l * _atom(v, w)[1]
                    for (v, w), l in zip(atoms, lam) if l > 0)
        RA = A - cur_A
        RB = np.asarray(B, dtype=complex) - cur_B
        if best[1] > 0 and res > best[1] * (1 - 1e-9) and len(atoms) > n * n + 40:
            break
    return PairVerdict(Verdict.UNKNOWN, "pcp",
                       {"fit_residual": float(best[1]) if best else None},
                       detail="no decomposition found; membership open")


# ---------------------------------------------------------------------------
# certificate re-verification


def verify_pair(pair: MatrixPair, verdict: PairVerdict, tol=None) -> bool:
    """Recompute whatever the verdict's certificate claims."""
    tol = as_tolerance(tol)
    scale = pair.scale()
    cert = verdict.certificate or {}
    if verdict.status is Verdict.UNKNOWN:
        return True
    if verdict.status is Verdict.NON_MEMBER:
        if "v" in cert and "w" in cert:
            val = copcp_form_value(pair, cert["v"], cert["w"])
            return val < 0
        if cert.get("reason") == "infeasible" and "problem" in cert:
            rep = verify_sdp(cert["problem"], cert["solution"])
            return bool(rep.get("ok", False))
        if "spn" in cert:
            X = cert["spn"].certificate.get("X")
            if X is None:
                return False
            target = symmetrize(pair.A + np.real(pair.ring_b()))
            return inner(X, target) < 0
        if "cp" in cert:
            W = cert["cp"].certificate.get("witness")
            if W is not None:
                return inner(W, pair.A) < 0
            return cert["cp"].status is Verdict.NON_MEMBER
        # reason-only refutations: re-run the cheap filter
        reason = cert.get("reason")
        if reason == "A_entrywise":
            return float(np.min(pair.A)) < 0
        if reason == "pdnn":
            return not is_pdnn(pair, tol=tol)
        if reason == "schur-pair":
            return (float(np.max(np.abs(off_diag(pair.A)))) <= 1e-10
                    and float(np.max(np.abs(pair.ring_b()))) > 0)
        if reason == "forced_entry":
            i, j = cert["entry"]
            r = np.sqrt(max(pair.A[i, j] * pair.A[j, i], 0.0))
            return abs(pair.B[i, j]) > r
        if "witness" in cert:
            return cert.get("pairing", 0.0) < 0
        return False
    # MEMBER routes
    route = cert.get("route", "")
    if route == "cldui+":
        return is_cldui_plus(pair, tol=tol)
    if "B1" in cert and "B2" in cert:
        B1, B2 = cert["B1"], cert["B2"]
        ok = np.max(np.abs(B1 + B2 - pair.B)) <= tol.feas_tol * scale
        ok = ok and min_eig(B1) >= -tol.eig_tol * scale
        ok = ok and float(np.min(np.real(np.diag(B2)))) >= -tol.feas_tol * scale
        R = np.sqrt(np.clip(pair.A * pair.A.T, 0.0, None))
        np.fill_diagonal(R, 0.0)
        ok = ok and float(np.min(R - np.abs(off_diag(B2)))) >= (
            -tol.feas_tol * scale
        )
        ok = ok and float(np.min(pair.A)) >= -tol.feas_tol * scale
        return bool(ok)
    if route == "lift":
        cop = cert.get("cop")
        return cop is not None and cop.status is Verdict.MEMBER
    if route == "atoms":
        SA = np.zeros_like(pair.A)
        SB = np.zeros((pair.n, pair.n), dtype=complex)
        for v, w, lam in cert["atoms"]:
            Aat, Bat = _atom(v, w)
            SA = SA + lam * Aat
            SB = SB + lam * Bat
        okA = np.max(np.abs(SA - pair.A)) <= 10 * tol.feas_tol * scale
        okB = np.max(np.abs(off_diag(SB) - pair.ring_b())) <= (
            10 * tol.feas_tol * scale
        )
        return bool(okA and okB)
    if route == "cp-equal":
        return cert["cp"].status is Verdict.MEMBER
    return False
