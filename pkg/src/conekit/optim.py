"""Small dense conic solvers: an SDP interior-point method and an LP front end.

The SDP solver implements a homogeneous self-dual embedding with
Nesterov-Todd scaling and a Mehrotra predictor-corrector, for problems in
the standard form

    minimize    sum_b <C_b, X_b> + c_f . u
    subject to  sum_b <A_ib, X_b> + F_i . u = b_i        (i = 1..m)
                X_b in a symmetric cone (real PSD, hermitian PSD, or R^d_+),
                u free.

Everything is dense and deterministic; the intended regime is a few hundred
constraint rows and blocks of order <= ~150, which covers all the membership
programs built on top of this module.  The homogeneous embedding makes
infeasibility detection a first-class outcome: the solver returns Farkas
rays rather than just failing to converge.

LPs are delegated to scipy's HiGHS interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import linprog

from .linalg import DimensionMismatch, Tolerance, symmetrize

__all__ = [
    "SdpStatus",
    "BlockRef",
    "SdpProblem",
    "SdpSolution",
    "solve_sdp",
    "verify_sdp",
    "LpResult",
    "solve_lp",
]

_SQRT2 = math.sqrt(2.0)


class SdpStatus(Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    STALLED = "stalled"


@dataclass(frozen=True)
class BlockRef:
    """Handle to a variable block inside an SdpProblem."""

    index: int
    kind: str  # "psd" | "hpsd" | "nn" | "free"
    dim: int
    label: Optional[str] = None


class _Block:
    """Vectorization helpers for one cone block."""

    def __init__(self, kind: str, d: int):
        self.kind = kind
        self.d = d
        if kind == "psd":
            self.size = d * (d + 1) // 2
            iu = np.triu_indices(d)
            self._iu = iu
            w = np.where(iu[0] == iu[1], 1.0, _SQRT2)
            self._w = w
        elif kind == "hpsd":
            self.size = d * d
            self._di = np.arange(d)
            self._iu = np.triu_indices(d, 1)
        elif kind == "nn":
            self.size = d
        else:
            raise ValueError(f"unknown block kind {kind!r}")

    # barrier parameter
    @property
    def nu(self) -> int:
        return self.d

    def svec(self, M) -> np.ndarray:
        if self.kind == "nn":
            return np.asarray(M, dtype=float).reshape(self.d).copy()
        A = symmetrize(np.asarray(M))
        if self.kind == "psd":
            return np.real(A)[self._iu] * self._w
        out = np.empty(self.size)
        d = self.d
        out[:d] = np.real(np.diagonal(A))
        upper = A[self._iu]
        k = upper.shape[0]
        out[d : d + k] = _SQRT2 * np.real(upper)
        out[d + k :] = _SQRT2 * np.imag(upper)
        return out

    def svec_batch(self, stack: np.ndarray) -> np.ndarray:
        """svec of an (m, d, d) stack of (already symmetric) matrices."""
        if self.kind == "nn":
            return np.asarray(stack, dtype=float)
        if self.kind == "psd":
            return np.real(stack[:, self._iu[0], self._iu[1]]) * self._w
        d = self.d
        m = stack.shape[0]
        out = np.empty((m, self.size))
        out[:, :d] = np.real(stack[:, self._di, self._di])
        upper = stack[:, self._iu[0], self._iu[1]]
        k = upper.shape[1]
        out[:, d : d + k] = _SQRT2 * np.real(upper)
        out[:, d + k :] = _SQRT2 * np.imag(upper)
        return out

    def smat(self, v: np.ndarray):
        if self.kind == "nn":
            return np.asarray(v, dtype=float).copy()
        d = self.d
        if self.kind == "psd":
            out = np.zeros((d, d))
            out[self._iu] = v / self._w
            return out + out.T - np.diag(np.diag(out))
        k = (self.size - d) // 2
        upper = (v[d : d + k] + 1j * v[d + k :]) / _SQRT2
        out = np.zeros((d, d), dtype=complex)
        out[self._iu] = upper
        out = out + out.conj().T
        out[self._di, self._di] = v[:d]
        return out

    def identity_vec(self) -> np.ndarray:
        if self.kind == "nn":
            return np.ones(self.d)
        return self.svec(np.eye(self.d))


@dataclass
class SdpSolution:
    status: SdpStatus
    primal_obj: float
    dual_obj: float
    blocks: list
    slacks: list
    free: np.ndarray
    y: np.ndarray
    iterations: int
    residuals: dict
    certificate: Optional[dict] = None

    def block(self, ref: BlockRef):
        if ref.kind == "free":
            return self.free
        return self.blocks[ref.index]

    def slack(self, ref: BlockRef):
        return self.slacks[ref.index]

    @property
    def optimal(self) -> bool:
        return self.status is SdpStatus.OPTIMAL


class SdpProblem:
    """Incremental builder for the standard-form problem.

    Use add_psd/add_hpsd/add_nn/add_free to declare variables, set_cost to
    accumulate objective coefficients, and add_eq to append equality rows.
    The objective is always minimized.
    """

    def __init__(self):
        self._blocks: list[_Block] = []
        self._refs: list[BlockRef] = []
        self._free_dim = 0
        self._cost: dict[int, np.ndarray] = {}
        self._free_cost: dict[int, float] = {}
        self._rows: list[dict] = []
        self._rhs: list[float] = []

    # -- variables ---------------------------------------------------------
    def _add_block(self, kind: str, d: int, label) -> BlockRef:
        if d <= 0:
            raise ValueError("block dimension must be positive")
        blk = _Block(kind, d)
        ref = BlockRef(len(self._blocks), kind, d, label)
        self._blocks.append(blk)
        self._refs.append(ref)
        return ref

    def add_psd(self, d: int, label: Optional[str] = None) -> BlockRef:
        return self._add_block("psd", d, label)

    def add_hpsd(self, d: int, label: Optional[str] = None) -> BlockRef:
        return self._add_block("hpsd", d, label)

    def add_nn(self, d: int, label: Optional[str] = None) -> BlockRef:
        return self._add_block("nn", d, label)

    def add_free(self, k: int = 1, label: Optional[str] = None) -> BlockRef:
        ref = BlockRef(self._free_dim, "free", k, label)
        self._free_dim += k
        return ref

    # -- objective ---------------------------------------------------------
    def set_cost(self, ref: BlockRef, C) -> None:
        if ref.kind == "free":
            coeffs = np.atleast_1d(np.asarray(C, dtype=float))
            if coeffs.shape != (ref.dim,):
                raise DimensionMismatch("free cost length mismatch")
            for j in range(ref.dim):
                self._free_cost[ref.index + j] = (
                    self._free_cost.get(ref.index + j, 0.0) + coeffs[j]
                )
            return
        v = self._blocks[ref.index].svec(C)
        if ref.index in self._cost:
            self._cost[ref.index] = self._cost[ref.index] + v
        else:
            self._cost[ref.index] = v

    # -- constraints -------------------------------------------------------
    def add_eq(self, rhs: float, *terms) -> None:
        """Append the row  sum_t <coef_t, var_t> = rhs.

        Each term is a pair (ref, coef): a matrix for psd/hpsd blocks, a
        vector for nn blocks, and a coefficient vector (or scalar when the
        free block has dim 1) for free blocks.
        """
        row: dict = {"free": {}}
        for ref, coef in terms:
            if ref.kind == "free":
                coeffs = np.atleast_1d(np.asarray(coef, dtype=float))
                if coeffs.shape != (ref.dim,):
                    raise DimensionMismatch("free coefficient length mismatch")
                for j in range(ref.dim):
                    row["free"][ref.index + j] = (
                        row["free"].get(ref.index + j, 0.0) + coeffs[j]
                    )
                continue
            v = self._blocks[ref.index].svec(coef)
            if ref.index in row:
                row[ref.index] = row[ref.index] + v
            else:
                row[ref.index] = v
        self._rows.append(row)
        self._rhs.append(float(rhs))

    # -- compilation -------------------------------------------------------
    @property
    def num_rows(self) -> int:
        return len(self._rows)

    def dimension(self) -> int:
        return sum(b.size for b in self._blocks) + self._free_dim

    def compile(self):
        m = len(self._rows)
        if m == 0:
            raise ValueError("problem has no constraint rows")
        if not self._blocks:
            raise ValueError("problem has no cone blocks")
        sizes = [b.size for b in self._blocks]
        offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        N = int(offsets[-1])
        A = np.zeros((m, N))
        F = np.zeros((m, self._free_dim))
        for i, row in enumerate(self._rows):
            for bi, v in row.items():
                if bi == "free":
                    for j, coef in v.items():
                        F[i, j] = coef
                else:
                    A[i, offsets[bi] : offsets[bi] + sizes[bi]] = v
        b = np.array(self._rhs)
        c = np.zeros(N)
        for bi, v in self._cost.items():
            c[offsets[bi] : offsets[bi] + sizes[bi]] = v
        c_f = np.zeros(self._free_dim)
        for j, coef in self._free_cost.items():
            c_f[j] = coef
        return self._blocks, offsets, A, F, b, c, c_f


# ---------------------------------------------------------------------------
# interior-point machinery


class _Scaling:
    """Nesterov-Todd scaling point for one block.

    For psd/hpsd blocks stores G with W = G G^H and Gi with W^{-1} = Gi Gi^H
    (so G^{-1} = Gi^H), plus the scaled spectrum sig with V = G^H S G =
    diag(sig).  For nn blocks stores the vector w2 = x/s.
    """

    def __init__(self, blk: _Block, X, S):
        self.blk = blk
        if blk.kind == "nn":
            self.w2 = X / S
            return
        L = np.linalg.cholesky(X)
        R = np.linalg.cholesky(S)
        U, sig, Vh = np.linalg.svd(R.conj().T @ L)
        isq = 1.0 / np.sqrt(sig)
        self.G = L @ (Vh.conj().T * isq)
        self.Gi = R @ (U * isq)
        self.sig = sig

    def apply(self, Z):
        """W Z W for a symmetric matrix / vector in block space."""
        if self.blk.kind == "nn":
            return self.w2 * Z
        G = self.G
        Gh = G.conj().T
        return G @ (Gh @ Z @ G) @ Gh

    def apply_batch(self, stack):
        if self.blk.kind == "nn":
            return stack * self.w2[None, :]
        G = self.G
        Gh = G.conj().T
        return np.matmul(G, np.matmul(np.matmul(Gh, np.matmul(stack, G)), Gh))

    def step_to_boundary(self, M, dM) -> float:
        """Largest alpha with M + alpha dM in the cone (M interior)."""
        if self.blk.kind == "nn":
            neg = dM < 0
            if not np.any(neg):
                return np.inf
            return float(np.min(-M[neg] / dM[neg]))
        L = np.linalg.cholesky(M)
        Y = solve_triangular(L, dM, lower=True)
        Y = solve_triangular(L, Y.conj().T, lower=True)
        lam = float(np.linalg.eigvalsh(symmetrize(Y))[0])
        if lam >= 0:
            return np.inf
        return -1.0 / lam


def _step_nn(x, dx) -> float:
    neg = dx < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


def _resolve_tol(tol) -> float:
    if tol is None:
        return 1e-9
    if isinstance(tol, Tolerance):
        return max(1e-11, min(1e-9, tol.feas_tol * 1e-2))
    return float(tol)


def _face_columns(blk: _Block, U: np.ndarray):
    """svec columns spanning {U M U^H} for a hermitian parameter basis of M.

    Returns the (size, n_params) column matrix together with the pattern
    needed to rebuild M from a parameter vector.
    """
    d = U.shape[1]
    cols = []
    pattern = []
    for a in range(d):
        for bb in range(a, d):
            if a == bb:
                Mt = np.outer(U[:, a], U[:, a].conj())
                cols.append(blk.svec(Mt))
                pattern.append((a, bb, "d"))
            else:
                Mt = np.outer(U[:, a], U[:, bb].conj())
                Mt = Mt + Mt.conj().T
                cols.append(blk.svec(Mt))
                pattern.append((a, bb, "re"))
                if blk.kind == "hpsd":
                    Mt = 1j * np.outer(U[:, a], U[:, bb].conj())
                    Mt = Mt + Mt.conj().T
                    cols.append(blk.svec(Mt))
                    pattern.append((a, bb, "im"))
    if cols:
        return np.stack(cols, axis=1), pattern
    return np.zeros((blk.size, 0)), pattern


def _rebuild_face(blk: _Block, U: np.ndarray, params, pattern):
    d = U.shape[1]
    M = np.zeros((d, d), dtype=complex if blk.kind == "hpsd" else float)
    for val, (a, bb, kindp) in zip(params, pattern):
        if kindp == "d":
            M[a, a] += val
        elif kindp == "re":
            M[a, bb] += val
            M[bb, a] += val
        else:
            M[a, bb] += 1j * val
            M[bb, a] += -1j * val
    return U @ M @ U.conj().T, M


def _relgap(w, rank):
    d = len(w)
    if rank <= 0 or rank >= d:
        return 0.0
    return (w[d - rank] - w[d - rank - 1]) / max(w[-1], 1e-300)


def _polish(blocks, sl, A, F, b, c, c_f, x, u, y, old_score, bnorm, cnorm):
    """Refine an optimal iterate on its detected optimal face.

    Interior-point iterates near a degenerate optimum carry variable errors
    much larger than their residuals suggest.  This identifies the active
    eigenspaces (taking the primal range from the dual slack's null space,
    which is usually the better-conditioned source) and the active supports,
    then solves one joint least-squares problem enforcing primal and dual
    feasibility restricted to that face.  The result is accepted only if its
    recomputed residuals and cone feasibility beat the incoming iterate.
    """
    m, total = A.shape
    kf = F.shape[1]
    rows_n = m + total + kf
    best = None
    x_cur, u_cur, y_cur = x, u, y
    for _ in range(2):
        s_imp = c - A.T @ y_cur
        xinf = 1.0 + float(np.max(np.abs(x_cur))) if total else 1.0
        sinf = 1.0 + float(np.max(np.abs(s_imp))) if total else 1.0
        prim = []  # (block index, columns, pattern, U)
        dual = []
        nn_act = {}
        nn_dual = {}
        ncols = kf + m
        for i, blk in enumerate(blocks):
            xb = x_cur[sl[i]]
            sb = s_imp[sl[i]]
            if blk.kind == "nn":
                act = xb > sb
                nn_act[i] = np.where(act)[0]
                nn_dual[i] = np.where(~act)[0]
                ncols += len(nn_act[i]) + len(nn_dual[i])
                continue
            Xb = blk.smat(xb)
            Sb = blk.smat(sb)
            wX, VX = np.linalg.eigh(Xb)
            wS, VS = np.linalg.eigh(Sb)
            mX = (
                int(np.count_nonzero(wX > 1e-4 * wX[-1]))
                if wX[-1] > 1e-9 * xinf
                else 0
            )
            nS = (
                int(np.count_nonzero(wS > 1e-4 * wS[-1]))
                if wS[-1] > 1e-9 * sinf
                else 0
            )
            # split the block on the eigenbasis whose spectral gap between
            # kept and dropped eigenvalues is (relatively) widest; the two
            # faces are then exact orthogonal complements
            use_S = False
            if mX == 0 and nS > 0:
                use_S = True
            elif nS > 0:
                use_S = _relgap(wS, nS) > _relgap(wX, mX)
            if use_S:
                U = VS[:, : blk.d - nS]
                V = VS[:, blk.d - nS :]
            else:
                U = VX[:, blk.d - mX :]
                V = VX[:, : blk.d - mX]
            cU, pU = _face_columns(blk, U)
            cV, pV = _face_columns(blk, V)
            prim.append((i, cU, pU, U))
            dual.append((i, cV, pV, V))
            ncols += cU.shape[1] + cV.shape[1]
        if rows_n * ncols > 4.0e7:
            return best
        Asys = np.zeros((rows_n, ncols))
        bsys = np.concatenate([b, c, c_f])
        col = 0
        spans = {}
        for i, cU, pU, U in prim:
            nMi = cU.shape[1]
            Asys[:m, col : col + nMi] = A[:, sl[i]] @ cU
            spans[("P", i)] = (col, nMi)
            col += nMi
        for i, idxs in nn_act.items():
            base = sl[i].start
            for t_, fi in enumerate(idxs):
                Asys[:m, col + t_] = A[:, base + fi]
            spans[("pnn", i)] = (col, len(idxs))
            col += len(idxs)
        if kf:
            Asys[:m, col : col + kf] = F
            spans["u"] = (col, kf)
            col += kf
        else:
            spans["u"] = (col, 0)
        Asys[m : m + total, col : col + m] = A.T
        Asys[m + total :, col : col + m] = F.T
        spans["y"] = (col, m)
        col += m
        for i, cV, pV, V in dual:
            nNi = cV.shape[1]
            Asys[m + sl[i].start : m + sl[i].stop, col : col + nNi] = cV
            spans[("D", i)] = (col, nNi)
            col += nNi
        for i, idxs in nn_dual.items():
            base = m + sl[i].start
            for t_, fi in enumerate(idxs):
                Asys[base + fi, col + t_] = 1.0
            spans[("dnn", i)] = (col, len(idxs))
            col += len(idxs)
        params, *_ = np.linalg.lstsq(Asys, bsys, rcond=None)

        x2 = np.zeros(total)
        s2 = np.zeros(total)
        feas_ok = True
        for i, cU, pU, U in prim:
            c0, nMi = spans[("P", i)]
            X2, M2 = _rebuild_face(blocks[i], U, params[c0 : c0 + nMi], pU)
            x2[sl[i]] = blocks[i].svec(X2)
            if nMi:
                wM = np.linalg.eigvalsh(M2)
                if wM[0] < -1e-8 * (1.0 + wM[-1]):
                    feas_ok = False
        for i, cV, pV, V in dual:
            c0, nNi = spans[("D", i)]
            S2, N2 = _rebuild_face(blocks[i], V, params[c0 : c0 + nNi], pV)
            s2[sl[i]] = blocks[i].svec(S2)
            if nNi:
                wN = np.linalg.eigvalsh(N2)
                if wN[0] < -1e-8 * (1.0 + wN[-1]):
                    feas_ok = False
        for i, idxs in nn_act.items():
            c0, ni = spans[("pnn", i)]
            vals = params[c0 : c0 + ni]
            if ni and float(np.min(vals)) < -1e-8 * xinf:
                feas_ok = False
            x2[np.asarray(sl[i].start + idxs, dtype=int)] = vals
        for i, idxs in nn_dual.items():
            c0, ni = spans[("dnn", i)]
            vals = params[c0 : c0 + ni]
            if ni and float(np.min(vals)) < -1e-8 * sinf:
                feas_ok = False
            s2[np.asarray(sl[i].start + idxs, dtype=int)] = vals
        c0, _ku = spans["u"]
        u2 = params[c0 : c0 + kf]
        c0, _ky = spans["y"]
        y2 = params[c0 : c0 + m]

        pres2 = float(np.linalg.norm(A @ x2 + F @ u2 - b)) / bnorm
        dres2 = (
            float(np.linalg.norm(A.T @ y2 + s2 - c))
            + float(np.linalg.norm(F.T @ y2 - c_f))
        ) / cnorm
        pobj = float(c @ x2 + c_f @ u2)
        dobj = float(b @ y2)
        gap2 = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        score2 = max(pres2, dres2, gap2)
        if feas_ok and score2 <= max(old_score, 1e-10):
            if best is None or score2 < best[-1]:
                best = (x2, s2, u2, y2, pres2, dres2, gap2, score2)
            x_cur, u_cur, y_cur = x2, u2, y2
        else:
            break
    if best is None:
        return None
    return best[:7]


def solve_sdp(problem: SdpProblem, tol=None, max_iter: int = 200,
              verbose: bool = False) -> SdpSolution:
    """Solve the problem to relative accuracy tol (default 1e-9)."""
    eps = _resolve_tol(tol)
    blocks, offsets, A, F, b, c, c_f = problem.compile()
    if problem.dimension() > 10_000:
        raise ValueError("problem dimension exceeds the supported limit (10^4)")
    m, N = A.shape
    k = F.shape[1]
    nb = len(blocks)
    sl = [slice(offsets[i], offsets[i + 1]) for i in range(nb)]

    # constraint/objective data as matrices, per block
    Amats = []
    Cmats = []
    for i, blk in enumerate(blocks):
        if blk.kind == "nn":
            Amats.append(A[:, sl[i]])
            Cmats.append(c[sl[i]])
        else:
            Amats.append(np.stack([blk.smat(A[j, sl[i]]) for j in range(m)]))
            Cmats.append(blk.smat(c[sl[i]]))

    nu = sum(blk.nu for blk in blocks)
    bnorm = 1.0 + float(np.linalg.norm(b))
    cnorm = 1.0 + float(np.linalg.norm(np.concatenate([c, c_f])))

    # iterates
    x = np.concatenate([blk.identity_vec() for blk in blocks])
    s = x.copy()
    y = np.zeros(m)
    u = np.zeros(k)
    tau, kappa = 1.0, 1.0

    best_inf = {"p": np.inf, "d": np.inf}
    best_inf_data = {}
    best_score = np.inf
    best_state = None
    worse = 0
    stall = 0
    status = SdpStatus.STALLED
    it = 0

    def mats_of(vec):
        return [blk.smat(vec[sl[i]]) for i, blk in enumerate(blocks)]

    for it in range(1, max_iter + 1):
        res_p = A @ x + F @ u - b * tau
        res_d = A.T @ y + s - c * tau
        res_f = F.T @ y - c_f * tau
        res_g = c @ x + c_f @ u - b @ y + kappa
        mu = (x @ s + tau * kappa) / (nu + 1)

        # -- convergence: scaled-back iterate
        pobj = (c @ x + c_f @ u) / tau
        dobj = (b @ y) / tau
        pres = float(np.linalg.norm(res_p)) / (tau * bnorm)
        dres = (float(np.linalg.norm(res_d)) + float(np.linalg.norm(res_f))) / (
            tau * cnorm
        )
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        if verbose:
            print(
                f"  it {it:3d}  mu {mu:9.2e}  pres {pres:9.2e}  dres {dres:9.2e}"
                f"  gap {gap:9.2e}  tau {tau:8.2e}  kappa {kappa:8.2e}"
            )
        score = max(pres, dres, gap)
        if score < best_score:
            best_score = score
            best_state = (x.copy(), s.copy(), y.copy(), u.copy(), tau, kappa,
                          pres, dres, gap)
            worse = 0
        elif best_score < 1e-6 and score > 10 * best_score:
            # numerical floor of the Schur solve reached; stop degrading
            worse += 1
            if worse >= 2:
                break
        if score <= eps:
            status = SdpStatus.OPTIMAL
            break

        # -- infeasibility certificates from the homogeneous iterate
        by = b @ y
        if by > 0:
            q = (
                max(
                    float(np.linalg.norm(A.T @ y + s)),
                    float(np.linalg.norm(F.T @ y)),
                )
                / by
            )
            if q < best_inf["p"]:
                best_inf["p"] = q
                best_inf_data["p"] = (y / by, s / by)
            if q <= eps * 1e2:
                status = SdpStatus.PRIMAL_INFEASIBLE
                break
        cx = c @ x + c_f @ u
        if -cx > 0:
            q = float(np.linalg.norm(A @ x + F @ u)) / (-cx)
            if q < best_inf["d"]:
                best_inf["d"] = q
                best_inf_data["d"] = (x / -cx, u / -cx)
            if q <= eps * 1e2:
                status = SdpStatus.DUAL_INFEASIBLE
                break

        # -- NT scalings and Schur complement
        Xm = mats_of(x)
        Sm = mats_of(s)
        try:
            scal = [_Scaling(blocks[i], Xm[i], Sm[i]) for i in range(nb)]
        except np.linalg.LinAlgError:
            break  # lost interiority; report stalled with best iterate
        WAW_rows = np.zeros((m, N))
        for i, blk in enumerate(blocks):
            if blk.kind == "nn":
                WAW_rows[:, sl[i]] = Amats[i] * scal[i].w2[None, :]
            else:
                WAW_rows[:, sl[i]] = blk.svec_batch(scal[i].apply_batch(Amats[i]))
        Mschur = A @ WAW_rows.T
        Mschur = 0.5 * (Mschur + Mschur.T)
        jitter = 0.0
        base = np.trace(Mschur) / m if m else 1.0
        for _ in range(8):
            try:
                Lm = np.linalg.cholesky(
                    Mschur + (jitter * np.eye(m) if jitter else 0.0)
                )
                break
            except np.linalg.LinAlgError:
                jitter = max(jitter * 10, 1e-14 * max(base, 1.0))
        else:
            break

        def msolve(r):
            z = solve_triangular(Lm, r, lower=True)
            return solve_triangular(Lm, z, lower=True, trans="T")

        def wop(vec):
            out = np.empty(N)
            for i, blk in enumerate(blocks):
                if blk.kind == "nn":
                    out[sl[i]] = scal[i].w2 * vec[sl[i]]
                else:
                    out[sl[i]] = blk.svec(scal[i].apply(blk.smat(vec[sl[i]])))
            return out

        Wc = wop(c)
        h = A @ Wc
        MiF = msolve(F) if k else np.zeros((m, 0))
        Mihb = msolve(h + b)
        cWc = c @ Wc

        xinv = np.empty(N)
        for i, blk in enumerate(blocks):
            if blk.kind == "nn":
                xinv[sl[i]] = 1.0 / x[sl[i]]
            else:
                xinv[sl[i]] = blk.svec(np.linalg.inv(Xm[i]))

        qq = cWc + kappa / tau
        S2 = np.empty((k + 1, k + 1))
        if k:
            S2[:k, :k] = F.T @ MiF
            S2[:k, k] = c_f - F.T @ Mihb
            S2[k, :k] = c_f - (h - b) @ MiF
        S2[k, k] = (h - b) @ Mihb - qq

        def solve3(r1, r2, r3):
            """Solve the reduced system for (dy, du, dtau):
            A W(A^T dy) + F du - (h+b) dtau = r1
            F^T dy            - c_f  dtau   = r2
            (h-b).dy + c_f.du - qq   dtau   = r3
            """
            Mir1 = msolve(r1)
            rhs2 = np.empty(k + 1)
            if k:
                rhs2[:k] = F.T @ Mir1 - r2
            rhs2[k] = r3 - (h - b) @ Mir1
            try:
                sol2 = np.linalg.solve(S2, rhs2)
            except np.linalg.LinAlgError:
                sol2 = np.linalg.lstsq(S2, rhs2, rcond=None)[0]
            du = sol2[:k]
            dtau = float(sol2[k])
            dy = Mir1 - (MiF @ du if k else 0.0) + Mihb * dtau
            return dy, du, dtau

        def apply3(dy, du, dtau):
            """Operator-exact evaluation of the reduced system's left side."""
            r1 = A @ wop(A.T @ dy) + (F @ du if k else 0.0) - (h + b) * dtau
            r2 = F.T @ dy - c_f * dtau
            r3 = (h - b) @ dy + (c_f @ du if k else 0.0) - qq * dtau
            return r1, r2, r3

        def newton(rc_vec, sig_mu, theta_tk):
            """One Newton solve with iterative refinement.

            The Schur matrix is formed explicitly (losing ~kappa(W)^2 digits)
            but residuals are evaluated through the scaling operator itself,
            so a couple of refinement rounds recover the lost accuracy.
            """
            g1 = -res_p - A @ wop(rc_vec + res_d)
            g3 = (
                -res_g
                - Wc @ (rc_vec + res_d)
                - (sig_mu - tau * kappa - theta_tk) / tau
            )
            g2 = -res_f
            dy, du, dtau = solve3(g1, g2, g3)
            scale = 1.0 + max(
                float(np.linalg.norm(g1)), abs(g3),
                float(np.linalg.norm(g2)) if k else 0.0,
            )
            for _ in range(4):
                a1, a2, a3 = apply3(dy, du, dtau)
                r1 = g1 - a1
                r2 = g2 - a2
                r3 = g3 - a3
                err = max(
                    float(np.linalg.norm(r1)), abs(r3),
                    float(np.linalg.norm(r2)) if k else 0.0,
                )
                if err <= 1e-14 * scale:
                    break
                cy, cu, ct = solve3(r1, r2, r3)
                dy = dy + cy
                du = du + cu
                dtau = dtau + ct
            dx = wop(rc_vec + res_d + A.T @ dy) - Wc * dtau
            ds = -res_d - A.T @ dy + c * dtau
            dkappa = (sig_mu - tau * kappa - theta_tk) / tau - (kappa / tau) * dtau
            return dx, dy, du, dtau, ds, dkappa

        def max_step(dx, ds, dtau, dkappa):
            alpha = np.inf
            dXm = mats_of(dx)
            dSm = mats_of(ds)
            for i, blk in enumerate(blocks):
                if blk.kind == "nn":
                    alpha = min(alpha, _step_nn(x[sl[i]], dx[sl[i]]))
                    alpha = min(alpha, _step_nn(s[sl[i]], ds[sl[i]]))
                else:
                    alpha = min(alpha, scal[i].step_to_boundary(Xm[i], dXm[i]))
                    alpha = min(alpha, scal[i].step_to_boundary(Sm[i], dSm[i]))
            if dtau < 0:
                alpha = min(alpha, -tau / dtau)
            if dkappa < 0:
                alpha = min(alpha, -kappa / dkappa)
            return alpha

        # predictor
        aff = newton(-s, 0.0, 0.0)
        a_aff = max_step(aff[0], aff[4], aff[3], aff[5])
        a_hat = min(1.0, 0.99 * a_aff)
        mu_aff = (
            (x + a_hat * aff[0]) @ (s + a_hat * aff[4])
            + (tau + a_hat * aff[3]) * (kappa + a_hat * aff[5])
        ) / (nu + 1)
        sigma = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, 1e-10, 1.0 - 1e-10))

        # corrector with the NT second-order term
        theta = np.empty(N)
        dXm_a = mats_of(aff[0])
        dSm_a = mats_of(aff[4])
        for i, blk in enumerate(blocks):
            if blk.kind == "nn":
                theta[sl[i]] = dXm_a[i] * dSm_a[i] / x[sl[i]]
            else:
                sc = scal[i]
                DX = sc.Gi.conj().T @ dXm_a[i] @ sc.Gi
                DS = sc.G.conj().T @ dSm_a[i] @ sc.G
                P = 0.5 * (DX @ DS + DS @ DX)
                inv = 1.0 / sc.sig
                Pv = P * (0.5 * (inv[:, None] + inv[None, :]))
                theta[sl[i]] = blk.svec(sc.Gi @ Pv @ sc.Gi.conj().T)
        theta_tk = aff[3] * aff[5]
        rc = sigma * mu * xinv - s - theta
        dx, dy, du, dtau, ds, dkappa = newton(rc, sigma * mu, theta_tk)
        a_max = max_step(dx, ds, dtau, dkappa)
        alpha = min(1.0, 0.99 * a_max)

        if alpha <= 1e-10:
            # fall back to a pure centering step
            rc = 0.8 * mu * xinv - s
            dx, dy, du, dtau, ds, dkappa = newton(rc, 0.8 * mu, 0.0)
            a_max = max_step(dx, ds, dtau, dkappa)
            alpha = min(1.0, 0.8 * a_max)
            if alpha <= 1e-10:
                stall += 1
                if stall >= 3:
                    break
                continue
        stall = 0

        x = x + alpha * dx
        s = s + alpha * ds
        y = y + alpha * dy
        u = u + alpha * du
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa

    # -- package the outcome, preferring the best iterate seen
    if best_state is not None and (
        status is SdpStatus.STALLED or best_score < max(pres, dres, gap)
    ):
        x, s, y, u, tau, kappa, pres, dres, gap = (
            best_state[0], best_state[1], best_state[2], best_state[3],
            best_state[4], best_state[5], best_state[6], best_state[7],
            best_state[8],
        )
    certificate = None
    if status is SdpStatus.STALLED:
        # accept a near-certificate if it is tight enough to be useful;
        # achieved residuals are reported either way
        if best_score <= 1e-6:
            status = SdpStatus.OPTIMAL
        elif best_inf["p"] <= 1e-7:
            status = SdpStatus.PRIMAL_INFEASIBLE
        elif best_inf["d"] <= 1e-7:
            status = SdpStatus.DUAL_INFEASIBLE

    if status is SdpStatus.PRIMAL_INFEASIBLE:
        ray_y, ray_s = best_inf_data.get("p", (y, s))
        by = b @ ray_y
        if abs(by - 1.0) > 1e-9 and by > 0:
            ray_y, ray_s = ray_y / by, ray_s / by
        certificate = {
            "kind": "primal_infeasible",
            "y": ray_y,
            "slacks": mats_of(ray_s),
            "b_dot_y": float(b @ ray_y),
        }
    elif status is SdpStatus.DUAL_INFEASIBLE:
        ray_x, ray_u = best_inf_data.get("d", (x, u))
        certificate = {
            "kind": "dual_infeasible",
            "blocks": mats_of(ray_x),
            "free": ray_u,
            "c_dot_x": float(c @ ray_x + c_f @ ray_u),
        }

    t = tau if tau > 0 else 1.0
    xs, ss, us, ys = x / t, s / t, u / t, y / t
    if status is SdpStatus.OPTIMAL:
        pol = _polish(blocks, sl, A, F, b, c, c_f, xs, us, ys,
                      max(pres, dres, gap), bnorm, cnorm)
        if pol is not None:
            xs, ss, us, ys, pres, dres, gap = pol
    sol = SdpSolution(
        status=status,
        primal_obj=float(c @ xs + c_f @ us),
        dual_obj=float(b @ ys),
        blocks=mats_of(xs),
        slacks=mats_of(ss),
        free=us,
        y=ys,
        iterations=it,
        residuals={
            "primal": float(pres),
            "dual": float(dres),
            "gap": float(gap),
            "tau": float(tau),
            "kappa": float(kappa),
        },
        certificate=certificate,
    )
    return sol


def verify_sdp(problem: SdpProblem, sol: SdpSolution,
               tol: Tolerance = Tolerance()) -> dict:
    """Recompute solution residuals from scratch (certificate self-check)."""
    blocks, offsets, A, F, b, c, c_f = problem.compile()
    report: dict = {"status": sol.status.value}
    if sol.status is SdpStatus.OPTIMAL:
        x = np.concatenate(
            [blocks[i].svec(sol.blocks[i]) for i in range(len(blocks))]
        )
        s = np.concatenate(
            [blocks[i].svec(sol.slacks[i]) for i in range(len(blocks))]
        )
        eigs = []
        for i, blk in enumerate(blocks):
            if blk.kind == "nn":
                eigs.append(float(np.min(sol.blocks[i])))
                eigs.append(float(np.min(sol.slacks[i])))
            else:
                eigs.append(float(np.linalg.eigvalsh(symmetrize(sol.blocks[i]))[0]))
                eigs.append(float(np.linalg.eigvalsh(symmetrize(sol.slacks[i]))[0]))
        report["min_eig"] = min(eigs)
        report["primal_residual"] = float(
            np.linalg.norm(A @ x + F @ sol.free - b)
        ) / (1.0 + float(np.linalg.norm(b)))
        report["dual_residual"] = float(
            np.linalg.norm(A.T @ sol.y + s - c)
        ) + float(np.linalg.norm(F.T @ sol.y - c_f))
        report["gap"] = abs(sol.primal_obj - sol.dual_obj) / (
            1.0 + abs(sol.primal_obj) + abs(sol.dual_obj)
        )
        report["ok"] = (
            report["min_eig"] >= -tol.eig_tol * 10
            and report["primal_residual"] <= tol.feas_tol
            and report["dual_residual"] <= tol.feas_tol * 10
            and report["gap"] <= tol.feas_tol
        )
    elif sol.status is SdpStatus.PRIMAL_INFEASIBLE:
        cert = sol.certificate
        y = cert["y"]
        s = np.concatenate(
            [blocks[i].svec(cert["slacks"][i]) for i in range(len(blocks))]
        )
        report["b_dot_y"] = float(b @ y)
        report["ray_residual"] = max(
            float(np.linalg.norm(A.T @ y + s)), float(np.linalg.norm(F.T @ y))
        )
        eigs = [
            float(np.linalg.eigvalsh(symmetrize(Mb))[0])
            if blocks[i].kind != "nn"
            else float(np.min(Mb))
            for i, Mb in enumerate(cert["slacks"])
        ]
        report["min_eig"] = min(eigs)
        report["ok"] = (
            report["b_dot_y"] > 0
            and report["ray_residual"] <= tol.feas_tol * report["b_dot_y"]
            and report["min_eig"] >= -tol.eig_tol * 10
        )
    elif sol.status is SdpStatus.DUAL_INFEASIBLE:
        cert = sol.certificate
        x = np.concatenate(
            [blocks[i].svec(cert["blocks"][i]) for i in range(len(blocks))]
        )
        report["c_dot_x"] = float(cert["c_dot_x"])
        report["ray_residual"] = float(np.linalg.norm(A @ x + F @ cert["free"]))
        eigs = [
            float(np.linalg.eigvalsh(symmetrize(Mb))[0])
            if blocks[i].kind != "nn"
            else float(np.min(Mb))
            for i, Mb in enumerate(cert["blocks"])
        ]
        report["min_eig"] = min(eigs)
        report["ok"] = (
            report["c_dot_x"] < 0
            and report["ray_residual"] <= tol.feas_tol * (-report["c_dot_x"])
            and report["min_eig"] >= -tol.eig_tol * 10
        )
    else:
        report["ok"] = False
    return report


# ---------------------------------------------------------------------------
# LP front end


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "stalled"
    x: Optional[np.ndarray]
    obj: Optional[float]
    dual_eq: Optional[np.ndarray]
    dual_ub: Optional[np.ndarray] = None


def solve_lp(c, A_eq=None, b_eq=None, A_ub=None, b_ub=None,
             bounds=None) -> LpResult:
    """Minimize c.x subject to A_eq x = b_eq, A_ub x <= b_ub, bounds.

    bounds follows scipy's convention; default is x >= 0.  Dual multipliers
    for the equality rows are returned when available.
    """
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
    )
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status, "stalled")
    dual_eq = None
    dual_ub = None
    if status == "optimal":
        if A_eq is not None and res.eqlin is not None:
            dual_eq = np.asarray(res.eqlin.marginals)
        if A_ub is not None and res.ineqlin is not None:
            dual_ub = np.asarray(res.ineqlin.marginals)
        return LpResult(status, np.asarray(res.x), float(res.fun), dual_eq, dual_ub)
    return LpResult(status, None, None, None, None)
