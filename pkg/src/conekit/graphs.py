"""Graph parameters attached to the copositive-cone machinery.

The central quantity is ``sigma(G)``: the largest ``t`` such that
``J - t A_G`` splits as PSD plus entrywise nonnegative.  It marks the
decomposability threshold of the one-parameter family of maps attached to a
graph, and it interacts with the clique number through the universal bounds
``1 + 1/lambda_max <= sigma <= 1 + 1/(omega - 1)``.  Graphs whose sigma sits
strictly below the clique threshold ("gap graphs") carry indecomposable
positive maps.

Provided here: a small immutable ``Graph`` type with a graph6 codec, exact
clique numbers by branch and bound, sigma via a direct SDP with explicit
primal/dual certificates, symmetry-reduced linear programs (circulant and
rank-3 strongly regular), exact closed forms, the level-r theta bound, a
catalog of named graphs, and a scanner for gap graphs over graph6 lists.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .cones import (
    SizeLimit,
    _gram_from_solution,
    _sos_data,
    _sos_problem,
    _sym_entries,
)
from .linalg import as_tolerance, eig_sym
from .optim import SdpProblem, SdpStatus, solve_lp, solve_sdp

__all__ = [
    "Graph",
    "SrgParams",
    "SigmaResult",
    "ThetaResult",
    "ThresholdReport",
    "GapRecord",
    "UnsupportedSymmetry",
    "UnsupportedOrder",
    "InconsistentParams",
    "lambda_max",
    "clique_number",
    "independence_number",
    "sigma",
    "sigma_dual_bound",
    "sigma_twirled",
    "srg_sigma",
    "theta_r",
    "classify_map",
    "catalog",
    "paley",
    "cycle_graph",
    "complete_graph",
    "disjoint_union",
    "scan_gap",
    "SRG_TABLE",
]


class UnsupportedSymmetry(ValueError):
    """No symmetry reduction applies to this graph."""


class UnsupportedOrder(ValueError):
    """No construction is implemented for the requested order."""


class InconsistentParams(ValueError):
    """Strongly regular graph parameters fail a feasibility condition."""


# ---------------------------------------------------------------------------
# strongly regular parameters


@dataclass(frozen=True)
class SrgParams:
    """Parameters (n, k, lambda, mu) of a strongly regular graph.

    ``lambda_c`` counts common neighbours of adjacent pairs, ``mu`` of
    non-adjacent pairs.  The adjacency eigenvalues besides k are
    ``r, s = (lambda - mu +- sqrt((lambda - mu)^2 + 4(k - mu))) / 2``.
    """

    n: int
    k: int
    lambda_c: int
    mu: int

    def __post_init__(self):
        n, k, lam, mu = self.n, self.k, self.lambda_c, self.mu
        if n < 2 or not 1 <= k <= n - 1 or not 0 <= lam <= k - 1 or not 0 <= mu <= k:
            raise InconsistentParams(f"parameter ranges violated: {(n, k, lam, mu)}")
        if k * (k - lam - 1) != (n - 1 - k) * mu:
            raise InconsistentParams(
                "counting identity k(k-lambda-1) = (n-1-k) mu fails for "
                f"{(n, k, lam, mu)}"
            )
        if self.disc <= 0:
            raise InconsistentParams("eigenvalues r, s must be real and distinct")
        for m in self.multiplicities:
            if m < -1e-9 or abs(m - round(m)) > 1e-6:
                raise InconsistentParams(
                    "eigenvalue multiplicities must be nonnegative integers"
                )

    @property
    def disc(self) -> int:
        lam, mu, k = self.lambda_c, self.mu, self.k
        return (lam - mu) ** 2 + 4 * (k - mu)

    @property
    def r_eig(self) -> float:
        return ((self.lambda_c - self.mu) + math.sqrt(self.disc)) / 2.0

    @property
    def s_eig(self) -> float:
        return ((self.lambda_c - self.mu) - math.sqrt(self.disc)) / 2.0

    @property
    def r_exact(self) -> Fraction | None:
        """r as an exact rational when the discriminant is a perfect square."""
        root = math.isqrt(self.disc)
        if root * root != self.disc:
            return None
        return Fraction(self.lambda_c - self.mu + root, 2)

    @property
    def s_exact(self) -> Fraction | None:
        root = math.isqrt(self.disc)
        if root * root != self.disc:
            return None
        return Fraction(self.lambda_c - self.mu - root, 2)

    @property
    def multiplicities(self) -> tuple[float, float]:
        n, k = self.n, self.k
        delta = self.lambda_c - self.mu
        root = math.sqrt(self.disc)
        shift = (2 * k + (n - 1) * delta) / root
        return ((n - 1 - shift) / 2.0, (n - 1 + shift) / 2.0)

    def complement(self) -> "SrgParams":
        n, k = self.n, self.k
        return SrgParams(n, n - 1 - k, n - 2 - 2 * k + self.mu, n - 2 * k + self.lambda_c)


# ---------------------------------------------------------------------------
# the Graph type


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple graph on vertices 0..n-1, immutable after creation."""

    n: int
    edges: frozenset = field(default_factory=frozenset)
    name: str | None = None
    srg: SrgParams | None = None
    rank3: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range for n = {self.n}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.srg is not None:
            _verify_srg(self)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, **kwargs) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), **kwargs)

    @classmethod
    def from_adjacency(cls, A, **kwargs) -> "Graph":
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = A.shape[0]
        if np.any(A != A.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValueError("adjacency matrix must have zero diagonal")
        if not np.all(np.isin(A, (0, 1))):
            raise ValueError("adjacency entries must be 0 or 1")
        edges = {(i, j) for i in range(n) for j in range(i + 1, n) if A[i, j]}
        return cls(n, frozenset(edges), **kwargs)

    @classmethod
    def from_graph6(cls, text: str, **kwargs) -> "Graph":
        n, edges = _g6_decode(text)
        return cls(n, frozenset(edges), **kwargs)

    # -- basic structure --------------------------------------------------

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Adjacency matrix as a read-only float array."""
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1.0
        A.flags.writeable = False
        return A

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def degree_sequence(self) -> tuple:
        return tuple(sorted(self.degrees().tolist()))

    def adjacency_lists(self) -> list:
        nbrs = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        nbrs = self.adjacency_lists()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def complement(self) -> "Graph":
        ce = {
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if (i, j) not in self.edges
        }
        params = None
        if self.srg is not None:
            try:
                params = self.srg.complement()
            except InconsistentParams:
                params = None
        nm = f"{self.name}-complement" if self.name else None
        return Graph(
            self.n,
            frozenset(ce),
            name=nm,
            srg=params,
            rank3=self.rank3 if params is not None else False,
        )

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        vs = [int(v) for v in vertices]
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertices in induced subgraph")
        pos = {v: i for i, v in enumerate(vs)}
        es = {
            (pos[u], pos[v])
            for (u, v) in self.edges
            if u in pos and v in pos
        }
        return Graph(len(vs), frozenset(es))

    def to_graph6(self) -> str:
        return _g6_encode(self)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        tag = f", name={self.name!r}" if self.name else ""
        return f"Graph(n={self.n}, m={self.num_edges}{tag})"


def _verify_srg(G: Graph) -> None:
    """Check A^2 = kI + lambda A + mu (J - I - A) on the concrete graph."""
    p = G.srg
    if G.n != p.n:
        raise InconsistentParams("vertex count does not match parameters")
    A = np.zeros((G.n, G.n), dtype=np.int64)
    for u, v in G.edges:
        A[u, v] = A[v, u] = 1
    deg = A.sum(axis=1)
    if np.any(deg != p.k):
        raise InconsistentParams("graph is not k-regular for the given parameters")
    n = G.n
    J = np.ones((n, n), dtype=np.int64)
    I = np.eye(n, dtype=np.int64)
    lhs = A @ A
    rhs = p.k * I + p.lambda_c * A + p.mu * (J - I - A)
    if np.any(lhs != rhs):
        raise InconsistentParams(
            "adjacency identity A^2 = kI + lambda A + mu (J - I - A) fails"
        )


def disjoint_union(G: Graph, H: Graph) -> Graph:
    edges = set(G.edges)
    edges.update((u + G.n, v + G.n) for u, v in H.edges)
    return Graph(G.n + H.n, frozenset(edges))


# ---------------------------------------------------------------------------
# graph6 codec (bytes are 6-bit values plus 63, upper triangle column-major)


def _g6_decode(text: str) -> tuple[int, set]:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise ValueError("empty graph6 record")
    vals = []
    for ch in s:
        v = ord(ch) - 63
        if not 0 <= v <= 63:
            raise ValueError(f"invalid graph6 character {ch!r}")
        vals.append(v)
    if vals[0] < 63:
        n = vals[0]
        body = vals[1:]
    elif len(vals) >= 4 and vals[1] < 63:
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        body = vals[4:]
    else:
        raise ValueError("graph6 orders beyond 258047 are not supported")
    nbits = n * (n - 1) // 2
    if len(body) * 6 < nbits:
        raise ValueError("graph6 record truncated")
    edges = set()
    idx = 0
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    for v in body:
        for shift in range(5, -1, -1):
            if idx >= nbits:
                break
            if (v >> shift) & 1:
                edges.add(pairs[idx])
            idx += 1
    return n, edges


def _g6_encode(G: Graph) -> str:
    if G.n > 62:
        raise ValueError("graph6 encoding implemented for n <= 62")
    bits = []
    for j in range(1, G.n):
        for i in range(j):
            bits.append(1 if (i, j) in G.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(G.n + 63)]
    for pos in range(0, len(bits), 6):
        v = 0
        for b in bits[pos : pos + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


# ---------------------------------------------------------------------------
# spectral and combinatorial parameters


def lambda_max(G: Graph) -> float:
    """Largest adjacency eigenvalue."""
    if G.n == 0:
        return 0.0
    w, _ = eig_sym(np.asarray(G.adjacency))
    return float(w[-1])


def clique_number(G: Graph) -> int:
    """Exact clique number by branch and bound with a greedy colouring bound."""
    n = G.n
    if n > 64:
        raise SizeLimit("clique search supports n <= 64")
    if n == 0:
        return 0
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = 0

    def color_order(P: int):
        order = []
        bound = []
        color = 0
        un = P
        while un:
            color += 1
            Q = un
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~((1 << v) | adj[v])
                un &= ~(1 << v)
                order.append(v)
                bound.append(color)
        return order, bound

    def expand(size: int, P: int) -> None:
        nonlocal best
        order, bound = color_order(P)
        for i in range(len(order) - 1, -1, -1):
            if size + bound[i] <= best:
                return
            v = order[i]
            sub = P & adj[v]
            if sub:
                expand(size + 1, sub)
            elif size + 1 > best:
                best = size + 1
            P &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best


def independence_number(G: Graph) -> int:
    return clique_number(G.complement())


# ---------------------------------------------------------------------------
# sigma: results and strategies


@dataclass(frozen=True)
class SigmaResult:
    value: float
    provenance: str
    certificate: dict


@dataclass(frozen=True)
class ThetaResult:
    value: float
    level: int
    certificate: dict


def sigma(G: Graph, strategy: str = "auto", tol=None) -> SigmaResult:
    """Largest t with J - t A_G in the PSD-plus-nonnegative cone.

    Strategies: ``auto`` (closed form for detected cycles and catalog rank-3
    strongly regular graphs, otherwise the direct SDP), ``sdp``, ``twirl``
    (symmetry-reduced LP, raising UnsupportedSymmetry when no reduction
    applies), ``circulant`` and ``srg3`` (the two reductions individually).
    The certificate carries the splitting J - tA = P + E at the optimum and a
    dual witness X (PSD, entrywise nonnegative, <A,X> = 1, <J,X> = value).
    """
    if not G.edges:
        raise ValueError("sigma requires a graph with at least one edge")
    key = strategy.strip().lower()
    if key == "auto":
        if G.srg is not None and G.rank3:
            res = _sigma_srg_closed(G)
        else:
            order = _cycle_order(G)
            if order is not None:
                res = _sigma_cycle_closed(G, tol)
            else:
                res = _sigma_sdp(G, tol)
    elif key == "sdp":
        res = _sigma_sdp(G, tol)
    elif key == "twirl":
        res = sigma_twirled(G, tol)
    elif key == "circulant":
        res = _sigma_circulant(G, tol)
    elif key == "srg3":
        res = _sigma_srg3(G, tol)
    else:
        raise ValueError(f"unknown sigma strategy {strategy!r}")
    lower = 1.0 + 1.0 / (G.n - 1) if G.n > 1 else 1.0
    if res.value < lower - 1e-6:
        raise ArithmeticError(
            f"sigma value {res.value} below the universal bound {lower}"
        )
    return res


def _sigma_sdp(G: Graph, tol=None) -> SigmaResult:
    n = G.n
    A = np.asarray(G.adjacency)
    prob = SdpProblem()
    Pref = prob.add_psd(n, label="P")
    Eref = prob.add_nn(n * (n + 1) // 2, label="E")
    tref = prob.add_free()
    rows = list(_sym_entries(n))
    for idx, (i, j, B) in enumerate(rows):
        ev = np.zeros(n * (n + 1) // 2)
        ev[idx] = 1.0
        prob.add_eq(1.0, (Pref, B), (Eref, ev), (tref, [A[i, j]]))
    prob.set_cost(tref, [-1.0])
    sol = solve_sdp(prob, tol)
    if sol.status is not SdpStatus.OPTIMAL:
        raise ArithmeticError(
            f"sigma SDP did not converge ({sol.status.value}); "
            f"residuals {sol.residuals}"
        )
    value = -float(sol.primal_obj)
    P = np.asarray(sol.block(Pref))
    evec = np.asarray(sol.block(Eref), dtype=float)
    E = np.zeros((n, n))
    X = np.zeros((n, n))
    for idx, (i, j, _B) in enumerate(rows):
        E[i, j] = E[j, i] = evec[idx]
        if i == j:
            X[i, i] = -sol.y[idx]
        else:
            X[i, j] = X[j, i] = -sol.y[idx] / 2.0
    J = np.ones((n, n))
    cert = {
        "P": P,
        "E": E,
        "t": value,
        "dual_X": X,
        "residual": float(np.max(np.abs(J - value * A - P - E))),
        "dual_pairing": float(np.sum(A * X)),
        "dual_value": float(np.sum(X)),
    }
    return SigmaResult(value, "sdp", cert)


def sigma_dual_bound(G: Graph, tol=None) -> tuple[float, np.ndarray]:
    """min <J, X> over doubly nonnegative X with <A_G, X> = 1.

    By conic duality the optimum equals sigma(G); the witness X is returned.
    """
    if not G.edges:
        raise ValueError("the dual bound requires at least one edge")
    n = G.n
    A = np.asarray(G.adjacency)
    prob = SdpProblem()
    Xref = prob.add_psd(n, label="X")
    Fref = prob.add_nn(n * (n + 1) // 2)
    rows = list(_sym_entries(n))
    for idx, (i, j, B) in enumerate(rows):
        ev = np.zeros(n * (n + 1) // 2)
        ev[idx] = -1.0
        prob.add_eq(0.0, (Xref, B), (Fref, ev))
    prob.add_eq(1.0, (Xref, A.copy()))
    prob.set_cost(Xref, np.ones((n, n)))
    sol = solve_sdp(prob, tol)
    if sol.status is not SdpStatus.OPTIMAL:
        raise ArithmeticError(
            f"dual-bound SDP did not converge ({sol.status.value}); "
            f"residuals {sol.residuals}"
        )
    X = np.asarray(sol.block(Xref))
    return float(sol.primal_obj), X


def sigma_twirled(G: Graph, tol=None) -> SigmaResult:
    """sigma computed in a fixed-point algebra of known symmetries.

    Cycles (and graphs presented with a circulant labeling) reduce to a
    circulant LP; catalog rank-3 strongly regular graphs reduce to a
    two-variable LP.  Raises UnsupportedSymmetry when neither applies.
    """
    if G.srg is not None and G.rank3:
        return _sigma_srg3(G, tol)
    return _sigma_circulant(G, tol)


def _cycle_order(G: Graph):
    """Vertices of G in cycle order, or None if G is not a single cycle."""
    n = G.n
    if n < 3 or len(G.edges) != n or not G.is_connected():
        return None
    nbrs = G.adjacency_lists()
    if any(len(nb) != 2 for nb in nbrs):
        return None
    order = [0]
    prev, cur = None, 0
    for _ in range(n - 1):
        a, b = nbrs[cur]
        nxt = b if a == prev else a
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def _circulant_structure(G: Graph):
    """A class-indicator vector and vertex order making A circulant."""
    n = G.n
    if n >= 3 and G.edges:
        A = np.asarray(G.adjacency)
        if all(np.array_equal(A[i], np.roll(A[0], i)) for i in range(n)):
            a = [0.0] * (n // 2 + 1)
            for k in range(1, n // 2 + 1):
                a[k] = float(A[0, k])
            return a, list(range(n))
        order = _cycle_order(G)
        if order is not None:
            a = [0.0] * (n // 2 + 1)
            a[1] = 1.0
            return a, order
    raise UnsupportedSymmetry(
        "no circulant reduction: need a cycle or a circulant labeling"
    )


def _sigma_circulant(G: Graph, tol=None) -> SigmaResult:
    a, order = _circulant_structure(G)
    n = G.n
    m = n // 2
    nv = m + 2  # [t, p_0 .. p_m]
    cost = np.zeros(nv)
    cost[0] = -1.0
    A_ub = []
    b_ub = []
    row = np.zeros(nv)
    row[1] = 1.0  # diagonal of E: p_0 <= 1
    A_ub.append(row)
    b_ub.append(1.0)
    for k in range(1, m + 1):
        row = np.zeros(nv)
        row[0] = a[k]
        row[1 + k] = 1.0  # class k of E: p_k + t a_k <= 1
        A_ub.append(row)
        b_ub.append(1.0)
    for j in range(m + 1):  # circulant eigenvalues of P must be >= 0
        row = np.zeros(nv)
        row[1] = -1.0
        for k in range(1, m + 1):
            weight = 1.0 if 2 * k == n else 2.0
            row[1 + k] = -weight * math.cos(2.0 * math.pi * j * k / n)
        A_ub.append(row)
        b_ub.append(0.0)
    res = solve_lp(
        cost,
        A_ub=np.array(A_ub),
        b_ub=np.array(b_ub),
        bounds=[(None, None)] * nv,
    )
    if res.status != "optimal":
        raise ArithmeticError(f"circulant LP failed: {res.status}")
    t = float(res.x[0])
    p = np.array(res.x[1:])
    e = np.zeros(m + 1)
    e[0] = 1.0 - p[0]
    for k in range(1, m + 1):
        e[k] = 1.0 - t * a[k] - p[k]
    pos = {v: i for i, v in enumerate(order)}
    P = np.zeros((n, n))
    E = np.zeros((n, n))
    for u in range(n):
        for v in range(n):
            d = (pos[u] - pos[v]) % n
            d = min(d, n - d)
            P[u, v] = p[d]
            if u != v:
                E[u, v] = e[d]
            else:
                E[u, v] = e[0] if p[0] < 1.0 else 0.0
    A = np.asarray(G.adjacency)
    J = np.ones((n, n))
    cert = {
        "P": P,
        "E": E,
        "t": t,
        "classes": p,
        "slack_classes": e,
        "order": order,
        "eigs_P": eig_sym(P)[0],
        "residual": float(np.max(np.abs(J - t * A - P - E))),
    }
    return SigmaResult(t, "twirl-circulant-lp", cert)


def _sigma_cycle_closed(G: Graph, tol=None) -> SigmaResult:
    n = G.n
    value = 2.0 if n % 2 == 0 else 1.0 + math.cos(math.pi / n)
    lp = _sigma_circulant(G, tol)
    if abs(lp.value - value) > 1e-7:
        raise ArithmeticError(
            f"cycle closed form {value} disagrees with circulant LP {lp.value}"
        )
    cert = dict(lp.certificate)
    cert["t"] = value
    return SigmaResult(value, "cycle-closed-form", cert)


def _sigma_srg3(G: Graph, tol=None) -> SigmaResult:
    if G.srg is None or not G.rank3:
        raise UnsupportedSymmetry(
            "rank-3 reduction needs a graph with known strongly regular "
            "parameters and a rank-3 symmetry group"
        )
    p = G.srg
    n, k = p.n, p.k
    r, s = p.r_eig, p.s_eig
    # P = I + beta A + gamma (J - I - A); eigenvalue rows keep P psd,
    # gamma <= 1 keeps E = (1 - gamma)(J - I - A) nonnegative; sigma = 1 - beta.
    cost = np.array([1.0, 0.0])
    A_ub = np.array(
        [
            [-k, -(n - 1.0 - k)],
            [-r, r + 1.0],
            [-s, s + 1.0],
            [0.0, 1.0],
        ]
    )
    b_ub = np.array([1.0, 1.0, 1.0, 1.0])
    res = solve_lp(cost, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * 2)
    if res.status != "optimal":
        raise ArithmeticError(f"rank-3 LP failed: {res.status}")
    beta, gamma = (float(v) for v in res.x)
    value = 1.0 - beta
    A = np.asarray(G.adjacency)
    n_ = G.n
    I = np.eye(n_)
    J = np.ones((n_, n_))
    Abar = J - I - A
    P = I + beta * A + gamma * Abar
    E = (1.0 - gamma) * Abar
    X = (A - s * I) / (n * k)
    cert = {
        "P": P,
        "E": E,
        "t": value,
        "beta": beta,
        "gamma": gamma,
        "dual_X": X,
        "residual": float(np.max(np.abs(J - value * A - P - E))),
    }
    return SigmaResult(value, "twirl-srg3-lp", cert)


def _sigma_srg_closed(G: Graph) -> SigmaResult:
    p = G.srg
    exact = srg_sigma(p)
    value = float(exact)
    n, k = p.n, p.k
    r, s = p.r_eig, p.s_eig
    denom = r * (n - 1) + k
    e = n * r / denom
    A = np.asarray(G.adjacency)
    I = np.eye(n)
    J = np.ones((n, n))
    P = (1.0 - e) * J + e * I + (e - value) * A
    E = e * (J - I - A)
    X = (A - s * I) / (n * k)
    cert = {
        "P": P,
        "E": E,
        "t": value,
        "slack_coefficient": e,
        "dual_X": X,
        "exact": exact if isinstance(exact, Fraction) else None,
        "residual": float(np.max(np.abs(J - value * A - P - E))),
    }
    return SigmaResult(value, "srg-closed-form", cert)


def srg_sigma(params: SrgParams):
    """Closed-form sigma for a rank-3 strongly regular graph.

    Returns an exact Fraction when the eigenvalue r is rational, otherwise a
    float; the value is n(r+1) / (r(n-1) + k), equivalently 1 - s/k.
    """
    n, k = params.n, params.k
    r = params.r_exact
    if r is not None:
        return Fraction(n) * (r + 1) / (r * (n - 1) + k)
    rf = params.r_eig
    return n * (rf + 1.0) / (rf * (n - 1) + k)


# ---------------------------------------------------------------------------
# theta hierarchy


def theta_r(G: Graph, r: int, tol=None) -> ThetaResult:
    """min t with t(I + A_G) - J at level r of the inner hierarchy.

    Upper-bounds the independence number at every level; at level 0 it ties
    to sigma of the complement through
    sigma(G) = theta_0(complement) / (theta_0(complement) - 1).
    """
    if r not in (0, 1, 2):
        raise ValueError("level r must be 0, 1 or 2")
    n = G.n
    if n == 0:
        raise ValueError("theta requires at least one vertex")
    if r == 2 and n > 8:
        raise SizeLimit("level 2 is supported for n <= 8")
    if n > 16:
        raise SizeLimit("graphs up to n = 16 are supported")
    A = np.asarray(G.adjacency)
    sd = _sos_data(n, r)
    prob, grams, singles, theta = _sos_problem(
        sd, -np.ones((n, n)), [np.eye(n) + A]
    )
    prob.set_cost(theta, [1.0])
    sol = solve_sdp(prob, as_tolerance(tol))
    if sol.status is not SdpStatus.OPTIMAL:
        raise ArithmeticError(
            f"theta solver did not converge ({sol.status.value}); "
            f"residuals {sol.residuals}"
        )
    value = float(sol.primal_obj)
    target = value * (np.eye(n) + A) - np.ones((n, n))
    cert = {
        "gram": _gram_from_solution(sd, sol, grams, singles),
        "target": target,
    }
    return ThetaResult(value, r, cert)


# ---------------------------------------------------------------------------
# threshold classification


@dataclass(frozen=True)
class ThresholdReport:
    """The four thresholds of the one-parameter map family of a graph."""

    t_cp: float
    t_ccp: float
    t_dec: float
    t_pos: float
    window: tuple | None
    provenance: dict
    omega: int
    lam: float
    sigma_result: SigmaResult


def classify_map(G: Graph, tol=None) -> ThresholdReport:
    """Thresholds 1/lambda_max <= 1 <= sigma <= 1 + 1/(omega - 1).

    The returned window (sigma, 1 + 1/(omega-1)] is the parameter range where
    the map is positive but not decomposable; it is empty (None) unless sigma
    sits strictly below the clique threshold.
    """
    if not G.edges:
        raise ValueError("classification requires a graph with at least one edge")
    lam = lambda_max(G)
    om = clique_number(G)
    sig = sigma(G, "auto", tol)
    t_cp = 1.0 / lam
    t_pos = 1.0 + 1.0 / (om - 1)
    if t_cp > min(1.0, sig.value) + 1e-7 or sig.value > t_pos + 1e-7:
        raise ArithmeticError(
            f"threshold ordering violated: {t_cp}, 1, {sig.value}, {t_pos}"
        )
    window = (sig.value, t_pos) if sig.value < t_pos - 1e-6 else None
    return ThresholdReport(
        t_cp=t_cp,
        t_ccp=1.0,
        t_dec=sig.value,
        t_pos=t_pos,
        window=window,
        provenance={
            "t_cp": "closed-form",
            "t_ccp": "definition",
            "t_dec": sig.provenance,
            "t_pos": "clique-number",
        },
        omega=om,
        lam=lam,
        sigma_result=sig,
    )


# ---------------------------------------------------------------------------
# catalog


def cycle_graph(n: int, name: str | None = None) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    edges = {(i, (i + 1) % n) for i in range(n)}
    return Graph(n, frozenset(edges), name=name or f"c{n}")


def complete_graph(n: int, name: str | None = None) -> Graph:
    if n < 1:
        raise ValueError("complete graphs need at least one vertex")
    edges = {(i, j) for i in range(n) for j in range(i + 1, n)}
    params = SrgParams(n, n - 1, n - 2, n - 1) if n >= 2 else None
    return Graph(
        n, frozenset(edges), name=name or f"k{n}", srg=params, rank3=params is not None
    )


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def paley(q: int) -> Graph:
    """Paley graph of order q: connect residues differing by a square.

    Implemented for primes q = 1 (mod 4); the one prime-power order in range,
    q = 9, ships as a fixed table (the nine-element field makes it the rook's
    graph of a 3 x 3 grid).
    """
    if q == 9:
        edges = set()
        for a in range(9):
            for b in range(a + 1, 9):
                r1, c1 = divmod(a, 3)
                r2, c2 = divmod(b, 3)
                if r1 == r2 or c1 == c2:
                    edges.add((a, b))
        return Graph(
            9, frozenset(edges), name="paley9", srg=SrgParams(9, 4, 1, 2), rank3=True
        )
    if q < 5 or not _is_prime(q) or q % 4 != 1:
        raise UnsupportedOrder(
            "paley(q) needs a prime q = 1 (mod 4); the only supported "
            "prime-power order is 9"
        )
    squares = {(x * x) % q for x in range(1, q)}
    edges = {(i, j) for i in range(q) for j in range(i + 1, q) if (j - i) % q in squares}
    params = SrgParams(q, (q - 1) // 2, (q - 5) // 4, (q - 1) // 4)
    return Graph(q, frozenset(edges), name=f"paley{q}", srg=params, rank3=True)


def _two_subset_graph(m: int, adjacent_when_disjoint: bool, **kwargs) -> Graph:
    verts = list(combinations(range(m), 2))
    edges = set()
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            disjoint = not (set(verts[i]) & set(verts[j]))
            if disjoint == adjacent_when_disjoint:
                edges.add((i, j))
    return Graph(len(verts), frozenset(edges), **kwargs)


def _petersen() -> Graph:
    return _two_subset_graph(
        5, True, name="petersen", srg=SrgParams(10, 3, 0, 1), rank3=True
    )


def _gq22() -> Graph:
    return _two_subset_graph(
        6, True, name="gq22", srg=SrgParams(15, 6, 1, 3), rank3=True
    )


def _triangular6() -> Graph:
    return _two_subset_graph(
        6, False, name="triangular6", srg=SrgParams(15, 8, 4, 4), rank3=True
    )


def _clebsch() -> Graph:
    diffs = {0b0001, 0b0010, 0b0100, 0b1000, 0b1111}
    edges = {
        (i, j) for i in range(16) for j in range(i + 1, 16) if (i ^ j) in diffs
    }
    return Graph(
        16, frozenset(edges), name="clebsch", srg=SrgParams(16, 5, 0, 2), rank3=True
    )


def _hamming24() -> Graph:
    edges = set()
    for a in range(16):
        for b in range(a + 1, 16):
            r1, c1 = divmod(a, 4)
            r2, c2 = divmod(b, 4)
            if r1 == r2 or c1 == c2:
                edges.add((a, b))
    return Graph(
        16, frozenset(edges), name="hamming24", srg=SrgParams(16, 6, 2, 2), rank3=True
    )


def _shrikhande() -> Graph:
    diffs = {(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)}
    edges = set()
    for a in range(16):
        for b in range(a + 1, 16):
            r1, c1 = divmod(a, 4)
            r2, c2 = divmod(b, 4)
            if ((r1 - r2) % 4, (c1 - c2) % 4) in diffs:
                edges.add((a, b))
    # same parameters as the 4x4 rook's graph, but the symmetry group has
    # rank 4, so no rank-3 reduction applies
    return Graph(
        16,
        frozenset(edges),
        name="shrikhande",
        srg=SrgParams(16, 6, 2, 2),
        rank3=False,
    )


def _wheel6() -> Graph:
    edges = {(i, (i + 1) % 5) for i in range(5)} | {(i, 5) for i in range(5)}
    return Graph(6, frozenset(edges), name="wheel6")


def _tadpole51() -> Graph:
    edges = {(i, (i + 1) % 5) for i in range(5)} | {(0, 5)}
    return Graph(6, frozenset(edges), name="tadpole51")


def _squarepath() -> Graph:
    # a 4-cycle and a 2-path glued along their endpoints; contains an
    # induced 5-cycle, stays triangle-free
    edges = {(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (4, 5), (2, 5)}
    return Graph(6, frozenset(edges), name="squarepath")


_BUILDERS = {
    "pentagon": lambda: replace(paley(5), name="pentagon"),
    "paley5": lambda: paley(5),
    "paley9": lambda: paley(9),
    "paley13": lambda: paley(13),
    "paley17": lambda: paley(17),
    "petersen": _petersen,
    "petersen-complement": lambda: replace(
        _petersen().complement(), name="petersen-complement"
    ),
    "gq22": _gq22,
    "triangular6": _triangular6,
    "t6": _triangular6,
    "clebsch": _clebsch,
    "clebsch-complement": lambda: replace(
        _clebsch().complement(), name="clebsch-complement"
    ),
    "hamming24": _hamming24,
    "rook44": _hamming24,
    "hamming24-complement": lambda: replace(
        _hamming24().complement(), name="hamming24-complement"
    ),
    "shrikhande": _shrikhande,
    "wheel6": _wheel6,
    "w6": _wheel6,
    "tadpole51": _tadpole51,
    "t51": _tadpole51,
    "squarepath": _squarepath,
    "square-path": _squarepath,
}

# the twelve rank-3 strongly regular graphs on up to 17 vertices covered by
# closed forms, in catalog order
SRG_TABLE = (
    "pentagon",
    "paley9",
    "petersen",
    "petersen-complement",
    "paley13",
    "gq22",
    "triangular6",
    "clebsch",
    "clebsch-complement",
    "hamming24",
    "hamming24-complement",
    "paley17",
)


def catalog(name: str) -> Graph:
    """Named graph constructions; case-insensitive, with c<n>/k<n>/paley<q>."""
    key = name.strip().lower().replace("_", "-").replace(" ", "-")
    if key in _BUILDERS:
        return _BUILDERS[key]()
    m = re.fullmatch(r"c(\d+)", key)
    if m:
        return cycle_graph(int(m.group(1)))
    m = re.fullmatch(r"k(\d+)", key)
    if m:
        return complete_graph(int(m.group(1)))
    m = re.fullmatch(r"paley(\d+)", key)
    if m:
        return paley(int(m.group(1)))
    raise KeyError(f"unknown catalog graph {name!r}")


# ---------------------------------------------------------------------------
# gap scanning


@dataclass(frozen=True)
class GapRecord:
    """Per-line scan outcome; error is set when the record was unusable."""

    line_no: int
    graph6: str
    n: int | None = None
    degree_sequence: tuple | None = None
    sigma: float | None = None
    omega: int | None = None
    gap: bool | None = None
    error: str | None = None


def scan_gap(lines: Iterable[str], tol: float = 1e-6) -> list:
    """Scan graph6 records for graphs with sigma < 1 + 1/(omega-1) - tol.

    Returns one record per non-blank input line, in input order; malformed
    lines are reported with their line number and the scan continues.
    """
    out = []
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            G = Graph.from_graph6(text)
        except ValueError as exc:
            out.append(GapRecord(line_no, text, error=str(exc)))
            continue
        if not G.edges:
            out.append(
                GapRecord(
                    line_no,
                    text,
                    n=G.n,
                    degree_sequence=G.degree_sequence(),
                    sigma=math.inf,
                    omega=min(G.n, 1),
                    gap=False,
                )
            )
            continue
        try:
            om = clique_number(G)
            res = sigma(G, "auto")
        except (ValueError, ArithmeticError, SizeLimit) as exc:
            out.append(GapRecord(line_no, text, n=G.n, error=str(exc)))
            continue
        threshold = 1.0 + 1.0 / (om - 1)
        out.append(
            GapRecord(
                line_no,
                text,
                n=G.n,
                degree_sequence=G.degree_sequence(),
                sigma=res.value,
                omega=om,
                gap=bool(res.value < threshold - tol),
            )
        )
    return out
