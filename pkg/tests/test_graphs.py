import math
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import conekit.graphs as gr
from conekit.cones import SizeLimit

DATA = pathlib.Path(__file__).parent / "data"
PHI = math.sqrt(5.0)


# ---------------------------------------------------------------------------
# strongly regular parameter bookkeeping

def test_srg_params_pentagon():
    p = gr.SrgParams(5, 2, 0, 1)
    assert p.r_exact == 1 or float(p.r_eig) == pytest.approx((-1 + PHI) / 2)
    f, g = p.multiplicities
    assert f + g == 4
    c = p.complement()
    assert (c.n, c.k, c.lambda_c, c.mu) == (5, 2, 0, 1)  # C5 self-complementary


def test_srg_params_petersen():
    p = gr.SrgParams(10, 3, 0, 1)
    assert p.r_eig == pytest.approx(1.0)
    assert p.s_eig == pytest.approx(-2.0)
    assert p.multiplicities == (5, 4)
    c = p.complement()
    assert (c.n, c.k, c.lambda_c, c.mu) == (10, 6, 3, 4)


def test_srg_params_complete_graph():
    p = gr.SrgParams(7, 6, 5, 6)
    assert float(p.r_eig) == pytest.approx(0.0)
    assert float(p.s_eig) == pytest.approx(-1.0)


@pytest.mark.parametrize("bad", [
    (10, 3, 0, 2),   # counting identity fails
    (5, 2, 1, 1),    # identity fails
    (16, 6, 3, 2),   # non-integral multiplicities
])
def test_srg_params_inconsistent(bad):
    with pytest.raises(gr.InconsistentParams):
        gr.SrgParams(*bad)


def test_srg_params_range_errors():
    with pytest.raises(ValueError):
        gr.SrgParams(1, 1, 0, 0)
    with pytest.raises(ValueError):
        gr.SrgParams(5, 0, 0, 0)


# ---------------------------------------------------------------------------
# graph construction and graph6

def test_graph_basic():
    g = gr.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert g.num_edges == 4
    assert g.degree_sequence() == (2, 2, 2, 2)
    assert g.is_connected
    A = g.adjacency
    assert A.shape == (4, 4)
    assert np.array_equal(A, A.T)
    assert A[0, 1] == 1.0 and A[0, 2] == 0.0


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        gr.Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        gr.Graph.from_edges(3, [(1, 1)])


def test_graph_complement_roundtrip():
    g = gr.catalog("petersen")
    gc = g.complement()
    assert gc.num_edges == 45 - 15
    assert gc.complement().edges == g.edges


def test_graph6_known_values():
    # C5 in canonical graph6 spelling
    c5 = gr.Graph.from_graph6("Dhc")
    assert c5.n == 5 and c5.num_edges == 5
    assert c5.degree_sequence() == (2, 2, 2, 2, 2)
    # header form decodes the same
    c5b = gr.Graph.from_graph6(">>graph6<<Dhc")
    assert c5b.edges == c5.edges


def test_graph6_invalid():
    with pytest.raises(ValueError):
        gr.Graph.from_graph6("D")  # truncated
    with pytest.raises(ValueError):
        gr.Graph.from_graph6("D\x19\x19\x19")  # bytes below printable range


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 11).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).map(
            lambda e: (min(e), max(e))
        ).filter(lambda e: e[0] != e[1]),
    ))
))
def test_graph6_roundtrip(case):
    n, edges = case
    g = gr.Graph.from_edges(n, edges)
    assert gr.Graph.from_graph6(g.to_graph6()).edges == g.edges


# ---------------------------------------------------------------------------
# catalog

def test_catalog_aliases():
    assert gr.catalog("pentagon").edges == gr.catalog("c5").edges
    assert gr.catalog("paley5").edges == gr.catalog("c5").edges
    assert gr.catalog("W6").n == 6
    assert gr.catalog("k4").num_edges == 6


def test_catalog_unknown():
    with pytest.raises(KeyError):
        gr.catalog("not-a-graph")


def test_catalog_srg_rows_validate():
    # every named strongly regular graph re-verifies its parameters exactly
    for name in gr.SRG_TABLE:
        g = gr.catalog(name)
        assert g.srg is not None
        A = g.adjacency
        n, k, lam, mu = g.srg.n, g.srg.k, g.srg.lambda_c, g.srg.mu
        J = np.ones((n, n))
        lhs = A @ A
        rhs = k * np.eye(n) + lam * A + mu * (J - np.eye(n) - A)
        assert np.array_equal(lhs, rhs)


def test_shrikhande_is_not_rank3():
    g = gr.catalog("shrikhande")
    assert g.srg is not None and not g.rank3
    h = gr.catalog("hamming24")
    assert h.srg == g.srg  # same parameters, different graph
    assert h.rank3


CLIQUES = {
    "pentagon": 2, "paley9": 3, "petersen": 2, "petersen-complement": 4,
    "paley13": 3, "gq22": 3, "triangular6": 5, "clebsch": 2,
    "clebsch-complement": 5, "hamming24": 4, "hamming24-complement": 4,
    "paley17": 3,
}


def test_clique_numbers():
    for name, w in CLIQUES.items():
        assert gr.clique_number(gr.catalog(name)) == w, name
    assert gr.clique_number(gr.catalog("k6")) == 6
    assert gr.independence_number(gr.catalog("petersen")) == 4


def test_clique_size_guard():
    big = gr.Graph.from_edges(70, [(0, 1)])
    with pytest.raises(SizeLimit):
        gr.clique_number(big)


# ---------------------------------------------------------------------------
# sigma: closed forms, SDP, twirl agreement

def cycle_sigma(n):
    return 2.0 if n % 2 == 0 else 1.0 + math.cos(math.pi / n)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9])
def test_sigma_cycles(n):
    g = gr.cycle_graph(n)
    res = gr.sigma(g)
    assert res.provenance == "cycle-closed-form"
    assert res.value == pytest.approx(cycle_sigma(n), abs=1e-9)
    sdp = gr.sigma(g, strategy="sdp")
    assert sdp.value == pytest.approx(res.value, abs=1e-6)
    tw = gr.sigma(g, strategy="twirl")
    assert tw.value == pytest.approx(res.value, abs=1e-9)


def _check_sigma_cert(g, res, tol=1e-7):
    cert = res.certificate
    A, n = g.adjacency, g.n
    P, E, t = cert["P"], cert["E"], cert["t"]
    recon = P + E + t * A - np.ones((n, n))
    assert np.max(np.abs(recon)) <= tol
    assert np.linalg.eigvalsh(P)[0] >= -tol
    assert E.min() >= -tol
    X = cert["dual_X"]
    assert np.linalg.eigvalsh(X)[0] >= -tol
    assert X.min() >= -tol
    assert abs(float(np.sum(A * X)) - 1.0) <= tol
    assert abs(float(np.sum(X)) - res.value) <= 1e-6


def test_sigma_srg_table():
    for name in gr.SRG_TABLE:
        g = gr.catalog(name)
        res = gr.sigma(g)
        assert res.provenance == "srg-closed-form", name
        expect = float(gr.srg_sigma(g.srg))
        assert res.value == pytest.approx(expect, abs=1e-12), name
        _check_sigma_cert(g, res)


@pytest.mark.parametrize("name", ["pentagon", "petersen", "paley13", "clebsch"])
def test_sigma_srg_sdp_agrees(name):
    g = gr.catalog(name)
    expect = float(gr.srg_sigma(g.srg))
    sdp = gr.sigma(g, strategy="sdp")
    assert sdp.value == pytest.approx(expect, abs=1e-6)
    _check_sigma_cert(g, sdp, tol=1e-6)
    tw = gr.sigma(g, strategy="twirl")
    assert tw.value == pytest.approx(expect, abs=1e-9)


def test_sigma_twirl_needs_symmetry():
    with pytest.raises(gr.UnsupportedSymmetry):
        gr.sigma(gr.catalog("shrikhande"), strategy="twirl")


def test_srg_sigma_complete_graph_formula():
    for n in (3, 5, 8):
        p = gr.SrgParams(n, n - 1, n - 2, n - 1)
        assert float(gr.srg_sigma(p)) == pytest.approx(n / (n - 1.0))
        assert gr.sigma(gr.complete_graph(n)).value == pytest.approx(
            n / (n - 1.0), abs=1e-9
        )


def test_sigma_wheel6_certificates():
    w6 = gr.catalog("wheel6")
    expect = 1 + 1 / PHI
    res = gr.sigma(w6, strategy="sdp")
    assert res.value == pytest.approx(expect, abs=1e-6)
    P, X = res.certificate["P"], res.certificate["dual_X"]
    wP = np.sort(np.linalg.eigvalsh(P))
    assert np.max(np.abs(wP - np.array([0, 0, 0, 2, 2, 2.0]))) <= 1e-6
    ex = np.array([0, 0, 0, (3 * PHI - 5) / 20, (3 * PHI - 5) / 20,
                   (5 - PHI) / 10])
    wX = np.sort(np.linalg.eigvalsh(X))
    assert np.max(np.abs(wX - ex)) <= 1e-6
    A = w6.adjacency
    assert abs(np.sum(A * X) - 1.0) <= 1e-7
    assert abs(np.sum(X) - expect) <= 1e-7
    # entries: rim diagonal and hub-rim (sqrt5-1)/20, rim-adjacent (3-sqrt5)/20,
    # hub diagonal (5-sqrt5)/20, rim-nonadjacent zero
    a, b = (3 - PHI) / 20, (PHI - 1) / 20
    M = np.zeros((6, 6))
    for i in range(5):
        M[i, i] = b
        for j in range(i + 1, 5):
            M[i, j] = M[j, i] = a if A[i, j] else 0.0
        M[i, 5] = M[5, i] = b
    M[5, 5] = (5 - PHI) / 20
    assert np.max(np.abs(X - M)) <= 1e-6


def test_sigma_dual_bound_matches():
    for name in ("c5", "petersen", "wheel6"):
        g = gr.catalog(name)
        lo, X = gr.sigma_dual_bound(g)
        hi = gr.sigma(g).value
        assert lo == pytest.approx(hi, abs=1e-6)
        assert np.linalg.eigvalsh(X)[0] >= -1e-7
        assert X.min() >= -1e-7


def test_sigma_dual_bound_k2():
    val, X = gr.sigma_dual_bound(gr.complete_graph(2))
    assert val == pytest.approx(2.0, abs=1e-8)


def test_sigma_no_edges_rejected():
    with pytest.raises(ValueError):
        gr.sigma(gr.Graph.from_edges(3, []))


# ---------------------------------------------------------------------------
# sigma structural invariants

def test_sigma_sandwich_bounds():
    for name in ("petersen", "paley13", "wheel6", "gq22"):
        g = gr.catalog(name)
        s = gr.sigma(g).value
        lo = 1 + 1 / gr.lambda_max(g)
        hi = 1 + 1 / (gr.clique_number(g) - 1)
        assert lo - 1e-6 <= s <= hi + 1e-6


def test_sigma_disjoint_union_is_min():
    g = gr.disjoint_union(gr.cycle_graph(5), gr.complete_graph(3))
    got = gr.sigma(g, strategy="sdp").value
    want = min(cycle_sigma(5), 1.5)
    assert got == pytest.approx(want, abs=1e-6)


def test_sigma_induced_subgraph_monotone():
    pet = gr.catalog("petersen")
    sub = pet.subgraph([0, 1, 2, 3, 4, 5])
    assert gr.sigma(sub, strategy="sdp").value >= gr.sigma(pet).value - 1e-6


def _is_bipartite(g):
    color = {}
    for start in range(g.n):
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.adjacency_lists()[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def _is_triangle_free(g):
    A = g.adjacency
    return np.trace(A @ A @ A) == 0


def test_sigma_two_iff_bipartite_triangle_free():
    # over all connected triangle-free graphs on 5 and 6 vertices
    for n in (5, 6):
        for line in (DATA / f"connected{n}.g6").read_text().split():
            g = gr.Graph.from_graph6(line)
            if not _is_triangle_free(g):
                continue
            s = gr.sigma(g, strategy="sdp").value
            if _is_bipartite(g):
                assert s == pytest.approx(2.0, abs=1e-6), line
            else:
                assert s < 2.0 - 1e-6, line


# ---------------------------------------------------------------------------
# theta hierarchy

def test_theta0_c5_complement():
    res = gr.theta_r(gr.cycle_graph(5).complement(), 0)
    assert res.value == pytest.approx(PHI, abs=1e-6)


def test_theta0_empty_and_complete():
    empty = gr.Graph.from_edges(4, [])
    assert gr.theta_r(empty, 0).value == pytest.approx(4.0, abs=1e-6)
    assert gr.theta_r(gr.complete_graph(4), 0).value == pytest.approx(
        1.0, abs=1e-6
    )


def test_theta0_upper_bounds_independence():
    for name in ("petersen", "c7"):
        g = gr.catalog(name)
        assert gr.theta_r(g, 0).value >= gr.independence_number(g) - 1e-6


def test_theta_links_to_sigma():
    # sigma(G) = theta0(complement) / (theta0(complement) - 1)
    for name in ("c5", "petersen"):
        g = gr.catalog(name)
        th = gr.theta_r(g.complement(), 0).value
        assert gr.sigma(g).value == pytest.approx(th / (th - 1), abs=1e-5)


def test_theta_level_monotone():
    g = gr.catalog("c7")
    t0 = gr.theta_r(g, 0).value
    t1 = gr.theta_r(g, 1).value
    assert t1 <= t0 + 1e-6


def test_theta_guards():
    with pytest.raises(ValueError):
        gr.theta_r(gr.cycle_graph(5), 3)
    with pytest.raises(SizeLimit):
        gr.theta_r(gr.cycle_graph(9), 2)


# ---------------------------------------------------------------------------
# threshold classification

def test_classify_map_petersen():
    rep = gr.classify_map(gr.catalog("petersen"))
    assert rep.t_cp == pytest.approx(1 / 3, abs=1e-9)
    assert rep.t_ccp == pytest.approx(1.0, abs=1e-12)
    assert rep.t_dec == pytest.approx(5 / 3, abs=1e-6)
    assert rep.t_pos == pytest.approx(2.0, abs=1e-9)
    assert rep.window is not None
    lo, hi = rep.window
    assert lo == pytest.approx(5 / 3, abs=1e-6)
    assert hi == pytest.approx(2.0, abs=1e-9)


def test_classify_map_complete_graph_no_window():
    rep = gr.classify_map(gr.complete_graph(5))
    assert rep.window is None
    assert rep.t_dec == pytest.approx(rep.t_pos, abs=1e-6)


def test_classify_map_paley13_window():
    rep = gr.classify_map(gr.catalog("paley13"))
    lo, hi = rep.window
    assert lo == pytest.approx((13 + math.sqrt(13)) / 12, abs=1e-6)
    assert hi == pytest.approx(1.5, abs=1e-9)


def test_classify_map_ordering():
    for name in ("petersen", "paley13", "wheel6", "c6"):
        rep = gr.classify_map(gr.catalog(name))
        assert rep.t_cp <= rep.t_ccp + 1e-7
        assert rep.t_ccp <= rep.t_dec + 1e-7
        assert rep.t_dec <= rep.t_pos + 1e-7


# ---------------------------------------------------------------------------
# gap scan

def test_scan_gap_n5():
    lines = (DATA / "connected5.g6").read_text().splitlines()
    recs = gr.scan_gap(lines)
    assert len(recs) == 21
    gaps = [r for r in recs if r.gap]
    assert len(gaps) == 1
    (r,) = gaps
    assert r.degree_sequence == (2, 2, 2, 2, 2)
    assert r.sigma == pytest.approx((5 + PHI) / 4, abs=1e-6)
    assert r.omega == 2


def test_scan_gap_records_errors_and_continues():
    recs = gr.scan_gap(["Dhc", "garbage!!", "Dhc"])
    assert len(recs) == 3
    assert recs[0].error is None and recs[2].error is None
    assert recs[1].error is not None
    assert recs[0].sigma == pytest.approx(cycle_sigma(5), abs=1e-6)


def test_scan_gap_edgeless_line():
    recs = gr.scan_gap(["D??"])
    assert len(recs) == 1
    assert recs[0].gap is False
