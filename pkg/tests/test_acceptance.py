"""End-to-end acceptance battery.

Each test covers one numbered criterion and prints a single
"[criterion N] PASS" or "[criterion N] FAIL" line; assertion details follow
on failure.  The whole battery runs at desk scale (minutes, not hours).
"""

import pathlib
import time

import numpy as np
import pytest

from conekit import cones, graphs as gr, pairwise as pw, quantum as qt
from conekit.cones import Verdict, berman_matrix, horn_matrix
from conekit.linalg import inner, min_eig
from conekit.optim import SdpProblem, SdpStatus, solve_sdp, verify_sdp

DATA = pathlib.Path(__file__).parent / "data"
SQRT5 = np.sqrt(5.0)


def _emit(capsys, num, checks):
    ok = all(c for c, _ in checks)
    with capsys.disabled():
        print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'}")
    if not ok:
        pytest.fail("; ".join(m for c, m in checks if not c))


def ring(M):
    return M - np.diag(np.diag(M))


# ---------------------------------------------------------------------------


def test_criterion_01_cycle_sigma_closed_forms(capsys):
    checks = []
    for n in (5, 7, 9):
        G = gr.catalog(f"c{n}")
        t0 = time.perf_counter()
        res = gr.sigma(G, strategy="sdp")
        elapsed = time.perf_counter() - t0
        expect = 1.0 + np.cos(np.pi / n)
        checks.append(
            (abs(res.value - expect) <= 1e-6, f"c{n} value {res.value} vs {expect}")
        )
        checks.append((elapsed < 5.0, f"c{n} took {elapsed:.2f}s"))
    _emit(capsys, 1, checks)


def test_criterion_02_srg_table_and_gap_pattern(capsys):
    expected_gap = {
        "pentagon": True,
        "paley9": False,
        "petersen": True,
        "petersen-complement": False,
        "paley13": True,
        "gq22": False,
        "triangular6": False,
        "clebsch": True,
        "clebsch-complement": True,
        "hamming24": False,
        "hamming24-complement": False,
        "paley17": True,
    }
    checks = [(len(gr.SRG_TABLE) == 12, "table must have twelve rows")]
    for name in gr.SRG_TABLE:
        G = gr.catalog(name)
        p = G.srg
        res = gr.sigma(G, strategy="sdp")
        formula = p.n * (p.r_eig + 1.0) / (p.r_eig * (p.n - 1) + p.k)
        checks.append(
            (
                abs(res.value - formula) <= 1e-6,
                f"{name}: sdp {res.value} vs closed form {formula}",
            )
        )
        om = gr.clique_number(G)
        gap = res.value < 1.0 + 1.0 / (om - 1) - 1e-6
        checks.append(
            (gap == expected_gap[name], f"{name}: gap {gap}, expected not")
        )
    _emit(capsys, 2, checks)


def test_criterion_03_five_cycle_matrix_certificates(capsys):
    H = horn_matrix()
    checks = []
    cop = cones.is_cop(H)
    checks.append((cop.status is Verdict.MEMBER, "copositivity not certified"))
    checks.append((cop.level is not None and cop.level <= 2, "level above 2"))
    checks.append((cop.level == 1, f"expected entry level 1, got {cop.level}"))
    if cop.status is Verdict.MEMBER:
        checks.append(
            (
                cones.verify_gram(5, cop.level, H, cop.certificate["gram"]),
                "gram certificate fails re-check",
            )
        )
    spn = cones.is_spn(H)
    checks.append((spn.status is Verdict.NON_MEMBER, "spn should reject"))
    if spn.status is Verdict.NON_MEMBER:
        X = spn.certificate["X"]
        checks.append((float(np.min(X)) >= -1e-7, "witness not nonnegative"))
        checks.append((min_eig(X) >= -1e-7, "witness not psd"))
        checks.append((inner(X, H) < -1e-7, "witness pairing not negative"))
        checks.append(
            (
                abs(inner(X, H) - spn.certificate["pairing"]) <= 1e-9,
                "stored pairing mismatch",
            )
        )
    _emit(capsys, 3, checks)


def test_criterion_04_wheel_certificates(capsys):
    W6 = gr.catalog("wheel6")
    res = gr.sigma(W6, strategy="sdp")
    checks = [
        (
            abs(res.value - (1.0 + 1.0 / SQRT5)) <= 1e-6,
            f"sigma(W6) = {res.value}",
        )
    ]
    P = res.certificate["P"]
    wP = np.sort(np.linalg.eigvalsh(P))
    checks.append(
        (
            float(np.max(np.abs(wP - np.array([0, 0, 0, 2, 2, 2.0])))) <= 1e-6,
            f"primal eigenvalues {wP}",
        )
    )
    X = res.certificate["dual_X"]
    wX = np.sort(np.linalg.eigvalsh(X))
    expect = np.array(
        [
            0.0,
            0.0,
            0.0,
            (3 * SQRT5 - 5) / 20,
            (3 * SQRT5 - 5) / 20,
            (5 - SQRT5) / 10,
        ]
    )
    checks.append(
        (float(np.max(np.abs(wX - expect))) <= 1e-6, f"dual eigenvalues {wX}")
    )
    A = np.asarray(W6.adjacency)
    checks.append(
        (abs(float(np.sum(A * X)) - 1.0) <= 1e-7, "Tr(AX) != 1")
    )
    checks.append(
        (
            abs(float(np.sum(X)) - (1.0 + 1.0 / SQRT5)) <= 1e-7,
            "Tr(JX) != 1 + 1/sqrt5",
        )
    )
    _emit(capsys, 4, checks)


def test_criterion_05_petersen_map_thresholds(capsys):
    G = gr.catalog("petersen")
    rep = gr.classify_map(G)
    checks = [
        (abs(rep.t_cp - 1.0 / 3.0) <= 1e-9, f"t_cp {rep.t_cp}"),
        (rep.t_ccp == 1.0, f"t_ccp {rep.t_ccp}"),
        (abs(rep.t_dec - 5.0 / 3.0) <= 1e-9, f"t_dec {rep.t_dec}"),
        (abs(rep.t_pos - 2.0) <= 1e-9, f"t_pos {rep.t_pos}"),
    ]
    n = G.n
    Adj = np.asarray(G.adjacency)
    J = np.ones((n, n))

    # inside the window: positive (no rank-one violation found) but not
    # decomposable
    pair_in = pw.pair_form(J, np.eye(n) - 1.9 * Adj)
    rng = np.random.default_rng(0)
    worst = np.inf
    for _ in range(10):
        V = rng.normal(size=(10_000, n)) + 1j * rng.normal(size=(10_000, n))
        W = rng.normal(size=(10_000, n)) + 1j * rng.normal(size=(10_000, n))
        worst = min(worst, float(np.min(pw.form_value_batch(pair_in, V, W))))
    checks.append(
        (worst >= -1e-9, f"violation found inside the window: {worst}")
    )
    dec = pw.is_pdec(pair_in)
    checks.append(
        (dec.status is Verdict.NON_MEMBER, f"pdec at 1.9: {dec.status}")
    )

    # beyond the clique threshold: the refuter produces a rank-one violation
    pair_out = pw.pair_form(J, np.eye(n) - 2.1 * Adj)
    v_out = pw.is_copcp(pair_out)
    checks.append(
        (v_out.status is Verdict.NON_MEMBER, f"copcp at 2.1: {v_out.status}")
    )
    if v_out.status is Verdict.NON_MEMBER:
        vv, ww = v_out.certificate["v"], v_out.certificate["w"]
        val = pw.copcp_form_value(pair_out, vv, ww)
        checks.append((val < -1e-9, f"refutation value {val}"))
    # the clique construction pins the violation analytically
    u, w_ = sorted(G.edges)[0]
    e = np.zeros(n)
    e[u] = e[w_] = 1.0 / np.sqrt(2.0)
    clique_val = pw.copcp_form_value(pair_out, e, e)
    checks.append(
        (abs(clique_val - (-0.05)) <= 1e-9, f"clique value {clique_val}")
    )
    _emit(capsys, 5, checks)


def test_criterion_06_gap_scans(capsys):
    checks = []
    t0 = time.perf_counter()
    counts = {}
    records = {}
    for n in (5, 6, 7):
        lines = (DATA / f"connected{n}.g6").read_text().splitlines()
        recs = gr.scan_gap(lines)
        bad = [r for r in recs if r.error]
        checks.append((not bad, f"n={n}: {len(bad)} unreadable lines"))
        records[n] = [r for r in recs if r.gap]
        counts[n] = len(records[n])
    elapsed = time.perf_counter() - t0
    checks.append((counts[5] == 1, f"n=5 gaps {counts[5]}"))
    checks.append((counts[6] == 3, f"n=6 gaps {counts[6]}"))
    checks.append((counts[7] == 33, f"n=7 gaps {counts[7]}"))
    checks.append((elapsed < 1800.0, f"scan took {elapsed:.0f}s"))

    # the three six-vertex gap graphs match the catalog constructions by
    # degree sequence and sigma/omega fingerprint
    expected6 = []
    for name in ("tadpole51", "squarepath", "wheel6"):
        g = gr.catalog(name)
        expected6.append(
            (
                g.degree_sequence(),
                gr.sigma(g).value,
                gr.clique_number(g),
            )
        )
    found = list(records[6])
    matched = 0
    for deg, sig, om in expected6:
        for r in found:
            if (
                r.degree_sequence == deg
                and abs(r.sigma - sig) <= 1e-6
                and r.omega == om
            ):
                found.remove(r)
                matched += 1
                break
    checks.append((matched == 3, f"only {matched} of 3 fingerprints matched"))
    _emit(capsys, 6, checks)


def test_criterion_07_pairwise_chain(capsys):
    rng = np.random.default_rng(2024)
    checks = []

    contradictions = 0
    for _ in range(500):
        n = 5
        style = rng.integers(0, 4)
        if style == 0:
            A = np.abs(rng.normal(size=(n, n)))
            G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = G @ G.conj().T * 0.3
        elif style == 1:
            V = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
            Wm = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
            A = np.zeros((n, n))
            B = np.zeros((n, n), dtype=complex)
            for k in range(2):
                Aat, Bat = pw._atom(V[:, k], Wm[:, k])
                A = A + Aat
                B = B + Bat
        elif style == 2:
            N = np.abs(rng.normal(size=(n, n)))
            N = ring((N + N.T) / 2)
            A = N + np.diag(rng.uniform(0, 1, n))
            B = np.diag(np.diag(A)) - N + 0.1j * ring(rng.normal(size=(n, n)))
            B = (B + B.conj().T) / 2
        else:
            A = rng.normal(size=(n, n)) * 0.5 + 0.5
            B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = (B + B.conj().T) / 2
        d = np.abs(np.diag(B).real) + 0.1
        A[np.diag_indices(n)] = d
        B = B - np.diag(np.diag(B)) + np.diag(d)
        try:
            pair = pw.pair_form(A, B)
        except ValueError:
            continue
        in_pcp = pw.pcp_checks(pair, effort="fast").status is Verdict.MEMBER
        in_cld = pw.is_cldui_plus(pair)
        dec = pw.is_pdec(pair)
        cop = pw.is_copcp(pair, effort="fast")
        if in_pcp and not in_cld:
            contradictions += 1
        if in_cld and dec.status is Verdict.NON_MEMBER:
            contradictions += 1
        if dec.status is Verdict.MEMBER and cop.status is Verdict.NON_MEMBER:
            contradictions += 1
    checks.append((contradictions == 0, f"{contradictions} chain violations"))

    ok_reflect = 0
    for _ in range(50):
        N = np.abs(rng.normal(size=(5, 5)))
        N = ring((N + N.T) / 2)
        pair = pw.pair_form(N, -N)
        a = pw.is_copcp(pair).status is Verdict.MEMBER
        b = pw.is_pdec(pair).status is Verdict.MEMBER
        if a and b:
            ok_reflect += 1
    checks.append((ok_reflect == 50, f"reflection pairs: {ok_reflect}/50"))

    agree = 0
    for k in range(200):
        A = rng.normal(size=(5, 5))
        A = (A + A.T) / 2
        if k % 2 == 0:
            A = np.abs(A)
        v = pw.is_copcp(pw.pair_form(A, A), effort="fast")
        nonneg = bool(np.min(A) >= 0)
        if (v.status is Verdict.MEMBER) == nonneg and v.status is not Verdict.UNKNOWN:
            agree += 1
    checks.append((agree == 200, f"equal-pair agreement {agree}/200"))
    _emit(capsys, 7, checks)


def test_criterion_08_markov_flat_transition(capsys):
    checks = []
    for n in (3, 5, 8):
        x0 = 1.0 - 1.0 / n
        lo = qt.markov_choi_check((x0 - 1e-3) * np.ones((n, n)))
        hi = qt.markov_choi_check((x0 + 1e-3) * np.ones((n, n)))
        checks.append(
            (lo.status is Verdict.NON_MEMBER, f"n={n}: below not refuted")
        )
        if lo.status is Verdict.NON_MEMBER:
            A = (x0 - 1e-3) * np.ones((n, n))
            pair = pw.pair_form(
                A, np.diag(np.diag(A)) - ring(np.ones((n, n)))
            )
            val = pw.copcp_form_value(
                pair, lo.certificate["v"], lo.certificate["w"]
            )
            checks.append((val < 0, f"n={n}: refutation value {val}"))
        checks.append(
            (hi.status is Verdict.MEMBER, f"n={n}: above not certified")
        )
    _emit(capsys, 8, checks)


def test_criterion_09_extendibility(capsys):
    checks = []
    P = berman_matrix()
    ext2 = qt.dicke_extendibility(P, 2)
    checks.append((ext2.status is Verdict.MEMBER, "level-2 should hold"))
    cls = qt.dicke_class(P)
    sep = cls["separable"]
    checks.append((sep.status is Verdict.NON_MEMBER, "state not entangled?"))
    if sep.status is Verdict.NON_MEMBER:
        W = sep.certificate.get("witness")
        checks.append((W is not None, "no witness in certificate"))
        if W is not None:
            checks.append(
                (inner(W, P) < -1e-9, f"witness value {inner(W, P)}")
            )

    found, certs = qt.find_extendible_entangled(5, 3)
    re_ext = cones.in_kr_dual(found, 1)
    checks.append(
        (re_ext.status is Verdict.MEMBER, "extendibility does not re-verify")
    )
    Wcp = certs["cp_witness"]
    pairing = inner(found, Wcp)
    checks.append((pairing < -1e-9, f"witness pairing {pairing}"))
    re_cop = cones.is_cop(Wcp)
    checks.append(
        (re_cop.status is Verdict.MEMBER, "witness copositivity not re-certified")
    )
    _emit(capsys, 9, checks)


def test_criterion_10_solver_battery(capsys):
    rng = np.random.default_rng(77)
    checks = []

    def sym_basis(n, i, j):
        E = np.zeros((n, n))
        if i == j:
            E[i, i] = 1.0
        else:
            E[i, j] = E[j, i] = 0.5
        return E

    failures = []
    count = 0

    # 30 real extremal-eigenvalue problems
    for _ in range(30):
        n = int(rng.integers(2, 11))
        M = rng.normal(size=(n, n))
        M = (M + M.T) / 2
        p = SdpProblem()
        X = p.add_psd(n)
        t = p.add_free(1)
        for i in range(n):
            for j in range(i, n):
                p.add_eq(
                    M[i, j], (X, sym_basis(n, i, j)), (t, 1.0 if i == j else 0.0)
                )
        p.set_cost(t, -1.0)
        sol = solve_sdp(p)
        ref = float(np.linalg.eigvalsh(M)[0])
        count += 1
        if sol.status is not SdpStatus.OPTIMAL:
            failures.append(f"eig n={n}: {sol.status}")
        elif abs(-sol.primal_obj - ref) > 1e-7:
            failures.append(f"eig n={n}: err {abs(-sol.primal_obj - ref):.2e}")
        elif not verify_sdp(p, sol)["ok"]:
            failures.append(f"eig n={n}: certificate check failed")

    # 10 hermitian extremal-eigenvalue problems
    for _ in range(10):
        n = int(rng.integers(2, 7))
        H = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = (H + H.conj().T) / 2
        p = SdpProblem()
        X = p.add_hpsd(n)
        t = p.add_free(1)
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    E = np.zeros((n, n), complex)
                    E[i, i] = 1.0
                    p.add_eq(H[i, i].real, (X, E), (t, 1.0))
                else:
                    E = np.zeros((n, n), complex)
                    E[i, j] = E[j, i] = 0.5
                    p.add_eq(H[i, j].real, (X, E))
                    E = np.zeros((n, n), complex)
                    E[i, j] = -0.5j
                    E[j, i] = 0.5j
                    p.add_eq(H[i, j].imag, (X, E))
        p.set_cost(t, -1.0)
        sol = solve_sdp(p)
        ref = float(np.linalg.eigvalsh(H)[0])
        count += 1
        if sol.status is not SdpStatus.OPTIMAL:
            failures.append(f"herm n={n}: {sol.status}")
        elif abs(-sol.primal_obj - ref) > 1e-7:
            failures.append(f"herm n={n}: err {abs(-sol.primal_obj - ref):.2e}")
        elif not verify_sdp(p, sol)["ok"]:
            failures.append(f"herm n={n}: certificate check failed")

    # 10 sum-of-k-smallest-eigenvalues problems
    for _ in range(10):
        n = int(rng.integers(4, 8))
        k = int(rng.integers(1, 4))
        M = rng.normal(size=(n, n))
        M = (M + M.T) / 2
        p = SdpProblem()
        X = p.add_psd(n)
        Y = p.add_psd(n)
        for i in range(n):
            for j in range(i, n):
                p.add_eq(
                    1.0 if i == j else 0.0,
                    (X, sym_basis(n, i, j)),
                    (Y, sym_basis(n, i, j)),
                )
        p.add_eq(float(k), (X, np.eye(n)))
        p.set_cost(X, M)
        sol = solve_sdp(p)
        ref = float(np.sum(np.linalg.eigvalsh(M)[:k]))
        count += 1
        if sol.status is not SdpStatus.OPTIMAL:
            failures.append(f"fantope n={n} k={k}: {sol.status}")
        elif abs(sol.primal_obj - ref) > 1e-7:
            failures.append(
                f"fantope n={n} k={k}: err {abs(sol.primal_obj - ref):.2e}"
            )
        elif not verify_sdp(p, sol)["ok"]:
            failures.append(f"fantope n={n} k={k}: certificate check failed")

    checks.append((count == 50, f"battery ran {count} problems"))
    checks.append((not failures, "; ".join(failures[:5])))
    _emit(capsys, 10, checks)
