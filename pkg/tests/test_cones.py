import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conekit import cones
from conekit.cones import (
    Effort,
    SizeLimit,
    Verdict,
    berman_matrix,
    classify_elementary,
    cop_refute,
    cp_factor,
    horn_matrix,
    in_kr_dual,
    is_cop,
    is_cp,
    is_kr,
    is_spn,
    project_simplex,
    verify_gram,
)
from conekit.linalg import inner


def rand_psd(rng, n, k=None):
    G = rng.normal(size=(n, k or n))
    return G @ G.T


def rand_nonneg_sym(rng, n):
    E = np.abs(rng.normal(size=(n, n)))
    return (E + E.T) / 2


# ---------------------------------------------------------------------------
# reference matrices and elementary classification


def test_reference_matrices_shapes():
    H = horn_matrix()
    B = berman_matrix()
    assert H.shape == (5, 5) and np.allclose(H, H.T)
    assert B.shape == (5, 5) and np.allclose(B, B.T)
    # H has -1 exactly on a 5-cycle, +1 elsewhere
    assert np.sum(H < 0) == 10
    assert np.allclose(np.abs(H), 1.0)
    # B is doubly nonnegative
    assert np.min(B) >= 0
    assert np.linalg.eigvalsh(B)[0] > -1e-12


def test_classify_elementary_profiles():
    rng = np.random.default_rng(0)
    P = rand_psd(rng, 4)
    prof = classify_elementary(P)
    assert prof.in_psd
    assert prof.min_eig > -1e-10
    E = rand_nonneg_sym(rng, 4)
    prof2 = classify_elementary(E - 10 * np.eye(4))
    assert prof2.in_ewp is False or prof2.in_psd is False
    prof3 = classify_elementary(berman_matrix())
    assert prof3.in_ewp and prof3.in_psd and prof3.in_dnn


def test_effort_presets():
    assert Effort.of("fast").max_level == 1
    assert Effort.of("default").max_level == 2
    assert Effort.of("thorough").refute_starts == 256
    e = Effort(name="x", max_level=0)
    assert Effort.of(e) is e
    with pytest.raises(ValueError):
        Effort.of("bogus")


# ---------------------------------------------------------------------------
# simplex tooling


def test_project_simplex_properties():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rng.normal(size=6) * 3
        x = project_simplex(v)
        assert np.min(x) >= -1e-15
        assert np.sum(x) == pytest.approx(1.0)
        # projection optimality against random feasible points
        y = rng.dirichlet(np.ones(6))
        assert np.linalg.norm(v - x) <= np.linalg.norm(v - y) + 1e-12


def test_cop_refute_face_embedding():
    # the minimizer can live on a strict face; the returned vector must be
    # expressed in the ambient coordinates and reproduce the value
    M = np.eye(5)
    M[0, 1] = M[1, 0] = -4.0
    val, x = cop_refute(M)
    assert x.shape == (5,)
    assert val == pytest.approx(float(x @ M @ x))
    assert val < -1.0
    assert np.sum(x[2:]) == pytest.approx(0.0, abs=1e-9)


def test_cop_refute_on_positive_definite():
    val, x = cop_refute(np.eye(4))
    assert val >= 0.25 - 1e-9  # simplex minimum of x^T x at the barycenter
    assert val == pytest.approx(float(x @ np.eye(4) @ x))


# ---------------------------------------------------------------------------
# SPN


def test_spn_membership_split():
    rng = np.random.default_rng(2)
    M = rand_psd(rng, 5) + rand_nonneg_sym(rng, 5)
    v = is_spn(M)
    assert v.status is Verdict.MEMBER
    P, E = v.certificate["P"], v.certificate["E"]
    assert np.linalg.eigvalsh(P)[0] > -1e-7
    assert np.min(E) > -1e-9
    assert np.max(np.abs(P + E - v.certificate["shift"] * np.eye(5) - M)) < 1e-6


def test_spn_refutation_of_cycle_matrix():
    v = is_spn(horn_matrix())
    assert v.status is Verdict.NON_MEMBER
    assert v.value == pytest.approx(np.sqrt(5.0) - 2.0, abs=1e-9)
    X = v.certificate["X"]
    # the witness is doubly nonnegative with trace one and pairs negatively
    assert np.min(X) >= -1e-12
    assert np.linalg.eigvalsh(X)[0] > -1e-7
    assert np.trace(X) == pytest.approx(1.0)
    assert v.certificate["pairing"] == pytest.approx(-0.2360679774997876, abs=1e-8)
    assert inner(X, horn_matrix()) == pytest.approx(v.certificate["pairing"])


def test_spn_negative_eigenvalue_matrix_rejected():
    v = is_spn(-np.eye(3))
    assert v.status is Verdict.NON_MEMBER


# ---------------------------------------------------------------------------
# hierarchy levels


def test_level_zero_agrees_with_spn():
    rng = np.random.default_rng(3)
    for _ in range(6):
        M = rng.normal(size=(4, 4))
        M = (M + M.T) / 2
        assert is_kr(M, 0).status == is_spn(M).status


def test_cycle_matrix_enters_at_level_one():
    H = horn_matrix()
    assert is_kr(H, 0).status is Verdict.NON_MEMBER
    v1 = is_kr(H, 1)
    assert v1.status is Verdict.MEMBER
    assert verify_gram(5, 1, H, v1.certificate)
    # monotonicity along the hierarchy
    assert is_kr(H, 2).status is Verdict.MEMBER


def test_gram_certificate_detects_tampering():
    H = horn_matrix()
    cert = is_kr(H, 1).certificate
    bad = {
        "blocks": [dict(b) for b in cert["blocks"]],
        "singles": cert["singles"],
        "shift": cert["shift"],
    }
    bad["blocks"][0] = dict(bad["blocks"][0])
    G = np.array(bad["blocks"][0]["G"])
    G[0, 0] += 0.5
    bad["blocks"][0]["G"] = G
    assert not verify_gram(5, 1, H, bad)


def test_level_moment_refutation_is_consistent():
    v = is_kr(horn_matrix(), 0)
    assert v.status is Verdict.NON_MEMBER
    assert v.certificate["pairing"] < -1e-6
    mb = v.certificate["moment_blocks"]
    for blk in mb["blocks"]:
        assert np.linalg.eigvalsh(blk)[0] > -1e-6
    if mb["singles"].size:
        assert np.min(mb["singles"]) > -1e-6


def test_level_guards():
    with pytest.raises(ValueError):
        is_kr(np.eye(3), 3)
    with pytest.raises(SizeLimit):
        is_kr(np.eye(9), 2)
    with pytest.raises(SizeLimit):
        is_kr(np.eye(17), 0)


# ---------------------------------------------------------------------------
# copositivity front end


def test_cop_member_levels():
    v = is_cop(horn_matrix())
    assert v.status is Verdict.MEMBER
    assert v.level == 1
    w = is_cop(np.eye(4) + np.ones((4, 4)))
    assert w.status is Verdict.MEMBER
    assert w.level == 0


def test_cop_refutation_explicit_vector():
    v = is_cop(-np.eye(4))
    assert v.status is Verdict.NON_MEMBER
    x = v.certificate["vector"]
    assert np.min(x) >= 0
    assert v.value == pytest.approx(-1.0, abs=1e-9)
    assert float(x @ (-np.eye(4)) @ x) == pytest.approx(v.value)


def test_cop_entrywise_nonneg_is_level_zero():
    rng = np.random.default_rng(4)
    M = rand_nonneg_sym(rng, 5)
    v = is_cop(M)
    assert v.status is Verdict.MEMBER
    assert v.level == 0


# ---------------------------------------------------------------------------
# dual hierarchy


def test_dual_membership_reconstruction():
    v = in_kr_dual(berman_matrix(), 0)
    assert v.status is Verdict.MEMBER
    assert v.certificate["y0"] >= -1e-9
    assert v.certificate["recon_residual"] < 1e-5
    for blk in v.certificate["moment_blocks"]["blocks"]:
        assert np.linalg.eigvalsh(blk)[0] > -1e-6


def test_dual_separation_values():
    d1 = in_kr_dual(berman_matrix(), 1)
    assert d1.status is Verdict.NON_MEMBER
    assert d1.value == pytest.approx(-0.011600590846556, abs=1e-9)
    M = d1.certificate["M"]
    # the separator is a certified level-1 matrix pairing negatively
    assert d1.certificate["pairing"] == pytest.approx(d1.value, abs=1e-7)
    assert is_kr(M, 1).status is Verdict.MEMBER
    d2 = in_kr_dual(berman_matrix(), 2)
    assert d2.status is Verdict.NON_MEMBER
    assert d2.value == pytest.approx(-0.011644070900366, abs=1e-7)


def test_dual_of_factorizable_matrix_all_levels():
    rng = np.random.default_rng(5)
    F = np.abs(rng.normal(size=(5, 7)))
    P = F @ F.T
    for r in (0, 1):
        assert in_kr_dual(P, r).status is Verdict.MEMBER


def test_dual_guards():
    with pytest.raises(ValueError):
        in_kr_dual(np.eye(3), 3)
    with pytest.raises(SizeLimit):
        in_kr_dual(np.eye(9), 2)


def test_dual_pairs_nonnegatively_with_certified_members():
    # soundness across the duality bracket: a dual member must pair >= 0
    # with every certified primal member
    rng = np.random.default_rng(6)
    F = np.abs(rng.normal(size=(5, 6)))
    P = F @ F.T
    assert in_kr_dual(P, 1).status is Verdict.MEMBER
    H = horn_matrix()
    assert is_kr(H, 1).status is Verdict.MEMBER
    assert inner(P, H) >= -1e-9


# ---------------------------------------------------------------------------
# complete positivity


def test_cp_factorization_member():
    rng = np.random.default_rng(7)
    F = np.abs(rng.normal(size=(5, 8)))
    M = F @ F.T
    v = is_cp(M)
    assert v.status is Verdict.MEMBER
    B = v.certificate["factor"]
    assert np.min(B) >= -1e-9
    assert np.max(np.abs(B @ B.T - M)) < 1e-5 * max(1.0, np.max(np.abs(M)))
    assert v.certificate["residual"] == pytest.approx(np.max(np.abs(B @ B.T - M)))


def test_cp_low_dimension_reduces_to_dnn():
    rng = np.random.default_rng(8)
    F = np.abs(rng.normal(size=(4, 6)))
    v = is_cp(F @ F.T)
    assert v.status is Verdict.MEMBER
    assert "route" in v.certificate or "factor" in v.certificate


def test_cp_rejects_non_psd_and_negative_entries():
    bad = np.eye(3)
    bad[0, 1] = bad[1, 0] = -0.5
    v = is_cp(bad)
    assert v.status is Verdict.NON_MEMBER
    assert v.certificate["kind"] == "sign-violation"
    w = is_cp(np.diag([1.0, -1.0, 1.0]))
    assert w.status is Verdict.NON_MEMBER
    assert w.certificate["kind"] == "psd-violation"


def test_cp_separates_doubly_nonnegative_non_member():
    v = is_cp(berman_matrix())
    assert v.status is Verdict.NON_MEMBER
    assert v.certificate["kind"] == "cycle-scaled"
    assert v.value == pytest.approx(-1.0 / 195.0, abs=1e-9)
    W = v.certificate["witness"]
    # the witness is copositive (scaled cycle form) and pairs negatively
    assert inner(W, berman_matrix()) == pytest.approx(v.value, abs=1e-12)
    assert is_cop(W).status is Verdict.MEMBER


def test_cp_witness_value_against_factored_matrices():
    rng = np.random.default_rng(9)
    v = is_cp(berman_matrix())
    W = v.certificate["witness"]
    for _ in range(10):
        F = np.abs(rng.normal(size=(5, 5)))
        assert inner(W, F @ F.T) >= -1e-10


def test_cp_factor_inner_dimension():
    rng = np.random.default_rng(10)
    F = np.abs(rng.normal(size=(4, 4)))
    M = F @ F.T
    B = cp_factor(M)
    assert B is not None
    assert B.shape[0] == 4 and B.shape[1] <= 4 * 5 // 2


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_chain_cp_implies_dnn_implies_spn(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 6))
    F = np.abs(rng.normal(size=(n, n + 2)))
    M = F @ F.T
    prof = classify_elementary(M)
    assert prof.in_dnn
    assert is_spn(M).status is Verdict.MEMBER
    assert is_kr(M, 0).status is Verdict.MEMBER


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_cop_never_contradicts_refuter(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    M = rng.normal(size=(n, n))
    M = (M + M.T) / 2
    v = is_cop(M, effort="fast", seed=seed)
    if v.status is Verdict.NON_MEMBER:
        x = v.certificate["vector"]
        assert np.min(x) >= 0
        assert float(x @ M @ x) < 0
    elif v.status is Verdict.MEMBER:
        val, x = cop_refute(M, effort="fast", seed=seed + 1)
        assert val >= -1e-7 * max(1.0, np.max(np.abs(M)))
