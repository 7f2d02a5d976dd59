import json
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nppt_lab.linalg import eigh, partial_transpose, schmidt_decompose
from nppt_lab.states import (
    DiagonalInvariantPT,
    SamplerExhausted,
    WernerParams,
    WernerRegion,
    classify_werner,
    cyclic_phase,
    family_gauge_transform,
    family_is_nppt,
    family_is_valid_state,
    family_min_eigenvalue,
    family_pt,
    family_sample,
    family_two_positive,
    max_entangled,
    werner_pt,
    werner_state,
)
from nppt_lab.twirl import diagonal_twirl


def test_max_entangled():
    v = max_entangled(2)
    assert np.allclose(v.vector, np.array([1, 0, 0, 1]) / np.sqrt(2))
    s, _, _ = schmidt_decompose(max_entangled(3))
    assert np.allclose(s, 1 / np.sqrt(3))
    assert np.vdot(v.vector, v.vector).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        max_entangled(1)


def test_werner_params_range():
    with pytest.raises(ValueError):
        WernerParams(3, 1.01)
    with pytest.raises(ValueError):
        WernerParams(1, 0.2)


def test_werner_pt_entries():
    d, a = 4, 0.3
    m = werner_pt(WernerParams(d, a)).matrix
    for r in range(d * d):
        for c in range(d * d):
            i, j = divmod(r, d)
            k, l = divmod(c, d)
            if r == c:
                expected = 1 - a if i == j else 1.0
            elif i == j and k == l:
                expected = -a
            else:
                expected = 0.0
            assert m[r, c] == expected
    assert np.array_equal(werner_pt(WernerParams(3, 0.0)).matrix, np.eye(9))


def test_werner_pt_boundary_and_negative_block():
    assert eigh(werner_pt(WernerParams(3, 1 / 3)))[0][0] == pytest.approx(0.0, abs=1e-12)
    assert eigh(werner_pt(WernerParams(3, 0.5)))[0][0] == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("alpha,expected", [(1.0, {0: 6, 2: 3}), (-1.0, {0: 3, 2: 6})])
def test_werner_state_spectrum_extremes(alpha, expected):
    v = sympy.zeros(9, 9)
    for k in range(3):
        for l in range(3):
            v[l * 3 + k, k * 3 + l] = 1
    exact = (sympy.eye(9) - sympy.Integer(int(alpha)) * v).eigenvals()
    assert {int(k): m for k, m in exact.items()} == expected
    vals = eigh(werner_state(WernerParams(3, alpha)))[0]
    want = sorted(k for k, m in expected.items() for _ in range(m))
    assert np.allclose(vals, want, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("alpha", [-0.7, 0.0, 0.25, 0.9])
def test_werner_state_construction_and_spectrum(d, alpha):
    p = WernerParams(d, alpha)
    rho = werner_state(p)
    assert np.array_equal(rho.matrix, partial_transpose(werner_pt(p)).matrix)
    vals = eigh(rho)[0]
    sym, anti = d * (d + 1) // 2, d * (d - 1) // 2
    want = sorted([1 - alpha] * sym + [1 + alpha] * anti)
    assert np.allclose(vals, want, atol=1e-10)
    assert vals[0] >= -1e-12


def test_classify_examples():
    assert classify_werner(WernerParams(3, 0.2)) is WernerRegion.PPT_SEPARABLE
    assert classify_werner(WernerParams(3, 0.5)) is WernerRegion.NPPT_ONE_COPY_UNDISTILLABLE
    assert classify_werner(WernerParams(3, 0.6)) is WernerRegion.NPPT_ONE_COPY_DISTILLABLE
    for d in (3, 4, 5):
        assert classify_werner(WernerParams(d, 1 / d)) is WernerRegion.PPT_SEPARABLE
        assert eigh(werner_pt(WernerParams(d, 1 / d)))[0][0] >= -1e-12


@settings(max_examples=200, deadline=None)
@given(num=st.integers(-1000, 1000), d=st.integers(2, 7))
def test_classify_matches_exact_intervals(num, d):
    a = Fraction(num, 1000)
    if a <= Fraction(1, d):
        want = WernerRegion.PPT_SEPARABLE
    elif a <= Fraction(1, 2):
        want = WernerRegion.NPPT_ONE_COPY_UNDISTILLABLE
    else:
        want = WernerRegion.NPPT_ONE_COPY_DISTILLABLE
    assert classify_werner(WernerParams(d, num / 1000)) is want


def displayed_matrix(rho, z12, z23, z31):
    """The 3x3 family written out entry by entry."""
    m = np.zeros((9, 9), dtype=complex)
    for r, (i, j) in enumerate((i, j) for i in range(3) for j in range(3)):
        m[r, r] = rho[i][j]
    m[0, 4], m[0, 8] = -z12, -np.conj(z31)
    m[4, 0], m[4, 8] = -np.conj(z12), -z23
    m[8, 0], m[8, 4] = -z31, -np.conj(z23)
    return m


def test_family_pt_reproduces_displayed_layout():
    rho = [[0.5, 0.1, 0.2], [0.3, 0.6, 0.4], [0.7, 0.8, 0.9]]
    z12, z23, z31 = 0.1 + 0.2j, -0.05j, 0.3 - 0.1j
    fp = DiagonalInvariantPT.from_upper(rho, {(0, 1): z12, (1, 2): z23, (2, 0): z31})
    assert np.array_equal(family_pt(fp).matrix, displayed_matrix(rho, z12, z23, z31))


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("alpha", [-0.5, 0.3, 0.45, 1.0])
def test_werner_embedding(d, alpha):
    got = family_pt(DiagonalInvariantPT.werner(d, alpha)).matrix
    assert np.array_equal(got, werner_pt(WernerParams(d, alpha)).matrix)


def test_family_identity_and_twirl_fixed_point():
    fp = DiagonalInvariantPT(np.ones((3, 3)), np.zeros((3, 3)))
    assert np.array_equal(family_pt(fp).matrix, np.eye(9))
    for k in range(20):
        fp = family_sample(k, (), d=4)
        w = family_pt(fp)
        assert np.array_equal(diagonal_twirl(w).matrix, w.matrix)


def test_validity_examples():
    ok, bad = family_is_valid_state(DiagonalInvariantPT.werner(3, 0.4))
    assert ok and bad == []
    rho = np.ones((3, 3))
    rho[0, 1] = 0.0
    ok, bad = family_is_valid_state(DiagonalInvariantPT.from_upper(rho, {(0, 1): 0.1}))
    assert not ok
    assert bad == ["rho_12*rho_21 >= |z_12|^2"]


@pytest.mark.parametrize("d", [3, 4])
def test_validity_agrees_with_eigensolver(d):
    rng = np.random.default_rng(d)
    for k in range(1000):
        fp = family_sample(rng, () if k % 2 else ("valid",), d=d)
        ok, _ = family_is_valid_state(fp)
        assert ok == (family_min_eigenvalue(fp) >= -1e-10)


def test_nppt_examples():
    assert family_is_nppt(DiagonalInvariantPT.werner(3, 0.4))
    assert np.linalg.eigvalsh(DiagonalInvariantPT.werner(3, 0.4).corr_block)[0] == pytest.approx(-0.2)
    assert not family_is_nppt(DiagonalInvariantPT(np.ones((3, 3)), np.zeros((3, 3))))
    assert not family_is_nppt(DiagonalInvariantPT.werner(3, 1 / 3))


def test_two_positive_examples():
    assert family_two_positive(DiagonalInvariantPT.werner(3, 0.5))
    assert not family_two_positive(DiagonalInvariantPT.werner(3, 0.6))
    assert family_two_positive(DiagonalInvariantPT(np.ones((3, 3)), np.zeros((3, 3))))


def test_gauge_examples():
    fp = DiagonalInvariantPT.from_upper(np.ones((3, 3)), {(0, 1): 1j, (1, 2): 1, (2, 0): 1})
    assert fp.equals(family_gauge_transform(fp, [0, 0, 0]))
    g = family_gauge_transform(fp, [np.pi / 2, 0, 0])
    assert g.z[0, 1] == pytest.approx(-1.0, abs=1e-15)
    assert cyclic_phase(g) == pytest.approx(cyclic_phase(fp), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1),
       phases=st.lists(st.floats(0, 2 * np.pi), min_size=3, max_size=3))
def test_gauge_invariants(seed, phases):
    fp = family_sample(seed, ("valid",), d=3)
    g = family_gauge_transform(fp, phases)
    assert np.allclose(np.abs(g.z), np.abs(fp.z), atol=1e-12, rtol=0)
    assert np.array_equal(g.rho, fp.rho)
    diff = cyclic_phase(g) - cyclic_phase(fp)
    assert abs((diff + np.pi) % (2 * np.pi) - np.pi) <= 1e-10
    assert family_is_valid_state(g)[0] == family_is_valid_state(fp)[0]
    assert family_is_nppt(g) == family_is_nppt(fp)
    assert family_two_positive(g) == family_two_positive(fp)


def test_sampler_constraints_and_determinism():
    for k in range(1000):
        fp = family_sample(k, ("valid",))
        assert family_is_valid_state(fp)[0]
        assert fp.trace() == pytest.approx(1.0, abs=1e-12)
    for k in range(200):
        fp = family_sample(k, ("valid", "nppt", "two_positive"))
        assert np.linalg.eigvalsh(fp.corr_block)[0] < 0
        r = np.diag(fp.rho)
        assert all(r[i] * r[j] >= abs(fp.z[i, j]) ** 2 for i in range(3) for j in range(i + 1, 3))
        assert family_is_valid_state(fp)[0]
    assert family_sample(7, ("valid", "nppt")).equals(family_sample(7, ("valid", "nppt")))


def test_sampler_failures():
    with pytest.raises(SamplerExhausted):
        family_sample(0, ("nppt",), z_scale=0.0)
    with pytest.raises(SamplerExhausted):
        family_sample(0, ("nppt", "two_positive"), d=2)
    with pytest.raises(SamplerExhausted):
        family_sample(0, ("nppt",), z_scale=1e-9, budget=50)
    with pytest.raises(ValueError):
        family_sample(0, ("psd",))


def test_z_forced_zero_is_ppt():
    for k in range(50):
        assert not family_is_nppt(family_sample(k, ("valid",), z_scale=0.0))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 5))
def test_json_round_trip_bit_exact(seed, d):
    fp = family_sample(seed, (), d=d)
    text = json.dumps(fp.to_json())
    back = DiagonalInvariantPT.from_json(text)
    assert back.equals(fp)
    assert json.loads(text)["d"] == d
