
import pytest
from hypothesis import given, strategies as st

from icubes.errors import (
    HypothesisViolated,
    NotOrthogonal,
    NotPrimitive,
    PreconditionFailed,
    UnequalNorms,
    ZeroColumn,
)
from icubes.explore import PAPER_10X10
from icubes.icube import (
    extend3,
    extend3_with_snf,
    extend4,
    extend4_with_snf,
    extend6_real,
    generate_random_icube,
    necessary_conditions,
    snf4_hypothesis,
    snf_pairing_check,
    verify,
)
from icubes.lattice import det, from_columns, mat_mul, snf
from icubes.ring import GaussInt, Ring, gauss_factor, is_absolute_square, norm, normalize

from strategies import gauss


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def test_verify():
    ic = verify(_identity(4))
    assert ic.lam == 1 and ic.n == ic.k == 4
    assert verify(PAPER_10X10).lam == 9
    with pytest.raises(NotOrthogonal) as err:
        verify([[1, 1], [0, 0]])
    assert (err.value.i, err.value.j) == (0, 1)
    with pytest.raises(UnequalNorms):
        verify([[1, 0], [0, 2]])
    with pytest.raises(ZeroColumn):
        verify([[1, 0], [0, 0]])


def test_necessary_conditions_examples():
    r = necessary_conditions([1] * 9)
    assert r.obstructed and r.reason == "all-odd-coordinates"
    assert not necessary_conditions([3] + [0] * 8).obstructed
    r = necessary_conditions([1] * 5, Ring.ZI)
    assert r.obstructed and r.reason == "one-plus-i-indivisible"
    assert necessary_conditions([1, 1, 0]).reason == "odd-n-nonsquare"
    assert necessary_conditions([1, 1, 1, 0, 0, 0]).reason == "4k+2-not-two-squares"
    assert necessary_conditions([1, GaussInt(1, 1), 0], Ring.ZI).reason == "odd-n-nonsquare"


def _contains(ic, cols):
    return ic.columns()[: len(cols)] == [list(c) for c in cols]


def test_extend3_examples():
    ic = extend3([1, 2, 2])
    assert ic.lam == 9 and _contains(ic, [[1, 2, 2]])
    ic = extend3([3, 0, 0])
    assert ic.lam == 9
    ic = extend3([GaussInt(1, 1), 1, 1], Ring.ZI)
    assert ic.lam == 4
    with pytest.raises(PreconditionFailed):
        extend3([1, 1, 1])


def test_extend4_examples():
    ic = extend4([1, 1, 1, 1])
    assert ic.columns()[1] == [-1, 1, -1, 1]
    ic = extend4([GaussInt(1, 2), GaussInt(0, 1), 0, 3], Ring.ZI)
    assert ic.lam == 15


def test_extend6_examples():
    ic = extend6_real([1, 0, 0, 0, 0, 0])
    assert ic.lam == 1
    ic = extend6_real([2, 0, 3, 0, 0, 0])
    assert ic.lam == 13 and ic.columns()[0] == [2, 0, 3, 0, 0, 0]
    with pytest.raises(PreconditionFailed):
        extend6_real([4, 2, 1, 0, 0, 0])


@given(st.lists(st.integers(-12, 12), min_size=3, max_size=3).filter(
    lambda v: any(v) and is_absolute_square(sum(x * x for x in v), Ring.Z)))
def test_extend3_z_property(v):
    ic = extend3(v)
    assert _contains(ic, [v])
    two = extend3(from_columns(ic.columns()[:2]))
    assert _contains(two, ic.columns()[:2])


@given(st.lists(gauss(5), min_size=3, max_size=3).filter(
    lambda v: any(v) and is_absolute_square(sum(norm(x) for x in v), Ring.ZI)))
def test_extend3_zi_property(v):
    ic = extend3(v, Ring.ZI)
    assert _contains(ic, [v])
    two = extend3(from_columns(ic.columns()[:2]), Ring.ZI)
    assert _contains(two, ic.columns()[:2])


@given(st.sampled_from([Ring.Z, Ring.ZI]), st.integers(0, 10**6), st.integers(1, 3))
def test_extend4_keeps_input_columns(ring, seed, k):
    ic = generate_random_icube(ring, 4, seed, size=4)
    cols = ic.columns()[:k]
    out = extend4(from_columns(cols), ring)
    assert _contains(out, cols)


@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6).filter(any))
def test_extend6_property(v):
    lam = sum(x * x for x in v)
    if is_absolute_square(lam, Ring.ZI):
        assert _contains(extend6_real(v), [v])
    else:
        with pytest.raises(PreconditionFailed):
            extend6_real(v)
        assert necessary_conditions(v).obstructed


def test_extend3_with_snf_examples():
    ic = extend3_with_snf([1, 0, 0], 1)
    assert snf(ic.rows()).diag == (1, 1, 1)
    a1 = [GaussInt(2, 0), GaussInt(1, 0), GaussInt(0, 0)]
    diags = []
    for alpha in (GaussInt(2, 1), GaussInt(2, -1)):
        ic = extend3_with_snf(a1, alpha, Ring.ZI)
        diags.append(snf(ic.rows(), Ring.ZI).diag)
        assert det(ic.rows()) == 5 * alpha
    assert diags[0] != diags[1]
    assert diags[0][1] == normalize(GaussInt(2, 1)) and diags[1][1] == normalize(GaussInt(2, -1))
    with pytest.raises(NotPrimitive):
        extend3_with_snf([2, 4, 4], 6)


def _divisors(z):
    out = [GaussInt(1, 0)]
    for p, e in gauss_factor(z).factors:
        out = [d * p ** k for d in out for k in range(e + 1)]
    return out


def test_extend4_with_snf_norm5():
    ell = GaussInt(2, 1)
    a1 = [GaussInt(2, 0), GaussInt(1, 0), GaussInt(0, 0), GaussInt(0, 0)]
    a2 = [GaussInt(0, 0), GaussInt(0, 0), GaussInt(0, 0), ell]
    A0 = from_columns([a1, a2])
    assert normalize(snf4_hypothesis(A0)) == normalize(ell)
    one = extend4_with_snf(A0, 1)
    assert snf(one.rows(), Ring.ZI).diag == (1, 1, 5, 5)
    two = extend4_with_snf(A0, ell)
    assert snf(two.rows(), Ring.ZI).diag[1] == normalize(ell)


def test_extend4_with_snf_hypothesis_violation():
    # d2 divisible by the inert prime 3
    a1 = [GaussInt(3, 0), 0, 0, 0]
    a2 = [0, GaussInt(3, 0), 0, 0]
    A0 = from_columns([[GaussInt(1, 0), GaussInt(2, 0), GaussInt(2, 0), GaussInt(0, 0)],
                       [GaussInt(0, 0), GaussInt(0, 0), GaussInt(0, 0), GaussInt(3, 0)]])
    with pytest.raises(HypothesisViolated):
        extend4_with_snf(A0, 1)
    with pytest.raises(HypothesisViolated):
        extend4_with_snf(from_columns([a1, a2]), 1)


@given(st.integers(0, 10**6))
def test_extend4_with_snf_property(seed):
    ic = generate_random_icube(Ring.ZI, 4, seed, size=3)
    A0 = from_columns(ic.columns()[:2])
    try:
        d2 = snf4_hypothesis(A0)
    except HypothesisViolated:
        return
    for alpha in _divisors(d2):
        out = extend4_with_snf(A0, alpha)
        assert _contains(out, ic.columns()[:2])


def test_snf_pairing_examples():
    assert snf_pairing_check(verify(_identity(3)))[0]
    ok, diag = snf_pairing_check(extend3([1, 2, 2]))
    assert ok and diag == (1, 3, 9)


@given(st.sampled_from([Ring.Z, Ring.ZI]), st.integers(1, 8), st.integers(0, 10**6))
def test_generator_outputs_icubes_and_pairing_holds(ring, n, seed):
    ic = generate_random_icube(ring, n, seed)
    assert ic == generate_random_icube(ring, n, seed)
    assert ic.n == ic.k == n
    assert snf_pairing_check(ic)[0]


def test_products_multiply_norms():
    a = generate_random_icube(Ring.ZI, 4, 1)
    b = generate_random_icube(Ring.ZI, 4, 2)
    assert verify(mat_mul(a.rows(), b.rows()), Ring.ZI).lam == a.lam * b.lam


def test_zero_extension_inputs_left_alone():
    full = extend3([1, 2, 2])
    assert extend3(full.rows()) == full
