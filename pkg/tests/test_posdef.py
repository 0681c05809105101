import random
from fractions import Fraction as F

import pytest

from shadow_obstruct.exactcore import PsdStatus, SymRatMatrix, det, psd_check
from shadow_obstruct.intervals import PrecisionInsufficient, ln_enclosure
from shadow_obstruct.posdef import (
    ExpSumFunction,
    GridSearch,
    certify_not_kpsd,
    f_eps_paper,
    find_epsilon_kpd,
    gram_matrix,
    hankel_matrix,
    hankel_pd_certified,
    moment_psd,
)

PAPER_ENTRIES = {
    (0, 0): F(39956170693955, 665127936),
    (0, 1): F(715125242123209, 3990767616),
    (0, 2): F(12823220129727323, 23944605696),
    (1, 1): F(12823220129727323, 23944605696),
    (1, 2): F(230229525738486289, 143667634176),
    (2, 2): F(4137070068201557555, 862005805056),
}
PAPER_DET = F(-2277541160576348197, 107750725632)


def test_f_eps_gram_matches_printed_entries():
    sample = gram_matrix(f_eps_paper(), (5, 6, 7))
    assert sample.exact
    for (i, j), v in PAPER_ENTRIES.items():
        assert sample.matrix[i, j] == v
    assert det(sample.matrix) == PAPER_DET
    assert psd_check(sample.matrix).status == PsdStatus.INDEFINITE


def test_constant_function_gram():
    f = ExpSumFunction((), constant=F(1))
    g = gram_matrix(f, (0, 3, 7))
    assert all(g.matrix[i, j] == 1 for i in range(3) for j in range(3))
    assert psd_check(g.matrix).is_psd


def test_exponential_gram_is_rank_one():
    f = ExpSumFunction.power(2)
    g = gram_matrix(f, (0, 1))
    assert g.matrix.entries == ((F(1), F(2)), (F(2), F(4)))
    v = psd_check(g.matrix)
    assert v.status == PsdStatus.POSITIVE_SEMIDEFINITE


def test_symmetric_family_is_even_at_integers():
    f = f_eps_paper()
    for x in range(-6, 7):
        assert f.value_at_int(x) == f.value_at_int(-x)
    pts = (1, 2, 4)
    neg = tuple(-p for p in pts)
    assert gram_matrix(f, pts).matrix.entries == gram_matrix(f, neg).matrix.entries


def test_gram_additivity_and_convexity():
    f1 = f_eps_paper()
    f2 = ExpSumFunction.power(2)
    pts = (0, 1, 2)
    gsum = gram_matrix(f1 + f2, pts).matrix
    g1 = gram_matrix(f1, pts).matrix
    g2 = gram_matrix(f2, pts).matrix
    assert gsum.entries == g1.add(g2).entries
    # convex combinations of Gram-PSD functions stay Gram-PSD at the points
    mix = f2.scale(F(1, 3)) + ExpSumFunction.power(3).scale(F(2, 3))
    assert psd_check(gram_matrix(mix, pts).matrix).is_psd


def test_atom_rank_one_psd_property():
    rng = random.Random(2)
    for _ in range(15):
        base = F(rng.randint(2, 9), rng.randint(1, 3))
        if base == 1:
            continue
        f = ExpSumFunction.power(base, coeff=F(rng.randint(1, 5)))
        pts = rng.sample(range(-5, 9), rng.randint(1, 4))
        g = gram_matrix(f, pts)
        assert psd_check(g.matrix).is_psd


def test_certify_not_kpsd_finds_paper_points():
    f = f_eps_paper()
    wit = certify_not_kpsd(f, 2, GridSearch(start=5, stop=10))
    assert wit is not None
    assert wit.points == (5, 6, 7)
    assert wit.w == (F(6), F(-5), F(1))
    assert wit.value < 0
    M = gram_matrix(f, wit.points).matrix
    assert M.quadratic_form(wit.w) == wit.value
    assert psd_check(M).status == PsdStatus.INDEFINITE


def test_certify_not_kpsd_default_grid():
    wit = certify_not_kpsd(f_eps_paper(), 2)
    assert wit is not None
    assert wit.points == (3, 4, 5)
    assert wit.value == F(-77696029, 665127936)


def test_certify_not_kpsd_complete_function_not_found():
    f = ExpSumFunction.power(2)
    assert certify_not_kpsd(f, 1, GridSearch(stop=20)) is None
    assert certify_not_kpsd(f, 2, GridSearch(stop=10)) is None


def test_certify_not_kpsd_negative_constant():
    f = ExpSumFunction((), constant=F(-1))
    wit = certify_not_kpsd(f, 0)
    assert wit is not None
    assert wit.points == (0,)
    assert wit.value == -1


def test_hankel_f_eps_positive_definite_at_zero():
    ok, H = hankel_pd_certified(f_eps_paper(), 0, 2, F(1, 10**6))
    assert ok
    # one-sided matrix: Hankel of 2^x + 3^x - 1/11 at zero has det ~ 0.011
    one_sided = ExpSumFunction(((F(1), F(2)), (F(1), F(3))), -F(1, 11))
    Hs = hankel_matrix(one_sided, 0, 2, F(1, 10**6))
    dd = Hs.det()
    assert dd.sign() == 1
    ln2 = ln_enclosure(2, F(1, 10**12))
    ln3 = ln_enclosure(3, F(1, 10**12))
    ref = (ln2 * ln2 + ln3 * ln3) * F(21, 11) - (ln2 + ln3) * (ln2 + ln3)
    assert dd.lo <= ref.hi and ref.lo <= dd.hi
    assert abs(dd.mid - F("0.011")) < F(1, 10**3)


def test_hankel_rank_one_det_encloses_zero():
    H = hankel_matrix(ExpSumFunction.power(2), 0, 2, F(1, 10**8))
    assert H.det().contains(0)


def test_hankel_of_constant_function():
    H = hankel_matrix(ExpSumFunction((), constant=F(1)), 0, 2)
    assert H.entries[0][0].lo == 1 and H.entries[0][0].hi == 1
    assert all(H.entries[i][j].lo == 0 for i in range(2) for j in range(2) if i + j > 0)
    assert H.classify_pd() is False


def test_find_epsilon_returns_paper_value():
    assert find_epsilon_kpd((2, 3), 2) == F(1, 11)


def test_find_epsilon_one_dimensional():
    eps = find_epsilon_kpd((2,), 1)
    assert 0 < eps < 1
    assert 2 - eps > 0


def test_find_epsilon_rejects_bad_candidate():
    with pytest.raises((ValueError, PrecisionInsufficient)):
        find_epsilon_kpd((2, 3), 2, candidates=[F(10)])


def test_moment_function_values():
    f = moment_psd((0, 1))
    assert f.value(0) == 1
    v = f.value(1, F(1, 10**9))
    assert v.width <= F(1, 10**9)
    assert abs(v.mid - F("1.718281828")) < F(1, 10**8)


def test_moment_gram_pd():
    f = moment_psd((0, 1))
    assert f.gram_pd_certified((0, F(1, 2), 1))
    assert f.gram_pd_certified((-1, 0, 2, 3))


def test_exact_value_at_rational_point_with_rational_root():
    f = ExpSumFunction.power(4)
    assert f.value(F(1, 2)) == 2


def test_distinct_bases_required():
    with pytest.raises(ValueError):
        ExpSumFunction(((F(1), F(2)), (F(2), F(2))))
    with pytest.raises(ValueError):
        gram_matrix(f_eps_paper(), (1, 1))
