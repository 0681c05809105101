import random
from fractions import Fraction as F

import pytest

from shadow_obstruct.exactcore import SymRatMatrix
from shadow_obstruct.groupring import GroupRingElement, SupportSet
from shadow_obstruct.instances import (
    Graph,
    hilbert_sampler,
    horn,
    motzkin,
    motzkin_straus_matrix,
)
from shadow_obstruct.polytext import parse_poly
from shadow_obstruct.soscert import (
    BasisTooLarge,
    DualCertificate,
    NotACircuit,
    SosCertificate,
    SosOptions,
    copositivity_cert,
    horn_restriction_check,
    quartic_form,
    sigma_d_check,
    sonc_reznick_pass,
    sos_check,
    verify_dual_certificate,
    verify_sos_certificate,
)


def test_perfect_square_has_forced_gram():
    p = parse_poly("x1^2 - 2 * x1 + 1")
    out = sos_check(p)
    assert isinstance(out, SosCertificate)
    assert out.basis == ((0,), (1,))
    assert out.gram.entries == ((F(1), F(-1)), (F(-1), F(1)))
    assert verify_sos_certificate(p, out) == (True, "ok")


def test_motzkin_gram_diagonal_is_forced_negative():
    # brute-force oracle: among basis pairs, only (1,1,1)+(1,1,1) reaches the
    # exponent (2,2,2), so any Gram must put -3 on that diagonal entry
    M = motzkin()
    basis = [(0, 0, 3), (1, 1, 1), (1, 2, 0), (2, 1, 0)]
    target = (2, 2, 2)
    pairs = [
        (b, c)
        for b in basis
        for c in basis
        if tuple(x + y for x, y in zip(b, c)) == target
    ]
    assert pairs == [((1, 1, 1), (1, 1, 1))]
    assert M.coefficient(target) == -3


def test_motzkin_not_sos_dual_certificate():
    M = motzkin()
    out = sos_check(M)
    assert isinstance(out, DualCertificate)
    assert out.value < 0
    assert verify_dual_certificate(M, out) == (True, "ok")


def test_motzkin_after_substitution_is_sos():
    M2 = motzkin().psi(2)
    out = sos_check(M2)
    assert isinstance(out, SosCertificate)
    ok, msg = verify_sos_certificate(M2, out)
    assert ok, msg
    assert out.reconstruct(3) == M2


def test_sigma_d_motzkin():
    M = motzkin()
    rep1 = sigma_d_check(M, 1)
    assert rep1.verdict == "FAIL"
    assert all(b.outcome.kind == "dual" for b in rep1.branches)
    rep2 = sigma_d_check(M, 2)
    assert rep2.verdict == "PASS"
    # M is even in every variable: all branches share one certificate
    grams = {b.outcome.gram.entries for b in rep2.branches}
    assert len(grams) == 1


def test_sigma_d_monotonicity_on_corpus():
    # Lemma-style monotonicity: a PASS at d stays a PASS at 2d
    ps = [
        parse_poly("x1^4 - 2 * x1^2 + 1"),
        hilbert_sampler("univariate", 3),
    ]
    for p in ps:
        assert sigma_d_check(p, 1).verdict == "PASS"
        assert sigma_d_check(p, 2).verdict == "PASS"


def test_pass_implies_nonnegative_at_random_points():
    rng = random.Random(17)
    M2 = motzkin().psi(2)
    assert sos_check(M2).kind == "sos"
    for _ in range(1000):
        x = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)]
        assert M2.eval_positive(x) >= 0


def test_copositivity_identity_passes_immediately():
    rep = copositivity_cert(SymRatMatrix.identity(3), 2)
    assert rep.certified and rep.passed_at == 1
    d, outcome = rep.per_d[0]
    assert outcome.kind == "sos"
    ok, _ = verify_sos_certificate(quartic_form(SymRatMatrix.identity(3)).psi(1), outcome)
    assert ok


def test_copositivity_negative_diagonal_falsified():
    Q = SymRatMatrix.from_rows([[-1, 0], [0, 2]])
    rep = copositivity_cert(Q, 3)
    assert not rep.certified
    assert rep.falsification is not None
    i, v = rep.falsification
    assert i == 0 and v == -1
    # the witness is the standard basis evaluation e_i^T Q e_i < 0
    assert Q[i, i] < 0


def test_horn_restriction_identities():
    for d in (1, 2):
        rep = horn_restriction_check(d)
        assert rep.all_hold
    rep1 = horn_restriction_check(1)
    h1 = horn()
    r = h1.substitute_zero(0).substitute_zero(1)
    sq = parse_poly("x3 - x4 + x5", n=5)
    assert r == sq * sq
    assert rep1.corner_value == 1


def test_sonc_reznick_motzkin():
    rep = sonc_reznick_pass(motzkin())
    assert rep.d == 2
    assert rep.verdict == "PASS"


def test_sonc_reznick_rejects_non_circuit():
    with pytest.raises(NotACircuit):
        sonc_reznick_pass(horn())


def test_sonc_reznick_trivial_circuits():
    # univariate circuit {0,1,2}: 1 - 2x + x^2 = (1-x)^2
    p = parse_poly("1 - 2 * x1 + x1^2")
    assert sonc_reznick_pass(p).verdict == "PASS"
    # AM-GM tight binary circuit
    q = parse_poly("x1^4 + x2^4 - 2 * x1^2 * x2^2")
    assert sonc_reznick_pass(q).verdict == "PASS"


def test_hilbert_cases_pass_at_d_one():
    for case in ("univariate", "quadratic", "binary-quartic"):
        for seed in range(5):
            p = hilbert_sampler(case, seed)
            out = sos_check(p)
            assert out.kind == "sos", (case, seed)
            ok, msg = verify_sos_certificate(p, out)
            assert ok, msg


def test_unrepresentable_support_gets_dual_certificate():
    p = parse_poly("x1")  # odd single monomial: no square can produce it
    out = sos_check(p)
    assert isinstance(out, DualCertificate)
    assert verify_dual_certificate(p, out) == (True, "ok")


def test_zero_polynomial_is_trivially_sos():
    out = sos_check(GroupRingElement.zero(2))
    assert isinstance(out, SosCertificate)
    assert out.basis == ()


def test_basis_cap_enforced():
    with pytest.raises(BasisTooLarge):
        sos_check(quartic_form(SymRatMatrix.identity(5)).psi(2),
                  options=SosOptions(basis_cap=10))


def test_fractional_exponent_rejected():
    with pytest.raises(ValueError):
        sos_check(GroupRingElement.monomial(1, (F(1, 2),)))


def test_certificate_verification_rejects_corruption():
    M2 = motzkin().psi(2)
    cert = sos_check(M2)
    assert isinstance(cert, SosCertificate)
    rows = [list(r) for r in cert.gram.entries]
    rows[0][0] += 1
    bad = SosCertificate(basis=cert.basis, gram=SymRatMatrix.from_rows(rows))
    ok, msg = verify_sos_certificate(M2, bad)
    assert not ok and "residual" in msg

    M = motzkin()
    dual = sos_check(M)
    assert isinstance(dual, DualCertificate)
    bad_y = dict(dual.y)
    some = next(iter(bad_y))
    bad_y[some] += 1
    bad_dual = DualCertificate(
        basis=dual.basis, y=bad_y, moment=dual.moment, value=dual.value
    )
    ok, msg = verify_dual_certificate(M, bad_dual)
    assert not ok


def test_qc5_copositivity_dual_obstructions():
    Q = motzkin_straus_matrix(Graph.cycle(5))
    rep = copositivity_cert(Q, 1)
    assert not rep.certified
    d, outcome = rep.per_d[0]
    assert outcome.kind == "dual"
    p = quartic_form(Q)
    assert verify_dual_certificate(p, outcome) == (True, "ok")
