import numpy as np

from shadow_obstruct.groupring import SupportSet, newton_half_basis
from shadow_obstruct.instances import motzkin
from shadow_obstruct.polytext import parse_poly
from shadow_obstruct.sdp import interior_moment_point, solve
from shadow_obstruct.soscert import build_problem, integer_support


def problem_for(p):
    basis = newton_half_basis(SupportSet.of(p.n, integer_support(p))).sorted_points()
    return build_problem(p, basis)


def test_motzkin_margin_is_minus_three():
    # the Gram diagonal at x1 x2 x3 is forced to -3, so the SOS margin is -3
    prob = problem_for(motzkin())
    res = solve(prob)
    assert res.status == "optimal"
    assert abs(res.mu + 3.0) < 1e-6


def test_interior_instance_solves_to_positive_margin():
    q = parse_poly("x1^2 + x1 - 2")
    p = q * q + parse_poly("x1^2 - 1") * parse_poly("x1^2 - 1") + parse_poly("x1 + 1") * parse_poly("x1 + 1")
    prob = problem_for(p)
    res = solve(prob)
    assert res.status == "optimal"
    assert res.mu > 0.1
    assert res.dual_res < 1e-6


def test_interior_moment_point_keeps_margin():
    prob = problem_for(motzkin())
    from shadow_obstruct.soscert import box_moment

    ybox = np.array([float(box_moment(e)) for e in prob.classes])
    y0 = ybox / float(prob.t @ ybox)
    pt = interior_moment_point(prob, y0, target_value=-1.5)
    assert pt is not None
    assert pt.value <= -1.5
    assert pt.margin > 1e-8
    assert pt.feas < 1e-6
