"""Command-line front-end.

Subcommands: sos-check, sigma-d, copositive, demo, instances, verify,
hahn-eval.  Exit codes: 0 certified / all checks pass, 2 dual-certified
non-membership or a failed check, 3 inconclusive, 1 usage or parse errors.

The `verify` subcommand re-checks certificate files using exact-core
arithmetic only (no SDP, no floating point), so a prover bug cannot slip
past it.  SHADOW_OBSTRUCT_PRECISION overrides the default interval
precision schedule as a comma-separated list of widths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import serialize
from .exactcore import SymRatMatrix, det, psd_check, rat_to_str
from .groupring import GroupRingElement, SupportSet
from .polytext import PolyParseError, format_poly, parse_poly, poly_to_json
from .soscert import (
    CopositivityReport,
    SosOptions,
    copositivity_cert,
    sigma_d_check,
    verify_dual_certificate,
    verify_sos_certificate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REFUTED = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_PRECISIONS = (Fraction(1, 10**6), Fraction(1, 10**12), Fraction(1, 10**24))


def precision_schedule(arg: str | None = None) -> tuple[Fraction, ...]:
    """Interval-width refinement schedule: flag, else env, else default."""
    raw = arg or os.environ.get("SHADOW_OBSTRUCT_PRECISION")
    if not raw:
        return DEFAULT_PRECISIONS
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "e" in part.lower() or "." in part:
            num = Fraction(part)
        else:
            num = Fraction(part)
        if num <= 0:
            raise ValueError("precision widths must be positive")
        out.append(num)
    if not out:
        return DEFAULT_PRECISIONS
    return tuple(out)


def _load_poly(path: str) -> GroupRingElement:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json"):
        from .polytext import poly_from_json

        return poly_from_json(json.loads(text))
    return parse_poly(text)


def _load_matrix(path: str) -> SymRatMatrix:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "matrix" in data:
        data = data["matrix"]
    return SymRatMatrix.from_json(data)


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sigma_report_json(p: GroupRingElement, report) -> dict:
    return {
        "format": "shadow-obstruct-report",
        "type": "sigma-d",
        "d": report.d,
        "verdict": report.verdict,
        "branches": [
            {
                "signs": list(b.signs),
                "certificate": serialize.outcome_to_json(
                    p.phi(b.signs).psi(report.d), b.outcome
                ),
            }
            for b in report.branches
        ],
    }


def _copositive_report_json(Q: SymRatMatrix, report: CopositivityReport) -> dict:
    from .soscert import quartic_form

    p = quartic_form(Q)
    per_d = []
    for d, outcome in report.per_d:
        entry: dict = {"d": d}
        if outcome is not None:
            entry["certificate"] = serialize.outcome_to_json(p.psi(d), outcome)
        per_d.append(entry)
    data = {
        "format": "shadow-obstruct-report",
        "type": "copositive",
        "dmax": report.dmax,
        "passed_at": report.passed_at,
        "per_d": per_d,
    }
    if report.falsification is not None:
        i, v = report.falsification
        data["falsification"] = {"basis_index": i, "value": rat_to_str(v)}
    return data


def _sigma_exit(report) -> int:
    return {
        "PASS": EXIT_OK,
        "FAIL": EXIT_REFUTED,
        "INCONCLUSIVE": EXIT_INCONCLUSIVE,
    }[report.verdict]


def _run_sos_file(args: tuple) -> tuple[str, int, str]:
    path, d, basis_cap, as_json = args
    try:
        p = _load_poly(path)
    except (PolyParseError, OSError, ValueError, KeyError) as ex:
        return path, EXIT_USAGE, f"error: {path}: {ex}\n"
    options = SosOptions(basis_cap=basis_cap)
    report = sigma_d_check(p, d, options=options)
    if as_json:
        text = serialize.dumps(_sigma_report_json(p, report))
    else:
        lines = [f"{path}: d={d} verdict={report.verdict}"]
        for b in report.branches:
            lines.append(f"  signs={''.join('+' if s > 0 else '-' for s in b.signs)}"
                         f" -> {b.outcome.kind}")
        text = "\n".join(lines) + "\n"
    return path, _sigma_exit(report), text


def cmd_sos_check(args) -> int:
    jobs = []
    for path in args.paths:
        jobs.append((path, args.d, args.basis_cap, args.json))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_sos_file, jobs))
    else:
        results = [_run_sos_file(j) for j in jobs]
    worst = EXIT_OK
    out = []
    for _, code, text in results:
        out.append(text)
        if code == EXIT_USAGE:
            worst = EXIT_USAGE
        elif worst != EXIT_USAGE:
            worst = max(worst, code)
    _emit("".join(out), args.output)
    return worst


def cmd_sigma_d(args) -> int:
    try:
        p = _load_poly(args.path)
    except (PolyParseError, OSError, ValueError, KeyError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE
    report = sigma_d_check(p, args.d, options=SosOptions(basis_cap=args.basis_cap))
    if args.json:
        _emit(serialize.dumps(_sigma_report_json(p, report)), args.output)
    else:
        lines = [f"sigma_{args.d} verdict: {report.verdict}"]
        for b in report.branches:
            signs = "".join("+" if s > 0 else "-" for s in b.signs)
            lines.append(f"  branch {signs}: {b.outcome.kind}")
        _emit("\n".join(lines) + "\n", args.output)
    return _sigma_exit(report)


def cmd_copositive(args) -> int:
    try:
        Q = _load_matrix(args.path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE
    report = copositivity_cert(Q, args.dmax, options=SosOptions(basis_cap=args.basis_cap))
    if args.json:
        _emit(serialize.dumps(_copositive_report_json(Q, report)), args.output)
    else:
        lines = []
        if report.falsification is not None:
            i, v = report.falsification
            lines.append(f"falsified by standard basis vector e_{i + 1}: value {v}")
        for d, outcome in report.per_d:
            lines.append(f"  d={d}: {outcome.kind if outcome else 'skipped'}")
        lines.append(
            f"certified copositive at d={report.passed_at}"
            if report.certified
            else "no certificate up to dmax"
        )
        _emit("\n".join(lines) + "\n", args.output)
    if report.certified:
        return EXIT_OK
    if report.falsification is not None:
        return EXIT_REFUTED
    kinds = {o.kind for _, o in report.per_d if o is not None}
    return EXIT_REFUTED if kinds == {"dual"} else EXIT_INCONCLUSIVE


def _walk_certificates(node):
    if isinstance(node, dict):
        if node.get("format") == serialize.FORMAT_NAME:
            yield node
        else:
            for v in node.values():
                yield from _walk_certificates(v)
    elif isinstance(node, list):
        for v in node:
            yield from _walk_certificates(v)


def cmd_verify(args) -> int:
    try:
        with open(args.path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE
    certs = list(_walk_certificates(data))
    if not certs:
        sys.stderr.write("no certificates found in file\n")
        return EXIT_USAGE
    all_ok = True
    checked = 0
    for blob in certs:
        target, outcome = serialize.outcome_from_json(blob)
        if outcome.kind == "sos":
            ok, msg = verify_sos_certificate(target, outcome)
        elif outcome.kind == "dual":
            ok, msg = verify_dual_certificate(target, outcome)
        else:
            continue
        checked += 1
        status = "VALID" if ok else f"INVALID ({msg})"
        print(f"{outcome.kind} certificate #{checked}: {status}")
        all_ok = all_ok and ok
    if checked == 0:
        print("only inconclusive records present; nothing to verify")
        return EXIT_INCONCLUSIVE
    return EXIT_OK if all_ok else EXIT_REFUTED


def cmd_instances(args) -> int:
    from . import instances

    name = args.name
    seed = args.seed
    if name == "motzkin":
        obj: object = instances.motzkin()
    elif name == "horn":
        obj = instances.horn()
    elif name == "qc5":
        obj = instances.motzkin_straus_matrix(instances.Graph.cycle(5))
    elif name == "odd-cycle":
        if args.m is None:
            sys.stderr.write("odd-cycle needs --m\n")
            return EXIT_USAGE
        obj = instances.odd_cycle_instance(args.m).Q
    elif name.startswith("hilbert-"):
        obj = instances.hilbert_sampler(name[len("hilbert-"):], seed)
    else:
        sys.stderr.write(f"unknown instance {name!r}\n")
        return EXIT_USAGE
    if isinstance(obj, SymRatMatrix):
        _emit(serialize.dumps({"matrix": obj.to_json()}), args.output)
    elif args.format == "json":
        _emit(serialize.dumps(poly_to_json(obj)), args.output)
    else:
        _emit(format_poly(obj) + "\n", args.output)
    return EXIT_OK


def cmd_hahn_eval(args) -> int:
    from .hahn import HahnSeries, compare

    try:
        series = []
        for path in args.operands:
            with open(path) as fh:
                series.append(serialize.series_from_json(json.load(fh)))
    except (OSError, ValueError, json.JSONDecodeError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE
    trunc = None
    if args.trunc:
        trunc = tuple(Fraction(x) for x in args.trunc.split(","))
    op = args.op
    binary = {"add", "mul", "sub", "div", "compare"}
    if op in binary and len(series) != 2:
        sys.stderr.write(f"{op} needs two operands\n")
        return EXIT_USAGE
    if op not in binary and len(series) != 1:
        sys.stderr.write(f"{op} needs one operand\n")
        return EXIT_USAGE
    a = series[0].with_trunc(trunc) if trunc else series[0]
    if op == "add":
        out = a + series[1]
    elif op == "sub":
        out = a - series[1]
    elif op == "mul":
        out = a * series[1]
    elif op == "div":
        out = a.divide(series[1], trunc=trunc)
    elif op == "inverse":
        out = a.inverse(trunc=trunc)
    elif op == "sqrt":
        out = a.sqrt_nonneg(trunc=trunc)
    elif op == "sign":
        print(a.sign())
        return EXIT_OK
    elif op == "compare":
        print(compare(a, series[1]))
        return EXIT_OK
    elif op == "valuation":
        v = a.valuation()
        print("inf" if v.is_infinite else ",".join(str(x) for x in v.value))
        return EXIT_OK
    elif op == "residue":
        print(rat_to_str(a.residue()))
        return EXIT_OK
    else:
        sys.stderr.write(f"unknown op {op!r}\n")
        return EXIT_USAGE
    _emit(serialize.dumps(serialize.series_to_json(out)), args.output)
    return EXIT_OK


# --- demos reproducing the worked examples -----------------------------------


def _checkline(lines: list[str], ok: bool, label: str) -> bool:
    lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}")
    return ok


def demo_motzkin(precisions) -> tuple[list[str], bool]:
    from .instances import motzkin, motzkin_sos_identity
    from .soscert import sos_check

    lines, ok = [], True
    M = motzkin()
    ident = sum(
        ((q * q).scale(c) for c, q in motzkin_sos_identity()),
        GroupRingElement.zero(3),
    )
    ok &= _checkline(lines, ident == M.psi(2), "three-square identity equals M(x^2) exactly")
    out1 = sos_check(M)
    ok &= _checkline(lines, out1.kind == "dual", "M itself is dual-certified non-SOS")
    out2 = sos_check(M.psi(2))
    ok &= _checkline(lines, out2.kind == "sos", "M(x^2) has an exact Gram certificate")
    if out2.kind == "sos":
        ok &= _checkline(
            lines,
            verify_sos_certificate(M.psi(2), out2)[0],
            "Gram certificate re-verifies in exact arithmetic",
        )
    return lines, ok


def demo_horn(precisions) -> tuple[list[str], bool]:
    from .instances import horn
    from .soscert import horn_restriction_check

    lines, ok = [], True
    for d in (1, 2):
        rep = horn_restriction_check(d)
        ok &= _checkline(
            lines,
            all(rep.identities),
            f"restrictions of h(x^{d}) equal the predicted squares (all five)",
        )
        ok &= _checkline(lines, rep.corner_value == 1, f"H_{d}(1,0,0,0,0) = 1")
    report = sigma_d_check(horn(), 1)
    ok &= _checkline(lines, report.verdict == "FAIL", "h is dual-certified outside Sigma_1")
    duals = sum(1 for b in report.branches if b.outcome.kind == "dual")
    lines.append(f"       ({duals}/{len(report.branches)} sign branches carry dual certificates)")
    return lines, ok


def demo_karlin(precisions) -> tuple[list[str], bool]:
    from .posdef import (
        certify_not_kpsd,
        f_eps_paper,
        find_epsilon_kpd,
        gram_matrix,
        hankel_matrix,
    )

    lines, ok = [], True
    f = f_eps_paper()
    sample = gram_matrix(f, (5, 6, 7))
    e11 = sample.matrix[0, 0]
    lines.append(f"       Gram(5,6,7) entry (1,1) = {rat_to_str(e11)}")
    ok &= _checkline(lines, e11 == Fraction(39956170693955, 665127936), "entry (1,1) matches")
    dval = det(sample.matrix)
    lines.append(f"       det = {rat_to_str(dval)}")
    ok &= _checkline(lines, dval == Fraction(-2277541160576348197, 107750725632), "determinant matches")
    ok &= _checkline(lines, not psd_check(sample.matrix).is_psd, "matrix is exactly not PSD")
    eps = find_epsilon_kpd((2, 3), 2)
    ok &= _checkline(lines, eps == Fraction(1, 11), f"epsilon search returns {eps}")
    from .posdef import ExpSumFunction

    one_sided = ExpSumFunction(((Fraction(1), Fraction(2)), (Fraction(1), Fraction(3))), -eps)
    H = hankel_matrix(one_sided, 0, 2, precisions[0])
    dd = H.det()
    lines.append(f"       one-sided Hankel det in [{float(dd.lo):.6f}, {float(dd.hi):.6f}]")
    ok &= _checkline(lines, dd.sign() == 1, "Hankel determinant certified positive (~0.011)")
    wit = certify_not_kpsd(f, 2)
    ok &= _checkline(lines, wit is not None and wit.value < 0, "explicit 3-point witness found")
    if wit:
        lines.append(f"       points {wit.points}, w = {tuple(int(x) for x in wit.w)}, value {rat_to_str(wit.value)}")
    return lines, ok


def demo_hahn(precisions) -> tuple[list[str], bool]:
    import random

    from .hahn import (
        HahnSeries,
        HahnPsdStatus,
        psd_check_hahn,
        random_psd_series_matrix,
    )

    lines, ok = [], True
    one = HahnSeries.one(1)
    eps = HahnSeries.eps(1, (1,))
    inv = (one + eps).with_trunc((6,)).inverse()
    ok &= _checkline(lines, ((one + eps) * inv - one).is_zero_to_trunc(), "(1+e)(1-e+e^2-...) = 1 up to truncation")
    rank1 = [[eps, one], [one, HahnSeries.eps(1, (-1,))]]
    ok &= _checkline(
        lines,
        psd_check_hahn(rank1).status == HahnPsdStatus.POSITIVE_SEMIDEFINITE,
        "[[e,1],[1,1/e]] is PSD (rank one)",
    )
    v = psd_check_hahn([[HahnSeries.eps(1, (1,), -1)]])
    ok &= _checkline(lines, v.status == HahnPsdStatus.INDEFINITE, "[[-e]] is indefinite despite zero residue")
    rng = random.Random(11)
    good = 0
    for _ in range(20):
        B = random_psd_series_matrix(rng, 3, 1)
        if psd_check_hahn(B).is_psd:
            good += 1
    ok &= _checkline(lines, good == 20, "20/20 random Gram matrices certified PSD")
    return lines, ok


def demo_moment(precisions) -> tuple[list[str], bool]:
    from .hahn import test_k_positivity
    from .posdef import moment_psd

    lines, ok = [], True
    f = moment_psd((0, 1))
    ok &= _checkline(lines, f.value(0) == 1, "f(0) = 1 exactly")
    v1 = f.value(1, precisions[0])
    lines.append(f"       f(1) in [{float(v1.lo):.8f}, {float(v1.hi):.8f}] (e - 1)")
    from .intervals import exp_enclosure

    ref = exp_enclosure(1, v1.width / 4 if v1.width > 0 else Fraction(1, 10**20)) - 1
    ok &= _checkline(
        lines,
        v1.width <= precisions[0]
        and v1.lo <= ref.hi
        and ref.lo <= v1.hi
        and abs(v1.mid - Fraction("1.71828")) < Fraction(1, 10**4),
        "f(1) encloses e - 1 at the requested width",
    )
    ok &= _checkline(
        lines,
        f.gram_pd_certified((0, Fraction(1, 2), 1)),
        "3x3 moment Gram at (0, 1/2, 1) certified PD",
    )
    rep = test_k_positivity(f.as_coefmap(), k=2, trials=30, seed=5)
    ok &= _checkline(
        lines,
        rep.passed and 20 * rep.inconclusive <= rep.trials_run,
        f"k=2 positivity trials pass ({rep.trials_run} trials, "
        f"{rep.inconclusive} inconclusive)",
    )
    return lines, ok


DEMOS = {
    "motzkin": demo_motzkin,
    "horn": demo_horn,
    "karlin": demo_karlin,
    "hahn": demo_hahn,
    "moment": demo_moment,
}


def cmd_demo(args) -> int:
    try:
        precisions = precision_schedule(args.precision)
    except ValueError as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE
    if args.name not in DEMOS:
        sys.stderr.write(f"unknown demo {args.name!r} (choose from {sorted(DEMOS)})\n")
        return EXIT_USAGE
    lines, ok = DEMOS[args.name](precisions)
    print(f"demo {args.name}")
    for line in lines:
        print(line)
    print("result:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_REFUTED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shadow-obstruct",
        description="Exact positivity certificates for sparse polynomials "
        "with rational exponents",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--basis-cap", type=int, default=120)

    sp = sub.add_parser("sos-check", help="SOS membership after x -> x^d, all signs")
    sp.add_argument("paths", nargs="+")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_sos_check)

    sp = sub.add_parser("sigma-d", help="detailed per-sign-vector report")
    sp.add_argument("path")
    sp.add_argument("--d", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_sigma_d)

    sp = sub.add_parser("copositive", help="copositivity certificates for a matrix")
    sp.add_argument("path")
    sp.add_argument("--dmax", type=int, default=4)
    common(sp)
    sp.set_defaults(func=cmd_copositive)

    sp = sub.add_parser("demo", help="reproduce a worked example")
    sp.add_argument("name")
    sp.add_argument("--precision", help="comma-separated interval width schedule")
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("instances", help="emit a canonical instance")
    sp.add_argument("name", help="motzkin | horn | qc5 | odd-cycle | hilbert-<case>")
    sp.add_argument("--m", type=int, help="cycle size for odd-cycle")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("poly", "json"), default="poly")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_instances)

    sp = sub.add_parser("verify", help="re-check certificates with exact-core only")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hahn-eval", help="arithmetic on truncated Hahn series")
    sp.add_argument("--op", required=True,
                    choices=("add", "sub", "mul", "div", "inverse", "sqrt",
                             "sign", "compare", "valuation", "residue"))
    sp.add_argument("operands", nargs="+")
    sp.add_argument("--trunc", help="comma-separated truncation exponent")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_hahn_eval)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return EXIT_USAGE if ex.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
