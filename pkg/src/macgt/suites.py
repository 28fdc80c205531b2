"""Named verification suites used by ``maccli verify``.

Each suite is a list of independent cases; a case returns (label, passed,
residual).  Cases may run on threads, but reports are assembled in case order
so the output never depends on the worker count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import mpmath

from .errors import MacError, PoleError
from .gtcombin import (NuSpec, a_k_shift, partitions_of_length,
                       signatures_in_box, stabilizing_signature)
from .jactrudi import (a_theta_recursion_check, c_row, c_row_vanishing_check, jacobi_trudi_Q,
                       jing_jozefiak, t_basis_product, t_basis_signed_sum, theta_one_sign_check)
from .macpoly import dual_Q
from .parallel import ordered_map
from .qchar import (character, character_adapter, d_basis_coefficient, example_f211, example_f410,
                    multiplicative_character, residue_character, schur_bialternant, schur_character,
                    schur_polynomial_check, two_var_iterated)
from .qkernel import (QParams, poch_infinite, q_binomial_finite_sides, q_binomial_partial,
                      to_mpf, truncation_depth)
from .qtboundary import (SparseMeasure, apply_links, generating_function_eval, link_one_step,
                         link_row, mass_lower_bound, phi_nu_multi, phi_nu_one, prelimit_character,
                         pushforward_all_levels, verify_generating_relation)
from .sampling import admissible_points, points

SUITES = ("residue", "multiplicative", "jacobitrudi", "links", "phi", "example44", "appendixB", "qseries")

DEFAULT_POINTS = 10
DEFAULT_MAX_N = 4
DEFAULT_SEED = 0
HALF, TWO_THIRDS = Fraction(1, 2), Fraction(2, 3)


@dataclass(frozen=True)
class Options:
    seed: int = DEFAULT_SEED
    points: int = DEFAULT_POINTS
    max_N: int = DEFAULT_MAX_N


Case = Callable[[], tuple]


def _gap(a, b):
    return abs(Fraction(a) - Fraction(b))


def _exact(label: str, a, b) -> tuple:
    d = _gap(a, b)
    return label, d == 0, d


def _flag(label: str, ok: bool) -> tuple:
    return label, bool(ok), Fraction(0 if ok else 1)


def _guard(label: str, fn: Case) -> Case:
    def run():
        try:
            return fn()
        except (MacError, ZeroDivisionError) as exc:
            return label, False, Fraction(1), str(exc)
    return run


# ---------------------------------------------------------------------------


def residue_cases(opt: Options) -> List[Case]:
    xs = (Fraction(2), Fraction(3, 2), Fraction(-1, 3), Fraction(5, 7))
    cases = []
    for q in (HALF, TWO_THIRDS):
        for theta in (1, 2, 3):
            qp = QParams(q, theta)
            for N in range(1, opt.max_N + 1):
                for lam in signatures_in_box(N, -2, 3):
                    def case(lam=lam, N=N, qp=qp):
                        worst = Fraction(0)
                        for x in xs:
                            worst = max(worst, _gap(residue_character(lam, N, x, qp),
                                                    character_adapter(lam, N, [x], qp, "residue")))
                        return f"residue q={qp.q} theta={qp.theta} lam={lam}", worst == 0, worst
                    cases.append(case)
    for theta in (1, 2, 3):
        qp = QParams(HALF, theta)
        for N in range(1, 7):
            def zero(N=N, qp=qp):
                lam = (0,) * N
                a = residue_character(lam, N, Fraction(2), qp)
                b = character(lam, N, [Fraction(2)], qp)
                return f"residue zero N={N} theta={qp.theta}", a == b == 1, _gap(a, 1) + _gap(b, 1)
            cases.append(zero)
    return cases


def multiplicative_cases(opt: Options) -> List[Case]:
    cases = []
    for theta in (1, 2):
        qp = QParams(HALF, theta)
        for m in (2, 3):
            for N in range(m, min(opt.max_N, 4) + 1):
                for lam in partitions_of_length(N, 4):
                    def case(lam=lam, N=N, m=m, qp=qp):
                        key = f"mult:{opt.seed}:{qp.theta}:{m}:{lam}"
                        pts = admissible_points(key, opt.points, m,
                                                lambda xs: multiplicative_character(lam, N, m, xs, qp))
                        worst = max(_gap(v, character(lam, N, xs, qp)) for xs, v in pts)
                        return f"multiplicative theta={qp.theta} m={m} lam={lam}", worst == 0, worst
                    cases.append(case)
    for theta in (1, 2, 3):
        qp = QParams(Fraction(1, 3), theta)
        for N in range(2, min(opt.max_N, 4) + 1):
            for lam in signatures_in_box(N, -1, 2):
                def iterated(lam=lam, N=N, qp=qp):
                    key = f"iter:{opt.seed}:{qp.theta}:{lam}"
                    pts = admissible_points(key, 2, 2, lambda xs: (two_var_iterated(lam, N, xs, qp),
                                                                   multiplicative_character(lam, N, 2, xs, qp)))
                    worst = Fraction(0)
                    for xs, (v, w) in pts:
                        worst = max(worst, _gap(v, character(lam, N, xs, qp)), _gap(v, w))
                    return f"iterated theta={qp.theta} lam={lam}", worst == 0, worst
                cases.append(iterated)
    for N in range(1, min(opt.max_N, 4) + 1):
        for lam in partitions_of_length(N, 5):
            cases.append(lambda lam=lam, N=N: _flag(f"schur poly lam={lam}", schur_polynomial_check(lam, N, HALF)))
    qp1 = QParams(HALF, 1)
    for N in range(1, min(opt.max_N, 4) + 1):
        for lam in partitions_of_length(N, 3):
            for m in range(1, min(N, 3) + 1):
                def collapse(lam=lam, N=N, m=m):
                    key = f"schur:{opt.seed}:{m}:{lam}"
                    pts = admissible_points(key, opt.points, m, lambda xs: schur_character(lam, N, m, xs, qp1))
                    base = [HALF ** k for k in range(N)]
                    worst = Fraction(0)
                    for xs, v in pts:
                        full = list(xs) + [HALF ** k for k in range(N - m)]
                        b = schur_bialternant(lam, N, full) / schur_bialternant(lam, N, base)
                        worst = max(worst, _gap(v, b), _gap(v, character(lam, N, xs, qp1)))
                    return f"schur character m={m} lam={lam}", worst == 0, worst
                cases.append(collapse)
    return cases


def jacobitrudi_cases(opt: Options) -> List[Case]:
    cases = []
    for theta in (1, 2):
        qp = QParams(HALF, theta)
        for N in range(1, min(opt.max_N, 3) + 1):
            for lam in partitions_of_length(N, 5):
                def case(lam=lam, N=N, qp=qp):
                    a, b = jacobi_trudi_Q(lam, N, qp), dual_Q(lam, N, qp)
                    return f"jacobi-trudi theta={qp.theta} lam={lam}", a == b, Fraction(0 if a == b else 1)
                cases.append(case)
    for theta in (1, 2, 3):
        qp = QParams(HALF, theta)
        for n in range(theta + 2):
            def one_row(n=n, qp=qp):
                pts = admissible_points(f"jj:{opt.seed}:{qp.theta}:{n}", 3, 1,
                                        lambda u: jing_jozefiak(n, u[0], qp))
                worst = max(_gap(c_row([n], [u[0]], qp), v) for u, v in pts)
                return f"one-row closed form theta={qp.theta} n={n}", worst == 0, worst
            cases.append(one_row)
    return cases


def appendix_b_cases(opt: Options) -> List[Case]:
    cases = []
    for theta in (1, 2, 3):
        qp = QParams(HALF, theta)
        for n in (1, 2, 3):
            for taus in itertools.product(range(theta + 2), repeat=n):
                if max(taus) <= theta:
                    continue
                def vanish(taus=taus, n=n, qp=qp):
                    pts = admissible_points(f"b1:{opt.seed}:{qp.theta}:{taus}", 2, n,
                                            lambda us: c_row_vanishing_check(taus, us, qp))
                    return _flag(f"vanishing theta={qp.theta} tau={taus}", all(v for _, v in pts))
                cases.append(vanish)
    for n in (1, 2, 3):
        for taus in itertools.product((0, 1), repeat=n):
            for q in (HALF, Fraction(1, 3)):
                def signs(taus=taus, n=n, q=q):
                    pts = admissible_points(f"b2:{opt.seed}:{q}:{taus}", 3, n,
                                            lambda us: theta_one_sign_check(taus, us, q))
                    return _flag(f"theta-one sign q={q} tau={taus}", all(v for _, v in pts))
                cases.append(signs)
    for theta in (1, 2, 3):
        for q in (HALF, Fraction(1, 3)):
            qp = QParams(q, theta)
            def recursion(qp=qp):
                pts = admissible_points(f"b3:{opt.seed}:{qp.q}:{qp.theta}", opt.points, 2,
                                        lambda xs: a_theta_recursion_check(qp, xs))
                return _flag(f"recursion q={qp.q} theta={qp.theta}", all(v for _, v in pts))
            cases.append(recursion)
    for m in (2, 3, 4):
        cases.append(lambda m=m: _flag(f"signed T-basis sum m={m}", t_basis_product(m) == t_basis_signed_sum(m)))
    return cases


def links_cases(opt: Options) -> List[Case]:
    cases = []
    for theta in (1, 2):
        qp = QParams(HALF, theta)
        for N in range(1, opt.max_N + 1):
            for lam in signatures_in_box(N + 1, -3, 3):
                def stoch(lam=lam, qp=qp):
                    row = link_row(lam, qp)
                    total = row.total()
                    ok = total == 1
                    for k in (-2, 1):
                        for mu, p in row.masses.items():
                            if link_one_step(a_k_shift(lam, k), a_k_shift(mu, k), qp) != p:
                                ok = False
                    return f"links theta={qp.theta} lam={lam}", ok, _gap(total, 1)
                cases.append(stoch)
    cases.append(lambda: _exact("link (1,0)->(1)", link_one_step((1, 0), (1,), QParams(HALF, 1)), Fraction(1, 3)))
    for theta in (1, 2):
        qp = QParams(HALF, theta)
        for N in range(1, min(opt.max_N, 4) + 1):
            for lam in signatures_in_box(N + 1, -1, 2):
                def coherent(lam=lam, N=N, qp=qp):
                    below = apply_links(SparseMeasure.delta(lam), qp)
                    top = SparseMeasure.delta(lam)
                    worst = Fraction(0)
                    for xs in points(f"coh:{opt.seed}:{lam}", 5, N):
                        worst = max(worst, _gap(generating_function_eval(below, xs, qp),
                                                generating_function_eval(top, (1,) + tuple(xs), qp)))
                    return f"coherency theta={qp.theta} lam={lam}", worst == 0, worst
                cases.append(coherent)
    return cases


def _mass_case(nu: NuSpec, N: int, qp: QParams) -> Case:
    def run():
        levels = pushforward_all_levels(stabilizing_signature(nu, N), qp)
        worst = mpmath.mpf(0)
        ok = True
        for m in range(1, min(3, N - 1) + 1):
            meas = levels[N - m]
            mass = meas[tuple(reversed(nu.expand(m)))]
            bound = mass_lower_bound(m, qp)
            slack = to_mpf(mass) - (bound.value - bound.error_bound - mpmath.mpf("1e-10"))
            if slack < 0:
                ok = False
                worst = max(worst, -slack)
            ok = ok and meas.is_probability()
        return f"mass bound nu={nu.prefix} N={N} theta={qp.theta}", ok, worst
    return run


def phi_cases(opt: Options) -> List[Case]:
    cases = []
    qp = QParams(HALF, 2)
    nu = NuSpec((0, 0, 1, 2))

    def prelimit():
        phi = phi_nu_one(nu, HALF, qp, mpmath.mpf("1e-15"))
        d = abs(to_mpf(prelimit_character(nu, 25, [HALF], qp)) - phi.value)
        return "prelimit N=25", d <= mpmath.mpf("1e-8"), d

    def relation():
        r = verify_generating_relation(nu, 1, 25, [HALF], qp)
        return "generating relation m=1 N=25", r["passed"] and r["residual"] <= mpmath.mpf("1e-6"), r["residual"]

    def at_one():
        v = phi_nu_one(nu, 1, qp)
        d = abs(v.value - 1)
        return "phi(1) = 1", d <= mpmath.mpf("1e-10"), d

    def shift():
        worst = mpmath.mpf(0)
        ok = True
        for (x,) in points(f"shift:{opt.seed}", 5, 1):
            try:
                a = phi_nu_one(nu.shift(1), x, qp)
                b = phi_nu_one(nu, x, qp)
            except PoleError:
                continue
            diff = a - b * x
            ok = ok and abs(diff.value) <= diff.error_bound
            worst = max(worst, abs(diff.value))
        return "shift by one", ok, worst

    def two_var():
        qp1 = QParams(HALF, 1)
        nu2 = NuSpec((0, 1, 1, 3))
        xs = [Fraction(1, 3), HALF]
        d = abs(to_mpf(prelimit_character(nu2, 20, xs, qp1)) - phi_nu_multi(nu2, xs, qp1).value)
        return "two-variable prelimit N=20", d <= mpmath.mpf("1e-6"), d

    def principal_point():
        worst = mpmath.mpf(0)
        for theta in (1, 2):
            qpt = QParams(HALF, theta)
            for m in (2, 3):
                xs = [qpt.t ** (i + 1 - m) for i in range(m)]
                worst = max(worst, abs(phi_nu_multi(nu, xs, qpt).value - 1))
        return "phi at the principal point", worst <= mpmath.mpf("1e-10"), worst

    cases += [prelimit, relation, at_one, shift, two_var, principal_point]
    for theta in (1, 2):
        qpt = QParams(HALF, theta)
        for N in (4, 8, 12):
            for pre in itertools.combinations_with_replacement(range(-2, 3), 3):
                cases.append(_mass_case(NuSpec(pre), N, qpt))
    return cases


def example44_cases(opt: Options) -> List[Case]:
    cases = []
    low = [i for i in itertools.product(range(3), repeat=3) if sum(i) <= 2]
    for q in (HALF, TWO_THIRDS):
        qp = QParams(q, 2)

        def value(xs, qp=qp):
            return ([d_basis_coefficient(i, xs, qp) for i in low],
                    d_basis_coefficient((4, 1, 0), xs, qp), d_basis_coefficient((2, 1, 1), xs, qp))

        for idx, (xs, (zs, f410, f211)) in enumerate(admissible_points(f"ex44:{opt.seed}:{q}", opt.points, 3, value)):
            def case(xs=xs, zs=zs, f410=f410, f211=f211, q=q):
                worst = max([abs(z) for z in zs] + [_gap(f410, example_f410(xs, q)),
                                                     _gap(f211, example_f211(xs, q))])
                return f"example q={q} x={tuple(str(v) for v in xs)}", worst == 0, worst
            cases.append(case)
    return cases


def qseries_cases(opt: Options) -> List[Case]:
    cases = []
    tol = mpmath.mpf("1e-12")
    for q in (HALF, TWO_THIRDS):
        qp = QParams(q, 1)
        for a, z in ((Fraction(3, 5), Fraction(1, 2)), (Fraction(-2), Fraction(-1, 3)),
                     (Fraction(5, 4), Fraction(3, 4)), (Fraction(1, 7), Fraction(2, 5))):
            def partial(a=a, z=z, qp=qp):
                s = q_binomial_partial(a, z, 200, qp)
                r = poch_infinite(a * z, qp.q) / poch_infinite(z, qp.q)
                d = abs(to_mpf(s) - r.value)
                return f"q-binomial a={a} z={z} q={qp.q}", d <= tol + r.error_bound, d
            cases.append(partial)
        for M in range(7):
            def finite(M=M, qp=qp):
                worst = Fraction(0)
                for (z,) in points(f"fin:{opt.seed}:{qp.q}:{M}", 3, 1):
                    left, right = q_binomial_finite_sides(z, M, qp)
                    worst = max(worst, _gap(left, right))
                return f"terminating identity M={M} q={qp.q}", worst == 0, worst
            cases.append(finite)
    rng_points = points(f"trunc:{opt.seed}", 50, 2)
    for z, b in rng_points:
        base = Fraction(1, 2 + abs(b.numerator) % 5)

        def trunc(z=z, base=base):
            eps = mpmath.mpf("1e-20")
            one = poch_infinite(z, base, eps)
            K = max(truncation_depth(z, base, eps), 1)
            two = poch_infinite(z, base, eps, depth=2 * K)
            d = abs(one.value - two.value)
            return f"truncation z={z} base={base}", d <= one.error_bound + two.error_bound, d
        cases.append(trunc)
    return cases


BUILDERS = {
    "residue": residue_cases,
    "multiplicative": multiplicative_cases,
    "jacobitrudi": jacobitrudi_cases,
    "links": links_cases,
    "phi": phi_cases,
    "example44": example44_cases,
    "appendixB": appendix_b_cases,
    "qseries": qseries_cases,
}


def _fmt_residual(r) -> str:
    if r == 0:
        return "0"
    return mpmath.nstr(to_mpf(r), 6)


def run_suite(name: str, opt: Options = Options(), workers: int | None = None) -> dict:
    """Run a suite and return {suite, cases, passed, failed, max_residual, seed, failures}."""
    if name == "all":
        parts = [run_suite(s, opt, workers) for s in SUITES]
        worst = max((mpmath.mpf(p["max_residual"]) for p in parts), default=mpmath.mpf(0))
        return {
            "suite": "all",
            "cases": sum(p["cases"] for p in parts),
            "passed": sum(p["passed"] for p in parts),
            "failed": sum(p["failed"] for p in parts),
            "max_residual": _fmt_residual(worst),
            "seed": opt.seed,
            "failures": [f for p in parts for f in p["failures"]],
            "suites": {p["suite"]: {k: p[k] for k in ("cases", "passed", "failed", "max_residual")}
                       for p in parts},
        }
    if name not in BUILDERS:
        raise KeyError(name)
    cases = [_guard(f"{name} case {i}", c) for i, c in enumerate(BUILDERS[name](opt))]
    results = ordered_map(lambda c: c(), cases, workers)
    failures = []
    worst = mpmath.mpf(0)
    passed = 0
    for res in results:
        label, ok, resid = res[0], res[1], res[2]
        worst = max(worst, to_mpf(resid))
        if ok:
            passed += 1
        else:
            failures.append(label if len(res) == 3 else f"{label}: {res[3]}")
    return {
        "suite": name,
        "cases": len(results),
        "passed": passed,
        "failed": len(results) - passed,
        "max_residual": _fmt_residual(worst),
        "seed": opt.seed,
        "failures": failures[:20],
    }
