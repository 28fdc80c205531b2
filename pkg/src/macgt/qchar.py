"""Normalized Macdonald characters, their residue-sum form, and the
multiplicative (q-difference operator) formulas for several variables.

Three principal orderings appear in the literature:

* unitary:   P(x_1..x_m, 1, t, ..., t^{N-m-1}) / P(1, t, ..., t^{N-1})
* residue:   P(x, t, t^2, ..., t^{N-1})        / P(1, t, ..., t^{N-1})
* inverse:   P(x_1..x_m, t^{-m}, ..., t^{1-N}) / P(1, t^{-1}, ..., t^{1-N})

They differ only by homogeneity; :func:`character_adapter` is the single place
that converts between them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence, Union

from .errors import ConsistencyError, DomainError, PoleError
from .gtcombin import interlacings_below
from .jactrudi import c_tau_product, shift_exponents, upper_tri_matrices
from .laurent import LaurentPoly
from .macpoly import evaluate_at, evaluation_principal, macdonald_poly, _psi
from .qkernel import QParams, as_fraction, q_factorial

FORMS = ("unitary", "residue", "inverse", "twisted")


def _check_lengths(lam, N: int, xs) -> tuple:
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    xs = tuple(as_fraction(x) for x in xs)
    if not 1 <= len(xs) <= N:
        raise DomainError(f"need between 1 and {N} arguments, got {len(xs)}")
    return lam, xs


def character(lam, N: int, xs: Sequence, qp: QParams) -> Fraction:
    """P_lam(x_1..x_m, 1, t, ..., t^{N-m-1}) / P_lam(1, t, ..., t^{N-1})."""
    lam, xs = _check_lengths(lam, N, xs)
    t = qp.t
    point = xs + tuple(t ** k for k in range(N - len(xs)))
    return evaluate_at(lam, point, qp) / evaluation_principal(lam, N, qp)


def character_adapter(lam, N: int, xs: Sequence, qp: QParams, form: str = "unitary") -> Fraction:
    """The normalized character in any of the orderings, via the unitary one.

    ``twisted`` is the ordering of generating functions at level N:
    P(x_1, x_2 t, ..., x_N t^{N-1}) / P(1, t, ..., t^{N-1}).
    """
    lam, xs = _check_lengths(lam, N, xs)
    t = qp.t
    if form == "unitary":
        return character(lam, N, xs, qp)
    if form == "residue":
        if len(xs) != 1:
            raise DomainError("the residue ordering takes exactly one variable")
        return t ** sum(lam) * character(lam, N, [xs[0] / t], qp)
    if form == "inverse":
        return character(lam, N, [x * t ** (N - 1) for x in xs], qp)
    if form == "twisted":
        if len(xs) != N:
            raise DomainError("the twisted ordering takes all N variables")
        return character(lam, N, [x * t ** i for i, x in enumerate(xs)], qp)
    raise DomainError(f"unknown ordering {form!r}; expected one of {FORMS}")


def character_poly_one(lam, N: int, qp: QParams) -> LaurentPoly:
    """The one-variable character x -> P_lam(x, 1, ..., t^{N-2}) / P_lam(1, ..., t^{N-1})."""
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    if N == 1:
        return LaurentPoly.monomial((lam[0],))
    norm = evaluation_principal(lam, N, qp)
    terms: dict = {}
    size = sum(lam)
    for mu in interlacings_below(lam):
        d = size - sum(mu)
        c = _psi(lam, mu, qp.q, qp.theta) * evaluation_principal(mu, N - 1, qp) / norm
        terms[(d,)] = terms.get((d,), 0) + c
    return LaurentPoly(1, terms)


# ---------------------------------------------------------------------------
# the residue-sum representation


def residue_poles(lam, N: int, qp: QParams) -> list:
    """The simple poles lam_i + theta(N - i) + j, 0 <= j < theta."""
    theta = qp.theta
    poles = [lam[i - 1] + theta * (N - i) + j for i in range(1, N + 1) for j in range(theta)]
    if len(set(poles)) != len(poles):
        raise ConsistencyError(f"repeated residue poles for {lam}")
    return poles


def residue_character(lam, N: int, x, qp: QParams) -> Fraction:
    """The contour-integral side of the one-variable formula, summed by residues.

    Each pole a is simple; the residue of 1/(1 - q^{z-a}) there is -1/ln q,
    which cancels the ln(1/q) in front, leaving
    prod_{i<theta N} (1-q^i)/(x-q^i) * sum_a x^a / prod_{b != a} (1 - q^{a-b}).
    """
    lam = tuple(lam)
    if len(lam) != N:
        raise DomainError(f"signature {lam} does not have length {N}")
    x = as_fraction(x)
    q = qp.q
    if x == 0:
        raise PoleError("pole: x = 0")
    pre = Fraction(1)
    for i in range(1, qp.theta * N):
        if x == q ** i:
            raise PoleError(f"pole: x = q^{i}")
        pre *= (1 - q ** i) / (x - q ** i)
    poles = residue_poles(lam, N, qp)
    total = Fraction(0)
    for a in poles:
        den = Fraction(1)
        for b in poles:
            if b != a:
                den *= 1 - q ** (a - b)
        total += x ** a / den
    return pre * total


# ---------------------------------------------------------------------------
# q-shift and q-degree operators


Coefficient = Union[Fraction, LaurentPoly]


@dataclass
class QShiftExpr:
    """A finite sum of c * T_{q,x_1}^{e_1} ... T_{q,x_m}^{e_m}."""

    nvars: int
    terms: list = field(default_factory=list)  # (coefficient, exponent tuple)

    def add(self, coeff: Coefficient, exps: Sequence[int]) -> "QShiftExpr":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise DomainError(f"bad shift exponents {exps}")
        self.terms.append((coeff, exps))
        return self

    @classmethod
    def from_degree_monomial(cls, exps: Sequence[int], qp: QParams, coeff: Coefficient = 1) -> "QShiftExpr":
        """c * D^{i_1} ... D^{i_m} rewritten with (T - 1)/(q - 1)."""
        exps = tuple(exps)
        out = cls(len(exps))
        q = qp.q
        per_var = []
        for i in exps:
            # (T - 1)^i = sum_k binom(i, k) T^k (-1)^{i-k}
            per_var.append([(comb(i, k) * (-1) ** (i - k), k) for k in range(i + 1)])
        scale = Fraction(1) / (q - 1) ** sum(exps)
        for combo in itertools.product(*per_var):
            c = scale
            for b, _ in combo:
                c *= b
            out.add(coeff * c if not isinstance(coeff, LaurentPoly) else coeff.scale(c),
                    [k for _, k in combo])
        return out


def qshift_apply(expr: QShiftExpr, f: LaurentPoly, qp: QParams) -> LaurentPoly:
    """sum c * f(q^{e_1} x_1, ..., q^{e_m} x_m)."""
    if f.nvars != expr.nvars:
        raise DomainError("operator and polynomial have different arity")
    out = LaurentPoly(f.nvars)
    for coeff, exps in expr.terms:
        shifted = f.scale_variables([qp.q ** e for e in exps])
        out = out + (coeff * shifted if isinstance(coeff, LaurentPoly) else shifted.scale(coeff))
    return out


def qshift_eval(expr: QShiftExpr, fn, xs: Sequence, qp: QParams) -> Fraction:
    """sum c(xs) * fn(q^{e_1} x_1, ...), for a callable fn and scalar coefficients."""
    xs = [as_fraction(x) for x in xs]
    total = Fraction(0)
    for coeff, exps in expr.terms:
        c = coeff.evaluate(xs) if isinstance(coeff, LaurentPoly) else coeff
        if c:
            total += c * fn([x * qp.q ** e for x, e in zip(xs, exps)])
    return total


def qdeg_apply(i: int, f: LaurentPoly, qp: QParams) -> LaurentPoly:
    """D_{q,x_i} f = (f(.., q x_i, ..) - f) / (q - 1); x^m goes to [m]_q x^m."""
    if not 0 <= i < f.nvars:
        raise DomainError(f"variable index {i} out of range")
    q = qp.q
    out = {}
    for k, c in f.terms.items():
        v = c * (q ** k[i] - 1) / (q - 1)
        if v:
            out[k] = v
    return LaurentPoly(f.nvars, out)


# ---------------------------------------------------------------------------
# multiplicative formulas


def _bracket(lam, N: int, qp: QParams) -> LaurentPoly:
    """x -> character(x) * prod_{j=1}^{theta N - 1} (x - q^{j - theta}), undivided."""
    poly = character_poly_one(lam, N, qp)
    for j in range(1, qp.theta * N):
        poly = poly * LaurentPoly(1, {(1,): Fraction(1), (0,): -qp.q ** (j - qp.theta)})
    return poly


def index_matrices(m: int, theta: int) -> list:
    """M_theta^{(m)}: strictly upper-triangular m x m matrices with entries in 0..theta."""
    return list(upper_tri_matrices(m, theta))


def multiplicative_operator(m: int, xs: Sequence, qp: QParams) -> QShiftExpr:
    """(q-1)^{-theta C(m,2)} sum_tau C_tau(xs) prod T^{(i-1)theta + tau_i^+ - tau_i^-}, at xs."""
    theta = qp.theta
    scale = Fraction(1) / (qp.q - 1) ** (theta * comb(m, 2))
    expr = QShiftExpr(m)
    for tau in index_matrices(m, theta):
        c = c_tau_product(tau, xs, qp)
        if c:
            expr.add(c * scale, shift_exponents(tau, theta))
    return expr


def _multiplicative_prefactor(N: int, m: int, xs, qp: QParams) -> Fraction:
    q, theta = qp.q, qp.theta
    expo = theta ** 2 * comb(m + 1, 3) - (N * theta ** 2 - comb(theta + 1, 2)) * comb(m, 2)
    out = q ** expo
    for i in range(1, m + 1):
        out *= q_factorial(theta * (N - i + 1) - 1, qp)
    for i, x in enumerate(xs, start=1):
        for j in range(1, theta * (N - m + 1)):
            f = x - q ** (j - theta)
            if f == 0:
                raise PoleError(f"pole: x_{i} = q^{j - theta}")
            out /= f
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(theta):
                f = xs[i] - q ** k * xs[j]
                if f == 0:
                    raise PoleError(f"pole: x_{i + 1} = q^{k} x_{j + 1}")
                out /= f
    return out


def multiplicative_character(lam, N: int, m: int, xs: Sequence, qp: QParams) -> Fraction:
    """The m-variable character assembled from one-variable characters by a q-difference operator."""
    lam, xs = _check_lengths(lam, N, xs)
    if len(xs) != m:
        raise DomainError(f"need exactly m = {m} arguments")
    pre = _multiplicative_prefactor(N, m, xs, qp)
    h = _bracket(lam, N, qp)
    norm = q_factorial(qp.theta * N - 1, qp)
    cache: dict = {}

    def h_at(y):
        v = cache.get(y)
        if v is None:
            v = h.evaluate([y]) / norm
            cache[y] = v
        return v

    def product(ys):
        out = Fraction(1)
        for y in ys:
            out *= h_at(y)
        return out

    return pre * qshift_eval(multiplicative_operator(m, xs, qp), product, xs, qp)


def two_var_iterated(lam, N: int, xs: Sequence, qp: QParams) -> Fraction:
    """Two-variable character by theta rounds of (D_2 - D_1) followed by division by x_1 - x_2."""
    lam, xs = _check_lengths(lam, N, xs)
    if len(xs) != 2:
        raise DomainError("the iterated form needs exactly two variables")
    if N < 2:
        raise DomainError("two variables need N >= 2")
    q, theta = qp.q, qp.theta
    one = _bracket(lam, N, qp)
    f = _outer_product(one, one)
    if not f.is_symmetric():
        raise ConsistencyError("starting polynomial is not symmetric")
    for _ in range(theta):
        g = qdeg_apply(1, f, qp) - qdeg_apply(0, f, qp)
        if g.swap(0, 1) != -g:
            raise ConsistencyError("intermediate is not antisymmetric before division")
        f = g.divide_by_difference(0, 1)
        if not f.is_symmetric():
            raise ConsistencyError("quotient is not symmetric after division")
    pre = q ** (-(N - 1) * theta ** 2 + comb(theta + 1, 2)) * q_factorial(theta * (N - 1) - 1, qp)
    for i, x in enumerate(xs, start=1):
        for j in range(1, theta * (N - 1)):
            fac = x - q ** (j - theta)
            if fac == 0:
                raise PoleError(f"pole: x_{i} = q^{j - theta}")
            pre /= fac
    return pre * f.evaluate(xs) / q_factorial(theta * N - 1, qp)


def _outer_product(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """(a x b)(x_1, x_2) = a(x_1) b(x_2) for one-variable a, b."""
    return LaurentPoly(2, {(ka[0], kb[0]): ca * cb
                           for ka, ca in a.terms.items() for kb, cb in b.terms.items()})


# ---------------------------------------------------------------------------
# theta = 1: Schur functions


def _det(matrix: list) -> Fraction:
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    a = [list(map(Fraction, row)) for row in matrix]
    n = len(a)
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        out *= p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return sign * out


def schur_bialternant(lam, N: int, xs_full: Sequence) -> Fraction:
    """det[x_i^{lam_j + N - j}] / prod_{i<j} (x_i - x_j)."""
    lam = tuple(lam)
    xs = [as_fraction(x) for x in xs_full]
    if len(lam) != N or len(xs) != N:
        raise DomainError(f"need a signature and a point of length {N}")
    vander = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            if xs[i] == xs[j]:
                raise PoleError(f"pole: x_{i + 1} = x_{j + 1}")
            vander *= xs[i] - xs[j]
    if any(x == 0 for x in xs) and lam and lam[-1] < 0:
        raise PoleError("pole: a coordinate is 0 and the signature has negative parts")
    mat = [[x ** (lam[j] + N - 1 - j) for j in range(N)] for x in xs]
    return _det(mat) / vander


def alternant_poly(exps: Sequence[int]) -> LaurentPoly:
    """a_exps = sum_sigma sgn(sigma) prod_i x_i^{exps[sigma(i)]}."""
    exps = tuple(exps)
    n = len(exps)
    terms = {}
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        terms[tuple(exps[p] for p in perm)] = Fraction(-1 if inv % 2 else 1)
    return LaurentPoly(n, terms)


def schur_polynomial_check(lam, N: int, q) -> bool:
    """P_lam(x; q, q) * a_delta == a_{lam + delta} as Laurent polynomials."""
    lam = tuple(lam)
    qp = QParams(as_fraction(q), 1)
    delta = tuple(N - 1 - j for j in range(N))
    left = macdonald_poly(lam, N, qp) * alternant_poly(delta)
    return left == alternant_poly(tuple(l + d for l, d in zip(lam, delta)))


def schur_character(lam, N: int, m: int, xs: Sequence, qp: QParams) -> Fraction:
    """The theta = 1 multiplicative formula with prod_{i<j}(D_j - D_i) in shift form."""
    if qp.theta != 1:
        raise DomainError("the Schur form needs theta = 1")
    lam, xs = _check_lengths(lam, N, xs)
    if len(xs) != m:
        raise DomainError(f"need exactly m = {m} arguments")
    q = qp.q
    pre = q ** (comb(m + 1, 3) - (N - 1) * comb(m, 2))
    for i in range(1, m + 1):
        pre *= q_factorial(N - i, qp)
    for i, x in enumerate(xs, start=1):
        for j in range(1, N - m + 1):
            fac = x - q ** (j - 1)
            if fac == 0:
                raise PoleError(f"pole: x_{i} = q^{j - 1}")
            pre /= fac
    for i in range(m):
        for j in range(i + 1, m):
            if xs[i] == xs[j]:
                raise PoleError(f"pole: x_{i + 1} = x_{j + 1}")
            pre /= xs[i] - xs[j]
    h = _bracket(lam, N, qp)
    norm = q_factorial(N - 1, qp)
    expr = QShiftExpr(m)
    scale = Fraction(1) / (q - 1) ** comb(m, 2)
    for tau in index_matrices(m, 1):
        expr.add((-1) ** tau.total() * scale, shift_exponents(tau, 1))

    def product(ys):
        out = Fraction(1)
        for y in ys:
            out *= h.evaluate([y]) / norm
        return out

    return pre * qshift_eval(expr, product, xs, qp)


# ---------------------------------------------------------------------------
# the operator in the q-degree basis


def d_basis_expansion(m: int, xs: Sequence, qp: QParams) -> dict:
    """Coefficients g_i(xs) with (q-1)^{theta C(m,2)} D-operator = sum_i g_i (q-1)^{|i|} D^i.

    Uses T^e = sum_j binom(e, j) (q - 1)^j D^j, so g_i = sum_tau C_tau prod_k binom(e_k, i_k).
    """
    xs = tuple(as_fraction(x) for x in xs)
    theta = qp.theta
    out: dict = {}
    for tau in index_matrices(m, theta):
        c = c_tau_product(tau, xs, qp)
        if not c:
            continue
        e = shift_exponents(tau, theta)
        for i in itertools.product(*(range(ek + 1) for ek in e)):
            w = c
            for ek, ik in zip(e, i):
                w *= comb(ek, ik)
            out[i] = out.get(i, 0) + w
    return {k: v for k, v in sorted(out.items()) if v}


def d_basis_coefficient(i: Sequence[int], xs: Sequence, qp: QParams) -> Fraction:
    """f_{i_1,i_2,i_3} for theta = 2, m = 3: the non-top part of the operator in the D basis."""
    if qp.theta != 2:
        raise DomainError("these coefficients are defined for theta = 2")
    i = tuple(int(v) for v in i)
    if len(i) != 3 or any(v < 0 for v in i):
        raise DomainError("need a triple of nonnegative integers")
    top = qp.theta * comb(3, 2)
    if sum(i) > top:
        return Fraction(0)
    g = d_basis_expansion(3, xs, qp).get(i, Fraction(0))
    if sum(i) == top:
        # only the tau with shift exponents equal to i reach total degree 6; that is the top part
        xs = tuple(as_fraction(x) for x in xs)
        g -= sum((c_tau_product(tau, xs, qp) for tau in index_matrices(3, 2)
                  if shift_exponents(tau, 2) == i), Fraction(0))
    return g


def d_basis_consistency(m: int, xs: Sequence, fn, qp: QParams) -> bool:
    """The D-basis expansion applied to a function equals the shift form at xs.

    ``fn`` is a LaurentPoly in m variables; D^i is applied exactly.
    """
    xs = tuple(as_fraction(x) for x in xs)
    q = qp.q
    shift = multiplicative_operator(m, xs, qp)
    left = qshift_apply(shift, fn, qp).evaluate(xs)
    right = Fraction(0)
    scale = Fraction(1) / (q - 1) ** (qp.theta * comb(m, 2))
    for i, g in d_basis_expansion(m, xs, qp).items():
        f = fn
        for var, power in enumerate(i):
            for _ in range(power):
                f = qdeg_apply(var, f, qp)
        right += g * scale * (q - 1) ** sum(i) * f.evaluate(xs)
    return left == right


def example_f410(xs: Sequence, q) -> Fraction:
    x1, x2, x3 = (as_fraction(x) for x in xs)
    q = as_fraction(q)
    return -(q - 1) * (x2 + x3) * (x1 - q * x3) * (x1 - q * x2) / (
        (q * x2 - x3) * (q * x1 - x3) * (q * x1 - x2))


def example_f211(xs: Sequence, q) -> Fraction:
    x1, x2, x3 = (as_fraction(x) for x in xs)
    q = as_fraction(q)
    return -(q - 1) ** 2 * (q + 1) * (x2 - x3) * (x1 ** 2 + x2 * x3 + 2 * x1 * x2 + 2 * x1 * x3) / (
        (q * x1 - x2) * (q * x1 - x3) * (q * x2 - x3))
