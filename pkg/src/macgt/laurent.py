"""Sparse multivariate Laurent polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ConsistencyError, DomainError, PoleError
from .qkernel import as_fraction, format_rational


class LaurentPoly:
    """Dict from exponent tuples to nonzero Fraction coefficients.

    Instances are treated as immutable once built.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise DomainError(f"exponent {exps} does not have {nvars} slots")
                if c != 0:
                    clean[tuple(exps)] = Fraction(c)
        self.terms = clean

    @classmethod
    def constant(cls, c, nvars: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: as_fraction(c)})

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "LaurentPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: as_fraction(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "LaurentPoly":
        exps = [0] * nvars
        exps[i] = 1
        return cls.monomial(exps)

    @classmethod
    def _raw(cls, nvars, terms) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.nvars)
        if other.nvars != self.nvars:
            raise DomainError("arity mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> "LaurentPoly":
        c = as_fraction(c)
        if c == 0:
            return LaurentPoly(self.nvars)
        return LaurentPoly._raw(self.nvars, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        other = self._check(other)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.nvars)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i + 1}^{e}" if e != 1 else f"x{i + 1}" for i, e in enumerate(k) if e)
            parts.append(f"({format_rational(self.terms[k])})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- structure ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree_range(self) -> tuple[int, int]:
        degs = [sum(k) for k in self.terms]
        return (min(degs), max(degs)) if degs else (0, 0)

    def prepend_variable(self, exponent: int) -> "LaurentPoly":
        """Multiply by x_0^exponent where x_0 becomes a new first variable."""
        return LaurentPoly._raw(self.nvars + 1, {(exponent,) + k: c for k, c in self.terms.items()})

    def shift_all(self, k: int) -> "LaurentPoly":
        """Multiply by (x_1 ... x_n)^k."""
        return LaurentPoly._raw(self.nvars, {tuple(e + k for e in key): c for key, c in self.terms.items()})

    def permute(self, perm: Iterable[int]) -> "LaurentPoly":
        """New variable i is old variable perm[i]."""
        perm = tuple(perm)
        return LaurentPoly._raw(self.nvars, {tuple(k[p] for p in perm): c for k, c in self.terms.items()})

    def swap(self, i: int, j: int) -> "LaurentPoly":
        perm = list(range(self.nvars))
        perm[i], perm[j] = perm[j], perm[i]
        return self.permute(perm)

    def is_symmetric(self) -> bool:
        return all(self.swap(i, i + 1) == self for i in range(self.nvars - 1))

    def scale_variables(self, factors: Iterable) -> "LaurentPoly":
        """Substitute x_i -> c_i x_i."""
        factors = [as_fraction(c) for c in factors]
        out = {}
        for k, c in self.terms.items():
            v = c
            for f, e in zip(factors, k):
                if e:
                    if f == 0 and e < 0:
                        raise PoleError("pole: scaling a negative power by 0")
                    v *= f ** e
            if v:
                out[k] = v
        return LaurentPoly._raw(self.nvars, out)

    def evaluate(self, point: Iterable) -> Fraction:
        point = [as_fraction(v) for v in point]
        if len(point) != self.nvars:
            raise DomainError(f"expected {self.nvars} values, got {len(point)}")
        cache: list = [dict() for _ in point]
        total = Fraction(0)
        for k, c in self.terms.items():
            v = c
            for i, e in enumerate(k):
                if e:
                    p = cache[i].get(e)
                    if p is None:
                        if point[i] == 0 and e < 0:
                            raise PoleError(f"pole: x{i + 1} = 0")
                        p = point[i] ** e
                        cache[i][e] = p
                    v *= p
            total += v
        return total

    def map_coefficients_by_exponent(self, fn) -> "LaurentPoly":
        """Multiply each term by fn(exponent tuple)."""
        return LaurentPoly(self.nvars, {k: c * fn(k) for k, c in self.terms.items()})

    def divide_by_difference(self, i: int, j: int) -> "LaurentPoly":
        """Exact quotient by (x_i - x_j); raises if the remainder is nonzero."""
        if i == j:
            raise DomainError("cannot divide by x_i - x_i")
        # group by all exponents except x_i and x_j, plus the total degree in x_i, x_j
        # f = sum over groups of x^rest * g(x_i, x_j) with g homogeneous of degree d;
        # a homogeneous binary form g(a, b) = sum g_k a^k b^{d-k} is divisible by a - b
        # iff g(1, 1) = 0, and the quotient is sum_k h_k a^k b^{d-1-k} with
        # h_k = sum_{l > k} g_l.
        groups: dict = {}
        for k, c in self.terms.items():
            rest = tuple(e for idx, e in enumerate(k) if idx not in (i, j))
            d = k[i] + k[j]
            groups.setdefault((rest, d), {})[k[i]] = c
        out: dict = {}
        for (rest, d), coeffs in groups.items():
            if sum(coeffs.values()) != 0:
                raise ConsistencyError("nonzero remainder in division by x_i - x_j")
            lo, hi = min(coeffs), max(coeffs)
            running = Fraction(0)
            for a in range(hi, lo, -1):
                running += coeffs.get(a, 0)
                # term h_{a-1} a^{a-1} b^{d-a}
                if running:
                    exps = []
                    it = iter(rest)
                    for idx in range(self.nvars):
                        if idx == i:
                            exps.append(a - 1)
                        elif idx == j:
                            exps.append(d - a)
                        else:
                            exps.append(next(it))
                    out[tuple(exps)] = running
        return LaurentPoly._raw(self.nvars, out)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> list:
        return [{"exponents": list(k), "coeff": format_rational(c)}
                for k, c in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data: list, nvars: int | None = None) -> "LaurentPoly":
        if not data:
            return cls(nvars or 0)
        n = len(data[0]["exponents"]) if nvars is None else nvars
        return cls(n, {tuple(d["exponents"]): as_fraction(d["coeff"]) for d in data})
