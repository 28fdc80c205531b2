"""Signatures, Young diagram statistics, interlacing and stabilizing sequences.

Signatures are plain tuples of ints, weakly decreasing.  The empty tuple is the
unique signature of length 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from .errors import ConsistencyError, DomainError

Signature = tuple


def make_signature(parts: Iterable[int]) -> Signature:
    lam = tuple(int(p) for p in parts)
    for a, b in zip(lam, lam[1:]):
        if a < b:
            raise DomainError(f"signature must be weakly decreasing: {lam}")
    return lam


def parse_signature(text: str) -> Signature:
    text = text.strip()
    if text in ("", "()", "empty"):
        return ()
    try:
        return make_signature(int(p) for p in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse signature {text!r}") from exc


def format_signature(lam: Signature) -> str:
    return ",".join(str(p) for p in lam)


def size(lam: Signature) -> int:
    return sum(lam)


def is_positive(lam: Signature) -> bool:
    return not lam or lam[-1] >= 0


def interlaces(mu: Signature, lam: Signature) -> bool:
    """True iff mu < lam, i.e. lam_{i+1} <= mu_i <= lam_i for all i."""
    if len(mu) != len(lam) - 1:
        return False
    return all(lam[i + 1] <= mu[i] <= lam[i] for i in range(len(mu)))


def interlacings_below(lam: Signature) -> list:
    """All mu of length N-1 with mu < lam, in lexicographic order."""
    lam = tuple(lam)
    if not lam:
        raise DomainError("the empty signature has nothing below it")
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(len(lam) - 1)]
    return [tuple(mu) for mu in itertools.product(*ranges)]


def interlacings_above(mu: Signature, low: int, high: int) -> list:
    """All lam of length len(mu)+1 with mu < lam and parts in [low, high]."""
    mu = tuple(mu)
    if not mu:
        return [(a,) for a in range(low, high + 1)]
    ranges = [range(mu[0], high + 1)]
    ranges += [range(mu[i], mu[i - 1] + 1) for i in range(1, len(mu))]
    ranges += [range(low, mu[-1] + 1)]
    return [tuple(lam) for lam in itertools.product(*ranges)]


def signatures_in_box(N: int, low: int, high: int) -> list:
    """All signatures of length N with parts in [low, high]."""
    out = []
    for combo in itertools.combinations_with_replacement(range(high, low - 1, -1), N):
        out.append(tuple(combo))
    return out


def partitions_of_length(N: int, max_size: int) -> list:
    """Positive signatures of length N with |lam| <= max_size."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        for p in range(min(cap, remaining), -1, -1):
            rec(prefix + [p], remaining - p, p)

    rec([], max_size, max_size)
    return sorted(out)


def dominance_leq(mu: Signature, lam: Signature) -> bool:
    if len(mu) != len(lam):
        raise DomainError("dominance order needs signatures of equal length")
    if sum(mu) != sum(lam):
        return False
    return all(a <= b for a, b in zip(itertools.accumulate(mu), itertools.accumulate(lam)))


def conjugate(lam: Signature) -> Signature:
    if not is_positive(lam):
        raise DomainError("conjugate needs a positive signature")
    if not lam or lam[0] == 0:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


class DiagramStats(NamedTuple):
    arm: int
    arm_colength: int
    leg: int
    leg_colength: int


def diagram_stats(lam: Signature, cell: tuple) -> DiagramStats:
    """(a, a', l, l') of the cell (i, j), both 1-based."""
    i, j = cell
    if not is_positive(lam):
        raise DomainError("diagram statistics need a positive signature")
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise DomainError(f"cell {cell} lies outside the diagram of {lam}")
    conj = conjugate(lam)
    return DiagramStats(lam[i - 1] - j, j - 1, conj[j - 1] - i, i - 1)


def cells(lam: Signature):
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield (i, j)


def n_of(lam: Signature) -> int:
    return sum(i * p for i, p in enumerate(lam))


@dataclass(frozen=True)
class NuSpec:
    """A weakly increasing sequence given by a prefix and a constant tail."""

    prefix: tuple

    def __post_init__(self):
        pre = tuple(int(v) for v in self.prefix)
        object.__setattr__(self, "prefix", pre)
        if not pre:
            raise DomainError("nu needs a nonempty prefix")
        for a, b in zip(pre, pre[1:]):
            if a > b:
                raise DomainError(f"nu prefix must be weakly increasing: {pre}")

    @property
    def length(self) -> int:
        return len(self.prefix)

    def entry(self, i: int) -> int:
        """nu_i, 1-based."""
        if i < 1:
            raise DomainError("nu is indexed from 1")
        return self.prefix[i - 1] if i <= len(self.prefix) else self.prefix[-1]

    def expand(self, M: int) -> tuple:
        return tuple(self.entry(i) for i in range(1, M + 1))

    def shift(self, k: int) -> "NuSpec":
        return NuSpec(tuple(v + k for v in self.prefix))

    def to_text(self) -> str:
        return "prefix=" + ",".join(str(v) for v in self.prefix) + ";tail=const"


def parse_nu(text: str) -> NuSpec:
    """Parse ``prefix=0,0,2;tail=const`` (a bare list is accepted too)."""
    prefix_text = text.strip()
    tail = "const"
    if "=" in prefix_text:
        fields = {}
        for part in prefix_text.split(";"):
            if not part.strip():
                continue
            key, _, val = part.partition("=")
            fields[key.strip()] = val.strip()
        if "prefix" not in fields:
            raise DomainError(f"nu spec lacks a prefix: {text!r}")
        prefix_text = fields["prefix"]
        tail = fields.get("tail", "const")
    if tail != "const":
        raise DomainError(f"unsupported nu tail rule {tail!r}")
    try:
        return NuSpec(tuple(int(v) for v in prefix_text.split(",")))
    except ValueError as exc:
        raise DomainError(f"cannot parse nu {text!r}") from exc


def a_k_shift(obj: Union[Signature, NuSpec], k: int):
    if isinstance(obj, NuSpec):
        return obj.shift(k)
    return tuple(p + k for p in obj)


def stabilizing_signature(nu: NuSpec, N: int) -> Signature:
    """lam(N) with lam_{N-i+1} = nu_i."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    return tuple(reversed(nu.expand(N)))


def phi_support_exponents(nu: NuSpec, qp, R: int) -> list:
    """Sorted exponents nu_r + theta(r-1) + s, 1 <= r <= R, 0 <= s < theta.

    ``qp`` is a QParams or a bare theta.
    """
    theta = qp if isinstance(qp, int) else qp.theta
    if R < 1:
        raise DomainError("R must be positive")
    exps = [nu.entry(r) + theta * (r - 1) + s for r in range(1, R + 1) for s in range(theta)]
    if len(set(exps)) != len(exps):
        raise ConsistencyError(f"duplicate support exponents for {nu}")
    return sorted(exps)
