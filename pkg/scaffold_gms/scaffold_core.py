"""Structure of ideals from scaffold shift parameters.

Given a prime p, a rank n and shift parameters b_1..b_n, the functions here
compute the digit-weighted shift 𝔟, its inverse 𝔞, the valuation-criterion
exponent b of an ideal exponent h, the vectors d and w, and the index sets
that count generators of the ideal and the embedding dimension of its
associated order.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from typing_extensions import Self

from .errors import DomainError, SizeLimitError, VerificationError
from .padic import (
    check_prime,
    check_rank,
    check_residue,
    complement,
    digits,
    dominated,
    dominating,
    preceq,
    v_p,
)

logger = logging.getLogger(__name__)

DEFAULT_BFUNCTION_LIMIT = 3125


@dataclass(frozen=True)
class ScaffoldParams:
    """Prime, rank and shift parameters (b_1, ..., b_n)."""

    p: int
    n: int
    b: Tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        check_rank(self.n)
        object.__setattr__(self, "b", tuple(int(bi) for bi in self.b))
        if len(self.b) != self.n:
            raise DomainError(f"expected {self.n} shift parameters, got {len(self.b)}")
        for i, bi in enumerate(self.b, start=1):
            if math.gcd(bi, self.p) != 1:
                raise DomainError(f"shift parameter b_{i}={bi} is not prime to p={self.p}")
        if sorted(value % self.order for value in self.b_table) != list(range(self.order)):
            raise VerificationError(
                "reduction of the shift map is not a bijection", {"p": self.p, "n": self.n, "b": list(self.b)}
            )

    @classmethod
    def uniform(cls, p: int, n: int, b: int) -> Self:
        """All shift parameters equal to b."""
        return cls(p, n, (b,) * n)

    @property
    def order(self) -> int:
        return self.p**self.n

    @cached_property
    def b_table(self) -> Tuple[int, ...]:
        return tuple(_shift(s, self.p, self.n, self.b) for s in range(self.order))

    @cached_property
    def a_table(self) -> Tuple[int, ...]:
        # a_table[r] is the s with 𝔟(s) ≡ -r (mod p^n)
        table = [0] * self.order
        for s, value in enumerate(self.b_table):
            table[-value % self.order] = s
        return tuple(table)

    def r(self, x: int) -> int:
        """Least non-negative residue mod p^n."""
        return x % self.order


def _shift(s: int, p: int, n: int, b: Sequence[int]) -> int:
    total = 0
    for i, digit in enumerate(digits(s, p, n), start=1):
        total += digit * p ** (n - i) * b[i - 1]
    return total


def b_func(s: int, params: ScaffoldParams) -> int:
    """𝔟(s) = sum of s_(n-i) * p^(n-i) * b_i, as an exact integer."""
    return params.b_table[check_residue(s, params.p, params.n)]


def a_func(t: int, params: ScaffoldParams) -> int:
    """The unique s with 𝔟(s) ≡ -t (mod p^n)."""
    return params.a_table[params.r(t)]


def valuation_criterion_b(h: int, params: ScaffoldParams) -> int:
    """The unique b in [h, h + p^n) with 𝔞(b) = p^n - 1."""
    base = -b_func(params.order - 1, params)
    return h + params.r(base - h)


@dataclass(frozen=True)
class IdealExponent:
    """An ideal exponent h with its window [h, h + p^n)."""

    h: int
    order: int

    @property
    def window(self) -> range:
        return range(self.h, self.h + self.order)

    @property
    def residue(self) -> int:
        return self.h % self.order

    def __contains__(self, t: int) -> bool:
        return self.h <= t < self.h + self.order

    def check(self, t: int) -> int:
        if t not in self:
            raise DomainError(f"t={t} is outside the window [{self.h}, {self.h + self.order})")
        return t


@dataclass(frozen=True)
class StructureReport:
    """Structure of the ideal of exponent h over its associated order."""

    p: int
    n: int
    b: Tuple[int, ...]
    h: int
    b_exponent: int
    d: Tuple[int, ...]
    w: Tuple[int, ...]
    free: bool
    dd: Tuple[int, ...]
    ee: Tuple[int, ...]
    min_generators: int
    embedding_dimension: int
    tolerance_required: int

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("b", "d", "w", "dd", "ee"):
            data[key] = list(data[key])
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Self:
        values = dict(data)
        for key in ("b", "d", "w", "dd", "ee"):
            values[key] = tuple(values[key])
        return cls(**values)

    def structure(self) -> Tuple[Any, ...]:
        """The part of the report that depends on h only through h mod p^n."""
        return (
            self.d,
            self.w,
            self.free,
            self.dd,
            self.ee,
            self.min_generators,
            self.embedding_dimension,
            self.tolerance_required,
        )


class IdealStructure:
    """d, w and the generator index sets for one (params, h) pair."""

    def __init__(self, params: ScaffoldParams, h: int):
        self.params = params
        self.ideal = IdealExponent(h, params.order)
        self.b = valuation_criterion_b(h, params)
        p, n = params.p, params.n
        self.d_vector = tuple(self._D(s, self.b) for s in range(params.order))
        self.w_vector = tuple(self._w_definition(s) for s in range(params.order))

        for s in range(params.order):
            j_form = self._w_jform(s)
            window_form = self._w_window(s)
            if not self.w_vector[s] == j_form == window_form:
                raise VerificationError(
                    "w disagrees between its three forms",
                    {"s": s, "h": h, "definition": self.w_vector[s], "j_form": j_form, "window": window_form},
                )
        logger.debug("built ideal structure p=%d n=%d b=%s h=%d", p, n, params.b, h)

    @property
    def h(self) -> int:
        return self.ideal.h

    def _D(self, s: int, t: int) -> int:
        return (self.params.b_table[s] + t - self.h) // self.params.order

    def _w_definition(self, s: int) -> int:
        d = self.d_vector
        return min(d[u] - d[u - s] for u in dominating(s, self.params.p, self.params.n))

    def _w_jform(self, s: int) -> int:
        p, n = self.params.p, self.params.n
        d = self.d_vector
        return min(d[s + j] - d[j] for j in dominated(complement(s, p, n), p, n))

    def _w_window(self, s: int) -> int:
        above = _dominating_set(s, self.params.p, self.params.n)
        return min(self._D(s, t) for t in self.ideal.window if a_func(t, self.params) in above)

    def d(self, s: int) -> int:
        return self.d_vector[check_residue(s, self.params.p, self.params.n)]

    def w(self, s: int) -> int:
        return self.w_vector[check_residue(s, self.params.p, self.params.n)]

    def D(self, s: int, t: int) -> int:
        check_residue(s, self.params.p, self.params.n)
        return self._D(s, self.ideal.check(t))

    def H(self, s: int, t: int) -> int:
        check_residue(s, self.params.p, self.params.n)
        self.ideal.check(t)
        return self.h + self.params.r(self.params.b_table[s] + t - self.h)

    def epsilon(self, s: int, t: int) -> int:
        p, n = self.params.p, self.params.n
        if not preceq(s, a_func(self.ideal.check(t), self.params), p, n):
            raise DomainError(f"epsilon needs s ⪯ 𝔞(t); got s={s}, t={t}")
        value = self.D(s, t) - self.w(s)
        if value not in (0, 1):
            raise VerificationError("epsilon outside {0, 1}", {"s": s, "t": t, "value": value})
        return value

    @cached_property
    def dd_set(self) -> Tuple[int, ...]:
        p, n = self.params.p, self.params.n
        d, w = self.d_vector, self.w_vector
        return tuple(
            u
            for u in range(self.params.order)
            if all(d[u] > d[u - s] + w[s] for s in dominated(u, p, n) if s)
        )

    @cached_property
    def ee_set(self) -> Tuple[int, ...]:
        p, n = self.params.p, self.params.n
        w = self.w_vector
        return tuple(
            u
            for u in range(self.params.order)
            if all(w[u] > w[u - s] + w[s] for s in dominated(u, p, n) if 0 < s < u)
        )

    def report(self) -> StructureReport:
        params = self.params
        free = self.d_vector == self.w_vector
        report = StructureReport(
            p=params.p,
            n=params.n,
            b=params.b,
            h=self.h,
            b_exponent=self.b,
            d=self.d_vector,
            w=self.w_vector,
            free=free,
            dd=self.dd_set,
            ee=self.ee_set,
            min_generators=len(self.dd_set),
            embedding_dimension=len(self.ee_set),
            tolerance_required=params.order + self.b - self.h,
        )
        _check_report(report)
        return report


@lru_cache(maxsize=None)
def _dominating_set(s: int, p: int, n: int) -> frozenset:
    return frozenset(dominating(s, p, n))


def _check_report(report: StructureReport) -> None:
    problems = []
    if report.d[0] != 0 or report.w[0] != 0:
        problems.append("d(0) and w(0) must vanish")
    if any(w > d for d, w in zip(report.d, report.w)):
        problems.append("w <= d fails")
    # 𝔟 is monotone on ⪯ only when every shift parameter is positive
    if all(bi > 0 for bi in report.b) and min(report.w) < 0:
        problems.append("w >= 0 fails for positive shift parameters")
    if report.free != (report.min_generators == 1):
        problems.append("freeness and generator count disagree")
    if 0 not in report.dd:
        problems.append("0 missing from the generator index set")
    if not {0, *(report.p**k for k in range(report.n))} <= set(report.ee):
        problems.append("digit powers missing from the embedding index set")
    if problems:
        raise VerificationError("; ".join(problems), {"h": report.h, "b": list(report.b)})


@lru_cache(maxsize=512)
def ideal_structure(params: ScaffoldParams, h: int) -> IdealStructure:
    return IdealStructure(params, h)


def d(s: int, h: int, params: ScaffoldParams) -> int:
    """d(s) = floor((𝔟(s) + b - h) / p^n)."""
    return ideal_structure(params, h).d(s)


def D(s: int, t: int, h: int, params: ScaffoldParams) -> int:
    """D(s, t) = floor((𝔟(s) + t - h) / p^n) for t in the window of h."""
    return ideal_structure(params, h).D(s, t)


def H(s: int, t: int, h: int, params: ScaffoldParams) -> int:
    """H(s, t) = h + r(𝔟(s) + t - h); t + 𝔟(s) = H + p^n * D."""
    return ideal_structure(params, h).H(s, t)


def w(s: int, h: int, params: ScaffoldParams) -> int:
    """w(s) = min of d(u) - d(u - s) over u ⪰ s."""
    return ideal_structure(params, h).w(s)


def w_jform(s: int, h: int, params: ScaffoldParams) -> int:
    """w(s) = min of d(s + j) - d(j) over j ⪯ p^n - 1 - s."""
    check_residue(s, params.p, params.n)
    return ideal_structure(params, h)._w_jform(s)


def w_window(s: int, h: int, params: ScaffoldParams) -> int:
    """w(s) = min of D(s, t) over t in the window with 𝔞(t) ⪰ s."""
    check_residue(s, params.p, params.n)
    return ideal_structure(params, h)._w_window(s)


def epsilon(s: int, t: int, h: int, params: ScaffoldParams) -> int:
    return ideal_structure(params, h).epsilon(s, t)


def dd_set(h: int, params: ScaffoldParams) -> List[int]:
    return list(ideal_structure(params, h).dd_set)


def ee_set(h: int, params: ScaffoldParams) -> List[int]:
    return list(ideal_structure(params, h).ee_set)


def analyze(h: int, params: ScaffoldParams) -> StructureReport:
    """Full structure report for the ideal of exponent h."""
    return ideal_structure(params, h).report()


def _check_congruent_shifts(params: ScaffoldParams) -> int:
    b_n = params.b[-1]
    for i, bi in enumerate(params.b, start=1):
        if (bi - b_n) % params.p**i:
            raise DomainError(f"b_{i}={bi} is not congruent to b_n={b_n} mod p^{i}")
    return params.r(b_n)


@dataclass(frozen=True)
class RingCriterion:
    """Freeness of the valuation ring and the divisibility witness m, if any."""

    free: bool
    residue: int
    witness: Optional[int] = None


def ring_of_integers_free(params: ScaffoldParams) -> RingCriterion:
    """Is the valuation ring free over its associated order?

    Requires b_i ≡ b_n (mod p^i). The witness is the least m in [1, n] with
    r(b_n) dividing p^m - 1.
    """
    residue = _check_congruent_shifts(params)
    free = analyze(0, params).free
    witness = next((m for m in range(1, params.n + 1) if (params.p**m - 1) % residue == 0), None)
    if witness is not None and not free:
        raise VerificationError("divisibility witness exists but the ring is not free", {"witness": witness})
    if params.n <= 2 and free and witness is None:
        raise VerificationError("ring is free without a divisibility witness", {"residue": residue})
    return RingCriterion(free=free, residue=residue, witness=witness)


def inverse_different_free(params: ScaffoldParams) -> bool:
    """Is the inverse different free over its associated order?"""
    residue = _check_congruent_shifts(params)
    free = analyze(residue + 1, params).free
    if free != (residue == params.order - 1):
        raise VerificationError("inverse different freeness disagrees with r(b_n) = p^n - 1", {"residue": residue})
    return free


@dataclass(frozen=True)
class BFunctionResult:
    """Outcome of the bijectivity test for x -> sum a_i x_i mod p^n.

    ``relabeling`` lists the indices of ``a`` ordered so that the i-th has
    valuation n - i; ``collision`` is a pair of digit vectors with equal image.
    """

    bijective: bool
    valuations: Tuple[Optional[int], ...]
    relabeling: Optional[Tuple[int, ...]] = None
    collision: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default=None)


def bfunction_bijective(
    a: Sequence[int], p: int, n: int, limit: int = DEFAULT_BFUNCTION_LIMIT
) -> BFunctionResult:
    check_prime(p)
    check_rank(n)
    if len(a) != n:
        raise DomainError(f"expected {n} coefficients, got {len(a)}")
    order = p**n
    if order > limit:
        raise SizeLimitError("brute-force bijectivity test", order, limit)

    seen: Dict[int, Tuple[int, ...]] = {}
    collision = None
    for x in product(range(p), repeat=n):
        image = sum(ai * xi for ai, xi in zip(a, x)) % order
        if image in seen:
            collision = (seen[image], x)
            break
        seen[image] = x
    brute = collision is None

    valuations = tuple(None if ai == 0 else v_p(ai, p) for ai in a)
    criterion = sorted(v for v in valuations if v is not None) == list(range(n)) and None not in valuations
    if brute != criterion:
        raise VerificationError(
            "brute force and valuation profile disagree", {"a": list(a), "p": p, "n": n}
        )
    relabeling = None
    if brute:
        relabeling = tuple(sorted(range(n), key=lambda i: -valuations[i]))
    return BFunctionResult(bijective=brute, valuations=valuations, relabeling=relabeling, collision=collision)
