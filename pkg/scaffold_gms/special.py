"""Closed-form structure results for special families of shift parameters.

Covers degree p (continued fractions), the biquadratic case, the weakly
ramified case b = (1, ..., 1), Kummer-type break formulas and the
applicability bound for characteristic-zero degree-p scaffolds.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from sympy import Rational
from sympy.ntheory.continued_fraction import continued_fraction_periodic, continued_fraction_reduce

from .errors import DomainError, VerificationError
from .padic import alpha, beta, check_prime, check_rank, gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContinuedFraction:
    """[0; q_1, ..., q_m] with q_m >= 2."""

    numerator: int
    denominator: int
    quotients: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.quotients)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def evaluate(self) -> Fraction:
        reduced = Rational(continued_fraction_reduce([0, *self.quotients]))
        return Fraction(int(reduced.p), int(reduced.q))

    def __str__(self) -> str:
        return "[0; " + ", ".join(str(q) for q in self.quotients) + "]"


def continued_fraction(num: int, den: int) -> ContinuedFraction:
    if den <= 0 or not 0 < num < den:
        raise DomainError(f"{num}/{den} is not in (0, 1)")
    terms = [int(q) for q in continued_fraction_periodic(num, den)]
    if terms[0] != 0:
        raise VerificationError("expansion of a proper fraction must start with 0", {"terms": terms})
    quotients = terms[1:]
    if len(quotients) > 1 and quotients[-1] == 1:
        quotients = quotients[:-2] + [quotients[-2] + 1]
    expansion = ContinuedFraction(num, den, tuple(quotients))
    if expansion.evaluate() != expansion.value:
        raise VerificationError("continued fraction does not reproduce its value", {"num": num, "den": den})
    return expansion


def ferton_free(h: int, b_prime: int, p: int) -> bool:
    """Freeness of the ideal of exponent h in degree p with break residue b'."""
    check_prime(p)
    if not 1 <= b_prime <= p - 1:
        raise DomainError(f"b'={b_prime} not in [1, {p - 1}]")
    h = h % p
    if b_prime == 1:
        return h in (0, 1) or 2 * h > p + 1
    if h > b_prime:
        return False
    expansion = continued_fraction(b_prime, p)
    last = expansion.quotients[-1]
    if len(expansion) % 2 == 0:
        return h in (b_prime, b_prime - last)
    return b_prime - Fraction(last, 2) <= h <= b_prime


def degree_p_ring_free(b1: int, p: int) -> bool:
    """Valuation ring freeness in degree p: r(b1) divides p - 1.

    Equivalently the continued fraction of r(b1)/p has at most two quotients.
    """
    check_prime(p)
    residue = b1 % p
    if residue == 0:
        raise DomainError(f"b1={b1} is not prime to p={p}")
    divides = (p - 1) % residue == 0
    short = len(continued_fraction(residue, p)) <= 2
    if divides != short:
        raise VerificationError("divisibility and expansion length disagree", {"b1": b1, "p": p})
    return divides


@dataclass(frozen=True)
class BiquadReport:
    free: bool
    min_generators: int
    embedding_dimension: int


def biquad_report(b1_mod4: int, h: int) -> BiquadReport:
    """Structure for p = 2, n = 2 and b_1 ≡ b_2 from b_1 mod 4 and h."""
    b1 = b1_mod4 % 4
    if b1 not in (1, 3):
        raise DomainError(f"b1 must be odd, got residue {b1} mod 4")
    h = h % 4
    free = (b1 == 1 and h != 2) or (b1 == 3 and h != 1)
    small = (b1 == 1 and h % 2 == 1) or (b1 == 3 and h % 2 == 0)
    return BiquadReport(free=free, min_generators=1 if free else 3, embedding_dimension=3 if small else 4)


@dataclass(frozen=True)
class WeakReport:
    """Structure in the weakly ramified case; h_prime is None when h ≡ 1."""

    p: int
    n: int
    h: int
    h_prime: Optional[int]
    m: Optional[int]
    k: Optional[int]
    free: bool
    min_generators: int
    embedding_dimension: int


def weak_report(p: int, n: int, h: int) -> WeakReport:
    check_prime(p)
    check_rank(n)
    order = p**n
    residue = h % order
    if residue == 1:
        return WeakReport(p, n, h, None, None, None, True, 1, n + 1)
    h_prime = residue if residue else order
    m = h_prime - 1
    k = max(m, order - m)
    free = Fraction(h_prime) >= 1 + Fraction(order, 2)
    generators = 1 if free else 2 + alpha(m, p, n) - beta(m, p, n)
    embedding = n + 2 + alpha(k, p, n) - gamma(k, p, n)
    return WeakReport(p, n, h, h_prime, m, k, free, generators, embedding)


@dataclass(frozen=True)
class WeakExtremes:
    """Extreme generator counts and embedding dimensions over all h mod p^n.

    Each witness list holds the residues h in [0, p^n) attaining the value.
    """

    p: int
    n: int
    max_generators: int
    max_generators_at: List[int]
    min_nonfree_generators: Optional[int]
    min_nonfree_generators_at: List[int]
    min_embedding_dimension: int
    min_embedding_dimension_at: List[int]
    max_embedding_dimension: int
    max_embedding_dimension_at: List[int]
    generator_counts: List[int]
    embedding_dimensions: List[int]


def weak_extremes(p: int, n: int) -> WeakExtremes:
    check_prime(p)
    check_rank(n)
    order = p**n
    reports = [weak_report(p, n, h) for h in range(order)]

    def witnesses(values: Dict[int, int], target: int) -> List[int]:
        return [h for h, value in values.items() if value == target]

    gens = {r.h: r.min_generators for r in reports}
    nonfree = {r.h: r.min_generators for r in reports if not r.free}
    embs = {r.h: r.embedding_dimension for r in reports}
    min_nonfree = min(nonfree.values()) if nonfree else None
    summary = WeakExtremes(
        p=p,
        n=n,
        max_generators=max(gens.values()),
        max_generators_at=witnesses(gens, max(gens.values())),
        min_nonfree_generators=min_nonfree,
        min_nonfree_generators_at=witnesses(nonfree, min_nonfree) if nonfree else [],
        min_embedding_dimension=min(embs.values()),
        min_embedding_dimension_at=witnesses(embs, min(embs.values())),
        max_embedding_dimension=max(embs.values()),
        max_embedding_dimension_at=witnesses(embs, max(embs.values())),
        generator_counts=sorted(set(gens.values())),
        embedding_dimensions=sorted(set(embs.values())),
    )
    _check_extremes(summary, gens, embs)
    return summary


def _check_extremes(summary: WeakExtremes, gens: Dict[int, int], embs: Dict[int, int]) -> None:
    p, n = summary.p, summary.n
    order = p**n
    problems = []
    if p > 2:
        middle = (order + 1) // 2
        if summary.max_generators != n + 1:
            problems.append("maximum generator count is not n+1")
        if summary.min_nonfree_generators != 2 or middle not in summary.min_nonfree_generators_at:
            problems.append("two generators not attained at (p^n+1)/2")
        if summary.embedding_dimensions != list(range(n + 1, 2 * n + 2)):
            problems.append("embedding dimensions do not fill [n+1, 2n+1]")
        if summary.min_embedding_dimension_at != [1]:
            problems.append("embedding dimension n+1 attained away from h ≡ 1")
        if embs[2 % order] != n + 2 or embs[0] != n + 2:
            problems.append("embedding dimension n+2 not attained at h=2 and h=p^n")
        if embs[middle] != 2 * n + 1:
            problems.append("embedding dimension 2n+1 not attained at (p^n+1)/2")
    elif n > 1:
        half = 2 ** (n - 1)
        if summary.max_generators != n + 1:
            problems.append("maximum generator count is not n+1")
        if 2 in summary.generator_counts:
            problems.append("some ideal needs exactly two generators")
        if gens[half] != 3:
            problems.append("three generators not attained at 2^(n-1)")
        if sorted(summary.min_embedding_dimension_at) != sorted({1, half + 1}) or summary.min_embedding_dimension != n + 1:
            problems.append("embedding dimension n+1 not attained exactly at h ≡ 1 and 2^(n-1)+1")
        if sorted(summary.max_embedding_dimension_at) != sorted({half, (half + 2) % order}) or (
            summary.max_embedding_dimension != 2 * n
        ):
            problems.append("embedding dimension 2n not attained exactly at 2^(n-1) and 2^(n-1)+2")
    if problems:
        raise VerificationError("; ".join(problems), {"p": p, "n": n})


def miyata_breaks(p: int, n: int, vK_a_minus_1: int, vK_p: int) -> Tuple[int, ...]:
    """Shift parameters of the Kummer-type family with given valuations.

    vK_p must be divisible by (p - 1) * p^(n-1), so that K holds the roots of
    unity the family needs.
    """
    check_prime(p)
    check_rank(n)
    if vK_a_minus_1 <= 0 or vK_p <= 0:
        raise DomainError("valuations must be positive")
    if vK_p % ((p - 1) * p ** (n - 1)):
        raise DomainError(f"v_K(p)={vK_p} is not divisible by (p-1)p^(n-1)={(p - 1) * p ** (n - 1)}")
    if math.gcd(vK_a_minus_1, p) != 1:
        raise DomainError(f"v_K(a-1)={vK_a_minus_1} is not prime to p={p}")
    b1 = p * vK_p // (p - 1) - vK_a_minus_1
    if b1 <= 0:
        raise DomainError(f"first break {b1} is not positive")
    breaks = tuple(b1 + vK_p * sum(p**j for j in range(1, i)) for i in range(1, n + 1))
    order = p**n
    if any((bi - breaks[-1]) % order for bi in breaks):
        raise VerificationError("breaks are not congruent mod p^n", {"breaks": list(breaks)})
    logger.debug("breaks p=%d n=%d: %s", p, n, breaks)
    return breaks


def degree_p_tolerance(b1: int, p: int, vK_p: int) -> int:
    """Tolerance p*v_K(p) - (p-1)*b1 of the degree-p scaffold."""
    return p * vK_p - (p - 1) * b1


def char0_degree_p_applicable(b1: int, p: int, vK_p: int) -> bool:
    """Does b1 < p*v_K(p)/(p-1) - 2 hold, so that every ideal is covered?"""
    check_prime(p)
    applicable = b1 < Fraction(p * vK_p, p - 1) - 2
    if applicable != (degree_p_tolerance(b1, p, vK_p) >= 2 * p - 1):
        raise VerificationError("bound and tolerance disagree", {"b1": b1, "p": p, "vK_p": vK_p})
    return applicable
