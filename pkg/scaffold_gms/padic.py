"""Base-p digit combinatorics.

Digit vectors are stored most-significant-first, ``(s_(n-1), ..., s_(0))``,
so ``DigitVector.digits[0]`` is the coefficient of ``p^(n-1)``. Use
:meth:`DigitVector.digit` to read the coefficient of ``p^k`` without
counting positions by hand.
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence, Tuple

from sympy import isprime, multiplicity

from .errors import DomainError


def check_prime(p: int) -> int:
    """Return ``p`` if it is prime, raise DomainError otherwise."""
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise DomainError(f"p must be prime, got {p!r}")
    return p


def check_rank(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return n


def check_residue(s: int, p: int, n: int) -> int:
    """Return ``s`` if it lies in S_{p^n} = [0, p^n - 1]."""
    if not 0 <= s < p**n:
        raise DomainError(f"{s} is not in [0, {p**n - 1}]")
    return s


@dataclass(frozen=True)
class DigitVector:
    """Base-p expansion of an element of S_{p^n}."""

    digits: Tuple[int, ...]
    p: int
    n: int

    def __post_init__(self):
        if len(self.digits) != self.n:
            raise DomainError(f"expected {self.n} digits, got {len(self.digits)}")
        for digit in self.digits:
            if not 0 <= digit < self.p:
                raise DomainError(f"digit {digit} out of range for p={self.p}")

    @property
    def value(self) -> int:
        return from_digits(self.digits, self.p)

    def digit(self, k: int) -> int:
        """Coefficient of p^k, written s_(k)."""
        if not 0 <= k < self.n:
            raise DomainError(f"digit index {k} out of range for n={self.n}")
        return self.digits[self.n - 1 - k]

    @cached_property
    def factorial_inverse(self) -> int:
        """Inverse of the product of digit factorials, as a residue mod p."""
        product_ = 1
        for digit in self.digits:
            product_ = product_ * math.factorial(digit) % self.p
        return pow(product_, -1, self.p)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __len__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.digits) + ")"


@lru_cache(maxsize=65536)
def digits(s: int, p: int, n: int) -> DigitVector:
    """Return the n base-p digits of s, leading zeros kept."""
    check_residue(s, p, n)
    out = []
    for _ in range(n):
        s, r = divmod(s, p)
        out.append(r)
    return DigitVector(tuple(reversed(out)), p, n)


def from_digits(digit_seq: Sequence[int], p: int) -> int:
    value = 0
    for digit in digit_seq:
        value = value * p + digit
    return value


def preceq(s: int, t: int, p: int, n: int) -> bool:
    """Digitwise order: every digit of s is at most the matching digit of t."""
    return all(a <= b for a, b in zip(digits(s, p, n), digits(t, p, n)))


def preceq_carry_free(s: int, t: int, p: int, n: int) -> bool:
    """Same order as :func:`preceq`, tested as "s <= t and s + (t - s) has no carries"."""
    check_residue(s, p, n)
    check_residue(t, p, n)
    if s > t:
        return False
    a, b = s, t - s
    while a or b:
        if a % p + b % p >= p:
            return False
        a //= p
        b //= p
    return True


def complement(s: int, p: int, n: int) -> int:
    """p^n - 1 - s, the digitwise complement of s."""
    return p**n - 1 - check_residue(s, p, n)


@lru_cache(maxsize=None)
def dominated(s: int, p: int, n: int) -> Tuple[int, ...]:
    """All u with u ⪯ s, ascending."""
    ranges = [range(d + 1) for d in digits(s, p, n)]
    return tuple(sorted(from_digits(c, p) for c in product(*ranges)))


@lru_cache(maxsize=None)
def dominating(s: int, p: int, n: int) -> Tuple[int, ...]:
    """All u with s ⪯ u, ascending."""
    ranges = [range(d, p) for d in digits(s, p, n)]
    return tuple(sorted(from_digits(c, p) for c in product(*ranges)))


def lucas_binom(a: int, b: int, p: int) -> int:
    """C(a, b) mod p, one base-p digit at a time."""
    if a < 0 or b < 0:
        raise DomainError("binomial arguments must be non-negative")
    result = 1
    while a or b:
        result = result * math.comb(a % p, b % p) % p
        if not result:
            return 0
        a //= p
        b //= p
    return result


def digit_sum(s: int, p: int, n: int) -> int:
    return sum(digits(s, p, n))


def floor_j(s: int, j: int, p: int, n: int) -> int:
    """p^j * floor(s / p^j)."""
    check_residue(s, p, n)
    if not 0 <= j < n:
        raise DomainError(f"j={j} not in [0, {n - 1}]")
    return p**j * (s // p**j)


def ceil_j(s: int, j: int, p: int, n: int) -> int:
    low = floor_j(s, j, p, n)
    return low if low == s else low + p**j


def v_p(s: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if s == 0:
        raise DomainError("v_p(0) is undefined")
    return int(multiplicity(p, abs(s)))


def alpha(s: int, p: int, n: int) -> int:
    """Count of j in [1, n-1] above v_p(s) whose digit s_(j) is not p - 1.

    alpha(0) is defined as 0.
    """
    if s == 0:
        return 0
    vec = digits(s, p, n)
    v = v_p(s, p)
    return sum(1 for j in range(1, n) if j > v and vec.digit(j) != p - 1)


def beta(s: int, p: int, n: int) -> int:
    """Length of the leading run of digits equal to (p-1)/2, capped below n - v_p(s).

    Always 0 for p = 2, and beta(0) is defined as 0.
    """
    if p == 2 or s == 0:
        return 0
    half = (p - 1) // 2
    cap = n - v_p(s, p)
    run = 0
    for digit in digits(s, p, n):
        if run + 1 >= cap or digit != half:
            break
        run += 1
    return run


def gamma(s: int, p: int, n: int) -> int:
    check_residue(s, p, n)
    return int(p == 2 and s == 2 ** (n - 1))
