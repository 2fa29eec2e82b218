"""Exact arithmetic in K = F_p((t)) and in L = K(x) with x^(p^n) = t^(-b).

Elements of K are sparse Laurent polynomials. Elements of L are sparse maps
from the exponent a in [0, p^n) of x to a nonzero Laurent coefficient.
"""

import functools
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from typing_extensions import Self

from .errors import DomainError, ResourceLimitError
from .padic import check_prime, check_rank

DEFAULT_TERM_LIMIT = 1_000_000

_term_limit = DEFAULT_TERM_LIMIT


def set_term_limit(limit: int) -> None:
    """Cap the number of terms any single Laurent polynomial may hold."""
    global _term_limit
    if limit < 1:
        raise DomainError(f"term limit must be positive, got {limit}")
    _term_limit = limit


def get_term_limit() -> int:
    return _term_limit


@functools.total_ordering
class _Infinity:
    """Valuation of zero: larger than every integer, absorbing under addition."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __hash__(self) -> int:
        return hash("infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Valuation = Union[int, _Infinity]


class LaurentPoly:
    """Finite sum of c_k t^k with c_k in F_p, zeros never stored."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Optional[Mapping[int, int]] = None):
        self.p = p
        clean: Dict[int, int] = {}
        for exponent, coeff in (terms or {}).items():
            coeff %= p
            if coeff:
                clean[exponent] = coeff
        if len(clean) > _term_limit:
            raise ResourceLimitError(f"Laurent polynomial with {len(clean)} terms exceeds limit {_term_limit}")
        self.terms = clean

    @classmethod
    def constant(cls, p: int, c: int) -> Self:
        return cls(p, {0: c})

    @classmethod
    def monomial(cls, p: int, exponent: int, c: int = 1) -> Self:
        return cls(p, {exponent: c})

    @classmethod
    def zero(cls, p: int) -> Self:
        return cls(p)

    def _check(self, other: "LaurentPoly") -> None:
        if self.p != other.p:
            raise DomainError(f"mixed characteristic: {self.p} and {other.p}")

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Valuation:
        return min(self.terms) if self.terms else INFINITY

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for exponent, coeff in other.terms.items():
            out[exponent] = out.get(exponent, 0) + coeff
        return LaurentPoly(self.p, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly(self.p, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: Dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = (out.get(e1 + e2, 0) + c1 * c2) % self.p
        return LaurentPoly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise DomainError("negative powers of Laurent polynomials are not supported")
        result = LaurentPoly.constant(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly(self.p, {e + k: c for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"LaurentPoly(p={self.p}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_format_term(c, e, None) for e, c in self)


def laurent_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def laurent_val(a: LaurentPoly) -> Valuation:
    return a.valuation()


def _format_term(coeff: int, exponent: int, a: Optional[int]) -> str:
    parts = [] if coeff == 1 else [str(coeff)]
    if exponent:
        parts.append(f"t^{exponent}")
    if a:
        parts.append(f"x^{a}")
    return "·".join(parts) or "1"


@dataclass(frozen=True)
class InsepParams:
    """L = K(x) with x^(p^n) = t^(-b), 0 < b < p^n, gcd(b, p) = 1."""

    p: int
    n: int
    b: int

    def __post_init__(self):
        check_prime(self.p)
        check_rank(self.n)
        if not 0 < self.b < self.order or self.b % self.p == 0:
            raise DomainError(f"b={self.b} must lie in (0, {self.order}) and be prime to p={self.p}")

    @property
    def order(self) -> int:
        return self.p**self.n


class InsepElement:
    """Element sum c_a x^a of L, a in [0, p^n), c_a in K."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params: InsepParams, coeffs: Optional[Mapping[int, LaurentPoly]] = None):
        self.params = params
        clean: Dict[int, LaurentPoly] = {}
        for a, c in (coeffs or {}).items():
            if not 0 <= a < params.order:
                raise DomainError(f"x-exponent {a} not in [0, {params.order})")
            if c.p != params.p:
                raise DomainError(f"coefficient in characteristic {c.p}, expected {params.p}")
            if not c.is_zero():
                clean[a] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, params: InsepParams) -> Self:
        return cls(params)

    @classmethod
    def one(cls, params: InsepParams) -> Self:
        return cls.monomial(params, 0, 0)

    @classmethod
    def monomial(cls, params: InsepParams, a: int, t_exponent: int = 0, c: int = 1) -> Self:
        """c·t^k·x^a."""
        return cls(params, {a: LaurentPoly.monomial(params.p, t_exponent, c)})

    @classmethod
    def from_k(cls, params: InsepParams, c: LaurentPoly) -> Self:
        return cls(params, {0: c})

    def coeff(self, a: int) -> LaurentPoly:
        return self.coeffs.get(a, LaurentPoly.zero(self.params.p))

    def _check(self, other: "InsepElement") -> None:
        if self.params != other.params:
            raise DomainError(f"parameter mismatch: {self.params} and {other.params}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Valuation:
        if not self.coeffs:
            return INFINITY
        q, b = self.params.order, self.params.b
        return min(q * c.valuation() - a * b for a, c in self.coeffs.items())

    def __add__(self, other: "InsepElement") -> "InsepElement":
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out[a] + c if a in out else c
        return InsepElement(self.params, out)

    def __neg__(self) -> "InsepElement":
        return InsepElement(self.params, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other: "InsepElement") -> "InsepElement":
        return self + (-other)

    def scale(self, c: LaurentPoly) -> "InsepElement":
        """Multiply by an element of K."""
        return InsepElement(self.params, {a: c * v for a, v in self.coeffs.items()})

    def __mul__(self, other: "InsepElement") -> "InsepElement":
        self._check(other)
        q, b = self.params.order, self.params.b
        out: Dict[int, LaurentPoly] = {}
        for a1, c1 in self.coeffs.items():
            for a2, c2 in other.coeffs.items():
                a, term = a1 + a2, c1 * c2
                if a >= q:
                    a, term = a - q, term.shift(-b)
                out[a] = out[a] + term if a in out else term
        return InsepElement(self.params, out)

    def __pow__(self, k: int) -> "InsepElement":
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = InsepElement.one(self.params)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, InsepElement):
            return NotImplemented
        return self.params == other.params and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.params, frozenset(self.coeffs.items())))

    def trace(self) -> str:
        """Human-readable sum of c·t^k·x^a terms sorted by (a, k)."""
        if not self.coeffs:
            return "0"
        return " + ".join(
            _format_term(c, e, a) for a in sorted(self.coeffs) for e, c in self.coeffs[a]
        )

    def __str__(self) -> str:
        return self.trace()

    def __repr__(self) -> str:
        return f"InsepElement({self.params.p}, {self.params.n}, {self.params.b}: {self.trace()})"


def insep_mul(u: InsepElement, v: InsepElement) -> InsepElement:
    return u * v


def insep_valuation(u: InsepElement) -> Valuation:
    return u.valuation()
