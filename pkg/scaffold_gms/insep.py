"""The divided power algebra acting on a purely inseparable extension.

A(n) has K-basis D_0, ..., D_{p^n - 1} with D_i·D_j = C(i+j, j)·D_{i+j}
(zero once i + j reaches p^n) and acts on L = K(x) by
D_r(x^a) = C(a, r)·x^(a-r). With Ψ_i = D_{p^(n-i)} and

    λ_t = t^(f_t)·x^(𝔞(t)) / (product of the digit factorials of 𝔞(t)),

where t = -b·𝔞(t) + p^n·f_t, the pair (Ψ, λ) is a scaffold of infinite
tolerance. The checks below confirm that directly and compare the
valuations it produces with the structure engine.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

from typing_extensions import Self

from .errors import DomainError, VerificationError
from .localfield import INFINITY, InsepElement, InsepParams, LaurentPoly
from .padic import check_prime, check_rank, complement, digits, lucas_binom, preceq
from .scaffold_core import (
    ScaffoldParams,
    StructureReport,
    a_func,
    b_func,
    ideal_structure,
    valuation_criterion_b,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DividedPowerParams:
    p: int
    n: int

    def __post_init__(self):
        check_prime(self.p)
        check_rank(self.n)

    @property
    def order(self) -> int:
        return self.p**self.n


class DividedPowerElement:
    """Sum of c_i·D_i with c_i in K."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params: DividedPowerParams, coeffs: Optional[Mapping[int, LaurentPoly]] = None):
        self.params = params
        clean: Dict[int, LaurentPoly] = {}
        for i, c in (coeffs or {}).items():
            if not 0 <= i < params.order:
                raise DomainError(f"basis index {i} not in [0, {params.order})")
            if not c.is_zero():
                clean[i] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, params: DividedPowerParams, i: int, c: int = 1) -> Self:
        return cls(params, {i: LaurentPoly.constant(params.p, c)})

    @classmethod
    def identity(cls, params: DividedPowerParams) -> Self:
        return cls.basis(params, 0)

    @classmethod
    def zero(cls, params: DividedPowerParams) -> Self:
        return cls(params)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "DividedPowerElement") -> None:
        if self.params != other.params:
            raise DomainError(f"parameter mismatch: {self.params} and {other.params}")

    def __add__(self, other: "DividedPowerElement") -> "DividedPowerElement":
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return DividedPowerElement(self.params, out)

    def __neg__(self) -> "DividedPowerElement":
        return DividedPowerElement(self.params, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "DividedPowerElement") -> "DividedPowerElement":
        return self + (-other)

    def scale(self, c: LaurentPoly) -> "DividedPowerElement":
        return DividedPowerElement(self.params, {i: c * v for i, v in self.coeffs.items()})

    def __mul__(self, other: "DividedPowerElement") -> "DividedPowerElement":
        return dp_mul(self, other)

    def __pow__(self, k: int) -> "DividedPowerElement":
        result = DividedPowerElement.identity(self.params)
        for _ in range(k):
            result = result * self
        return result

    def act(self, z: InsepElement) -> InsepElement:
        return dp_act(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DividedPowerElement):
            return NotImplemented
        return self.params == other.params and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.params, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.coeffs[i]})·D_{i}" for i in sorted(self.coeffs))


def dp_mul(u: DividedPowerElement, v: DividedPowerElement) -> DividedPowerElement:
    """Product in A(n): D_i·D_j = C(i+j, j)·D_{i+j}, zero past the top index."""
    u._check(v)
    p, order = u.params.p, u.params.order
    out: Dict[int, LaurentPoly] = {}
    for i, c1 in u.coeffs.items():
        for j, c2 in v.coeffs.items():
            if i + j >= order:
                continue
            binom = lucas_binom(i + j, j, p)
            if binom:
                term = c1 * c2 * binom
                out[i + j] = out[i + j] + term if i + j in out else term
    return DividedPowerElement(u.params, out)


def dp_act(u: DividedPowerElement, z: InsepElement) -> InsepElement:
    """Action of A(n) on L: D_r(x^a) = C(a, r)·x^(a-r), K-linear."""
    if (u.params.p, u.params.n) != (z.params.p, z.params.n):
        raise DomainError(f"cannot act with {u.params} on {z.params}")
    p = u.params.p
    out: Dict[int, LaurentPoly] = {}
    for r, c in u.coeffs.items():
        for a, coeff in z.coeffs.items():
            if r > a:
                continue
            binom = lucas_binom(a, r, p)
            if binom:
                term = c * coeff * binom
                out[a - r] = out[a - r] + term if a - r in out else term
    return InsepElement(z.params, out)


class ScaffoldRealization:
    """λ_t and Ψ_1..Ψ_n for L = K(x), x^(p^n) = t^(-b)."""

    def __init__(self, params: InsepParams):
        self.params = params
        self.scaffold_params = ScaffoldParams.uniform(params.p, params.n, params.b)
        self.algebra = DividedPowerParams(params.p, params.n)
        p, n = params.p, params.n
        self.psi: Tuple[DividedPowerElement, ...] = tuple(
            DividedPowerElement.basis(self.algebra, p ** (n - i)) for i in range(1, n + 1)
        )
        self._lambda_cache: Dict[int, InsepElement] = {}
        self._monomial_cache: Dict[int, DividedPowerElement] = {}

    @property
    def order(self) -> int:
        return self.params.order

    def a(self, t: int) -> int:
        return a_func(t, self.scaffold_params)

    def f(self, t: int) -> int:
        f_t, rest = divmod(t + self.params.b * self.a(t), self.order)
        if rest:
            raise VerificationError("t + b·𝔞(t) is not divisible by p^n", {"t": t, "remainder": rest})
        return f_t

    def lam(self, t: int) -> InsepElement:
        """λ_t, the element of valuation exactly t."""
        if t not in self._lambda_cache:
            a = self.a(t)
            coeff = digits(a, self.params.p, self.params.n).factorial_inverse
            self._lambda_cache[t] = InsepElement.monomial(self.params, a, self.f(t), coeff)
        return self._lambda_cache[t]

    def psi_monomial(self, s: int) -> DividedPowerElement:
        """Ψ^(s) = Ψ_n^(s_(0)) ··· Ψ_1^(s_(n-1))."""
        if s not in self._monomial_cache:
            vec = digits(s, self.params.p, self.params.n)
            result = DividedPowerElement.identity(self.algebra)
            for i in range(self.params.n, 0, -1):
                result = result * self.psi[i - 1] ** vec.digit(self.params.n - i)
            self._monomial_cache[s] = result
        return self._monomial_cache[s]

    def phi(self, s: int, w_s: int) -> DividedPowerElement:
        """Φ^(s) = t^(-w(s))·Ψ^(s)."""
        return self.psi_monomial(s).scale(LaurentPoly.monomial(self.params.p, -w_s))


def build_realization(p: int, n: int, b: int) -> ScaffoldRealization:
    return ScaffoldRealization(InsepParams(p, n, b))


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if value is INFINITY:
        return "inf"
    return str(value)


@dataclass
class Failure:
    kind: str
    i: Optional[int] = None
    s: Optional[int] = None
    t: Optional[int] = None
    expected: Any = None
    got: Any = None
    r: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {key: _plain(value) for key, value in asdict(self).items()}
        if self.r is None:
            del data["r"]
        return data


@dataclass
class VerificationReport:
    """Count of checks run and the failures among them."""

    checks_run: int = 0
    failures: List[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def check(self, kind: str, ok: bool, **where: Any) -> bool:
        self.checks_run += 1
        if not ok:
            self.failures.append(Failure(kind, **where))
        return ok

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.checks_run + other.checks_run, self.failures + other.failures)

    def to_dict(self) -> Dict[str, Any]:
        return {"checks_run": self.checks_run, "failures": [f.to_dict() for f in self.failures]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_t_range(order: int, h: int = 0) -> range:
    return range(h - order, h + 2 * order + 1)


def verify_scaffold(real: ScaffoldRealization, t_range: Optional[range] = None) -> VerificationReport:
    """Check the scaffold identities exactly over a range of t."""
    p, n, b = real.params.p, real.params.n, real.params.b
    order = real.order
    t_range = t_range if t_range is not None else default_t_range(order)
    report = VerificationReport()
    one = InsepElement.one(real.params)
    t_unit = LaurentPoly.monomial(p, 1)

    for i, psi in enumerate(real.psi, start=1):
        on_one, power = dp_act(psi, one), psi**p
        report.check("a-aug", on_one.is_zero(), i=i, expected=0, got=on_one)
        report.check("a-p-triv", power.is_zero(), i=i, expected=0, got=power)

    for t in t_range:
        lam = real.lam(t)
        report.check("lambda-valuation", lam.valuation() == t, t=t, expected=t, got=lam.valuation())
        shifted = real.lam(t + order)
        report.check(
            "lambda-period", shifted == lam.scale(t_unit), t=t, expected=lam.scale(t_unit), got=shifted
        )
        vec = digits(real.a(t), p, n)
        for i, psi in enumerate(real.psi, start=1):
            step = p ** (n - i)
            got = dp_act(psi, lam)
            if vec.digit(n - i) >= 1:
                expected = real.lam(t + step * b)
            else:
                expected = InsepElement.zero(real.params)
            report.check("psi-shift", got == expected, i=i, t=t, expected=expected, got=got)
            deep = dp_act(psi**p, lam).valuation()
            report.check("a-p-power", deep > t + p * step * b, i=i, t=t, expected=f"> {t + p * step * b}", got=deep)

    b_prime = valuation_criterion_b(0, real.scaffold_params)
    rho = real.lam(b_prime)
    residues = set()
    for s in range(order):
        value = dp_act(real.psi_monomial(s), rho).valuation()
        expected = rho.valuation() + b_func(s, real.scaffold_params)
        report.check("a-eub-shift", value == expected, s=s, t=b_prime, expected=expected, got=value)
        if value is not INFINITY:
            residues.add(value % order)
    report.check("nbt-residues", len(residues) == order, t=b_prime, expected=order, got=len(residues))
    logger.debug("verify_scaffold p=%d n=%d b=%d: %d checks", p, n, b, report.checks_run)
    return report


def _check_report_matches(real: ScaffoldRealization, h: int, report: StructureReport) -> None:
    params = real.scaffold_params
    if (report.p, report.n, tuple(report.b), report.h) != (params.p, params.n, params.b, h):
        raise DomainError(f"report for p={report.p} n={report.n} b={report.b} h={report.h} does not match")


def realize_associated_order_check(real: ScaffoldRealization, h: int, report: StructureReport) -> VerificationReport:
    """Valuations of Φ^(s)·λ_t against H(s, t) + p^n·ε(s, t) on the window of h."""
    _check_report_matches(real, h, report)
    structure = ideal_structure(real.scaffold_params, h)
    p, n, order = real.params.p, real.params.n, real.order
    result = VerificationReport()
    for s in range(order):
        phi = real.phi(s, report.w[s])
        for t in structure.ideal.window:
            got = dp_act(phi, real.lam(t))
            if preceq(s, real.a(t), p, n):
                expected = structure.H(s, t) + order * structure.epsilon(s, t)
                value = got.valuation()
                result.check("psi-vals", value == expected, s=s, t=t, expected=expected, got=value)
                result.check("integrality", value >= h, s=s, t=t, expected=f">= {h}", got=value)
            else:
                result.check("annihilation", got.is_zero(), s=s, t=t, expected=0, got=got)
    return result


def realize_freeness_check(real: ScaffoldRealization, h: int, report: StructureReport) -> VerificationReport:
    """Does λ_b generate the ideal freely exactly when the report says so?"""
    _check_report_matches(real, h, report)
    structure = ideal_structure(real.scaffold_params, h)
    order = real.order
    b = report.b_exponent
    result = VerificationReport()
    generator = real.lam(b)
    result.check("generator-valuation", generator.valuation() == b, t=b, expected=b, got=generator.valuation())

    values = [dp_act(real.phi(s, report.w[s]), generator).valuation() for s in range(order)]
    covers = sorted(values) == list(structure.ideal.window)
    if report.free:
        result.check("free-cover", covers, t=b, expected=f"[{h}, {h + order})", got=sorted(values))
    else:
        lifted = [s for s in range(order) if values[s] == structure.H(s, b) + order]
        result.check("nonfree-obstruction", not covers and bool(lifted), t=b, expected="lifted valuation", got=sorted(values))
    return result


def psi_prod_check(real: ScaffoldRealization, h: int, report: StructureReport) -> VerificationReport:
    """Φ^(r)·Φ^(s) is Φ^(r+s) up to π·A, or lies in π·A outright."""
    _check_report_matches(real, h, report)
    structure = ideal_structure(real.scaffold_params, h)
    p, n, order = real.params.p, real.params.n, real.order
    bound = h + order
    result = VerificationReport()
    phis = [real.phi(s, report.w[s]) for s in range(order)]
    for r in range(order):
        for s in range(order):
            product_ = phis[r] * phis[s]
            if preceq(r, complement(s, p, n), p, n) and report.w[r] + report.w[s] == report.w[r + s]:
                kind, element = "psi-prod-unit", product_ - phis[r + s]
            else:
                kind, element = "psi-prod-deep", product_
            if element.is_zero():
                result.check(kind, True, r=r, s=s)
                continue
            for t in structure.ideal.window:
                value = dp_act(element, real.lam(t)).valuation()
                result.check(kind, value >= bound, r=r, s=s, t=t, expected=f">= {bound}", got=value)
    return result
