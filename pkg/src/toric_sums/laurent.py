"""Laurent polynomials given by coefficient descriptors and exponent vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union


class _Symbolic:
    """Coefficient known only to be a nonzero element of the base field."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SYMBOLIC"

    def __reduce__(self):
        return (_Symbolic, ())


SYMBOLIC = _Symbolic()

Coeff = Union[int, _Symbolic]


class SpecError(ValueError):
    """Invalid Laurent polynomial description."""


@dataclass(frozen=True)
class LaurentPolySpec:
    n: int
    terms: tuple[tuple[Coeff, tuple[int, ...]], ...]
    p: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise SpecError(f"dimension must be >= 1, got {self.n}")
        seen = set()
        for idx, (coeff, exp) in enumerate(self.terms):
            if len(exp) != self.n:
                raise SpecError(f"term {idx}: exponent {list(exp)} has length {len(exp)}, expected {self.n}")
            if exp in seen:
                raise SpecError(f"term {idx}: duplicate exponent vector {list(exp)}")
            seen.add(exp)
            if coeff is not SYMBOLIC and not isinstance(coeff, int):
                raise SpecError(f"term {idx}: coefficient must be an integer or '*'")
            if self.p is not None and coeff is not SYMBOLIC and coeff % self.p == 0:
                raise SpecError(f"term {idx}: coefficient {coeff} vanishes mod {self.p}")

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Coeff, Sequence[int]]], p: Optional[int] = None):
        return cls(n, tuple((c, tuple(int(x) for x in e)) for c, e in terms), p)

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return [e for _, e in self.terms]

    @property
    def coefficients(self) -> list[Coeff]:
        return [c for c, _ in self.terms]

    @property
    def is_symbolic(self) -> bool:
        return any(c is SYMBOLIC for c in self.coefficients)

    def constant_term(self) -> Optional[Coeff]:
        zero = (0,) * self.n
        return next((c for c, e in self.terms if e == zero), None)

    def restrict(self, keep: Iterable[tuple[int, ...]]) -> "LaurentPolySpec":
        keep = set(keep)
        return LaurentPolySpec(self.n, tuple(t for t in self.terms if t[1] in keep), self.p)

    def with_prime(self, p: int) -> "LaurentPolySpec":
        return LaurentPolySpec(self.n, self.terms, p)

    def fill_symbolic(self, values: Sequence[int]) -> "LaurentPolySpec":
        """Replace symbolic coefficients, in term order, by ``values``."""
        values = list(values)
        need = sum(c is SYMBOLIC for c in self.coefficients)
        if len(values) != need:
            raise SpecError(f"{need} symbolic coefficients but {len(values)} values supplied")
        it = iter(values)
        terms = tuple((next(it) if c is SYMBOLIC else c, e) for c, e in self.terms)
        return LaurentPolySpec(self.n, terms, self.p)

    def to_document(self) -> dict:
        doc = {
            "n": self.n,
            "terms": [{"coeff": "*" if c is SYMBOLIC else c, "exp": list(e)} for c, e in self.terms],
        }
        if self.p is not None:
            doc["p"] = self.p
        return doc


def parse_document(doc) -> LaurentPolySpec:
    """Validate a ``{"n", "p"?, "terms": [{"coeff", "exp"}]}`` document."""
    if not isinstance(doc, dict):
        raise SpecError("document root must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise SpecError("'n' must be an integer")
    p = doc.get("p")
    if p is not None and (not isinstance(p, int) or isinstance(p, bool) or p < 2):
        raise SpecError("'p' must be an integer >= 2")
    raw = doc.get("terms")
    if not isinstance(raw, list) or not raw:
        raise SpecError("'terms' must be a non-empty list")
    terms = []
    for idx, t in enumerate(raw):
        if not isinstance(t, dict) or "coeff" not in t or "exp" not in t:
            raise SpecError(f"terms[{idx}]: expected an object with 'coeff' and 'exp'")
        c = t["coeff"]
        if c == "*":
            c = SYMBOLIC
        elif not isinstance(c, int) or isinstance(c, bool):
            raise SpecError(f"terms[{idx}].coeff: expected an integer or '*', got {c!r}")
        e = t["exp"]
        if not isinstance(e, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in e):
            raise SpecError(f"terms[{idx}].exp: expected a list of integers")
        terms.append((c, tuple(e)))
    try:
        return LaurentPolySpec(n, tuple(terms), p)
    except SpecError as exc:
        raise SpecError(f"terms: {exc}") from None


# The two-Kloosterman polynomial g in five variables.  Term order follows the
# labelling V1..V7 of its nonzero exponent vectors; a5 and a6 sit on V6, V7
# and the x5 term has coefficient -1.
G_EXPONENTS = (
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
    (0, 0, 0, 0, 1),
    (-1, -1, 0, 0, 1),
    (0, 0, -1, -1, 1),
)


def g_polynomial(coeffs: Optional[Sequence[int]] = None, p: Optional[int] = None) -> LaurentPolySpec:
    """g = a1x1 + a2x2 + a3x3 + a4x4 + x5(a5/(x1x2) + a6/(x3x4) - 1)."""
    if coeffs is None:
        a = [SYMBOLIC] * 6
    else:
        a = [int(x) for x in coeffs]
        if len(a) != 6:
            raise SpecError("g takes exactly six coefficients a1..a6")
    cs = [a[0], a[1], a[2], a[3], -1, a[4], a[5]]
    return LaurentPolySpec.from_terms(5, zip(cs, G_EXPONENTS), p)


def has_g_shape(spec: LaurentPolySpec) -> bool:
    """True when ``spec`` has exactly the exponent vectors of g, in any order, with -1 on x5."""
    if spec.n != 5 or sorted(spec.exponents) != sorted(G_EXPONENTS):
        return False
    c5 = dict((e, c) for c, e in spec.terms)[G_EXPONENTS[4]]
    return c5 is not SYMBOLIC and (c5 == -1 if spec.p is None else (c5 + 1) % spec.p == 0)


def g_coefficients(spec: LaurentPolySpec) -> list:
    """a1..a6 read back from a polynomial with the shape of g."""
    by_exp = dict((e, c) for c, e in spec.terms)
    order = [0, 1, 2, 3, 5, 6]
    return [by_exp[G_EXPONENTS[i]] for i in order]
