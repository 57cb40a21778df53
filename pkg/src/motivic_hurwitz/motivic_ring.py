"""Exact arithmetic with rational functions in the Lefschetz class L.

Elements are reduced fractions num/den of Laurent polynomials with integer
coefficients whose denominator has top coefficient +1.  Such a fraction has
a Laurent expansion in L^-1 with integer coefficients, which is what the
dimension filtration sees.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_inner_gcd

from .errors import NotInvertible, PoleAtQ

NEG_INF = float("-inf")

Number = Union[int, Fraction]


class LaurentPoly:
    """Finite sum of integer multiples of powers of L.  Immutable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = int(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    @classmethod
    def from_dense(cls, low: int, coeffs: Iterable[int]) -> "LaurentPoly":
        """Build from coefficients of L^low, L^(low+1), ..."""
        return cls({low + i: v for i, v in enumerate(coeffs)})

    # basic data
    def items(self):
        return sorted(self._c.items(), reverse=True)

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    @property
    def degree(self):
        return max(self._c) if self._c else NEG_INF

    @property
    def valuation(self):
        return min(self._c) if self._c else float("inf")

    def is_zero(self) -> bool:
        return not self._c

    def top_coefficient(self) -> int:
        return self._c[max(self._c)] if self._c else 0

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def nonneg_coefficients(self) -> bool:
        return all(v > 0 for v in self._c.values())

    # arithmetic
    def __add__(self, other):
        other = _maybe_poly(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = _maybe_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _maybe_poly(other)
        if other is NotImplemented:
            return NotImplemented
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (e, v), = self._c.items()
                if abs(v) == 1:
                    return LaurentPoly({e * n: v ** (-n)})
            raise NotInvertible("negative power of a non-monomial Laurent polynomial")
        out = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by L^k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Replace L by L^k."""
        return LaurentPoly({e * k: v for e, v in self._c.items()})

    def evaluate(self, q: Number) -> Fraction:
        q = Fraction(q)
        total = Fraction(0)
        for e, v in self._c.items():
            if e < 0 and q == 0:
                raise PoleAtQ("negative power of L evaluated at 0")
            total += v * q ** e
        return total

    # comparison / hashing
    def __eq__(self, other):
        other = _maybe_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    # text form
    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i, (e, v) in enumerate(self.items()):
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if e == 0:
                body = str(a)
            else:
                mono = "L" if e == 1 else f"L^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            if i == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse strings such as ``"L^3 - L"``, ``"1 + L^-1 + 2L^-2"`` or ``"2*L^(-3)"``."""
        s = _normalize(text)
        if not s:
            raise ValueError("empty polynomial")
        out = cls()
        for sign, body in _split_terms(s):
            m = _TERM.fullmatch(body)
            if not m or (not m.group(1) and not m.group(2)):
                raise ValueError(f"cannot parse term {body!r} in {text!r}")
            c = int(m.group(1)) if m.group(1) else 1
            if m.group(2):
                e = int(m.group(3)) if m.group(3) is not None else 1
            else:
                e = 0
            out = out + cls.monomial(e, sign * c)
        return out


_TERM = re.compile(r"(\d+)?\*?(L(?:\^\(?(-?\d+)\)?)?)?")


def _normalize(text: str) -> str:
    return (text.replace("−", "-").replace("·", "*")
            .replace("**", "^").replace(" ", ""))


def _split_terms(s: str):
    terms = []
    i = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    start = i
    while i < len(s):
        ch = s[i]
        if ch in "+-" and i > start and s[i - 1] not in "^(":
            terms.append((sign, s[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    terms.append((sign, s[start:]))
    return terms


def _maybe_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    return NotImplemented


ONE_POLY = LaurentPoly.constant(1)
L_POLY = LaurentPoly.monomial(1)


def _dense_desc(p: LaurentPoly):
    """Coefficients high to low of p / L^valuation."""
    lo = p.valuation
    hi = p.degree
    return [ZZ(p.coeff(e)) for e in range(hi, lo - 1, -1)]


def _from_desc(coeffs, low: int) -> LaurentPoly:
    n = len(coeffs)
    return LaurentPoly({low + n - 1 - i: int(v) for i, v in enumerate(coeffs)})


class MotivicClass:
    """Reduced fraction of Laurent polynomials in L."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _reduced: bool = False):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if not _reduced:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "MotivicClass":
        if isinstance(x, MotivicClass):
            return x
        return cls(x)

    @classmethod
    def L(cls, k: int = 1) -> "MotivicClass":
        return cls(LaurentPoly.monomial(k), _reduced=True)

    @property
    def dimension(self):
        if self.num.is_zero():
            return NEG_INF
        return self.num.degree - self.den.degree

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE_POLY

    # arithmetic
    def __add__(self, other):
        other = _maybe_class(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return MotivicClass(self.num + other.num, self.den)
        return MotivicClass(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return MotivicClass(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _maybe_class(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _maybe_class(other)
        if other is NotImplemented:
            return NotImplemented
        return MotivicClass(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe_class(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        return MotivicClass.coerce(other) * self.invert()

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        return MotivicClass(self.num ** n, self.den ** n)

    def invert(self) -> "MotivicClass":
        if self.num.is_zero():
            raise NotInvertible("zero is not invertible")
        top = self.num.top_coefficient()
        if abs(top) != 1:
            raise NotInvertible(f"top coefficient {top} is not a unit")
        return MotivicClass(self.den, self.num)

    # comparisons
    def __eq__(self, other):
        other = _maybe_class(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # specialisation and expansion
    def evaluate(self, q: Number) -> Fraction:
        d = self.den.evaluate(q)
        if d == 0:
            raise PoleAtQ(f"denominator vanishes at L = {q}")
        return self.num.evaluate(q) / d

    def to_series(self, n: int) -> "DimSeries":
        return to_series(self, n)

    # text / json
    def __str__(self):
        if self.den == ONE_POLY:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"MotivicClass({str(self)!r})"

    def to_json(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "MotivicClass":
        return cls(LaurentPoly.parse(obj["num"]), LaurentPoly.parse(obj["den"]))

    @classmethod
    def parse(cls, text: str) -> "MotivicClass":
        s = text.strip()
        m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
        if m:
            return cls(LaurentPoly.parse(m.group(1)), LaurentPoly.parse(m.group(2)))
        return cls(LaurentPoly.parse(s))


def _maybe_class(x):
    if isinstance(x, MotivicClass):
        return x
    if isinstance(x, (int, LaurentPoly)):
        return MotivicClass(x, _reduced=True) if isinstance(x, LaurentPoly) else MotivicClass(LaurentPoly.constant(x), _reduced=True)
    return NotImplemented


def _canonical(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise NotInvertible("zero denominator")
    if num.is_zero():
        return LaurentPoly(), ONE_POLY
    shift = num.valuation - den.valuation
    n = _dense_desc(num)
    d = _dense_desc(den)
    if len(d) > 1:
        _, n, d = dup_inner_gcd(n, d, ZZ)
    elif len(n) > 1 or abs(d[0]) != 1:
        from math import gcd
        g = gcd(gcd(*[int(v) for v in n]) if len(n) > 1 else int(n[0]), int(d[0]))
        n = [ZZ(int(v) // g) for v in n]
        d = [ZZ(int(d[0]) // g)]
    if d[0] < 0:
        n = [-v for v in n]
        d = [-v for v in d]
    if d[0] != 1:
        raise NotInvertible("denominator top coefficient is not a unit")
    return _from_desc(n, shift), _from_desc(d, 0)


ONE = MotivicClass(1)
ZERO = MotivicClass(0)
L = MotivicClass.L()


@dataclass(frozen=True)
class DimSeries:
    """Truncated expansion sum_i coeffs[i] * L^(anchor - i) + O(L^(anchor - N - 1)).

    ``exact`` means every omitted coefficient is zero.
    """

    anchor: int
    coeffs: tuple
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def codim(self) -> int:
        return len(self.coeffs) - 1

    @property
    def floor(self):
        """Lowest exponent whose coefficient is known."""
        if self.exact:
            return NEG_INF
        return self.anchor - len(self.coeffs) + 1

    def coefficient(self, exponent: int) -> int:
        if exponent > self.anchor:
            return 0
        i = self.anchor - exponent
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.exact:
            return 0
        raise ValueError(f"coefficient of L^{exponent} lies beyond the truncation")

    def leading_dimension(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.anchor - i
        return NEG_INF

    def _window(self, top: int, bottom: int) -> "DimSeries":
        exact = self.exact
        return DimSeries(top, [self.coefficient(e) for e in range(top, bottom - 1, -1)], exact)

    def truncate(self, n: int) -> "DimSeries":
        """Keep codimensions 0..n relative to the anchor."""
        coeffs = list(self.coeffs[: n + 1])
        if len(coeffs) < n + 1:
            if not self.exact:
                raise ValueError("series not known to the requested codimension")
            coeffs += [0] * (n + 1 - len(coeffs))
        exact = self.exact and all(c == 0 for c in self.coeffs[n + 1:])
        return DimSeries(self.anchor, coeffs, exact)

    def reanchor(self, anchor: int) -> "DimSeries":
        """Same series written from exponent ``anchor`` down to the same floor."""
        if anchor < self.anchor and any(self.coeffs[: self.anchor - anchor]):
            raise ValueError("re-anchoring would drop nonzero terms")
        bottom = self.anchor - len(self.coeffs) + 1
        return DimSeries(anchor, [self.coefficient(e) for e in range(anchor, bottom - 1, -1)], self.exact)

    def __add__(self, other: "DimSeries") -> "DimSeries":
        top = max(self.anchor, other.anchor)
        if self.exact and other.exact:
            bottom = min(self.anchor - len(self.coeffs), other.anchor - len(other.coeffs)) + 1
            exact = True
        else:
            bottom = max(self.floor, other.floor)
            exact = False
        bottom = int(bottom)
        coeffs = [self.coefficient(e) + other.coefficient(e) for e in range(top, bottom - 1, -1)]
        return DimSeries(top, coeffs, exact)

    def __neg__(self):
        return DimSeries(self.anchor, [-c for c in self.coeffs], self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "DimSeries") -> "DimSeries":
        if not isinstance(other, DimSeries):
            return NotImplemented
        top = self.anchor + other.anchor
        if self.exact and other.exact:
            n = len(self.coeffs) + len(other.coeffs) - 2
        else:
            # precision is limited by the less precise factor, measured from
            # the leading term of the other factor
            cands = []
            if not self.exact:
                cands.append(self.codim + (other.anchor - other.leading_dimension() if other.leading_dimension() != NEG_INF else 0))
            if not other.exact:
                cands.append(other.codim + (self.anchor - self.leading_dimension() if self.leading_dimension() != NEG_INF else 0))
            n = min(cands)
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a or i > n:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > n:
                    break
                out[i + j] += a * b
        return DimSeries(top, out, self.exact and other.exact)

    def shift(self, k: int) -> "DimSeries":
        """Multiply by L^k."""
        return DimSeries(self.anchor + k, self.coeffs, self.exact)

    def eq_mod_codim(self, other: "DimSeries", ref_dim: int, n: int, inclusive: bool = False) -> bool:
        """Compare coefficients of L^e for e > ref_dim - n (or >= with ``inclusive``)."""
        top = max(self.anchor, other.anchor)
        bottom = ref_dim - n if inclusive else ref_dim - n + 1
        for e in range(top, bottom - 1, -1):
            if self.coefficient(e) != other.coefficient(e):
                return False
        return True

    def to_json(self) -> dict:
        return {"anchor": self.anchor, "coeffs": list(self.coeffs), "exact": self.exact}

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(LaurentPoly.monomial(self.anchor - i, c)))
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        if self.exact:
            return body
        return f"{body} + O(L^{self.anchor - len(self.coeffs)})"


# module level functional interface

def add(a, b) -> MotivicClass:
    return MotivicClass.coerce(a) + MotivicClass.coerce(b)


def mul(a, b) -> MotivicClass:
    return MotivicClass.coerce(a) * MotivicClass.coerce(b)


def invert(a) -> MotivicClass:
    return MotivicClass.coerce(a).invert()


def dimension(a):
    return MotivicClass.coerce(a).dimension


def evaluate(a, q: Number) -> Fraction:
    return MotivicClass.coerce(a).evaluate(q)


def to_series(a, n: int) -> DimSeries:
    """Expansion of ``a`` at L = infinity through codimension ``n``."""
    a = MotivicClass.coerce(a)
    if n < 0:
        raise ValueError("codimension must be non-negative")
    if a.is_zero():
        return DimSeries(0, [0] * (n + 1), True)
    num, den = a.num, a.den
    dn, dd = num.degree, den.degree
    # num = L^dn * N(x), den = L^dd * Dn(x) with x = L^-1 and Dn(0) = 1
    N = [num.coeff(dn - i) for i in range(n + 1)]
    D = [den.coeff(dd - i) for i in range(dd - den.valuation + 1)]
    out = []
    for k in range(n + 1):
        v = N[k]
        for j in range(1, min(k, len(D) - 1) + 1):
            v -= D[j] * out[k - j]
        out.append(v)
    exact = den == ONE_POLY and num.valuation >= dn - n
    return DimSeries(dn - dd, out, exact)


def eq_mod_codim(a, b, ref_dim: int, n: int) -> bool:
    """True iff a - b has dimension at most ref_dim - n."""
    diff = MotivicClass.coerce(a) - MotivicClass.coerce(b)
    return diff.is_zero() or diff.dimension <= ref_dim - n


def one_minus_L_inv(k: int) -> MotivicClass:
    """The class 1 - L^-k."""
    return MotivicClass(ONE_POLY - LaurentPoly.monomial(-k))
