"""Exact scalar arithmetic: rationals, sparse multivariate polynomials
over them, and a quadratic extension Q(sqrt(d)).

All values are immutable; operations are pure. Polynomials are kept in a
canonical sparse form (no zero coefficients, graded-lex term order on the
declared symbol order) so that equality is decidable by direct comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction


class ScalarError(Exception):
    pass


class ContextMismatchError(ScalarError):
    pass


class MissingSymbolError(ScalarError):
    pass


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class QuadExtScalar:
    """Element a + b*sqrt(d) of a real quadratic extension of Q.

    The radicand d is a fixed square-free positive integer per context;
    mixing distinct radicands raises ContextMismatchError.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 19):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExtScalar is immutable")

    def _coerce(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            if other.d != self.d:
                raise ContextMismatchError(
                    f"mixed radicands sqrt({self.d}) and sqrt({other.d})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtScalar(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExtScalar(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExtScalar(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtScalar":
        return QuadExtScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        # (a + b sqrt(d)) (a - b sqrt(d)) = a^2 - d b^2
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadExtScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExtScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, QuadExtScalar):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadExtScalar({self!s})"

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        bpart = f"sqrt({self.d})" if abs(self.b) == 1 else f"{format_rational(abs(self.b))}*sqrt({self.d})"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return bpart if self.b > 0 else f"-{bpart}"
        return f"{format_rational(self.a)} {sign} {bpart}"


_QUAD_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?:(?P<sign>[+-])\s*(?:(?P<b>\d+(?:/\d+)?)\*)?sqrt\((?P<d>\d+)\))?\s*$"
)


def parse_quadext(text: str, d: int | None = None) -> QuadExtScalar:
    text = text.strip()
    m = _QUAD_RE.match(text)
    if not m or (m.group("a") is None and m.group("d") is None):
        # allow bare "sqrt(d)" / "-sqrt(d)" / "b*sqrt(d)"
        m2 = re.match(r"^\s*(-)?\s*(?:(\d+(?:/\d+)?)\*)?sqrt\((\d+)\)\s*$", text)
        if not m2:
            raise ScalarError(f"cannot parse quadratic scalar: {text!r}")
        b = Fraction(m2.group(2) or 1)
        if m2.group(1):
            b = -b
        dd = int(m2.group(3))
        return QuadExtScalar(0, b, dd)
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("d") is None:
        return QuadExtScalar(a, 0, d if d is not None else 19)
    b = Fraction(m.group("b") or 1)
    if m.group("sign") == "-":
        b = -b
    return QuadExtScalar(a, b, int(m.group("d")))


BaseScalar = Union[int, Fraction, QuadExtScalar]


class PolyContext:
    """Fixed ordered symbol set plus a base coefficient field."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if len(set(syms)) != len(syms):
            raise ScalarError(f"duplicate symbols in context: {syms}")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(syms)})

    def __setattr__(self, name, value):
        raise AttributeError("PolyContext is immutable")

    def __eq__(self, other):
        return isinstance(other, PolyContext) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"PolyContext{self.symbols}"

    def zero(self) -> "PolyScalar":
        return PolyScalar(self, {})

    def const(self, value) -> "PolyScalar":
        if isinstance(value, PolyScalar):
            if value.ctx != self:
                raise ContextMismatchError(f"{value.ctx} vs {self}")
            return value
        if isinstance(value, int):
            value = Fraction(value)
        if not value:
            return self.zero()
        return PolyScalar(self, {(0,) * len(self.symbols): value})

    def sym(self, name: str) -> "PolyScalar":
        if name not in self._index:
            raise MissingSymbolError(f"symbol {name!r} not in context {self.symbols}")
        expo = [0] * len(self.symbols)
        expo[self._index[name]] = 1
        return PolyScalar(self, {tuple(expo): Fraction(1)})

    def syms(self, *names: str):
        return tuple(self.sym(n) for n in names)


class PolyScalar:
    """Sparse multivariate polynomial with exact coefficients.

    Coefficients are Fractions or QuadExtScalars; term keys are exponent
    tuples aligned with the context's symbol order.
    """

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: PolyContext, terms: Mapping[tuple, BaseScalar]):
        clean = {}
        n = len(ctx.symbols)
        for expo, coeff in terms.items():
            if isinstance(coeff, int):
                coeff = Fraction(coeff)
            if not coeff:
                continue
            if len(expo) != n:
                raise ScalarError(f"exponent {expo} does not match context {ctx}")
            clean[expo] = coeff
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("PolyScalar is immutable")

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "PolyScalar":
        if isinstance(other, PolyScalar):
            if other.ctx != self.ctx:
                raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction, QuadExtScalar)):
            return self.ctx.const(other)
        return NotImplemented

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for expo, coeff in o.terms.items():
            c = terms.get(expo)
            if c is None:
                terms[expo] = coeff
            else:
                c = c + coeff
                if c:
                    terms[expo] = c
                else:
                    del terms[expo]
        return PolyScalar(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return PolyScalar(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = terms.get(e)
                if prev is None:
                    terms[e] = c
                else:
                    c = prev + c
                    if c:
                        terms[e] = c
                    else:
                        del terms[e]
        return PolyScalar(self.ctx, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ScalarError("negative polynomial power")
        result = self.ctx.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        # Division by a base-field scalar only; polynomial quotients go
        # through exact_div.
        if isinstance(other, PolyScalar):
            if other.is_constant():
                other = other.constant_value()
            else:
                return self.exact_div(other)
        if isinstance(other, int):
            other = Fraction(other)
        if not other:
            raise ZeroDivisionError("division by zero scalar")
        if isinstance(other, QuadExtScalar):
            inv = other.inverse()
        else:
            inv = Fraction(1) / other
        return PolyScalar(self.ctx, {e: c * inv for e, c in self.terms.items()})

    def exact_div(self, other: "PolyScalar") -> "PolyScalar":
        """Exact polynomial quotient; raises if the division has a remainder."""
        o = self._coerce(other)
        if not o.terms:
            raise ZeroDivisionError("division by zero polynomial")
        quotient = self.ctx.zero()
        rem = self
        okey = max(o.terms, key=_grlex_key)
        ocoeff = o.terms[okey]
        while rem.terms:
            rkey = max(rem.terms, key=_grlex_key)
            diff = tuple(a - b for a, b in zip(rkey, okey))
            if any(d < 0 for d in diff):
                raise ScalarError("inexact polynomial division")
            if isinstance(ocoeff, QuadExtScalar):
                c = rem.terms[rkey] * ocoeff.inverse()
            else:
                c = rem.terms[rkey] / ocoeff
            mono = PolyScalar(self.ctx, {diff: c})
            quotient = quotient + mono
            rem = rem - mono * o
        return quotient

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self) -> BaseScalar:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ScalarError(f"not a constant polynomial: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ctx._index.get(name)
        if i is None:
            raise MissingSymbolError(name)
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def coefficient_of(self, name: str, power: int) -> "PolyScalar":
        """Coefficient of name**power, a polynomial in the remaining symbols
        (kept in the same context with exponent 0 at name)."""
        i = self.ctx._index[name]
        terms = {}
        for e, c in self.terms.items():
            if e[i] == power:
                e2 = e[:i] + (0,) + e[i + 1:]
                terms[e2] = terms.get(e2, Fraction(0)) + c
        return PolyScalar(self.ctx, terms)

    def symbols_used(self) -> set:
        used = set()
        for e in self.terms:
            for i, p in enumerate(e):
                if p:
                    used.add(self.ctx.symbols[i])
        return used

    def __eq__(self, other):
        if isinstance(other, PolyScalar):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction, QuadExtScalar)):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ctx.symbols, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- substitution -----------------------------------------------------

    def specialize(self, assignment: Mapping[str, BaseScalar]) -> BaseScalar:
        """Full evaluation at base-field values; every used symbol must be
        assigned."""
        missing = self.symbols_used() - set(assignment)
        if missing:
            raise MissingSymbolError(
                f"no value for symbol(s): {', '.join(sorted(missing))}"
            )
        vals = []
        for name in self.ctx.symbols:
            v = assignment.get(name, 0)
            vals.append(Fraction(v) if isinstance(v, int) else v)
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, p in enumerate(e):
                if p:
                    term = term * vals[i] ** p
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, "PolyScalar | BaseScalar"]) -> "PolyScalar":
        """Replace symbols by polynomials (in this same context)."""
        images = {}
        for name, val in mapping.items():
            if name not in self.ctx._index:
                raise MissingSymbolError(name)
            images[name] = self.ctx.const(val) if not isinstance(val, PolyScalar) else self._coerce(val)
        result = self.ctx.zero()
        for e, c in self.terms.items():
            term = self.ctx.const(c)
            for i, p in enumerate(e):
                if not p:
                    continue
                name = self.ctx.symbols[i]
                base = images.get(name, None)
                if base is None:
                    base = self.ctx.sym(name)
                term = term * base ** p
            result = result + term
        return result

    # -- text form --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for i, p in enumerate(e):
                if p == 1:
                    factors.append(self.ctx.symbols[i])
                elif p > 1:
                    factors.append(f"{self.ctx.symbols[i]}^{p}")
            cstr, negative = _coeff_str(c)
            if factors:
                body = "*".join(factors)
                if cstr == "1":
                    text = body
                else:
                    text = f"{cstr}*{body}"
            else:
                text = cstr
            parts.append(("-" if negative else "+", text))
        sign, first = parts[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"PolyScalar({self!s})"


def _grlex_key(expo: tuple) -> tuple:
    return (sum(expo), expo)


def _coeff_str(c) -> tuple[str, bool]:
    """Text of |c| plus a negativity flag (for sign placement)."""
    if isinstance(c, QuadExtScalar):
        if c.b == 0:
            return _coeff_str(c.a)
        neg = c.a < 0 or (c.a == 0 and c.b < 0)
        cc = -c if neg else c
        return f"({cc})", neg
    c = Fraction(c)
    return format_rational(abs(c)), c < 0


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)"
    r"|(?P<op>[-+*^()])|(?P<end>$))"
)


def parse_poly(text: str, ctx: PolyContext) -> PolyScalar:
    """Parse the canonical emitted polynomial grammar, e.g. '3*k^2*s - 1/2'.
    Quadratic coefficients appear parenthesized: '(7/2 - 1/2*sqrt(19))*k'.
    """
    pos = 0
    text = text.strip()
    result = ctx.zero()
    sign = 1
    n = len(text)

    def read_factor(pos):
        # one factor: rational | name[^int] | (quadext)
        m = _TOKEN_RE.match(text, pos)
        if m.group("num"):
            return ctx.const(Fraction(m.group("num"))), m.end()
        if m.group("name"):
            name = m.group("name")
            pos2 = m.end()
            if name == "sqrt":
                m2 = re.match(r"\s*\(\s*(\d+)\s*\)", text[pos2:])
                if not m2:
                    raise ScalarError(f"bad sqrt at {pos2} in {text!r}")
                return ctx.const(QuadExtScalar(0, 1, int(m2.group(1)))), pos2 + m2.end()
            base = ctx.sym(name)
            m2 = re.match(r"\s*\^\s*(\d+)", text[pos2:])
            if m2:
                return base ** int(m2.group(1)), pos2 + m2.end()
            return base, pos2
        if m.group("op") == "(":
            depth, j = 1, m.end()
            while j < n and depth:
                if text[j] == "(":
                    depth += 1
                elif text[j] == ")":
                    depth -= 1
                j += 1
            if depth:
                raise ScalarError(f"unbalanced parens in {text!r}")
            inner = parse_poly(text[m.end():j - 1], ctx)
            return inner, j
        raise ScalarError(f"cannot parse {text!r} at position {pos}")

    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m.group("op") in ("+", "-"):
            sign = 1 if m.group("op") == "+" else -1
            pos = m.end()
            continue
        if m.group("end") is not None and not m.group(0).strip():
            break
        term, pos = read_factor(pos)
        while pos < n:
            m2 = _TOKEN_RE.match(text, pos)
            if m2.group("op") == "*":
                factor, pos = read_factor(m2.end())
                term = term * factor
            else:
                break
        result = result + (term if sign > 0 else -term)
        sign = 1
    return result


def parse_scalar(text: str, ctx: PolyContext | None = None) -> BaseScalar | PolyScalar:
    """Parse any emitted scalar string; polynomial contexts must be supplied."""
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+(?:/\d+)?", text):
        return Fraction(text)
    if "sqrt" in text and ctx is None:
        return parse_quadext(text)
    if ctx is None:
        raise ScalarError(f"need a PolyContext to parse {text!r}")
    return parse_poly(text, ctx)


def scalar_str(x) -> str:
    if isinstance(x, (int, Fraction)):
        return format_rational(Fraction(x))
    return str(x)


def is_zero_scalar(x) -> bool:
    if isinstance(x, PolyScalar):
        return x.is_zero()
    return not x
