"""Exact multivariate polynomials over the rationals.

A polynomial is a map from dense exponent tuples to ``Fraction``
coefficients, relative to an ordered tuple of variable names.  Base
coordinates are ``x1, x2, ...``; the names ``t`` and ``s`` are reserved for
path and homotopy parameters (transgression integrals).  Zero coefficients
are never stored, so structural equality of aligned term maps is
mathematical equality.  Monomials are ordered graded-lexicographically and
that order is fixed globally.

Text grammar (``parse`` / ``str`` round-trip)::

    poly   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := rational | var ['^' exponent]
    var    := 'x1' | 'x2' | ... | 't' | 's'

Example: ``3/2*x1^2*x2 - x1 + 7``.

The zero polynomial has an empty term map; its degree is ``-inf``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

Rat = Fraction

Scalar = Union[int, Fraction]

NEG_INF = float("-inf")

_VAR_RE = re.compile(r"^(x[1-9][0-9]*|t|s)$")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<var>x[1-9][0-9]*|t|s)|(?P<op>[\^*+-]))"
)


class PolyError(ValueError):
    """Raised on malformed polynomial input or variable misuse."""


@lru_cache(maxsize=None)
def var_sort_key(name: str) -> tuple[int, int]:
    """Canonical global variable order: x1 < x2 < ... < t < s."""
    if not _VAR_RE.match(name):
        raise PolyError(f"invalid variable name {name!r}")
    if name == "t":
        return (1, 0)
    if name == "s":
        return (2, 0)
    return (0, int(name[1:]))


@lru_cache(maxsize=None)
def _canonical_cached(names: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_sort_key))


def canonical_vars(names: Iterable[str]) -> tuple[str, ...]:
    return _canonical_cached(tuple(names))


def coords(n: int) -> tuple[str, ...]:
    """The base coordinate universe ``x1..xn``."""
    return tuple(f"x{i + 1}" for i in range(n))


def _monomial_key(exp: tuple[int, ...]) -> tuple:
    # graded-lex: total degree first, then lexicographic on exponents
    return (sum(exp), exp)


class Poly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping[tuple[int, ...], Scalar] | None = None):
        vs = tuple(vars)
        if vs != _canonical_cached(vs):
            raise PolyError(f"variable tuple not canonical: {vs!r}")
        nvars = len(vs)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise PolyError(f"exponent {exp!r} does not match variables {vs!r}")
            c = coeff if type(coeff) is Fraction else Fraction(coeff)
            if c != 0:
                clean[exp] = c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: Iterable[str] = ()) -> "Poly":
        return cls(canonical_vars(vars), {})

    @classmethod
    def const(cls, value: Scalar, vars: Iterable[str] = ()) -> "Poly":
        vs = canonical_vars(vars)
        return cls(vs, {(0,) * len(vs): Fraction(value)})

    @classmethod
    def variable(cls, name: str, vars: Iterable[str] = ()) -> "Poly":
        vs = canonical_vars(set(vars) | {name})
        exp = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {exp: Fraction(1)})

    # -- universe management ----------------------------------------------

    def in_vars(self, vars: Iterable[str]) -> "Poly":
        """Re-express over a superset universe (union is taken)."""
        vs = canonical_vars(set(vars) | set(self.vars))
        if vs == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vs)}
        remap = [pos[v] for v in self.vars]
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            new = [0] * len(vs)
            for i, e in enumerate(exp):
                new[remap[i]] = e
            terms[tuple(new)] = c
        return Poly(vs, terms)

    @staticmethod
    def _aligned(a: "Poly", b: "Poly") -> tuple["Poly", "Poly"]:
        if a.vars == b.vars:
            return a, b
        vs = canonical_vars(set(a.vars) | set(b.vars))
        return a.in_vars(vs), b.in_vars(vs)

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.vars)
        return None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = Poly._aligned(self, o)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return Poly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = Poly._aligned(self, o)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exp = tuple(i + j for i, j in zip(e1, e2))
                s = terms.get(exp, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(exp, None)
                else:
                    terms[exp] = s
        return Poly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a nonnegative integer")
        result = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def partial(self, var: str) -> "Poly":
        """Formal partial derivative; the variable must be declared."""
        if var not in self.vars:
            raise PolyError(f"unknown variable {var!r} (universe {self.vars!r})")
        i = self.vars.index(var)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            key = tuple(new)
            s = terms.get(key, Fraction(0)) + c * exp[i]
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.vars, terms)

    def integrate(self, param: str, lo: Scalar, hi: Scalar) -> "Poly":
        """Definite integral in a path parameter; result is free of it."""
        if param not in self.vars:
            raise PolyError(f"parameter {param!r} not declared (universe {self.vars!r})")
        i = self.vars.index(param)
        lo, hi = Fraction(lo), Fraction(hi)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            k = exp[i]
            value = c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
            if value == 0:
                continue
            new = list(exp)
            new[i] = 0
            key = tuple(new)
            s = terms.get(key, Fraction(0)) + value
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.vars, terms).drop_var(param)

    def subst(self, var: str, value: Scalar) -> "Poly":
        """Substitute a rational value for a variable and drop it."""
        if var not in self.vars:
            return self
        i = self.vars.index(var)
        value = Fraction(value)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            coeff = c * value ** exp[i]
            if coeff == 0:
                continue
            new = list(exp)
            new[i] = 0
            key = tuple(new)
            s = terms.get(key, Fraction(0)) + coeff
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.vars, terms).drop_var(var)

    def drop_var(self, var: str) -> "Poly":
        """Remove an unused variable from the universe."""
        if var not in self.vars:
            return self
        i = self.vars.index(var)
        if any(exp[i] for exp in self.terms):
            return self
        vs = tuple(v for v in self.vars if v != var)
        return Poly(vs, {exp[:i] + exp[i + 1:]: c for exp, c in self.terms.items()})

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> float | int:
        if var not in self.vars or not self.terms:
            return NEG_INF if not self.terms else 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def constant(self) -> Fraction:
        """The coefficient of the empty monomial."""
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def as_constant(self) -> Fraction:
        if self.degree() > 0:
            raise PolyError(f"not a constant: {self}")
        return self.constant()

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exp = max(self.terms, key=_monomial_key)
        return exp, self.terms[exp]

    def monomials(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for exp in sorted(self.terms, key=_monomial_key, reverse=True):
            yield exp, self.terms[exp]

    def divide_exact(self, divisor: "Poly") -> "Poly":
        """Exact division; raises PolyError if the division leaves a remainder."""
        if divisor.is_zero:
            raise PolyError("division by zero polynomial")
        a, d = Poly._aligned(self, divisor)
        dexp, dc = d.leading()
        quotient = Poly.zero(a.vars)
        rem = a
        while not rem.is_zero:
            rexp, rc = rem.leading()
            qexp = tuple(i - j for i, j in zip(rexp, dexp))
            if any(e < 0 for e in qexp):
                raise PolyError("non-exact polynomial division")
            qterm = Poly(a.vars, {qexp: rc / dc})
            quotient = quotient + qterm
            rem = rem - qterm * d
        return quotient

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = Poly._aligned(self, o)
        return a.terms == b.terms

    def __hash__(self):
        core = tuple(sorted(
            (tuple(v for v, e in zip(self.vars, exp) if e),
             tuple(e for e in exp if e), c)
            for exp, c in self.terms.items()))
        return hash(core)

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exp, c in self.monomials():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mag = abs(c)
            if not factors or mag != 1:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    @classmethod
    def parse(cls, text: str, vars: Iterable[str] | None = None) -> "Poly":
        """Parse the ASCII grammar. If ``vars`` is given, names are validated
        against it; otherwise the universe is inferred from the text."""
        tokens = _tokenize(text)
        terms = _parse_terms(tokens, text)
        names = {name for factors in terms for name, _ in factors[1]}
        if vars is not None:
            universe = canonical_vars(vars)
            unknown = names - set(universe)
            if unknown:
                raise PolyError(f"unknown variables {sorted(unknown)} in {text!r}")
        else:
            universe = canonical_vars(names)
        result = cls.zero(universe)
        pos = {v: i for i, v in enumerate(universe)}
        for coeff, factors in terms:
            exp = [0] * len(universe)
            for name, e in factors:
                exp[pos[name]] += e
            result = result + cls(universe, {tuple(exp): coeff})
        return result


def _tokenize(text: str) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            if text[i:].strip() == "":
                break
            raise PolyError(f"cannot tokenize {text!r} at position {i}")
        i = m.end()
        for kind in ("num", "var", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind)))
                break
    return out


def _parse_terms(tokens, text) -> list[tuple[Fraction, list[tuple[str, int]]]]:
    terms: list[tuple[Fraction, list[tuple[str, int]]]] = []
    i = 0
    n = len(tokens)
    if n == 0:
        raise PolyError(f"empty polynomial text {text!r}")
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(sign)
        factors: list[tuple[str, int]] = []
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                if expect_factor:
                    raise PolyError(f"misplaced '*' in {text!r}")
                i += 1
                expect_factor = True
                continue
            if not expect_factor:
                raise PolyError(f"missing operator near {val!r} in {text!r}")
            if kind == "num":
                coeff *= Fraction(val)
                i += 1
            elif kind == "var":
                name = val
                e = 1
                i += 1
                if i + 1 < n and tokens[i] == ("op", "^") and tokens[i + 1][0] == "num":
                    e = int(tokens[i + 1][1])
                    i += 2
                elif i < n and tokens[i] == ("op", "^"):
                    raise PolyError(f"malformed exponent in {text!r}")
                factors.append((name, e))
            else:
                raise PolyError(f"unexpected token {val!r} in {text!r}")
            expect_factor = False
        if expect_factor:
            raise PolyError(f"dangling operator in {text!r}")
        terms.append((coeff, factors))
    return terms


def parse_rat(value) -> Fraction:
    """Accept ints, numeric strings like '3/2', and Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise PolyError(f"not an exact rational: {value!r}")
