"""The degree-2 graded commutative algebra with its degree -2 Poisson bracket.

Generators, over a base with coordinates ``x1..xn`` and a rank-r frame:

* ``x1..xn``   degree 0 (they live inside the polynomial coefficients),
* ``xi1..xir`` degree 1, anticommuting, self-paired by a constant symmetric
  invertible matrix g,
* ``p1..pn``   degree 2, commuting.

An element is stored as a map ``(xi_subset, p_exponents) -> Poly``; xi
subsets are strictly increasing index tuples (0-based internally, 1-based in
text form), with Koszul signs absorbed into the coefficient at insertion.

The bracket is the constant-coefficient graded Poisson bracket

    {F, G} = sum_i dF/dp_i * dG/dx_i - dF/dx_i * dG/dp_i
           + sum_{a,b} g_ab * (F d_r/d xi_a) * (d_l/d xi_b G),

where ``d_r``/``d_l`` are right/left derivatives in the odd generators.  On
generators it gives {xi_a, xi_b} = g_ab and {p_i, x^j} = delta_i^j, with
{p_i, xi_a} = {p_i, p_j} = 0, matching a global frame with trivial metric
connection.  It has degree -2 and satisfies, for homogeneous a, b, c:

    {a, b} = -(-1)^{(|a|-2)(|b|-2)} {b, a}
    {a, b*c} = {a, b}*c + (-1)^{(|a|-2)|b|} b*{a, c}
    {a, {b, c}} = {{a, b}, c} + (-1)^{(|a|-2)(|b|-2)} {b, {a, c}}

These are certified by the test suite (the printed convention is pinned
operationally by the derived-bracket round-trips, not assumed).

Text form: ``1/2*x1*xi{1,3}*p2^2`` means (1/2) x1 xi1 xi3 p2^2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .linalg import Mat
from .poly import NEG_INF, Poly, PolyError, Scalar, coords, parse_rat


class GradedError(ValueError):
    pass


class GradedContext:
    """Ambient data (n, r, pairing) for graded elements."""

    __slots__ = ("n", "r", "pairing", "_pairing_inv")

    def __init__(self, n: int, r: int, pairing: Mat):
        if n < 0 or r < 1:
            raise GradedError("need n >= 0 and r >= 1")
        if pairing.shape != (r, r):
            raise GradedError(f"pairing must be {r}x{r}")
        if not pairing.is_symmetric():
            raise GradedError("pairing must be symmetric")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "_pairing_inv", pairing.inverse())

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("GradedContext is immutable")

    @property
    def pairing_inv(self) -> Mat:
        return self._pairing_inv

    @property
    def coords(self) -> tuple[str, ...]:
        return coords(self.n)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedContext)
                and (self.n, self.r, self.pairing) == (other.n, other.r, other.pairing))

    def __hash__(self):
        return hash((self.n, self.r, self.pairing))

    def __repr__(self):
        return f"GradedContext(n={self.n}, r={self.r})"


Key = tuple[tuple[int, ...], tuple[int, ...]]


def _normalize_xi(xi: Iterable[int], r: int) -> tuple[int, Key | None]:
    """Sort an odd-index word; returns (sign, sorted tuple) or (0, None) on
    a repeated index."""
    word = list(xi)
    for a in word:
        if not 0 <= a < r:
            raise GradedError(f"xi index {a} out of range 0..{r - 1}")
    if len(set(word)) != len(word):
        return 0, None
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            word[j - 1], word[j] = word[j], word[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(word)


def _merge_xi(a: tuple[int, ...], b: tuple[int, ...]):
    """Concatenate two sorted words, with the Koszul sign of the merge."""
    if set(a) & set(b):
        return 0, None
    sign = 1
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
            if (len(a) - i) % 2:
                sign = -sign
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


class GradedElem:
    """Immutable element of the graded algebra."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: GradedContext, terms: Mapping[Key, Poly] | None = None):
        universe = ctx.coords
        clean: dict[Key, Poly] = {}
        for (xi, p), coeff in (terms or {}).items():
            sign, xi_sorted = _normalize_xi(xi, ctx.r)
            if sign == 0:
                continue
            p = tuple(p)
            if len(p) != ctx.n or any(e < 0 for e in p):
                raise GradedError(f"bad p-exponents {p!r} for n={ctx.n}")
            if not isinstance(coeff, Poly):
                coeff = Poly.const(coeff)
            coeff = (sign * coeff).in_vars(universe)
            if coeff.is_zero:
                continue
            key = (xi_sorted, p)
            if key in clean:
                total = clean[key] + coeff
                if total.is_zero:
                    del clean[key]
                else:
                    clean[key] = total
            else:
                clean[key] = coeff
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("GradedElem is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: GradedContext) -> "GradedElem":
        return cls(ctx, {})

    @classmethod
    def from_poly(cls, ctx: GradedContext, f: Poly | Scalar) -> "GradedElem":
        if not isinstance(f, Poly):
            f = Poly.const(f)
        return cls(ctx, {((), (0,) * ctx.n): f})

    @classmethod
    def xi(cls, ctx: GradedContext, a: int) -> "GradedElem":
        return cls(ctx, {((a,), (0,) * ctx.n): Poly.const(1)})

    @classmethod
    def p(cls, ctx: GradedContext, i: int) -> "GradedElem":
        if not 0 <= i < ctx.n:
            raise GradedError(f"p index {i} out of range")
        exp = [0] * ctx.n
        exp[i] = 1
        return cls(ctx, {((), tuple(exp)): Poly.const(1)})

    # -- additive structure --------------------------------------------------

    def _check_ctx(self, other: "GradedElem"):
        if self.ctx != other.ctx:
            raise GradedError("context mismatch")

    def __add__(self, other: "GradedElem") -> "GradedElem":
        if not isinstance(other, GradedElem):
            return NotImplemented
        self._check_ctx(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            s = terms.get(key)
            total = coeff if s is None else s + coeff
            if total.is_zero:
                terms.pop(key, None)
            else:
                terms[key] = total
        return GradedElem(self.ctx, terms)

    def __neg__(self) -> "GradedElem":
        return GradedElem(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "GradedElem") -> "GradedElem":
        return self + (-other)

    def scale(self, factor: Poly | Scalar) -> "GradedElem":
        if not isinstance(factor, Poly):
            factor = Poly.const(factor)
        return GradedElem(self.ctx, {k: factor * c for k, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        return NotImplemented

    # -- multiplicative structure --------------------------------------------

    def __mul__(self, other) -> "GradedElem":
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        if not isinstance(other, GradedElem):
            return NotImplemented
        self._check_ctx(other)
        terms: dict[Key, Poly] = {}
        for (xi1, p1), c1 in self.terms.items():
            for (xi2, p2), c2 in other.terms.items():
                sign, xi = _merge_xi(xi1, xi2)
                if sign == 0:
                    continue
                key = (xi, tuple(a + b for a, b in zip(p1, p2)))
                add = sign * c1 * c2
                s = terms.get(key)
                total = add if s is None else s + add
                if total.is_zero:
                    terms.pop(key, None)
                else:
                    terms[key] = total
        return GradedElem(self.ctx, terms)

    # -- degree bookkeeping ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        """Top degree; -inf for the zero element."""
        if not self.terms:
            return NEG_INF
        return max(len(xi) + 2 * sum(p) for xi, p in self.terms)

    def degrees(self) -> set[int]:
        return {len(xi) + 2 * sum(p) for xi, p in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree_part(self, k: int) -> "GradedElem":
        return GradedElem(self.ctx, {
            (xi, p): c for (xi, p), c in self.terms.items()
            if len(xi) + 2 * sum(p) == k})

    def body_poly(self) -> Poly:
        """The degree-0 coefficient as a polynomial."""
        return self.terms.get(((), (0,) * self.ctx.n), Poly.zero(self.ctx.coords))

    # -- derivatives used by the bracket --------------------------------------

    def _d_x(self, i: int) -> "GradedElem":
        var = f"x{i + 1}"
        return GradedElem(self.ctx, {k: c.partial(var) for k, c in self.terms.items()})

    def _d_p(self, i: int) -> "GradedElem":
        terms: dict[Key, Poly] = {}
        for (xi, p), c in self.terms.items():
            if p[i] == 0:
                continue
            new = list(p)
            new[i] -= 1
            terms[(xi, tuple(new))] = c * p[i]
        return GradedElem(self.ctx, terms)

    def _d_xi_left(self, a: int) -> "GradedElem":
        terms: dict[Key, Poly] = {}
        for (xi, p), c in self.terms.items():
            if a not in xi:
                continue
            j = xi.index(a)
            sign = -1 if j % 2 else 1
            terms[(xi[:j] + xi[j + 1:], p)] = sign * c
        return GradedElem(self.ctx, terms)

    def _d_xi_right(self, a: int) -> "GradedElem":
        terms: dict[Key, Poly] = {}
        for (xi, p), c in self.terms.items():
            if a not in xi:
                continue
            j = xi.index(a)
            sign = -1 if (len(xi) - 1 - j) % 2 else 1
            terms[(xi[:j] + xi[j + 1:], p)] = sign * c
        return GradedElem(self.ctx, terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == GradedElem.from_poly(self.ctx, other)
        if not isinstance(other, GradedElem):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- text -----------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for (xi, p) in sorted(self.terms, key=_term_sort_key):
            coeff = self.terms[(xi, p)]
            gen = []
            if xi:
                gen.append("xi{" + ",".join(str(a + 1) for a in xi) + "}")
            for i, e in enumerate(p):
                if e == 1:
                    gen.append(f"p{i + 1}")
                elif e > 1:
                    gen.append(f"p{i + 1}^{e}")
            for exp, c in coeff.monomials():
                factors = []
                for v, e in zip(coeff.vars, exp):
                    if e == 1:
                        factors.append(v)
                    elif e > 1:
                        factors.append(f"{v}^{e}")
                factors.extend(gen)
                mag = abs(c)
                if not factors or mag != 1:
                    factors.insert(0, str(mag))
                body = "*".join(factors)
                if not chunks:
                    chunks.append(body if c > 0 else f"-{body}")
                else:
                    chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"GradedElem({self})"

    @classmethod
    def parse(cls, ctx: GradedContext, text: str) -> "GradedElem":
        return _parse_graded(ctx, text)


def _term_sort_key(key: Key):
    xi, p = key
    return (len(xi) + 2 * sum(p), xi, p)


def gmul(a: GradedElem, b: GradedElem) -> GradedElem:
    return a * b


def pbracket(a: GradedElem, b: GradedElem) -> GradedElem:
    """Degree -2 graded Poisson bracket (see the module docstring)."""
    a._check_ctx(b)
    ctx = a.ctx
    if ctx.pairing.det() == 0:  # defensive; context construction inverts it
        raise GradedError("singular pairing")
    out = GradedElem.zero(ctx)
    for i in range(ctx.n):
        out = out + a._d_p(i) * b._d_x(i) - a._d_x(i) * b._d_p(i)
    pairing = ctx.pairing
    for av in _xi_support(a):
        da = a._d_xi_right(av)
        if da.is_zero:
            continue
        for bv in _xi_support(b):
            g = pairing[av, bv]
            if g == 0:
                continue
            db = b._d_xi_left(bv)
            if db.is_zero:
                continue
            out = out + (da * db).scale(g)
    return out


def _xi_support(a: GradedElem) -> set[int]:
    return {v for (xi, _p) in a.terms for v in xi}


_GFACTOR_RE = re.compile(
    r"^(?:(?P<num>[0-9]+(?:/[0-9]+)?)"
    r"|(?P<xi>xi\{(?P<idx>[0-9]+(?:,[0-9]+)*)\})"
    r"|(?P<p>p(?P<pi>[1-9][0-9]*))(?:\^(?P<pe>[0-9]+))?"
    r"|(?P<x>x[1-9][0-9]*|t|s)(?:\^(?P<xe>[0-9]+))?)$"
)


def _parse_graded(ctx: GradedContext, text: str) -> GradedElem:
    text = text.strip()
    if not text:
        raise GradedError("empty graded-element text")
    if text == "0":
        return GradedElem.zero(ctx)
    # split into signed terms at top level
    pieces: list[tuple[int, str]] = []
    sign, buf = 1, []
    i = 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        i = 1
    while i < len(text):
        ch = text[i]
        if ch in "+-":
            pieces.append((sign, "".join(buf)))
            sign = -1 if ch == "-" else 1
            buf = []
        else:
            buf.append(ch)
        i += 1
    pieces.append((sign, "".join(buf)))

    total = GradedElem.zero(ctx)
    for sgn, chunk in pieces:
        chunk = chunk.strip()
        if not chunk:
            raise GradedError(f"dangling sign in {text!r}")
        coeff = Poly.const(sgn, ctx.coords)
        xi_word: list[int] = []
        p_exp = [0] * ctx.n
        for factor in chunk.split("*"):
            factor = factor.strip()
            m = _GFACTOR_RE.match(factor)
            if not m:
                raise GradedError(f"bad factor {factor!r} in {text!r}")
            if m.group("num"):
                coeff = coeff * Fraction(m.group("num"))
            elif m.group("xi"):
                idx = [int(v) - 1 for v in m.group("idx").split(",")]
                xi_word.extend(idx)
            elif m.group("p"):
                i = int(m.group("pi")) - 1
                if not 0 <= i < ctx.n:
                    raise GradedError(f"p index out of range in {factor!r}")
                p_exp[i] += int(m.group("pe") or 1)
            else:
                name = m.group("x")
                e = int(m.group("xe") or 1)
                coeff = coeff * Poly.variable(name, ctx.coords) ** e
        total = total + GradedElem(ctx, {(tuple(xi_word), tuple(p_exp)): coeff})
    return total
