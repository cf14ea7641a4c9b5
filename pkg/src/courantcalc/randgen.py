"""Deterministic pseudo-random inputs for property checks.

Every consumer passes an explicit seeded ``random.Random``; identical seeds
give identical objects, so counterexamples replay exactly.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .graded import GradedContext, GradedElem
from .poly import Poly


def rand_rat(rng: random.Random, bound: int = 3, denominators: tuple[int, ...] = (1, 1, 2)) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice(denominators))


def rand_poly(rng: random.Random, vars: tuple[str, ...], max_degree: int = 2,
              max_terms: int = 3) -> Poly:
    out = Poly.zero(vars)
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * len(out.vars)
        for _ in range(rng.randint(0, max_degree)):
            if out.vars:
                exp[rng.randrange(len(out.vars))] += 1
        out = out + Poly(out.vars, {tuple(exp): rand_rat(rng)})
    return out


def graded_monomials(ctx: GradedContext, degree: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (xi-subset, p-exponent) keys of a given total degree."""
    keys = []
    for j in range(degree // 2 + 1):
        xi_size = degree - 2 * j
        if xi_size > ctx.r:
            continue
        if j > 0 and ctx.n == 0:
            continue
        for xi in itertools.combinations(range(ctx.r), xi_size):
            for p in _compositions(j, ctx.n):
                keys.append((xi, p))
    return keys


def _compositions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def rand_graded(rng: random.Random, ctx: GradedContext, degree: int,
                max_coeff_degree: int = 2, max_terms: int = 3) -> GradedElem:
    """Random homogeneous element of the given degree (may be zero when no
    monomial of that degree exists)."""
    keys = graded_monomials(ctx, degree)
    if not keys:
        return GradedElem.zero(ctx)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = rng.choice(keys)
        coeff = rand_poly(rng, ctx.coords, max_degree=max_coeff_degree)
        terms[key] = terms.get(key, Poly.zero(ctx.coords)) + coeff
    return GradedElem(ctx, terms)


def rand_section(rng: random.Random, structure, max_degree: int = 2):
    from .courant import Section

    return Section(tuple(
        rand_poly(rng, structure.coords, max_degree=max_degree, max_terms=2)
        for _ in range(structure.r)))


def rand_function(rng: random.Random, structure, max_degree: int = 2) -> Poly:
    return rand_poly(rng, structure.coords, max_degree=max_degree)


def rand_cochain(rng: random.Random, structure, degree: int,
                 max_coeff_degree: int = 2, max_terms: int = 3):
    from .cochains import Cochain

    body = rand_graded(rng, structure.ctx, degree,
                       max_coeff_degree=max_coeff_degree, max_terms=max_terms)
    # retry cancellations so callers get an honest degree-k representative
    for _ in range(5):
        if body or not graded_monomials(structure.ctx, degree):
            break
        body = rand_graded(rng, structure.ctx, degree,
                           max_coeff_degree=max_coeff_degree, max_terms=max_terms)
    return Cochain(structure, body)


def rand_connection(rng: random.Random, structure, m: int, max_degree: int = 1,
                    fiber_pairing=None):
    from .connections import Connection

    gamma = tuple(
        tuple(tuple(rand_poly(rng, structure.coords, max_degree=max_degree, max_terms=2)
                    for _ in range(m)) for _ in range(m))
        for _ in range(structure.r))
    return Connection(structure, m, gamma, fiber_pairing=fiber_pairing)


def rand_symmetric_invertible(rng: random.Random, m: int):
    from .linalg import Mat

    while True:
        entries = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                v = rng.randint(-2, 2) if i != j else rng.randint(1, 3)
                entries[i][j] = v
                entries[j][i] = v
        mat = Mat(entries)
        if mat.det() != 0:
            return mat
