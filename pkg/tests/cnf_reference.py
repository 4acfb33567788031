"""Reference ordinal arithmetic on triples, independent of the package.

An ordinal below w^3 is a triple (a2, a1, a0) meaning w^2*a2 + w*a1 + a0.
Addition and multiplication follow the transfinite definitions directly:
recurse on the right argument, successors peel one step, limits take the
supremum of the approximating sequence.  Coordinates of such sequences
are eventually affine in n, so the supremum can be read off two sample
points: the highest coordinate still growing collapses into the next one
up.  No normal-form algebra is involved, which is the point.
"""

from __future__ import annotations

from functools import lru_cache

Triple = tuple[int, int, int]

ZERO3: Triple = (0, 0, 0)


def is_triple(x: object) -> bool:
    return (
        isinstance(x, tuple)
        and len(x) == 3
        and all(isinstance(c, int) and c >= 0 for c in x)
    )


def sup_linear(f) -> Triple:
    g1, g2 = f(4), f(6)
    if g1 == g2:
        raise AssertionError(f"sequence is not strictly increasing: {g1}")
    for i in (0, 1, 2):
        if g1[i] != g2[i]:
            if i == 0:
                raise OverflowError("supremum reaches w^3")
            out = list(g1)
            out[i - 1] += 1
            for j in range(i, 3):
                out[j] = 0
            return tuple(out)
    raise AssertionError("unreachable")


# The recursion re-visits the same pairs exponentially often; caching
# keeps it definitional but affordable.
@lru_cache(maxsize=None)
def tadd(a: Triple, b: Triple) -> Triple:
    assert is_triple(a) and is_triple(b)
    if b == ZERO3:
        return a
    if b[2] > 0:  # successor: a + (b'+1) = (a+b') + 1
        x = tadd(a, (b[0], b[1], b[2] - 1))
        return (x[0], x[1], x[2] + 1)
    if b[1] > 0:  # limit w*b1 + ...: sup over a + (b2, b1-1, n)
        return sup_linear(lambda n: tadd(a, (b[0], b[1] - 1, n)))
    return sup_linear(lambda n: tadd(a, (b[0] - 1, n, 0)))


@lru_cache(maxsize=None)
def tmul(a: Triple, b: Triple) -> Triple:
    assert is_triple(a) and is_triple(b)
    if a == ZERO3 or b == ZERO3:
        return ZERO3
    if b[2] > 0:  # successor: a * (b'+1) = a*b' + a
        return tadd(tmul(a, (b[0], b[1], b[2] - 1)), a)
    if b[1] > 0:
        return sup_linear(lambda n: tmul(a, (b[0], b[1] - 1, n)))
    return sup_linear(lambda n: tmul(a, (b[0] - 1, n, 0)))


def tcmp(a: Triple, b: Triple) -> int:
    return (a > b) - (a < b)
