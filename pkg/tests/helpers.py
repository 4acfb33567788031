"""Shared generators and small oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from cbkit.ordinal import ONE, ZERO, Ordinal
from cbkit.realize import DEFAULT_CONFIG, ClusterTree, realize_cluster
from cbkit.space import CbChar, derivative_steps


def cnf_from_pairs(pairs: dict[int, int]) -> Ordinal:
    """Ordinal below w^w from {finite exponent: coefficient}."""
    terms = tuple(
        (Ordinal.from_int(e), c) for e, c in sorted(pairs.items(), reverse=True) if c > 0
    )
    return Ordinal(terms)


# ordinals below w^w, built structurally rather than via arithmetic
st_ordinal = st.dictionaries(
    st.integers(min_value=0, max_value=4),
    st.integers(min_value=1, max_value=5),
    max_size=3,
).map(cnf_from_pairs)

st_limit_ordinal = st_ordinal.filter(lambda a: a.is_limit)

st_char = st.tuples(st_ordinal, st.integers(min_value=1, max_value=5)).map(
    lambda t: CbChar(*t)
) | st.just(CbChar(ZERO, 0))


def random_cnf(rng: random.Random, max_exp: int = 4, max_terms: int = 3, max_coeff: int = 5) -> Ordinal:
    exps = rng.sample(range(max_exp + 1), k=rng.randint(0, max_terms))
    return cnf_from_pairs({e: rng.randint(1, max_coeff) for e in exps})


def random_char(rng: random.Random) -> CbChar:
    if rng.random() < 0.1:
        return CbChar(ZERO, 0)
    return CbChar(random_cnf(rng), rng.randint(1, 5))


def stagewise_union(s1: CbChar, s2: CbChar) -> CbChar:
    """Union characteristic computed through derivative stages only."""
    top = max(s1.rank, s2.rank)
    survivors = derivative_steps(s1, top).count + derivative_steps(s2, top).count
    if survivors == 0:
        return CbChar(ZERO, 0)
    return CbChar(top, survivors)


def shifted_forest(alpha: Ordinal, p: int, offset: int, cfg=DEFAULT_CONFIG) -> list[ClusterTree]:
    """p rank-alpha clusters at integer centers offset..offset+p-1."""
    return [realize_cluster(Fraction(offset + k), Fraction(1, 2), alpha, cfg) for k in range(p)]
