"""Shared fixtures-by-function and independent oracles for the test suite."""

import os
import random
from functools import lru_cache

from amalgraph.amalgam import Amalgam
from amalgraph.words import free_reduce, parse_amalgam, parse_word

AMALGAM_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "amalgams")


@lru_cache(maxsize=None)
def load(name) -> Amalgam:
    with open(os.path.join(AMALGAM_DIR, name + ".amalgam")) as fh:
        return Amalgam(parse_amalgam(fh.read()))


def words(*texts):
    return [parse_word(t) for t in texts]


def random_word(rng: random.Random, alphabet, length):
    """A freely reduced word of exactly ``length`` letters (when possible)."""
    out = []
    while len(out) < length:
        letter = (rng.choice(alphabet), rng.choice((1, -1)))
        if out and out[-1] == (letter[0], -letter[1]):
            continue
        out.append(letter)
    return tuple(out)


def random_generators(rng, alphabet, max_count=4, max_len=8):
    n = rng.randint(1, max_count)
    return [free_reduce(random_word(rng, alphabet, rng.randint(1, max_len))) for _ in range(n)]


# --- SL(2, Z): x -> [[0,1],[-1,0]], y -> [[0,-1],[1,1]] -----------------

MATRICES = {
    ("x", 1): ((0, 1), (-1, 0)),
    ("x", -1): ((0, -1), (1, 0)),
    ("y", 1): ((0, -1), (1, 1)),
    ("y", -1): ((1, 1), (-1, 0)),
}
IDENTITY = ((1, 0), (0, 1))


def matmul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def matrix(word):
    m = IDENTITY
    for letter in word:
        m = matmul(m, MATRICES[letter])
    return m


def matrix_power(m, k):
    if k < 0:
        (a, b), (c, d) = m
        m, k = ((d, -b), (-c, a)), -k
    out = IDENTITY
    for _ in range(k):
        out = matmul(out, m)
    return out


def in_cyclic_subgroup(word, generator, bound):
    """Is ``word`` equal in SL(2,Z) to ``generator^k`` for some ``|k| <= bound``?"""
    target = matrix(word)
    g = matrix(generator)
    return any(matrix_power(g, k) == target for k in range(-bound, bound + 1))


def tc_index(amalgam, generators, cap=200000):
    """Coset enumeration of the whole amalgam relative to ``generators``."""
    from amalgraph.finite_groups import todd_coxeter

    return todd_coxeter(amalgam.spec.presentation(), list(generators), cap).index


def sympy_index(amalgam, generators):
    """Second, fully independent coset enumeration (sympy's fp-groups)."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    alphabet = list(amalgam.alphabet)
    F, *gens = free_group(" ".join(alphabet))
    letter = dict(zip(alphabet, gens))

    def conv(word):
        out = F.identity
        for name, sign in word:
            out = out * letter[name] ** sign
        return out

    rels = [conv(r) for r in amalgam.spec.presentation().relators]
    return FpGroup(F, rels).index([conv(w) for w in generators])
