"""Grassmann necklaces, positroids and weak separation."""
from __future__ import annotations

from itertools import combinations

from .affine import AffinePerm


def rep(x, n):
    return (x - 1) % n + 1


def kset(it, n=None):
    s = tuple(sorted(it if n is None else (rep(x, n) for x in it)))
    return s


def shift(I, r, n):
    return kset((x + r for x in I), n)


def orbit(I, l, n):
    out, J = [], kset(I)
    while J not in out:
        out.append(J)
        J = shift(J, l, n)
    return out


def as_period(f, n):
    """View an l-periodic f (l | n) as an n-periodic permutation."""
    return AffinePerm(tuple(f(i) for i in range(1, n + 1)))


def necklace_from_perm(f, n):
    f = as_period(f, n)
    neck = []
    for i in range(1, n + 1):
        neck.append(kset((f(j) for j in range(i - n, i) if f(j) >= i), n))
    k = len(neck[0])
    for i in range(n):
        I, J = neck[i], neck[(i + 1) % n]
        if len(I) != k:
            raise RuntimeError("necklace terms of unequal size")
        # a fixed point f(i) = i is a loop: the term is unchanged
        add = set() if f(i + 1) == i + 1 else {rep(f(i + 1), n)}
        expect = kset((set(I) - {i + 1}) | add)
        if J != expect:
            raise RuntimeError(f"necklace recurrence fails at {i + 1}")
    return tuple(neck)


def rotated_key(I, i, n):
    # position of each element in the order i < i+1 < ... < i-1
    return sorted((x - i) % n for x in I)


def gale_geq(I, J, i, n):
    return all(a >= b for a, b in zip(rotated_key(I, i, n), rotated_key(J, i, n)))


def positroid_from_necklace(neck):
    n = len(neck)
    k = len(neck[0])
    return frozenset(I for I in combinations(range(1, n + 1), k)
                     if all(gale_geq(I, neck[i - 1], i, n) for i in range(1, n + 1)))


def matroid_rank(bases, A):
    A = set(A)
    return max((len(A & set(B)) for B in bases), default=0)


def is_matroid(bases):
    """Basis exchange axiom, brute force."""
    bases = {frozenset(B) for B in bases}
    if not bases:
        return False
    for B1 in bases:
        for B2 in bases:
            for x in B1 - B2:
                if not any((B1 - {x}) | {y} in bases for y in B2 - B1):
                    return False
    return True


def perm_from_positroid(bases, n, check=True):
    bases = [tuple(B) for B in bases]
    if check and not is_matroid(bases):
        raise ValueError("not a matroid")
    w = []
    for i in range(1, n + 1):
        for j in range(i, i + n + 1):
            tail = {rep(c, n) for c in range(i + 1, j + 1)}
            if matroid_rank(bases, tail | {i}) == matroid_rank(bases, tail):
                w.append(j)
                break
    return AffinePerm(tuple(w))


def is_rho_invariant(bases, l, n):
    S = {kset(B) for B in bases}
    return {shift(B, l, n) for B in S} == S


def weakly_separated(I, J, n=None):
    I, J = set(I), set(J)
    a, b = I - J, J - I
    if not a or not b:
        return True
    labels = [0 if x in a else 1 for x in sorted(a | b)]
    changes = sum(labels[i] != labels[i - 1] for i in range(len(labels)))
    return changes <= 2


def is_ws_collection(C):
    C = list(C)
    return all(weakly_separated(I, J) for I, J in combinations(C, 2))
