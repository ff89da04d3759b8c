"""Bounded affine permutations B_n(k, l) with Bruhat and bridge orders."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from math import gcd

import networkx as nx


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AffinePerm:
    """l-periodic bijection of Z, stored by its window f(1..l)."""
    window: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.window)
        object.__setattr__(self, "window", w)
        l = len(w)
        if l == 0 or sorted((x - 1) % l for x in w) != list(range(l)):
            raise ValueError(f"not an affine permutation window: {w}")

    @property
    def period(self):
        return len(self.window)

    def __call__(self, i):
        q, r = divmod(i - 1, len(self.window))
        return self.window[r] + q * len(self.window)

    def inverse_at(self, m):
        l = len(self.window)
        for r, v in enumerate(self.window):
            if (m - v) % l == 0:
                return r + 1 + (m - v)
        raise ValueError(m)

    def __repr__(self):
        return "[" + ",".join(map(str, self.window)) + "]"

    def to_json(self):
        return list(self.window)

    @cached_property
    def av(self):
        return average_shift(self)

    def times_transposition(self, a, b):
        """f * t_{a,b}: swap the values at positions a and b (and their translates)."""
        l = self.period
        if (a - b) % l == 0:
            raise ValueError("transposition of congruent positions")
        fa, fb = self(a), self(b)
        w = list(self.window)
        qa, ra = divmod(a - 1, l)
        qb, rb = divmod(b - 1, l)
        w[ra] = fb - qa * l
        w[rb] = fa - qb * l
        return AffinePerm(tuple(w))


def average_shift(f):
    l = f.period
    s = sum(v - i for i, v in enumerate(f.window, start=1))
    assert s % l == 0
    return s // l


def identity_perm(k, l):
    return AffinePerm(tuple(i + k for i in range(1, l + 1)))


def coxeter_length(f):
    """Inversions (i, j) with i in [l], i < j and f(i) > f(j).

    Equal to the length of id_k^{-1} f since id_k is a translation. For a
    bijection with f(j) >= j - C the count is finite; we scan j up to the
    point where f(j) must exceed max f(i).
    """
    l = f.period
    lo = min(v - i for i, v in enumerate(f.window, start=1))
    count = 0
    for i in range(1, l + 1):
        fi = f(i)
        # f(j) >= j + lo, so j > fi - lo gives f(j) > fi
        for j in range(i + 1, fi - lo + 1):
            if f(j) < fi:
                count += 1
    return count


def is_bounded(f, n):
    return all(i <= v <= i + n for i, v in enumerate(f.window, start=1))


def _cover_indices(f, n):
    l = f.period
    for a in range(1, l + 1):
        for b in range(a + 1, a + n):
            if (b - a) % l:
                yield a, b


def _is_cover_step(f, a, b):
    # affine type A: f t_ab covers f iff f(a) < f(b) with nothing in between
    fa, fb = f(a), f(b)
    if fa >= fb:
        return False
    return not any(fa < f(c) < fb for c in range(a + 1, b))


def bruhat_covers_up(f, n):
    out = []
    for a, b in _cover_indices(f, n):
        if not _is_cover_step(f, a, b):
            continue
        g = f.times_transposition(a, b)
        if is_bounded(g, n) and g not in out:
            out.append(g)
    return out


def _gap_ok(f, a, b, n):
    return all(f(c) in (c, c + n) for c in range(a + 1, b))


def bridge_covers_up(f, n):
    out = []
    for a, b in _cover_indices(f, n):
        if not _gap_ok(f, a, b, n) or not _is_cover_step(f, a, b):
            continue
        g = f.times_transposition(a, b)
        if is_bounded(g, n) and g not in out:
            out.append(g)
    return out


def bruhat_covers_up_slow(f, n):
    """Oracle: same as bruhat_covers_up but by recomputing lengths."""
    L = coxeter_length(f)
    out = []
    for a, b in _cover_indices(f, n):
        g = f.times_transposition(a, b)
        if is_bounded(g, n) and coxeter_length(g) == L + 1 and g not in out:
            out.append(g)
    return out


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class PosetParams:
    k: int
    l: int
    n: int

    def __post_init__(self):
        if self.n < 1 or self.l < 1 or not 0 <= self.k <= self.n:
            raise ValueError(f"bad parameters {self}")
        object.__setattr__(self, "l", gcd(self.l, self.n))

    @property
    def p(self):
        return self.n // self.l

    @property
    def alpha(self):
        return self.k // self.p

    @property
    def beta(self):
        return self.k % self.p


def bridge_rank(P):
    num = P.k * (P.n - P.k) - P.beta * (P.p - P.beta)
    if num % P.p:
        raise ArithmeticError(f"non-integral rank for {P}")
    return num // P.p


def enumerate_bounded(P, cap=200_000, covers=bruhat_covers_up):
    """BFS upward from id_k. Returns the set B_n(k, l)."""
    start = identity_perm(P.k, P.l)
    seen = {start}
    q = deque([start])
    while q:
        f = q.popleft()
        for g in covers(f, P.n):
            if g not in seen:
                seen.add(g)
                if len(seen) > cap:
                    raise CapExceeded(f"|B| > {cap} for {P}")
                q.append(g)
    return seen


def enumerate_bounded_brute(P):
    """Oracle: all windows with i <= f(i) <= i+n and average shift k."""
    l, n, k = P.l, P.n, P.k
    out = set()
    ranges = [range(i, i + n + 1) for i in range(1, l + 1)]
    target = k * l + l * (l + 1) // 2
    for w in product(*ranges):
        if sum(w) != target:
            continue
        if len({(x - 1) % l for x in w}) != l:
            continue
        out.add(AffinePerm(w))
    return out


def maximal_elements(P):
    l, n, a, b = P.l, P.n, P.alpha, P.beta
    out = []
    for S in combinations(range(1, l + 1), a):
        if b == 0:
            out.append(AffinePerm(tuple(i + n if i in S else i for i in range(1, l + 1))))
        else:
            for s in range(1, l + 1):
                if s in S:
                    continue
                w = [i + n if i in S else i for i in range(1, l + 1)]
                w[s - 1] = s + b * l
                out.append(AffinePerm(tuple(w)))
    return out


# ---------------------------------------------------------------- chains

class BridgePoset:
    """The finite poset (B_n(k,l), <=_b) with cached covers."""

    def __init__(self, P, cap=200_000):
        self.P = P
        self.elements = enumerate_bounded(P, cap=cap, covers=bridge_covers_up)
        self.up = {f: bridge_covers_up(f, P.n) for f in self.elements}
        self.length = {f: coxeter_length(f) for f in self.elements}

    def maxima(self):
        return [f for f in self.elements if not self.up[f]]

    @cached_property
    def down(self):
        down = {}
        for f in self.elements:
            for g in self.up[f]:
                down.setdefault(g, []).append(f)
        return down

    def below(self, top):
        """Elements x with x <=_b top."""
        down = self.down
        seen = {top}
        q = [top]
        while q:
            g = q.pop()
            for f in down.get(g, ()):
                if f not in seen:
                    seen.add(f)
                    q.append(f)
        return seen

    def graph(self):
        G = nx.DiGraph()
        for f in self.elements:
            G.add_node(f, rank=self.length[f])
            for g in self.up[f]:
                G.add_edge(f, g)
        return G


def shift_conjugate(f, r=1):
    """c^r f c^-r with c(i) = i+1; an automorphism of every B_n(k,l)."""
    l = f.period
    return AffinePerm(tuple(f(i - r) + r for i in range(1, l + 1)))


def saturated_chains(bottom, top, n, below=None):
    """Yield saturated bridge chains from bottom up to top, returned top first."""
    if below is None:
        memo = {}

        def reach(f):
            if f == top:
                return True
            if f not in memo:
                memo[f] = any(reach(g) for g in bridge_covers_up(f, n))
            return memo[f]
    else:
        def reach(f):
            return f in below

    if not reach(bottom):
        return

    def rec(path):
        f = path[-1]
        if f == top:
            yield tuple(reversed(path))
            return
        for g in bridge_covers_up(f, n):
            if reach(g):
                yield from rec(path + [g])

    yield from rec([bottom])


def count_chains_dfs(bottom, top, covers):
    """Independent chain count by memoized path counting in a cover dict."""
    memo = {}

    def c(f):
        if f == top:
            return 1
        if f not in memo:
            memo[f] = sum(c(g) for g in covers.get(f, ()))
        return memo[f]

    return c(bottom)


def _adjacent(c1, c2):
    diff = [i for i, (x, y) in enumerate(zip(c1, c2)) if x != y]
    if len(diff) == 1:
        return 2
    if len(diff) == 2 and diff[1] == diff[0] + 1:
        return 3
    return 0


def verify_move_connected(bottom, top, n, cap=5000, chains=None):
    """Connectivity of the 2-/3-move graph on saturated chains bottom..top."""
    if chains is None:
        chains = []
        for c in saturated_chains(bottom, top, n):
            chains.append(c)
            if len(chains) > cap:
                return {"status": "skipped", "reason": f"more than {cap} chains"}
    m = len(chains)
    if m == 0:
        return {"status": "empty", "chains": 0, "connected": False}
    # bucket chains by all-but-one and all-but-two-consecutive positions
    G = nx.Graph()
    G.add_nodes_from(range(m))
    L = len(chains[0])
    for drop in [(i,) for i in range(L)] + [(i, i + 1) for i in range(L - 1)]:
        buckets = {}
        for idx, c in enumerate(chains):
            key = tuple(x for i, x in enumerate(c) if i not in drop)
            buckets.setdefault(key, []).append(idx)
        for ids in buckets.values():
            for a, b in zip(ids, ids[1:]):
                G.add_edge(a, b)
    comps = nx.number_connected_components(G)
    return {"status": "ok", "chains": m, "components": comps, "connected": comps == 1}


def local_confluence(poset, top):
    """Certificate for move-connectedness when chains are too many to list.

    For every z <= top and every pair of covers x, y of z below top, look for
    w <= top covering both (2-move) or x < x' < w, y < y' < w (3-move).
    Together with induction on corank this gives connectivity.
    """
    below = poset.below(top)
    up = {f: [g for g in poset.up[f] if g in below] for f in below}
    bad = []
    for z in below:
        cov = up[z]
        for x, y in combinations(cov, 2):
            ux, uy = set(up[x]), set(up[y])
            if ux & uy:
                continue
            u2x = {w for x2 in ux for w in up[x2]}
            u2y = {w for y2 in uy for w in up[y2]}
            if not (u2x & u2y):
                bad.append((z, x, y))
    return {"status": "ok", "elements": len(below), "failures": len(bad), "connected": not bad}


def move_connectivity_report(P, chain_cap=3000, cap=200_000):
    """Check every maximal element of B_n(k,l), one per shift-conjugacy class."""
    pos = BridgePoset(P, cap=cap)
    bot = identity_perm(P.k, P.l)
    tops = sorted(pos.maxima(), key=lambda f: f.window)
    done, out = set(), []
    for t in tops:
        if t in done:
            continue
        orbit = {shift_conjugate(t, r) for r in range(P.l)}
        done |= orbit
        below = pos.below(t)
        up = {f: [g for g in pos.up[f] if g in below] for f in below}
        cnt = count_chains_dfs(bot, t, up)
        if cnt <= chain_cap:
            ch = list(saturated_chains(bot, t, P.n, below=below))
            r = verify_move_connected(bot, t, P.n, chains=ch)
            r["method"] = "chain-graph"
        else:
            r = local_confluence(pos, t)
            r["method"] = "local-confluence"
        r.update(top=t.to_json(), orbit=len(orbit), chain_count=cnt)
        out.append(r)
    return out
