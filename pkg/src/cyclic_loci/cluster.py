"""Generalized (CS-) cluster seeds evaluated numerically on a panel of points."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np
import networkx as nx

from .affine import identity_perm
from .positroids import kset
from .grassmann import sample_cell_point, karp_point, rho_power
from .tptests import initial_labels, eta_table


class PanelDegenerate(RuntimeError):
    pass


# ---------------------------------------------------------------- matrices

def matrix_mutation(B, k):
    """Fomin-Zelevinsky mutation of an (m x N) extended exchange matrix."""
    B = np.asarray(B)
    out = B.copy()
    m, N = B.shape
    for i in range(m):
        for j in range(N):
            if i == k or j == k:
                out[i, j] = -B[i, j]
            else:
                out[i, j] = B[i, j] + (abs(B[i, k]) * B[k, j] + B[i, k] * abs(B[k, j])) // 2
    return out


def cs_matrix_mutation(B, d, k):
    """mu_k(B D) D^{-1}; raises if the result is not integral."""
    d = np.asarray(d)
    BD = B * d[None, :]
    M = matrix_mutation(BD, k)
    if np.any(M % d[None, :]):
        raise ArithmeticError("mu_k(BD)D^-1 is not integral")
    return M // d[None, :]


def quiver_matrix(arrows, m, N):
    """B-tilde from arrows (i -> j) on vertices 0..m-1; b_ij = #(i->j) - #(j->i)."""
    S = np.zeros((m, m), dtype=np.int64)
    for i, j in arrows:
        S[i, j] += 1
        S[j, i] -= 1
    return S[:, :N]


def companion(B, d):
    """Right companion exchange matrix B D."""
    return np.asarray(B) * np.asarray(d)[None, :]


# ---------------------------------------------------------------- seeds

@dataclass(frozen=True)
class CSSeed:
    labels: tuple          # symbolic labels of the N+m variables
    B: np.ndarray          # (N+m) x N integers
    d: tuple               # exchange degrees
    z: tuple               # coefficient strings, one tuple of length d_k+1 per mutable
    x: np.ndarray          # (N+m) x panel values

    @property
    def N(self):
        return self.B.shape[1]

    def exchange_polynomial(self, k, u, v):
        dk = self.d[k]
        return sum(self.z[k][s] * u ** s * v ** (dk - s) for s in range(dk + 1))

    def monomials(self, k):
        col = self.B[:, k]
        lx = self.x
        Mp = np.prod(np.where(col[:, None] > 0, lx ** np.maximum(col, 0)[:, None], 1.0), axis=0)
        Mm = np.prod(np.where(col[:, None] < 0, lx ** np.maximum(-col, 0)[:, None], 1.0), axis=0)
        return Mp, Mm

    def check(self):
        N = self.N
        assert np.all(np.sign(self.B[:N]) == -np.sign(self.B[:N].T)), "not sign-skew-symmetric"
        for k, zk in enumerate(self.z):
            assert len(zk) == self.d[k] + 1
            assert abs(zk[0] - 1) < 1e-12 and abs(zk[-1] - 1) < 1e-12
            assert all(abs(zk[s] - zk[-1 - s]) < 1e-12 for s in range(len(zk)))
        return True

    def to_json(self):
        return {"labels": [str(l) for l in self.labels], "B": self.B.tolist(),
                "d": list(self.d), "z": [list(map(float, zk)) for zk in self.z]}


def mutate(seed, k):
    Mp, Mm = seed.monomials(k)
    xk = seed.x[k]
    if not np.all(np.isfinite(xk)) or np.any(xk == 0):
        raise PanelDegenerate(f"variable {seed.labels[k]} vanishes on the panel")
    new = seed.exchange_polynomial(k, Mp, Mm) / xk
    x = seed.x.copy()
    x[k] = new
    labels = list(seed.labels)
    labels[k] = ("mu", k, labels[k])
    return replace(seed, labels=tuple(labels), B=cs_matrix_mutation(seed.B, seed.d, k), x=x)


def right_companion_seed(seed):
    """FZ seed with exchange matrix B D and coefficient strings specialized to 0."""
    N = seed.N
    return CSSeed(seed.labels, companion(seed.B, seed.d), (1,) * N,
                  tuple((1.0, 1.0) for _ in range(N)), seed.x.copy())


# ---------------------------------------------------------------- panels

def distinguished_panel(P, size, rng):
    """TP points of the distinguished component plus the Karp point."""
    pts = [karp_point(P.k, P.n)]
    while len(pts) < size:
        pts.append(sample_cell_point(identity_perm(P.k, P.l), P, rng=rng))
    return pts


def vandermonde_point(k, n, rng):
    t = np.sort(rng.uniform(0.2, 3.0, size=n))
    while np.min(np.diff(t)) < 1e-2:
        t = np.sort(rng.uniform(0.2, 3.0, size=n))
    return np.vstack([t ** i for i in range(k)])


def rho_closed_panel(k, n, shift_by, size, rng):
    """TP points X together with X rho^shift_by, rho^2shift_by, ...; returns (points, perm).

    perm[j] is the panel index of X_j rho^shift_by, so that a function f
    with fingerprint v has (f o rho^shift_by) fingerprint v[perm].
    """
    R = rho_power(k, n, shift_by)
    pts, perm = [], []
    order = 1
    while not np.allclose(np.linalg.matrix_power(R, order), np.eye(n)):
        order += 1
    for _ in range(size):
        X = vandermonde_point(k, n, rng)
        base = len(pts)
        Y = X
        for j in range(order):
            pts.append(Y)
            perm.append(base + (j + 1) % order)
            Y = Y @ R
    return pts, np.array(perm)


def plucker_fingerprint(points, I):
    I = [i - 1 for i in I]
    return np.array([np.linalg.det(np.asarray(X)[:, I]) for X in points])


def seed_from_labels(labels, arrows, N, d, z, points):
    m = len(labels)
    B = quiver_matrix(arrows, m, N)
    x = np.array([plucker_fingerprint(points, I) for I in labels])
    return CSSeed(tuple(labels), B, tuple(d), tuple(tuple(zk) for zk in z), x)


def initial_seed_arrows(N, l):
    """x_{i+1} -> x_i -> x_{i+l} -> x_{i+1}, i = 1..N (0-based vertices)."""
    arrows = []
    for i in range(N):
        arrows += [(i + 1, i), (i, i + l), (i + l, i + 1)]
    return arrows


def initial_seed(P, points=None, rng=None, size=None):
    mut, froz = initial_labels(P)
    N = len(mut)
    if points is None:
        rng = np.random.default_rng(0) if rng is None else rng
        size = size or max(8, 3 * (N + P.l))
        points = distinguished_panel(P, size, rng)
    d = [P.k] + [1] * (N - 1)
    z = [eta_table(P.k, P.p)] + [(1.0, 1.0)] * (N - 1)
    return seed_from_labels(mut + froz, initial_seed_arrows(N, P.l), N, d, z, points)


def rectangles_seed(k, n, points):
    """Le-diagram (rectangles) seed of Gr(k, n); frozens are the last n variables."""
    lab = {}
    for a in range(1, k + 1):
        for b in range(1, n - k + 1):
            lab[a, b] = kset(list(range(1, k - a + 1)) + list(range(k - a + 1 + b, k + b + 1)))
    empty = tuple(range(1, k + 1))
    frozen = lambda a, b: a == k or b == n - k
    mut = [(a, b) for a in range(1, k + 1) for b in range(1, n - k + 1) if not frozen(a, b)]
    fro = [(a, b) for a in range(1, k + 1) for b in range(1, n - k + 1) if frozen(a, b)]
    order = mut + fro + ["empty"]
    idx = {v: i for i, v in enumerate(order)}
    arrows = []
    for (a, b) in lab:
        for (c, e) in [(a + 1, b), (a, b + 1)]:
            if (c, e) in lab:
                arrows.append(((a, b), (c, e)))
        if (a + 1, b + 1) in lab:
            arrows.append(((a + 1, b + 1), (a, b)))
    arrows.append(("empty", (1, 1)))
    arrows = [(idx[s], idx[t]) for s, t in arrows
              if not (s != "empty" and t != "empty" and frozen(*s) and frozen(*t))
              and not (s == "empty" and frozen(*t))]
    labels = [lab[v] for v in mut + fro] + [empty]
    N = len(mut)
    return seed_from_labels(labels, arrows, N, [1] * N, [(1.0, 1.0)] * N, points)


# ---------------------------------------------------------------- exchange graphs

def digest(v, digits=6, probe=4):
    """Rounded log-magnitudes of the first few panel values (sign kept)."""
    v = np.asarray(v)[:probe]
    return tuple(int(s) for s in np.sign(v)) + tuple(np.round(np.log(np.abs(v)), digits))


def seed_key(seed, digits=6):
    return frozenset(digest(seed.x[i], digits) for i in range(seed.N))


def exchange_graph(seed, cap=100_000, digits=6):
    """BFS over seeds identified by the set of mutable fingerprints."""
    start = seed_key(seed, digits)
    seeds = {start: seed}
    G = nx.Graph()
    G.add_node(start)
    q = deque([start])
    variables = {digest(seed.x[i], digits): seed.x[i] for i in range(seed.N)}
    partial = False
    while q:
        key = q.popleft()
        s = seeds[key]
        for k in range(s.N):
            t = mutate(s, k)
            tk = seed_key(t, digits)
            G.add_edge(key, tk, direction=k)
            if tk not in seeds:
                if len(seeds) >= cap:
                    partial = True
                    continue
                seeds[tk] = t
                q.append(tk)
                dg = digest(t.x[k], digits)
                variables.setdefault(dg, t.x[k])
    return {"seeds": len(seeds), "edges": G.number_of_edges(), "variables": len(variables),
            "partial": partial, "graph": G, "seed_map": seeds, "variable_map": variables}


def compare_with_companion(seed, cap=100_000):
    cs = exchange_graph(seed, cap)
    fz = exchange_graph(right_companion_seed(seed), cap)
    same = (cs["seeds"], cs["edges"]) == (fz["seeds"], fz["edges"])
    if same and cs["seeds"] <= 400:
        same = nx.is_isomorphic(cs["graph"], fz["graph"])
    return {"cs_seeds": cs["seeds"], "cs_variables": cs["variables"],
            "fz_seeds": fz["seeds"], "fz_variables": fz["variables"],
            "isomorphic": bool(same), "partial": cs["partial"] or fz["partial"]}


def invariant_cluster_count(result, perm, digits=6):
    """Clusters whose mutable variable set is stable under the panel permutation."""
    count = 0
    for key, s in result["seed_map"].items():
        img = frozenset(digest(s.x[i][perm], digits) for i in range(s.N))
        count += img == key
    return count


# ---------------------------------------------------------------- gradings

def multidegree_propagate(seed, degrees, sequence):
    """Track Z^r degrees of all variables along a mutation sequence.

    Raises ValueError if some exchange relation is inhomogeneous.
    """
    deg = np.array(degrees, dtype=np.int64)
    B = seed.B.copy()
    d = np.asarray(seed.d)
    history = [deg.copy()]
    for k in sequence:
        col = B[:, k]
        dp = (np.maximum(col, 0)[:, None] * deg).sum(axis=0)
        dm = (np.maximum(-col, 0)[:, None] * deg).sum(axis=0)
        if not np.array_equal(dp, dm):
            raise ValueError(f"inhomogeneous exchange at {k}: {dp} vs {dm}")
        deg = deg.copy()
        deg[k] = d[k] * dp - deg[k]
        B = cs_matrix_mutation(B, d, k)
        history.append(deg.copy())
    return history


# ---------------------------------------------------------------- y-hat

def yhat(seed, k, s):
    """hat y_{k;s} = (p_{k;s}/p_{k;0}) (M+/M-)^s with frozens in the coefficients."""
    Mp, Mm = seed.monomials(k)
    return seed.z[k][s] / seed.z[k][0] * (Mp / Mm) ** s


def yhat_check(seed, k):
    """Residual of the hat-y mutation rules under mu_k (max over j, s and the panel)."""
    N = seed.N
    t = mutate(seed, k)
    dk = seed.d[k]
    res = 0.0
    before = {(j, s): yhat(seed, j, s) for j in range(N) for s in range(seed.d[j] + 1)}
    after = {(j, s): yhat(t, j, s) for j in range(N) for s in range(seed.d[j] + 1)}
    total = sum(before[k, u] for u in range(dk + 1))
    for s in range(dk + 1):
        pred = before[k, dk - s] / before[k, dk]
        res = max(res, _rel(after[k, s], pred))
    for j in range(N):
        if j == k:
            continue
        bkj = seed.B[k, j]
        for s in range(seed.d[j] + 1):
            pred = before[j, s] * before[k, dk] ** max(s * bkj, 0) * total ** (-s * bkj)
            res = max(res, _rel(after[j, s], pred))
    return res


def _rel(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


# ---------------------------------------------------------------- folding

def framed_cycle(p):
    """Vertices u_1..u_p (0..p-1), u'_i (p..2p-1), u''_i (2p..3p-1); all mutable."""
    # for p = 2 the oriented 2-cycle cancels
    arrows = [(i, (i + 1) % p) for i in range(p)] if p > 2 else []
    arrows += [(p + i, i) for i in range(p)] + [(i, 2 * p + i) for i in range(p)]
    m = 3 * p
    B = np.zeros((m, m), dtype=np.int64)
    for i, j in arrows:
        B[i, j] += 1
        B[j, i] -= 1
    return B


def tau_sequence(p, a, b, c):
    """Run tau_p on the framed p-cycle with x(u)=a, x(u')=b, x(u'')=c."""
    B = framed_cycle(p)
    x = np.array([a] * p + [b] * p + [c] * p, dtype=float)

    def mu(v):
        nonlocal B
        col = B[:, v]
        Mp = np.prod(x ** np.maximum(col, 0))
        Mm = np.prod(x ** np.maximum(-col, 0))
        x[v] = (Mp + Mm) / x[v]
        B = matrix_mutation(B, v)

    for v in range(p - 1):
        mu(v)
    # the transposition (u_{p-1}, u_p) swaps the roles of the two vertices
    sw = list(range(3 * p))
    sw[p - 2], sw[p - 1] = sw[p - 1], sw[p - 2]
    B = B[np.ix_(sw, sw)]
    x = x[sw]
    for v in reversed(range(p - 1)):
        mu(v)
    return {"x_u": x[:p].tolist(), "B": B}


def folding_prediction(p, a, b, c):
    return sum(b ** i * c ** (p - 1 - i) for i in range(p)) / a


def q_prime_report(p, B):
    """Compare tau_p's quiver (after relabelling) with the arrow description of q'_p."""
    u = list(range(p))
    up = list(range(p, 2 * p))
    upp = list(range(2 * p, 3 * p))
    # search over cyclic relabellings of u' and u''; report the one matching
    for r1 in range(p):
        for r2 in range(p):
            for s1 in (1, -1):
                for s2 in (1, -1):
                    perm = u + [up[(s1 * i + r1) % p] for i in range(p)] + [upp[(s2 * i + r2) % p] for i in range(p)]
                    C = B[np.ix_(perm, perm)]
                    if _matches_q_prime(C, p):
                        return {"match": True, "relabel": (r1, s1, r2, s2)}
    return {"match": False}


def _matches_q_prime(C, p):
    cyc = framed_cycle(p)[:p, :p]
    if not np.array_equal(C[:p, :p], cyc):
        return False
    for i in range(p):
        if C[2 * p + i, i] != 1 or C[i, p + i] != 1:
            return False
        for j in range(p):
            if j != i and (C[2 * p + j, i] != 0 or C[i, p + j] != 0 or C[p + j, i] != 0 or C[i, 2 * p + j] != 0):
                return False
            want = 1 if j != (i + 1) % p else 0
            if C[p + i, 2 * p + j] != want:
                return False
        for j in range(p):
            if C[p + i, p + j] != 0 or C[2 * p + i, 2 * p + j] != 0:
                return False
    return True


def invariant_cluster_complex(result, perm, digits=6):
    """Simplicial complex of rho-orbits of mutable variables in invariant clusters.

    Returns face counts by dimension; the top faces are the invariant clusters
    read as clusters on the fixed locus.
    """
    faces = {}
    clusters = []
    for key, s in result["seed_map"].items():
        img = {digest(s.x[i][perm], digits): digest(s.x[i], digits) for i in range(s.N)}
        if frozenset(img) != key:
            continue
        orb = frozenset(frozenset((a, b)) for a, b in img.items())
        clusters.append(orb)
    for c in clusters:
        for r in range(1, len(c) + 1):
            for f in combinations(sorted(c, key=lambda o: sorted(o)), r):
                faces.setdefault(r, set()).add(frozenset(f))
    return {"clusters": len(clusters), "cluster_sizes": sorted({len(c) for c in clusters}),
            "faces": {r: len(v) for r, v in sorted(faces.items())}}
