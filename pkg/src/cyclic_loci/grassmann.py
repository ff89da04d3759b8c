"""Numerics on Gr(k,n): Plucker vectors, the cyclic shift, eigenspaces,
component signatures, the Karp point, and TNN cell sampling."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd, sin, pi

import numpy as np

from .affine import PosetParams, bridge_covers_up, maximal_elements, coxeter_length
from .positroids import necklace_from_perm, as_period, kset, rep, shift

TOL = 1e-9


# ---------------------------------------------------------------- Pluckers

def subsets(k, n):
    return list(combinations(range(1, n + 1), k))


class PluckerVector:
    """Plucker coordinates indexed by sorted k-subsets of [n] (1-based)."""

    def __init__(self, k, n, values, index=None):
        self.k, self.n = k, n
        self.sets = subsets(k, n) if index is None else index
        self.values = np.asarray(values, dtype=complex)
        self.pos = {I: m for m, I in enumerate(self.sets)}

    def __getitem__(self, I):
        I = tuple(I)
        if len(set(I)) < len(I):
            return 0.0
        s = sorted(I)
        sign = _perm_sign(I)
        return sign * self.values[self.pos[tuple(s)]]

    def normalized(self):
        m = np.argmax(np.abs(self.values))
        return self.values / self.values[m]

    def to_json(self):
        return {"k": self.k, "n": self.n,
                "sets": [list(I) for I in self.sets],
                "values": [[float(v.real), float(v.imag)] for v in self.values]}


def _perm_sign(seq):
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def minor(X, I):
    cols = [rep(c, X.shape[1]) - 1 for c in I]
    return np.linalg.det(X[:, cols])


def pluckers_of(X, check_rank=True):
    X = np.asarray(X)
    k, n = X.shape
    if check_rank and np.linalg.matrix_rank(X, tol=1e-10 * max(1.0, np.abs(X).max())) < k:
        raise ValueError("rank-deficient matrix")
    sets = subsets(k, n)
    idx = np.array(sets) - 1
    blocks = X[:, idx].transpose(1, 0, 2)  # (m, k, k)
    return PluckerVector(k, n, np.linalg.det(blocks), index=sets)


def laplace_det(M):
    """Cofactor expansion; an independent oracle for small determinants."""
    M = [list(r) for r in M]
    m = len(M)
    if m == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * laplace_det([r[:j] + r[j + 1:] for r in M[1:]])
               for j in range(m))


def projective_distance(P, Q):
    a, b = P.normalized(), Q.normalized()
    # align phases via the coordinate where P is largest
    return float(np.max(np.abs(a - b)))


def proj_equal(u, v, tol=TOL):
    u, v = np.asarray(u), np.asarray(v)
    m = np.argmax(np.abs(u))
    if abs(v[m]) == 0:
        return False
    c = u[m] / v[m]
    return np.max(np.abs(u - c * v)) <= tol * np.abs(u).max()


# ---------------------------------------------------------------- the shift

def rho_matrix(k, n):
    R = np.zeros((n, n))
    for i in range(n - 1):
        R[i + 1, i] = 1.0
    R[0, n - 1] = (-1.0) ** (k - 1)
    return R


def rho_power(k, n, l):
    return np.linalg.matrix_power(rho_matrix(k, n), l % (2 * n))


def rho_set(I, r, n):
    return shift(I, r, n)


def shift_permutation(k, n, r):
    """Index array perm with values(X rho^r)[m] = values(X)[perm[m]]."""
    sets = subsets(k, n)
    pos = {I: m for m, I in enumerate(sets)}
    return np.array([pos[rho_set(I, r, n)] for I in sets])


def fixedness_residual(P, l):
    """min over zeta of max |D_{rho^l I} - zeta D_I| / max|D|, and zeta."""
    v = P.values
    w = v[shift_permutation(P.k, P.n, l)]
    m = np.argmax(np.abs(v))
    zeta = w[m] / v[m]
    return float(np.max(np.abs(w - zeta * v)) / np.abs(v).max()), complex(zeta)


# ---------------------------------------------------------------- eigenbasis

def eigenvalues(k, n):
    j = np.arange(n)
    if k % 2:
        return np.exp(2j * pi * j / n)
    return np.exp(1j * pi * (2 * j + 1) / n)


def eigenvectors(k, n):
    lam = eigenvalues(k, n)
    return lam, np.array([lam[j] ** np.arange(n) for j in range(n)])


@dataclass
class EigenData:
    k: int
    n: int
    l: int

    def __post_init__(self):
        self.l = gcd(self.l, self.n)
        self.p = self.n // self.l
        self.lam, self.omega = eigenvectors(self.k, self.n)

    def eigenspace(self, r):
        """Indices j with lambda_j^l equal to the r-th eigenvalue of rho^l.

        lambda_j^l depends only on j mod p, so the p eigenspaces of rho^l are
        indexed by residues r in [0, p) and have dimension l.
        """
        return [j for j in range(self.n) if j % self.p == r]

    def mu(self, r):
        return self.lam[r] ** self.l


def karp_indices(k, n):
    lam = eigenvalues(k, n)
    d = np.abs(lam - 1)
    order = np.lexsort((np.arange(n), np.round(d, 12)))
    return sorted(order[:k].tolist())


def karp_point(k, n):
    """Real basis of the span of the k eigenvectors nearest 1."""
    _, om = eigenvectors(k, n)
    Z = om[karp_indices(k, n)]
    return real_basis(Z, k)


def real_basis(Z, k):
    """Orthonormal real basis of a conjugation-stable complex row space."""
    R = np.vstack([Z.real, Z.imag])
    _, s, Vt = np.linalg.svd(R)
    if s[k - 1] < 1e-8 * s[0] or (len(s) > k and s[k] > 1e-8 * s[0]):
        raise ValueError("row space is not defined over the reals")
    return Vt[:k]


def karp_plucker(I, k, n):
    return float(np.prod([sin((I[s] - I[j]) * pi / n) for j in range(k) for s in range(j + 1, k)]))


# ---------------------------------------------------------------- components

@dataclass(frozen=True)
class ComponentSignature:
    m: tuple
    lprime: int
    distinguished: bool = False

    @property
    def dim(self):
        return sum(x * (self.lprime - x) for x in self.m)


def distinguished_composition(k, n, l):
    E = EigenData(k, n, l)
    m = [0] * E.p
    for j in karp_indices(k, n):
        m[j % E.p] += 1
    return tuple(m)


def components(k, n, l):
    l = gcd(l, n)
    p = n // l
    dist = distinguished_composition(k, n, l)
    out = []
    for m in product(range(l + 1), repeat=p):
        if sum(m) == k:
            out.append(ComponentSignature(tuple(m), l, tuple(m) == dist))
    return out


def sample_point_on_component(sig, k, n, rng):
    E = EigenData(k, n, sig.lprime)
    rows = []
    for r, mr in enumerate(sig.m):
        if not mr:
            continue
        basis = E.omega[E.eigenspace(r)]
        C = rng.standard_normal((mr, len(basis))) + 1j * rng.standard_normal((mr, len(basis)))
        rows.append(C @ basis)
    X = np.vstack(rows)
    q, _ = np.linalg.qr(X.conj().T)
    return q.conj().T


def sample_real_point_on_D(k, n, l, rng):
    """Random real point of the distinguished component (any signs)."""
    E = EigenData(k, n, l)
    lam = E.lam
    m = distinguished_composition(k, n, l)
    # conjugation sends eigenspace r to the residue of conj(lambda)
    conj_of = {}
    for r in range(E.p):
        j = E.eigenspace(r)[0]
        jc = int(np.argmin(np.abs(lam - np.conj(lam[j]))))
        conj_of[r] = jc % E.p
    rows, done = [], set()
    for r in range(E.p):
        if r in done or not m[r]:
            continue
        basis = E.omega[E.eigenspace(r)]
        rc = conj_of[r]
        if rc == r:
            Rb = real_basis(basis, len(basis))
            rows.append(rng.standard_normal((m[r], len(Rb))) @ Rb)
            done.add(r)
        else:
            C = rng.standard_normal((m[r], len(basis))) + 1j * rng.standard_normal((m[r], len(basis)))
            W = C @ basis
            rows.extend([W.real, W.imag])
            done |= {r, rc}
    X = np.vstack(rows)
    q, _ = np.linalg.qr(X.T)
    return q.T


# ---------------------------------------------------------------- matroids

def matroid_of_point(P, tol=TOL):
    v = np.abs(P.values)
    mx = v.max()
    return frozenset(I for I, x in zip(P.sets, v) if x > tol * mx)


def _phase_normalized(P):
    v = P.values
    m = np.argmax(np.abs(v))
    return v * (abs(v[m]) / v[m]) / abs(v[m])


def is_tnn(P, tol=TOL):
    v = _phase_normalized(P)
    return bool(np.all(np.abs(v.imag) <= tol) and np.all(v.real >= -tol))


def is_tp(P, tol=TOL):
    v = _phase_normalized(P)
    return bool(np.all(np.abs(v.imag) <= tol) and np.all(v.real > tol))


# ---------------------------------------------------------------- 0-cells and bridges

def shift_block_operator(k, n, l, s):
    """rho^l restricted to the columns s, s+l, ..., as a p x p matrix."""
    R = rho_power(k, n, l)
    cols = [s - 1 + m * l for m in range(n // l)]
    return R[np.ix_(cols, cols)]


def zero_cell_representative(t, P):
    P = PosetParams(P.k, P.l, P.n)
    if t not in set(maximal_elements(P)):
        raise ValueError(f"{t} is not maximal in B_{P.n}({P.k},{P.l})")
    n, l, p, b = P.n, P.l, P.p, P.beta
    tn = as_period(t, n)
    rows = []
    for i in range(1, n + 1):
        if tn(i) == i + n:
            e = np.zeros(n)
            e[i - 1] = 1.0
            rows.append(e)
    if b:
        s = next(i for i in range(1, l + 1) if t(i) == i + b * l)
        cols = [s - 1 + m * l for m in range(p)]
        R = shift_block_operator(P.k, n, l, s)
        w, V = np.linalg.eig(R.T)  # rows y with y R = mu y
        ang = np.angle(w)
        order = np.argsort(ang)
        # the rho^l-stable TNN choice is a Karp-type arc of b consecutive
        # eigenvalues; which arc depends on the interleaving signs
        for start in range(p):
            pick = [order[(start + m) % p] for m in range(b)]
            try:
                Yb = real_basis(V[:, pick].T, b)
            except ValueError:
                continue
            ext = []
            for y in Yb:
                e = np.zeros(n)
                e[cols] = y
                ext.append(e)
            X = np.array(rows + ext)
            if is_tnn(pluckers_of(X)):
                break
        else:
            raise RuntimeError("no TNN 0-cell representative found")
    else:
        X = np.array(rows)
    Pv = pluckers_of(X)
    if not is_tnn(Pv):
        raise RuntimeError("0-cell representative is not TNN")
    if Pv.values[np.argmax(np.abs(Pv.values))].real < 0:
        X[0] = -X[0]
    return X


def cover_transposition(f, g, n):
    """(a, b) with g = f t_{a,b}, a in [l], a < b < a + n."""
    l = f.period
    for a in range(1, l + 1):
        for b in range(a + 1, a + n):
            if (b - a) % l and f.times_transposition(a, b) == g:
                return a, b
    raise ValueError(f"{g} is not f t_ab for f = {f}")


def eps(n, i, j, a, k):
    """Id + a sgn(i,j) E_ij with indices mod n; sgn = (-1)^(k-1) on wrap."""
    E = np.eye(n)
    ii, jj = rep(i, n), rep(j, n)
    # one sign for each time the arrow i -> j crosses the seam n | 1
    wraps = (j - 1) // n - (i - 1) // n
    E[ii - 1, jj - 1] += a * ((-1) ** (k - 1)) ** wraps
    return E


def _u(f, a, b, n):
    return sum(1 for s in range(a + 1, b) if f(s) == s + n)


def bridge_step_apply(X, f, g, a, n, l=None):
    """X in Gr(g) with f < g = f t_ab a bridge cover; returns the point of Gr(f).

    For l < n the step is applied at every translate (a + m l, b + m l).
    """
    k = X.shape[0]
    l = f.period if l is None else l
    i, j = cover_transposition(f, g, n)
    u = _u(f, i, j, n)
    Y = np.array(X, dtype=float if np.isrealobj(X) else complex)
    for m in range(n // l):
        Y = Y @ eps(n, i + m * l, j + m * l, (-1) ** u * a, k)
    return Y


def bridge_step_recover(X, f, g, n):
    i, j = cover_transposition(f, g, n)
    neck = necklace_from_perm(f, n)
    I = neck[rep(j, n) - 1]
    J = kset((set(I) - {rep(j, n)}) | {rep(i, n)})
    den = minor(X, J)
    if abs(den) < 1e-14 * max(1.0, np.abs(X).max()) ** X.shape[0]:
        raise ZeroDivisionError("vanishing denominator")
    return minor(X, I) / den


def chain_to_top(f, n, prefer=None):
    """A saturated bridge chain from f up to a maximal element (greedy)."""
    chain = [f]
    while True:
        ups = bridge_covers_up(chain[-1], n)
        if not ups:
            return chain
        if prefer is not None:
            ups = sorted(ups, key=prefer)
        chain.append(ups[0])


def sample_cell_point(f, P, params=None, rng=None, chain=None, signs=False):
    """Point of Gr(M_f)^{rho^l}_{>0}: bridge steps down from a 0-cell."""
    P = PosetParams(P.k, P.l, P.n)
    if chain is None:
        chain = chain_to_top(f, P.n)
    chain = list(chain)
    if chain[0] != f:
        chain = chain[::-1]
    steps = len(chain) - 1
    if params is None:
        rng = np.random.default_rng() if rng is None else rng
        params = rng.uniform(0.5, 2.0, size=steps)
        if signs:
            params = params * rng.choice([-1, 1], size=steps)
    X = zero_cell_representative(chain[-1], P)
    for m in range(steps - 1, -1, -1):
        X = bridge_step_apply(X, chain[m], chain[m + 1], params[m], P.n, P.l)
    return X


def recover_parameters(X, chain, n):
    """Invert sample_cell_point along the same chain."""
    out = []
    chain = list(chain)
    Y = np.array(X)
    k = Y.shape[0]
    l = chain[0].period
    for m in range(len(chain) - 1):
        f, g = chain[m], chain[m + 1]
        a = bridge_step_recover(Y, f, g, n)
        out.append(a)
        i, j = cover_transposition(f, g, n)
        u = _u(f, i, j, n)
        for r in range(n // l):
            Y = Y @ eps(n, i + r * l, j + r * l, (-1) ** (u + 1) * a, k)
    return out


# ---------------------------------------------------------------- closure family

def _adjacent_swap_paths(g, f, n, l, limit=200):
    """Shortest paths g -> f by adjacent swaps s_a (a in [l]) inside B_n(k,l).

    Each step changes the length by one, so every step is a weak-order cover
    up or down between bounded permutations.
    """
    depth = {g: 0}
    preds = {g: []}
    layer = [g]
    while layer and f not in depth:
        nxt_layer = []
        for cur in layer:
            Lc = coxeter_length(cur)
            for s in range(1, l + 1):
                nxt = cur.times_transposition(s, s + 1)
                if not all(i <= v <= i + n for i, v in enumerate(nxt.window, start=1)):
                    continue
                if abs(coxeter_length(nxt) - Lc) != 1:
                    continue
                if nxt not in depth:
                    depth[nxt] = depth[cur] + 1
                    preds[nxt] = []
                    nxt_layer.append(nxt)
                if depth[nxt] == depth[cur] + 1:
                    preds[nxt].append((cur, s))
        layer = nxt_layer
    if f not in depth:
        raise RuntimeError("no adjacent-swap path")
    paths = []

    def back(x, acc):
        if len(paths) >= limit:
            return
        if x == g:
            paths.append(acc[::-1])
            return
        for y, s in preds[x]:
            back(y, acc + [(s, y, x)])

    back(f, [])
    return paths


def _apply_swaps(X, path, a, n, l):
    k = X.shape[0]
    Y = np.array(X, dtype=float)
    for s, cur, nxt in path:
        if cur(s) > cur(s + 1):
            c = a
        else:
            neck = necklace_from_perm(cur, n)
            I = neck[rep(s + 1, n) - 1]
            J = kset((set(I) - {rep(s + 1, n)}) | {rep(s, n)})
            c = -minor(Y, I) / minor(Y, J)
        for m in range(n // l):
            Y = Y @ eps(n, s + m * l, s + 1 + m * l, c, k)
    return Y


def closure_family(g, f, X, a, n, l=None, path=None):
    """Y(a) in Gr(f)^{rho^l}_{>0} with Y(a) -> X as a -> 0, for a Bruhat cover f < g.

    Follows a path of adjacent swaps from g to f. Length-decreasing swaps use
    the forward bridge map with parameter a; length-increasing swaps use minus
    the recovered ratio. Returns (Y, path) so a path can be reused for other a.
    """
    l = g.period if l is None else l
    if path is None:
        path = closure_path(g, f, X, n, l)
    return _apply_swaps(X, path, a, n, l), path


def closure_path(g, f, X, n, l):
    """First shortest swap path whose family stays in the f-cell and tends to X."""
    from .positroids import positroid_from_necklace
    Mf = positroid_from_necklace(necklace_from_perm(f, n))
    P0 = pluckers_of(X)
    for path in _adjacent_swap_paths(g, f, n, l):
        try:
            with np.errstate(all="ignore"):
                ok = True
                # membership at moderate a (new coordinates can vanish like a^m)
                for a in (0.3, 0.1):
                    Pv = pluckers_of(_apply_swaps(X, path, a, n, l))
                    ok &= matroid_of_point(Pv, 1e-12) == Mf and is_tnn(Pv, 1e-12)
                d = [projective_distance(pluckers_of(_apply_swaps(X, path, a, n, l)), P0)
                     for a in (1e-2, 1e-3)]
        except (ValueError, np.linalg.LinAlgError):
            continue
        if ok and d[1] < 0.5 * d[0]:
            return path
    raise RuntimeError(f"no valid swap path from {g} to {f}")


def extended_minor(X, I):
    """Minor on columns I in Z, with column j+n = (-1)^(k-1) column j."""
    X = np.asarray(X)
    k, n = X.shape
    cols = []
    for c in I:
        q, r = divmod(c - 1, n)
        cols.append(X[:, r] * ((-1) ** ((k - 1) * q)))
    return np.linalg.det(np.array(cols).T)
