"""Cyclically symmetric TP tests: collections from chains, the initial
collection, efficiency, and the eta coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import pi, sin, comb

import numpy as np

from .affine import bridge_rank, coxeter_length, identity_perm
from .positroids import (necklace_from_perm, orbit, kset, weakly_separated)
from .grassmann import pluckers_of, fixedness_residual, karp_plucker, extended_minor


@dataclass
class OptimalCollection:
    subsets: frozenset
    l: int
    n: int
    labels: list = field(default_factory=list)

    @property
    def orbits(self):
        out, seen = [], set()
        for I in sorted(self.subsets):
            if I not in seen:
                o = orbit(I, self.l, self.n)
                seen |= set(o)
                out.append(o)
        return out

    @property
    def orbit_count(self):
        return len(self.orbits)

    def representatives(self):
        return [o[0] for o in self.orbits]

    def is_invariant(self):
        return all(kset((x + self.l for x in I), self.n) in self.subsets for I in self.subsets)

    def to_json(self):
        return {"l": self.l, "n": self.n,
                "subsets": [list(I) for I in sorted(self.subsets)],
                "orbits": [[list(I) for I in o] for o in self.orbits],
                "labels": [list(I) for I in self.labels]}


def closure(sets, l, n):
    out = set()
    for I in sets:
        out |= set(orbit(I, l, n))
    return frozenset(out)


def collection_from_chain(chain, P):
    sets = set()
    for f in chain:
        sets |= set(necklace_from_perm(f, P.n))
    return OptimalCollection(closure(sets, P.l, P.n), P.l, P.n)


def initial_labels(P):
    """Ordered labels I_1..I_N (mutable) then I_{N+1}..I_{N+l} (frozen).

    The mutable labels for j in [k-1], i in [l-1] are
    [i+(j-1)(l-1), i+(j-1)(l-1)+j-1] u {1+jl, ..., 1+(k-1)l};
    the frozen ones are the intervals starting at i+(k-1)(l-1), i in [l].
    """
    k, l, p = P.k, P.l, P.p
    if p < k:
        raise ValueError(f"initial seed needs p >= k (p={p}, k={k})")
    if l < 2:
        raise ValueError("initial seed needs l >= 2")
    mut, froz = [], []
    for j in range(1, k):
        for i in range(1, l):
            a = i + (j - 1) * (l - 1)
            mut.append(kset(list(range(a, a + j)) + [1 + m * l for m in range(j, k)], P.n))
    for i in range(1, l + 1):
        a = i + (k - 1) * (l - 1)
        froz.append(kset(range(a, a + k), P.n))
    return mut, froz


def initial_collection(P):
    mut, froz = initial_labels(P)
    C = OptimalCollection(closure(mut + froz, P.l, P.n), P.l, P.n, labels=mut + froz)
    return C


def initial_chain(P):
    """The maximal chain from t_1 = [1+kl, 2, ..., l] down to id_k by simple swaps."""
    from .affine import AffinePerm
    f = AffinePerm(tuple([1 + P.k * P.l] + list(range(2, P.l + 1))))
    chain = [f]
    target = identity_perm(P.k, P.l)
    pos = 1
    while f != target:
        g = f.times_transposition(pos, pos + 1)
        if coxeter_length(g) != coxeter_length(f) - 1:
            raise RuntimeError(f"swap at {pos} is not a down-cover of {f}")
        f = g
        chain.append(f)
        pos += 1
    assert f == identity_perm(P.k, P.l), f
    return chain


def is_efficient(C, f, P):
    return C.orbit_count == bridge_rank(P) - coxeter_length(f) + 1


def run_tp_test(C, Pv, l, tol=1e-9, fixed_tol=1e-7):
    """Positivity of the collection's coordinates on an l-fixed point."""
    res, zeta = fixedness_residual(Pv, l)
    if res > fixed_tol:
        return {"status": "rejected", "reason": "point is not rho^l-fixed", "residual": res}
    v = Pv.values
    m = np.argmax(np.abs(v))
    v = v * abs(v[m]) / v[m] / abs(v[m])
    vals = {I: complex(v[Pv.pos[I]]) for I in C.subsets}
    ok = all(abs(x.imag) <= tol and x.real > tol for x in vals.values())
    # a point with all test coordinates positive has them all of one phase;
    # if the normalizing coordinate is outside C, flip by the first test value
    if not ok:
        x0 = next(iter(vals.values()))
        if abs(x0) > tol:
            w = {I: x * abs(x0) / x0 for I, x in vals.items()}
            ok = all(abs(x.imag) <= tol and x.real > tol for x in w.values())
    return {"status": "pass" if ok else "fail", "residual": res,
            "min": float(min(x.real for x in vals.values()))}


def validate_tp_test(C, P, points, tol=1e-9):
    """Soundness/completeness of C on the supplied points: pass iff TP."""
    from .grassmann import is_tp
    agree, passes, tps = 0, 0, 0
    for X in points:
        Pv = pluckers_of(X)
        r = run_tp_test(C, Pv, P.l, tol)["status"] == "pass"
        t = is_tp(Pv, tol)
        agree += r == t
        passes += r
        tps += t
    return {"samples": len(points), "agree": agree, "passes": passes, "tp": tps,
            "ok": agree == len(points)}


# ---------------------------------------------------------------- eta

def eta_singleton(s, k, p):
    v = 1.0
    for j in range(1, s + 1):
        v *= sin((k + 1 - j) * pi / p) / sin(j * pi / p)
    return v


def qbinomial_at_root(k, s, p):
    """[k choose s]_q at q = exp(2 pi i / p), by the product formula."""
    q = np.exp(2j * pi / p)
    num = den = 1.0 + 0j
    for j in range(1, s + 1):
        num *= 1 - q ** (k + 1 - j)
        den *= 1 - q ** j
    return num / den


def eta_table(k, p):
    return [eta_singleton(s, k, p) for s in range(k + 1)]


def T_set(S, k):
    """Residues [0, k+|S|-1] minus S (the positions of T_S on the A_1 columns)."""
    return [t for t in range(k + len(S)) if t not in set(S)]


def eta_ratio(S, k, p):
    """Delta_{T_S} / Delta_{T_empty} from Karp's formula on Gr(k, p)."""
    T = T_set(S, k)
    if max(T) >= p:
        raise ValueError(f"residue collision: T_S needs residues up to {max(T)} but p = {p}")
    num = karp_plucker([t + 1 for t in T], k, p)
    den = karp_plucker(list(range(1, k + 1)), k, p)
    return num / den


def eta_bracket(m, k, p):
    """eta_[m] = eta_{1..m} in closed form; eta_[-1] = 0 and eta_[0] = 1."""
    v = 1.0
    for a in range(1, k):
        v *= sin((m + a) * pi / p) / sin(a * pi / p)
    return v


# ---------------------------------------------------------------- extensions

def maximal_ws_extension(C, k, n, within=None):
    """Greedy maximal weakly separated extension (purity makes greedy maximum)."""
    cur = set(C)
    pool = sorted(within) if within is not None else list(combinations(range(1, n + 1), k))
    for I in pool:
        if I not in cur and all(weakly_separated(I, J) for J in cur):
            cur.add(I)
    return cur


def superfluous_check(C, f0, P, points, within=None, tol=1e-8):
    """Ratios Delta_{I+}/Delta_I for I in the top necklace, I+ superfluous.

    `within` restricts the extension to a positroid M_{f_h} (default: all
    k-subsets, the bottom being id_k).
    """
    ext = maximal_ws_extension(C.subsets, P.k, P.n, within=within)
    extra = sorted(ext - set(C.subsets))
    I = necklace_from_perm(f0, P.n)[0]
    pl = [pluckers_of(X) for X in points]
    out = {}
    for J in extra:
        vals = np.array([Pv[J] / Pv[I] for Pv in pl])
        spread = float(np.max(np.abs(vals - vals[0])) / max(abs(vals[0]), 1e-300))
        out[J] = {"ratio": complex(vals[0]), "spread": spread,
                  "constant": spread < tol,
                  "positive": bool(np.all(vals.real > 0) and np.all(np.abs(vals.imag) < tol))}
    ok = all(v["constant"] and v["positive"] for v in out.values())
    return {"base": I, "extension_size": len(ext), "superfluous": out, "ok": ok}


def firstlinear_row(s, P):
    """Column set 1, 2+(s-1)l, 1+sl, ..., 1+(s+k-3)l (entries may exceed n)."""
    return [1, 2 + (s - 1) * P.l] + [1 + m * P.l for m in range(s, s + P.k - 2)]


def firstlinear_residual(X, s, P):
    """Relative defect of Delta_row(s) = eta_[s-2] Delta_{I_2} + eta_[s-1] Delta_{I_{l+1}}."""
    mut, froz = initial_labels(P)
    lab = mut + froz
    lhs = extended_minor(X, firstlinear_row(s, P))
    rhs = (eta_bracket(s - 2, P.k, P.p) * extended_minor(X, lab[1])
           + eta_bracket(s - 1, P.k, P.p) * extended_minor(X, lab[P.l]))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def eta_recurrence_residual(j, s, k, p):
    """eta_j eta_[s] - eta_{[s-1] u {j+s}} - eta_{[s] u {j+s}}, for s >= 1."""
    lhs = eta_ratio([j], k, p) * eta_ratio(list(range(1, s + 1)), k, p)
    rhs = (eta_ratio(list(range(1, s)) + [j + s], k, p)
           + eta_ratio(list(range(1, s + 1)) + [j + s], k, p))
    return abs(lhs - rhs)


def verify_specializations(kmax=6, big=10 ** 6, tol=1e-6):
    """eta_s vanishes at p = k, equals 1 at p = k+1, tends to binom(k, s) as p grows."""
    bad = []
    for k in range(1, kmax + 1):
        for s in range(1, k):
            if abs(eta_singleton(s, k, k)) > 1e-12:
                bad.append(("p=k", k, s))
        for s in range(k + 1):
            if abs(eta_singleton(s, k, k + 1) - 1) > 1e-12:
                bad.append(("p=k+1", k, s))
            if abs(eta_singleton(s, k, big) - comb(k, s)) > tol:
                bad.append(("p large", k, s))
    return {"kmax": kmax, "failures": bad, "pass": not bad}
