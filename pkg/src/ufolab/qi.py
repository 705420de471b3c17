"""Quasi-isometry machinery: derived constants and the UFO transfer.

A quasi-isometry f with constants (A,B,C) satisfies
(1/A) d(v1,v2) - B <= d'(f v1, f v2) <= A d(v1,v2) + B with C-dense image.
An (m,k,r)-UFO transfers to an (m',k',r')-UFO with

    alpha = A^2 (1+B+2C) + B + C
    m'    = floor(m / D^(2AB + alpha) - 2)
    k'    = ceil(k (A+B))
    r'    = ceil(r / (A (1+B+2C)))

where D bounds the degrees of both graphs. The transfer constructs F' as
the alpha-neighborhood of f(F), thins the matching to an AB-separated
submatching M'' and pushes it through f.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, MarginError
from .graphs import NOT_FOUND, BoundedGraph, distance_avoiding, sort_key
from .ufo import Ufo, UfoParams, UfoReport, _pair_distances, verify_ufo

M_PRIME_NEG_INF = float("-inf")


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 9)
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"cannot interpret {x!r} as an exact constant")


@dataclass(frozen=True)
class QiConstants:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        object.__setattr__(self, "c", _as_fraction(self.c))
        if self.a < 1 or self.b < 0 or self.c < 0:
            raise InputError("need A >= 1, B >= 0, C >= 0")

    def to_json(self):
        return {"A": str(self.a), "B": str(self.b), "C": str(self.c)}


@dataclass(frozen=True)
class DerivedConstants:
    alpha: Fraction
    m_prime: object  # int, or -inf when the degree power overflows
    k_prime: int
    r_prime: int
    degree: int

    def to_json(self):
        return {"alpha": str(self.alpha),
                "m_prime": (None if self.m_prime == M_PRIME_NEG_INF
                            else self.m_prime),
                "k_prime": self.k_prime, "r_prime": self.r_prime,
                "degree": self.degree}


def derived_constants(qc: QiConstants, degree, params: UfoParams):
    """Exact evaluation of (alpha, m', k', r') for the transfer.

    D^(2AB+alpha) is exact (big integers) for integral exponents; otherwise
    it is evaluated in floats with m' saturating to -inf on overflow.
    """
    if degree < 1:
        raise InputError("degree bound must be >= 1")
    a, b, c = qc.a, qc.b, qc.c
    alpha = a * a * (1 + b + 2 * c) + b + c
    k_prime = math.ceil(params.k * (a + b))
    r_prime = math.ceil(Fraction(params.r) / (a * (1 + b + 2 * c)))
    exponent = 2 * a * b + alpha
    if degree == 1:
        m_prime = math.floor(Fraction(params.m) - 2)
    elif exponent.denominator == 1:
        power = degree ** exponent.numerator
        m_prime = math.floor(Fraction(params.m, power) - 2)
    else:
        try:
            power = float(degree) ** float(exponent)
            m_prime = math.floor(params.m / power - 2)
        except OverflowError:
            m_prime = M_PRIME_NEG_INF
    return DerivedConstants(alpha=alpha, m_prime=m_prime, k_prime=k_prime,
                            r_prime=r_prime, degree=degree)


@dataclass
class QiCheckResult:
    ok: bool
    pairs_checked: int
    embedding_ok: bool
    density_ok: bool
    violation: tuple | None  # (kind, v1, v2, d, d') or (kind, v')
    density_checked: int

    def to_json(self, encode=lambda k: k):
        out = {"ok": self.ok, "pairs_checked": self.pairs_checked,
               "embedding_ok": self.embedding_ok,
               "density_ok": self.density_ok,
               "density_checked": self.density_checked}
        if self.violation:
            if self.violation[0] == "embedding":
                _, v1, v2, d, dp = self.violation
                out["violation"] = {"kind": "embedding", "v1": encode(v1),
                                    "v2": encode(v2), "d": d, "d_image": dp}
            else:
                out["violation"] = {"kind": "density",
                                    "vertex": encode(self.violation[1])}
        return out


def _all_distances(bg: BoundedGraph, sources_idx):
    cap = len(bg.vertices) if bg.saturated else bg.radius
    return _pair_distances(bg, sources_idx, range(len(bg.vertices)), cap)


def qi_check_on_ball(bg_g: BoundedGraph, bg_h: BoundedGraph, mapping,
                     qc: QiConstants, max_sources=None):
    """Check the quasi-isometry inequalities on all certifiable pairs.

    mapping: dict from G-vertex keys to H-vertex keys, total on bg_g.
    Only pairs whose distances are exact within both balls' margins are
    checked; the C-density check covers H-vertices with margin >= C.
    """
    g_keys = list(bg_g.vertices)
    for v in g_keys:
        if v not in mapping:
            raise InputError(f"mapping not total: missing {v!r}")
    img_idx = bg_h.require([mapping[v] for v in g_keys], "image")

    src = list(range(len(g_keys)))
    if max_sources is not None and len(src) > max_sources:
        stride = max(1, len(src) // max_sources)
        src = src[::stride][:max_sources]

    dg = _pair_distances(bg_g, src, range(len(bg_g.vertices)),
                         len(bg_g.vertices) if bg_g.saturated else bg_g.radius)
    dh = _all_distances(bg_h, sorted(set(img_idx)))

    a, b, c = qc.a, qc.b, qc.c
    checked = 0
    violation = None
    for i in src:
        di = dg[i]
        fi = img_idx[i]
        for j, d in di.items():
            if j <= i:
                continue
            if not bg_g.saturated and d > bg_g.radius - max(
                    bg_g.depth[i], bg_g.depth[j]):
                continue
            fj = img_idx[j]
            dprime = dh[fi].get(fj)
            if dprime is None:
                continue
            if not bg_h.saturated and dprime > bg_h.radius - max(
                    bg_h.depth[fi], bg_h.depth[fj]):
                continue
            checked += 1
            if not (Fraction(d) / a - b <= dprime <= a * d + b):
                violation = ("embedding", bg_g.vertices[i], bg_g.vertices[j],
                             d, dprime)
                break
        if violation:
            break
    embedding_ok = violation is None

    # C-density of the image over margin-interior H-vertices
    cap = math.floor(c)
    covered = set()
    frontier = sorted(set(img_idx))
    dist = {i: 0 for i in frontier}
    covered.update(frontier)
    q = deque(frontier)
    while q:
        i = q.popleft()
        if dist[i] >= cap:
            continue
        for j in bg_h.adj[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                covered.add(j)
                q.append(j)
    density_checked = 0
    density_ok = True
    for i in range(len(bg_h.vertices)):
        if not bg_h.saturated and bg_h.depth[i] > bg_h.radius - cap:
            continue
        density_checked += 1
        if i not in covered:
            density_ok = False
            if violation is None:
                violation = ("density", bg_h.vertices[i])
            break

    return QiCheckResult(ok=embedding_ok and density_ok,
                         pairs_checked=checked, embedding_ok=embedding_ok,
                         density_ok=density_ok, violation=violation,
                         density_checked=density_checked)


@dataclass
class TransferResult:
    ufo: Ufo
    derived: DerivedConstants
    params: UfoParams
    report: UfoReport
    m2_size: int            # |M''|
    m_prime_pairs: list     # M'
    f_prime_size: int
    cond1_vacuous: bool
    separation_ok: bool
    size_bound_ok: bool     # |M'| >= |M''| - 2|F'|

    def to_json(self, encode=lambda k: k):
        return {"derived": self.derived.to_json(),
                "params": self.params.to_json(),
                "ufo": self.ufo.to_json(encode),
                "report": self.report.to_json(encode),
                "m2_size": self.m2_size,
                "m_prime_size": len(self.m_prime_pairs),
                "f_prime_size": self.f_prime_size,
                "cond1_vacuous": self.cond1_vacuous,
                "separation_ok": self.separation_ok,
                "size_bound_ok": self.size_bound_ok}


def _separated_submatching(bg: BoundedGraph, pairs, threshold: Fraction):
    """Greedy maximal submatching with min(d(u1,u2), d(o1,o2)) > threshold.

    Pairs are processed in shortlex order of the U-side key; distances are
    exact BFS values capped just above the threshold.
    """
    if not pairs:
        return []
    cap = math.floor(threshold)
    ordered = sorted(pairs, key=lambda p: (sort_key(p[0]), sort_key(p[1])))
    u_idx = bg.require([p[0] for p in ordered], "matching U side")
    o_idx = bg.require([p[1] for p in ordered], "matching O side")
    if cap > 0 and not bg.saturated:
        worst = max(bg.depth[i] for i in u_idx + o_idx)
        if worst > bg.radius - cap:
            raise MarginError("ball too small for the AB-separation sweep")
    du = _pair_distances(bg, sorted(set(u_idx)), sorted(set(u_idx)), cap)
    do = _pair_distances(bg, sorted(set(o_idx)), sorted(set(o_idx)), cap)
    kept = []
    kept_idx = []
    for pos, (u, o) in enumerate(ordered):
        ui, oi = u_idx[pos], o_idx[pos]
        ok = True
        for (uj, oj) in kept_idx:
            # min(dU, dO) > threshold must hold: either side close disqualifies
            if uj in du[ui] or oj in do[oi]:
                ok = False
                break
        if ok:
            kept.append((u, o))
            kept_idx.append((ui, oi))
    return kept


def transfer_ufo(bg_g: BoundedGraph, bg_h: BoundedGraph, mapping,
                 qc: QiConstants, ufo: Ufo, params: UfoParams,
                 matching_pairs=None):
    """Push a verified UFO through a quasi-isometry witness.

    Returns a TransferResult whose report re-verifies the transferred triple
    at (max(m',0), k', r'); condition 1 is reported vacuous when m' <= 0.
    matching_pairs defaults to re-running the verification on bg_g.
    """
    for v in list(ufo.u) + list(ufo.f) + list(ufo.o):
        if v not in mapping:
            raise InputError(f"mapping not defined on UFO vertex {v!r}")

    if matching_pairs is None:
        source_report = verify_ufo(bg_g, ufo, params, probe_min_avoiding=False)
        if not source_report.accept:
            raise InputError("source UFO does not verify; transfer undefined")
        matching_pairs = source_report.matching.pairs

    degree = max(bg_g.maxdeg, bg_h.maxdeg)
    derived = derived_constants(qc, degree, params)
    alpha_radius = math.ceil(derived.alpha)

    # F' = closed ceil(alpha)-neighborhood of f(F)
    f_img = sorted({mapping[v] for v in ufo.f}, key=sort_key)
    f_img_idx = bg_h.require(f_img, "f(F)")
    if not bg_h.saturated and f_img_idx:
        worst = max(bg_h.depth[i] for i in f_img_idx)
        if worst > bg_h.radius - alpha_radius:
            raise MarginError("target ball too small for the alpha-neighborhood")
    fprime_idx = set(f_img_idx)
    dist = {i: 0 for i in f_img_idx}
    q = deque(f_img_idx)
    while q:
        i = q.popleft()
        if dist[i] >= alpha_radius:
            continue
        for j in bg_h.adj[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                fprime_idx.add(j)
                q.append(j)
    fprime = {bg_h.vertices[i] for i in fprime_idx}

    # M'': greedy maximal AB-separated submatching, then M' through f
    ab = qc.a * qc.b
    m2 = _separated_submatching(bg_g, matching_pairs, ab)
    mprime = []
    for (u, o) in m2:
        fu, fo = mapping[u], mapping[o]
        if fu not in fprime and fo not in fprime:
            mprime.append((fu, fo))

    u_prime = [p[0] for p in mprime]
    o_prime = [p[1] for p in mprime]
    separation_ok = _check_separation(bg_g, m2, ab)
    size_bound_ok = len(mprime) >= len(m2) - 2 * len(fprime)

    m_eff = derived.m_prime
    cond1_vacuous = m_eff == M_PRIME_NEG_INF or m_eff <= 0
    params_prime = UfoParams(0 if cond1_vacuous else int(m_eff),
                             derived.k_prime, derived.r_prime)

    overlap = set(u_prime) & set(o_prime)
    if overlap:
        # degenerate transfer: f collapsed a matched pair into F'-free overlap
        ufo_prime = Ufo([], list(fprime), [])
        report = verify_ufo(bg_h, ufo_prime, params_prime,
                            probe_min_avoiding=False)
        report.notes.append(
            f"transfer degenerate: {len(overlap)} collapsed U'/O' vertices")
        report.cond2 = False
        report.cond3 = False
    else:
        ufo_prime = Ufo(u_prime, list(fprime), o_prime)
        report = verify_ufo(bg_h, ufo_prime, params_prime,
                            probe_min_avoiding=False)
    if cond1_vacuous:
        report.notes.append("condition 1 vacuous: m' <= 0")

    return TransferResult(ufo=ufo_prime, derived=derived, params=params_prime,
                          report=report, m2_size=len(m2),
                          m_prime_pairs=mprime, f_prime_size=len(fprime),
                          cond1_vacuous=cond1_vacuous,
                          separation_ok=separation_ok,
                          size_bound_ok=size_bound_ok)


def _check_separation(bg: BoundedGraph, pairs, threshold: Fraction):
    """Assert min(d(u1,u2), d(o1,o2)) > threshold over all kept pairs."""
    cap = math.floor(threshold)
    if not pairs:
        return True
    u_idx = bg.require([p[0] for p in pairs])
    o_idx = bg.require([p[1] for p in pairs])
    du = _pair_distances(bg, sorted(set(u_idx)), sorted(set(u_idx)), cap)
    do = _pair_distances(bg, sorted(set(o_idx)), sorted(set(o_idx)), cap)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if u_idx[j] in du[u_idx[i]] or o_idx[j] in do[o_idx[i]]:
                return False
    return True
