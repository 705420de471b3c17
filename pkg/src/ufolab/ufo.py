"""(m,k,r)-UFO verification and the explicit constructions.

A UFO is a triple (U,F,O) of disjoint finite vertex sets such that
|U| >= m|F|, U and O admit a complete matching by paths of length at most k
(measured in the full graph, F present), and every F-avoiding U-O path has
length at least r. The verifier works on BoundedGraphs and refuses to claim
exactness without BFS margin.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import InputError, MarginError, RejectionError
from .graphs import (NOT_FOUND, BoundedGraph, CayleyOracle, build_ball,
                     distance_avoiding, sort_key)
from .groups import shortlex_enumerate


@dataclass(frozen=True)
class UfoParams:
    m: int
    k: int
    r: int

    def __post_init__(self):
        if self.m < 0 or self.k < 0 or self.r < 0:
            raise InputError("UFO parameters must be non-negative")

    def to_json(self):
        return {"m": self.m, "k": self.k, "r": self.r}


class Ufo:
    """Disjoint vertex sets U, F, O, stored in deterministic order."""

    def __init__(self, u, f, o):
        self.u = tuple(sorted(set(u), key=sort_key))
        self.f = tuple(sorted(set(f), key=sort_key))
        self.o = tuple(sorted(set(o), key=sort_key))

    def check_disjoint(self):
        su, sf, so = set(self.u), set(self.f), set(self.o)
        if su & sf or su & so or sf & so:
            raise InputError("U, F, O must be pairwise disjoint")

    def is_empty(self):
        return not (self.u or self.f or self.o)

    def to_json(self, encode=lambda k: k):
        return {"u": [encode(v) for v in self.u],
                "f": [encode(v) for v in self.f],
                "o": [encode(v) for v in self.o]}

    def __repr__(self):
        return f"Ufo(|U|={len(self.u)}, |F|={len(self.f)}, |O|={len(self.o)})"


@dataclass
class MatchingResult:
    complete: bool
    size: int
    left_size: int
    right_size: int
    pairs: list = field(default_factory=list)
    hall_witness: tuple | None = None  # (W keys, N(W) keys) when deficient

    def to_json(self, encode=lambda k: k):
        out = {"complete": self.complete, "size": self.size,
               "left_size": self.left_size, "right_size": self.right_size,
               "pairs": [[encode(a), encode(b)] for a, b in self.pairs]}
        if self.hall_witness is not None:
            w, nw = self.hall_witness
            out["hall_witness"] = {"w": [encode(v) for v in w],
                                   "neighbors": [encode(v) for v in nw]}
        return out


@dataclass
class UfoReport:
    cond1: bool
    cond2: bool
    cond3: bool
    exact: bool
    sizes: dict
    matching: MatchingResult | None
    min_avoiding: object  # int or NOT_FOUND
    min_avoiding_cap: int
    notes: list

    @property
    def accept(self):
        return self.cond1 and self.cond2 and self.cond3 and self.exact

    def to_json(self, encode=lambda k: k):
        return {
            "accept": self.accept,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "exact": self.exact,
            "sizes": self.sizes,
            "matching": self.matching.to_json(encode) if self.matching else None,
            "min_avoiding": (None if self.min_avoiding is NOT_FOUND
                             else self.min_avoiding),
            "min_avoiding_cap": self.min_avoiding_cap,
            "notes": self.notes,
        }


def _pair_distances(bg: BoundedGraph, sources_idx, targets_idx, cap):
    """Per-source capped BFS: {source: {target: distance <= cap}}."""
    n = len(bg.vertices)
    adj = bg.adj
    t_set = set(targets_idx)
    seen = [0] * n
    dist = [0] * n
    run = 0
    out = {}
    for s in sources_idx:
        run += 1
        seen[s] = run
        dist[s] = 0
        hits = {}
        if s in t_set:
            hits[s] = 0
        q = deque([s])
        while q:
            i = q.popleft()
            d = dist[i]
            if d >= cap:
                continue
            for j in adj[i]:
                if seen[j] != run:
                    seen[j] = run
                    dist[j] = d + 1
                    if j in t_set:
                        hits[j] = d + 1
                    q.append(j)
        out[s] = hits
    return out


def _hopcroft_karp(adj_u, right_ids):
    """Maximum matching on a bipartite graph given as left adjacency lists.

    Returns (size, pair_u, pair_o) with pair_u[i] = right id or None.
    """
    INF = float("inf")
    n = len(adj_u)
    pair_u = [None] * n
    pair_o = {r: None for r in right_ids}
    dist = [INF] * n

    def bfs():
        q = deque()
        for i in range(n):
            if pair_u[i] is None:
                dist[i] = 0
                q.append(i)
            else:
                dist[i] = INF
        reachable_free = False
        while q:
            i = q.popleft()
            for r in adj_u[i]:
                j = pair_o[r]
                if j is None:
                    reachable_free = True
                elif dist[j] is INF:
                    dist[j] = dist[i] + 1
                    q.append(j)
        return reachable_free

    def dfs(i):
        for r in adj_u[i]:
            j = pair_o[r]
            if j is None or (dist[j] == dist[i] + 1 and dfs(j)):
                pair_u[i] = r
                pair_o[r] = i
                return True
        dist[i] = INF
        return False

    size = 0
    while bfs():
        for i in range(n):
            if pair_u[i] is None and dfs(i):
                size += 1
    return size, pair_u, pair_o


def bounded_matching(bg: BoundedGraph, u_keys, o_keys, k):
    """Maximum matching between U and O over pairs at distance <= k.

    Distances are measured in the full bounded graph (F is not removed).
    When no complete matching exists and |U| = |O|, a Hall certificate
    (W, N(W)) with |N(W)| < |W| is attached.
    """
    u_list = sorted(set(u_keys), key=sort_key)
    o_list = sorted(set(o_keys), key=sort_key)
    u_idx = bg.require(u_list, "U")
    o_idx = bg.require(o_list, "O")
    pair_dists = _pair_distances(bg, u_idx, o_idx, k)
    adj_u = [sorted(pair_dists[i]) for i in u_idx]
    size, pair_u, _pair_o = _hopcroft_karp(adj_u, o_idx)

    pairs = []
    for pos, i in enumerate(u_idx):
        if pair_u[pos] is not None:
            pairs.append((bg.vertices[i], bg.vertices[pair_u[pos]]))
    complete = size == len(u_list) == len(o_list)
    result = MatchingResult(complete=complete, size=size,
                            left_size=len(u_list), right_size=len(o_list),
                            pairs=pairs)
    if not complete and size < len(u_list):
        result.hall_witness = _hall_witness(bg, u_idx, adj_u, pair_u)
    return result


def _hall_witness(bg, u_idx, adj_u, pair_u):
    """Deficient set via alternating reachability from unmatched U vertices."""
    o_to_upos = {}
    for pos, r in enumerate(pair_u):
        if r is not None:
            o_to_upos[r] = pos
    reach_u = {pos for pos, r in enumerate(pair_u) if r is None}
    reach_o = set()
    frontier = list(reach_u)
    while frontier:
        nxt = []
        for pos in frontier:
            for r in adj_u[pos]:
                if r not in reach_o:
                    reach_o.add(r)
                    owner = o_to_upos.get(r)
                    if owner is not None and owner not in reach_u:
                        reach_u.add(owner)
                        nxt.append(owner)
        frontier = nxt
    w = sorted((bg.vertices[u_idx[pos]] for pos in reach_u), key=sort_key)
    nw = sorted((bg.vertices[r] for r in reach_o), key=sort_key)
    return (tuple(w), tuple(nw))


def verify_ufo(bg: BoundedGraph, ufo: Ufo, params: UfoParams,
               probe_min_avoiding=True):
    """Check the three UFO conditions exactly on a bounded graph.

    cond1: |U| >= m|F|. cond2: complete matching U<->O by paths of length
    <= k. cond3: no F-avoiding U-O path of length < r. exact records whether
    every u in U has BFS margin max(k, r); without it the report rejects.
    """
    ufo.check_disjoint()
    u_idx = bg.require(ufo.u, "U")
    bg.require(ufo.f, "F")
    bg.require(ufo.o, "O")

    notes = []
    need = max(params.k, params.r)
    if bg.saturated or not u_idx:
        exact = True
    else:
        worst = max(bg.depth[i] for i in u_idx)
        exact = worst <= bg.radius - need
        if not exact:
            notes.append(
                f"margin insufficient: deepest U vertex at depth {worst}, "
                f"need <= {bg.radius - need}")

    cond1 = len(ufo.u) >= params.m * len(ufo.f)
    matching = bounded_matching(bg, ufo.u, ufo.o, params.k)
    cond2 = matching.complete

    cond3_hit = distance_avoiding(bg, ufo.u, ufo.o, ufo.f, params.r - 1)
    cond3 = cond3_hit is NOT_FOUND
    if not cond3:
        notes.append(f"F-avoiding path of length {cond3_hit} < r={params.r}")

    min_avoiding = cond3_hit
    probe_cap = params.r - 1
    if probe_min_avoiding:
        if bg.saturated:
            probe_cap = len(bg.vertices)
        elif u_idx:
            probe_cap = bg.radius - max(bg.depth[i] for i in u_idx)
        probe_cap = max(probe_cap, params.r - 1)
        min_avoiding = distance_avoiding(bg, ufo.u, ufo.o, ufo.f, probe_cap)

    sizes = {"u": len(ufo.u), "f": len(ufo.f), "o": len(ufo.o),
             "m": params.m, "k": params.k, "r": params.r}
    return UfoReport(cond1=cond1, cond2=cond2, cond3=cond3, exact=exact,
                     sizes=sizes, matching=matching,
                     min_avoiding=min_avoiding, min_avoiding_cap=probe_cap,
                     notes=notes)


# ---------------------------------------------------------------------------
# explicit families


def zd_ufo(d, m, r):
    """The box UFO in Z^d: an (m, 3^(d-1) m + 1, 2r+4)-UFO.

    U = [0,r-1]^(d-1) x [-3^(d-1) m, -1], F = [-r, 2r-1]^(d-1) x {0},
    O = [0,r-1]^(d-1) x [1, 3^(d-1) m]. Needs d >= 2 (a transverse
    direction).
    """
    if d < 2:
        raise InputError("zd_ufo needs d >= 2")
    if m < 1 or r < 1:
        raise InputError("zd_ufo needs m, r >= 1")
    height = 3 ** (d - 1) * m
    u_box = itertools.product(range(0, r), repeat=d - 1)
    u = [t + (v,) for t in u_box for v in range(-height, 0)]
    f = [t + (0,) for t in itertools.product(range(-r, 2 * r), repeat=d - 1)]
    o_box = itertools.product(range(0, r), repeat=d - 1)
    o = [t + (v,) for t in o_box for v in range(1, height + 1)]
    return Ufo(u, f, o), UfoParams(m, height + 1, 2 * r + 4)


def pentagon_ufo(m, r):
    """The strip UFO in the pentagon model: an (m, 6m+1, r)-UFO."""
    if m < 1 or r < 1:
        raise InputError("pentagon_ufo needs m, r >= 1")
    u = [(h, v) for h in range(-3 * m, 0) for v in range(0, r)]
    f = [(0, v) for v in range(-r, 2 * r)]
    o = [(h, v) for h in range(1, 3 * m + 1) for v in range(0, r)]
    return Ufo(u, f, o), UfoParams(m, 6 * m + 1, r)


def _certified_r(bg, u_idx, k):
    """Largest r the ball can certify alongside a length-k matching."""
    if bg.saturated:
        return len(bg.vertices)
    margin = bg.radius - max((bg.depth[i] for i in u_idx), default=0)
    if margin < k:
        raise MarginError(
            f"ball radius {bg.radius} too small: need margin >= k={k}")
    return margin


def _max_pair_distance(bg, u_idx, o_idx):
    cap = len(bg.vertices) if bg.saturated else bg.radius
    dists = _pair_distances(bg, u_idx, o_idx, cap)
    worst = 0
    for i in u_idx:
        hits = dists[i]
        if len(hits) < len(o_idx):
            raise MarginError("ball too small to measure all U-O distances")
        worst = max(worst, max(hits.values(), default=0))
        if not bg.saturated and worst > bg.radius - bg.depth[i]:
            raise MarginError("U-O distance exceeds exactness margin")
    return worst


def amenable_ufo(bg: BoundedGraph, folner, m):
    """UFO from a Folner set U: F = US \\ U, O of size |U| beyond US.

    Rejects when |US \\ U| > |U|/m. k is the exact maximal U-O distance;
    since the neighborhood of U lies in U union F, removing F disconnects
    U from O, so the result verifies for every r up to the ball's margin.
    """
    u_list = sorted(set(folner), key=sort_key)
    if not u_list:
        raise InputError("Folner set must be nonempty")
    u_idx = bg.require(u_list, "Folner set")
    if not bg.saturated:
        deepest = max(bg.depth[i] for i in u_idx)
        if deepest >= bg.radius:
            raise MarginError("Folner set touches the ball boundary")
    u_set = set(u_idx)
    f_idx = sorted({j for i in u_idx for j in bg.adj[i]} - u_set)
    if m * len(f_idx) > len(u_list):
        ratio = len(f_idx) / len(u_list)
        raise RejectionError(
            f"Folner check failed: |US\\U| = {len(f_idx)} > |U|/m = "
            f"{len(u_list)}/{m}", ratio=ratio, boundary=len(f_idx),
            size=len(u_list))
    blocked = u_set | set(f_idx)
    o_idx = [i for i in range(len(bg.vertices)) if i not in blocked]
    if len(o_idx) < len(u_idx):
        raise MarginError("ball too small to choose O outside U and F")
    o_idx = o_idx[:len(u_idx)]
    k = _max_pair_distance(bg, u_idx, o_idx)
    r_cert = _certified_r(bg, u_idx, k)
    ufo = Ufo([bg.vertices[i] for i in u_idx],
              [bg.vertices[i] for i in f_idx],
              [bg.vertices[i] for i in o_idx])
    return ufo, UfoParams(m, k, r_cert)


def multiended_ufo(bg: BoundedGraph, cut, m):
    """UFO from a cut set: U, O from two components that reach the boundary.

    |U| = |O| = m * |cut|, chosen in BFS-discovery order from the first two
    boundary-reaching components of bg minus the cut. Matching distances are
    measured in the full graph; removing the cut disconnects U from O.
    """
    cut_list = sorted(set(cut), key=sort_key)
    cut_idx = set(bg.require(cut_list, "cut"))
    comp_of = {}
    components = []
    boundary_reaching = []
    for start in range(len(bg.vertices)):
        if start in cut_idx or start in comp_of:
            continue
        members = [start]
        comp_of[start] = len(components)
        q = deque([start])
        touches = bg.saturated or bg.depth[start] == bg.radius
        while q:
            i = q.popleft()
            for j in bg.adj[i]:
                if j in cut_idx or j in comp_of:
                    continue
                comp_of[j] = len(components)
                members.append(j)
                if bg.depth[j] == bg.radius:
                    touches = True
                q.append(j)
        components.append(members)
        if touches:
            boundary_reaching.append(members)
    if len(boundary_reaching) < 2:
        raise RejectionError(
            f"cut leaves {len(boundary_reaching)} boundary-reaching "
            f"component(s); need >= 2",
            components=len(boundary_reaching))
    size = m * len(cut_list)
    first, second = boundary_reaching[0], boundary_reaching[1]
    if len(first) < size or len(second) < size:
        raise MarginError("components too small for |U| = |O| = m|F|")
    u_idx = sorted(first)[:size]
    o_idx = sorted(second)[:size]
    k = _max_pair_distance(bg, u_idx, o_idx)
    r_cert = _certified_r(bg, u_idx, k)
    ufo = Ufo([bg.vertices[i] for i in u_idx], cut_list,
              [bg.vertices[i] for i in o_idx])
    return ufo, UfoParams(m, k, r_cert)


def shortlex_coset_representatives(group, normalize, coset_keys, max_radius=12):
    """Shortlex-least group element per requested coset key."""
    wanted = set(coset_keys)
    reps = {}
    for radius in range(max_radius + 1):
        for _word, key in shortlex_enumerate(group, radius):
            ck = normalize(key)
            if ck in wanted and ck not in reps:
                reps[ck] = key
        if len(reps) == len(wanted):
            return reps
    missing = wanted - set(reps)
    raise MarginError(f"no representative within radius {max_radius} for "
                      f"{len(missing)} coset(s)")


def _schreier_path_lift(group, normalize, start_element, target_coset, cap):
    """Follow a shortest Schreier path upstairs: element over target coset."""
    start_coset = normalize(start_element)
    if start_coset == target_coset:
        return start_element
    best = {start_coset: start_element}
    frontier = [(start_coset, start_element)]
    for _ in range(cap):
        nxt = []
        for _ck, el in frontier:
            for s in group.gens.symbols:
                el2 = group.mul_gen(el, s)
                ck2 = normalize(el2)
                if ck2 not in best:
                    best[ck2] = el2
                    if ck2 == target_coset:
                        return el2
                    nxt.append((ck2, el2))
        frontier = nxt
    raise MarginError("no Schreier path to matched coset within kappa")


def lift_ufo(group, normalize, h_folner, schreier_ufo: Ufo,
             params: UfoParams, rep_radius=12, budget=None):
    """Lift a verified Schreier-graph UFO to the Cayley graph of G.

    schreier_ufo lives in Sch(G,H,S) with params (ms, kappa, r); the lift
    produces (T U', T K_r F', T O') with params (ms // 2, kappa, r), where
    K_r collects the H-heights of F'-fiber elements within distance r of U'
    and T is a Folner set of H with |T K_r \\ T| <= |T| (h_folner supplies
    it, e.g. a symmetric interval for H = Z).

    Returns (ufo, params, report, ball) with the verification report of the
    lifted triple on a fresh Cayley ball.
    """
    ms, kappa, r = params.m, params.k, params.r
    cayley = CayleyOracle(group)

    reps = shortlex_coset_representatives(
        group, normalize, list(schreier_ufo.u) + list(schreier_ufo.f)
        + list(schreier_ufo.o), max_radius=rep_radius)
    u_reps = [reps[c] for c in schreier_ufo.u]
    f_reps = [reps[c] for c in schreier_ufo.f]

    from .graphs import schreier_ball  # local import to avoid cycle noise

    sball, _soracle = schreier_ball(
        group, normalize, list(reps.values()), max(kappa, r), budget=budget)
    sreport = verify_ufo(sball, schreier_ufo, params)
    if not sreport.accept:
        raise RejectionError("Schreier UFO failed verification",
                             report=sreport.to_json())

    # follow the matching paths upstairs to pick O'
    o_reps = []
    coset_rep = {normalize(el): el for el in u_reps}
    for cu, co in sreport.matching.pairs:
        o_reps.append(_schreier_path_lift(group, normalize, coset_rep[cu],
                                          co, kappa))

    # K_r: heights of F'-fiber elements within distance r of U'
    ball_r = build_ball(cayley, u_reps, r, budget=budget)
    k_heights = set()
    for g in ball_r.vertices:
        cg = normalize(g)
        for f_el in f_reps:
            if cg == normalize(f_el):
                k_heights.add(group.multiply(g, group.invert(f_el)))
    k_heights = sorted(k_heights, key=sort_key)

    t_set = sorted(set(h_folner(k_heights)), key=sort_key)
    if not t_set:
        raise RejectionError("Folner provider returned an empty set")
    tk = {group.multiply(t, h) for t in t_set for h in k_heights}
    if len(tk - set(t_set)) > len(t_set):
        raise RejectionError(
            f"Folner condition failed: |TK\\T| = {len(tk - set(t_set))} > "
            f"|T| = {len(t_set)}")

    u_lift = {group.multiply(t, el) for t in t_set for el in u_reps}
    o_lift = {group.multiply(t, el) for t in t_set for el in o_reps}
    f_lift = {group.multiply(tk_el, f_el) for tk_el in tk for f_el in f_reps}

    lifted = Ufo(u_lift, f_lift, o_lift)
    lifted_params = UfoParams(ms // 2, kappa, r)
    ball = build_ball(cayley, list(u_lift) + list(f_lift) + list(o_lift),
                      max(kappa, r), budget=budget)
    report = verify_ufo(ball, lifted, lifted_params)
    return lifted, lifted_params, report, ball


def interval_folner(group, factor_index=0):
    """Folner provider for an infinite-cyclic factor of a direct product.

    Given heights K (as product keys), returns the symmetric interval of
    half-length diam(K), which satisfies |T K \\ T| <= |T|.
    """
    def provider(k_heights):
        values = []
        for key in k_heights:
            comp = key[factor_index]
            if not (isinstance(comp, tuple) and len(comp) == 1):
                raise InputError("interval_folner expects a Z factor")
            values.append(comp[0])
        if not values:
            return set()
        diam = max(values) - min(values)
        ident = group.identity
        out = set()
        for v in range(-diam, diam + 1):
            key = list(ident)
            key[factor_index] = (v,)
            out.add(tuple(key))
        return out

    return provider
