"""Implicit infinite graphs materialized as exact finite balls.

A BoundedGraph is the BFS closure of a seed set to depth R in an implicit
graph given by a neighbor oracle. Every neighbor of a vertex at depth < R is
present, so queries that stay within the margin R - depth(source) are exact
over the infinite graph. Operations refuse to claim exactness without that
margin.
"""

from __future__ import annotations

import os
from collections import deque

from .errors import BudgetError, InputError
from .groups import GroupOracle

DEFAULT_BUDGET = 5_000_000


class _NotFound:
    """Result of a capped search that found nothing within its cap."""

    def __repr__(self):
        return "NOT_FOUND"

    def __bool__(self):
        return False


NOT_FOUND = _NotFound()


def vertex_budget():
    try:
        return int(os.environ.get("UFOLAB_BUDGET_VERTICES", DEFAULT_BUDGET))
    except ValueError:
        return DEFAULT_BUDGET


def sort_key(key):
    """Deterministic total order on heterogeneous vertex keys."""
    if isinstance(key, str):
        return (0, len(key), key)
    if isinstance(key, bool) or isinstance(key, int):
        return (1, key)
    if isinstance(key, tuple):
        return (2, len(key)) + tuple(sort_key(k) for k in key)
    return (3, repr(key))


class NeighborOracle:
    """Deterministic neighbor function of an implicit graph."""

    kind = "abstract"

    def neighbors(self, key):
        raise NotImplementedError

    def key_json(self, key):
        return key

    def key_from_json(self, obj):
        return obj


def _dedup(seq, skip=None):
    out = []
    seen = set()
    for k in seq:
        if k == skip or k in seen:
            continue
        seen.add(k)
        out.append(k)
    return out


class CayleyOracle(NeighborOracle):
    """Right Cayley graph of a group oracle: edges g -- gs for s in S."""

    kind = "cayley"

    def __init__(self, group: GroupOracle):
        self.group = group

    def neighbors(self, key):
        g = self.group
        return _dedup((g.mul_gen(key, s) for s in g.gens.symbols), skip=key)

    def key_json(self, key):
        return self.group.key_json(key)

    def key_from_json(self, obj):
        return self.group.key_from_json(obj)


class SchreierOracle(NeighborOracle):
    """Right Schreier graph Sch(G,H,S): vertices are coset keys H g.

    normalize maps a group element key to its canonical coset key. The
    oracle caches one representative element per discovered coset.
    """

    kind = "schreier"

    def __init__(self, group: GroupOracle, normalize, seed_elements=()):
        self.group = group
        self.normalize = normalize
        self._rep = {}
        for el in seed_elements:
            self._rep.setdefault(normalize(el), el)

    def coset(self, element_key):
        ck = self.normalize(element_key)
        self._rep.setdefault(ck, element_key)
        return ck

    def representative(self, coset_key):
        try:
            return self._rep[coset_key]
        except KeyError:
            raise InputError(f"no representative known for coset {coset_key!r}") from None

    def neighbors(self, key):
        g = self.group
        rep = self.representative(key)
        out = []
        for s in g.gens.symbols:
            el = g.mul_gen(rep, s)
            ck = self.normalize(el)
            if ck != key:
                self._rep.setdefault(ck, el)
                out.append(ck)
        return _dedup(out)

    def key_json(self, key):
        return self.group.key_json(self.representative(key))

    def key_from_json(self, obj):
        return self.coset(self.group.key_from_json(obj))


def bs_coset_normalizer(key):
    """Coset key for H = <a> in BS(m,n): drop the leading a-power."""
    _r0, seq = key
    return seq


def product_factor_normalizer(i):
    """Coset key for H = i-th factor of a direct product: drop component i."""

    def normalize(key):
        return key[:i] + key[i + 1:]

    return normalize


class PentagonOracle(NeighborOracle):
    """The pentagon model on Z^2: horizontal edges plus {(x,y),(2x,y-1)}."""

    kind = "pentagon"

    def neighbors(self, key):
        x, y = key
        out = [(x - 1, y), (x + 1, y), (2 * x, y - 1)]
        if x % 2 == 0:
            out.append((x // 2, y + 1))
        return out

    def key_json(self, key):
        return list(key)

    def key_from_json(self, obj):
        if not (isinstance(obj, list) and len(obj) == 2):
            raise InputError(f"expected [x, y], got {obj!r}")
        return (int(obj[0]), int(obj[1]))


class ExplicitOracle(NeighborOracle):
    """A finite graph given by adjacency lists (symmetrized on input)."""

    kind = "explicit"

    def __init__(self, adjacency):
        adj = {}
        for v, nbrs in adjacency.items():
            adj.setdefault(v, [])
            for w in nbrs:
                adj.setdefault(w, [])
                if w not in adj[v] and w != v:
                    adj[v].append(w)
                if v not in adj[w] and v != w:
                    adj[w].append(v)
        self.adj = adj

    def vertices(self):
        return sorted(self.adj, key=sort_key)

    def neighbors(self, key):
        try:
            return list(self.adj[key])
        except KeyError:
            raise InputError(f"unknown vertex {key!r}") from None


class BoundedGraph:
    """A finite BFS ball of an implicit graph.

    vertices are listed in discovery order (seeds first, sorted); adj holds
    index lists; depth[i] is the distance to the seed set; maxdeg is the
    largest degree over interior vertices (depth < R). saturated means BFS
    exhausted the component before reaching depth R, so every query is exact.
    """

    def __init__(self, oracle, vertices, adj, depth, radius, seeds, saturated):
        self.oracle = oracle
        self.vertices = vertices
        self.index = {v: i for i, v in enumerate(vertices)}
        self.adj = adj
        self.depth = depth
        self.radius = radius
        self.seeds = seeds
        self.saturated = saturated
        interior = [i for i in range(len(vertices))
                    if saturated or depth[i] < radius]
        self.maxdeg = max((len(adj[i]) for i in interior), default=0)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, key):
        return key in self.index

    def require(self, keys, what="vertex set"):
        idxs = []
        for k in keys:
            if k not in self.index:
                raise InputError(f"{what}: vertex {k!r} not in the bounded graph")
            idxs.append(self.index[k])
        return idxs

    def margin(self, keys):
        """R minus the deepest of the given vertices; infinite if saturated."""
        if self.saturated:
            return float("inf")
        idxs = self.require(keys)
        if not idxs:
            return self.radius
        return self.radius - max(self.depth[i] for i in idxs)

    def degree_histogram(self):
        hist = {}
        for i, nbrs in enumerate(self.adj):
            if self.saturated or self.depth[i] < self.radius:
                hist[len(nbrs)] = hist.get(len(nbrs), 0) + 1
        return dict(sorted(hist.items()))

    def edge_count(self):
        return sum(len(n) for n in self.adj) // 2

    def has_cycle(self):
        """Union-find over recorded edges; true iff some edge closes a cycle."""
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, nbrs in enumerate(self.adj):
            for j in nbrs:
                if j <= i:
                    continue
                ri, rj = find(i), find(j)
                if ri == rj:
                    return True
                parent[ri] = rj
        return False


def build_ball(oracle: NeighborOracle, seeds, radius, budget=None):
    """BFS closure of the seed set to depth `radius`.

    Deterministic: seeds are sorted, neighbor order comes from the oracle.
    Raises BudgetError when the vertex count would exceed the budget
    (UFOLAB_BUDGET_VERTICES, default 5e6).
    """
    if radius < 0:
        raise InputError("radius must be >= 0")
    seed_list = sorted(set(seeds), key=sort_key)
    if not seed_list:
        raise InputError("seed set must be nonempty")
    if budget is None:
        budget = vertex_budget()

    vertices = list(seed_list)
    index = {v: i for i, v in enumerate(vertices)}
    depth = [0] * len(vertices)
    adj = [[] for _ in vertices]
    frontier = list(range(len(vertices)))
    saturated = False

    for level in range(radius):
        nxt = []
        for i in frontier:
            for w in oracle.neighbors(vertices[i]):
                j = index.get(w)
                if j is None:
                    if len(vertices) >= budget:
                        raise BudgetError(
                            f"ball exceeded vertex budget {budget}")
                    j = len(vertices)
                    index[w] = j
                    vertices.append(w)
                    depth.append(level + 1)
                    adj.append([])
                    nxt.append(j)
                if j not in adj[i]:
                    adj[i].append(j)
                    adj[j].append(i)
        if not nxt:
            saturated = True
            break
        frontier = nxt

    return BoundedGraph(oracle, vertices, adj, depth, radius,
                        set(seed_list), saturated)


def distance_avoiding(bg: BoundedGraph, sources, targets, avoid, cap,
                      return_status=False):
    """Length of a shortest source-target path using no avoided vertex,
    truncated at depth `cap`; NOT_FOUND if no such path of length <= cap.

    Exact over the infinite graph whenever every source has depth
    <= R - cap (or the ball is saturated); otherwise status is inexact.
    """
    src = bg.require(sources, "sources")
    tgt = set(bg.require(targets, "targets"))
    avd = set(bg.require(avoid, "avoid"))
    if avd & set(src):
        raise InputError("sources and avoid overlap")

    exact = bg.saturated or (
        not src or max(bg.depth[i] for i in src) <= bg.radius - max(cap, 0))

    result = NOT_FOUND
    if cap >= 0 and src:
        dist = {i: 0 for i in src if i not in avd}
        q = deque(dist)
        hit = next((i for i in dist if i in tgt), None)
        if hit is not None:
            result = 0
        else:
            while q:
                i = q.popleft()
                d = dist[i]
                if d >= cap:
                    continue
                done = False
                for j in bg.adj[i]:
                    if j in dist or j in avd:
                        continue
                    dist[j] = d + 1
                    if j in tgt:
                        result = d + 1
                        done = True
                        break
                    q.append(j)
                if done:
                    break

    if return_status:
        return result, exact
    return result


def ends_lower_bound(oracle: NeighborOracle, seed, n, big_n, budget=None):
    """Components of the radius-big_n ball minus the closed radius-n ball
    that reach the boundary sphere. A lower bound on the number of ends for
    vertex-transitive graphs.
    """
    if not n < big_n:
        raise InputError("need n < N")
    bg = build_ball(oracle, [seed], big_n, budget=budget)
    alive = [i for i in range(len(bg)) if bg.depth[i] > n]
    alive_set = set(alive)
    comp = {}
    count = 0
    components_hit = set()
    for start in alive:
        if start in comp:
            continue
        comp[start] = count
        q = deque([start])
        touches = bg.depth[start] == big_n
        while q:
            i = q.popleft()
            for j in bg.adj[i]:
                if j in alive_set and j not in comp:
                    comp[j] = count
                    if bg.depth[j] == big_n:
                        touches = True
                    q.append(j)
        if touches:
            components_hit.add(count)
        count += 1
    return len(components_hit)


def schreier_ball(group: GroupOracle, normalize, seed_elements, radius,
                  budget=None):
    """Ball of the Schreier graph around the given seed cosets."""
    oracle = SchreierOracle(group, normalize, seed_elements=seed_elements)
    seeds = _dedup(normalize(el) for el in seed_elements)
    return build_ball(oracle, seeds, radius, budget=budget), oracle


def _dot_id(bg, i):
    oracle = bg.oracle
    key = bg.vertices[i]
    if hasattr(oracle, "key_json"):
        enc = oracle.key_json(key)
    else:
        enc = key
    return str(enc)


def to_dot(bg: BoundedGraph, u=(), f=(), o=(), name="ball"):
    """DOT rendering with U/F/O coloring (green/red/blue)."""
    u_idx = set(bg.require(u, "u")) if u else set()
    f_idx = set(bg.require(f, "f")) if f else set()
    o_idx = set(bg.require(o, "o")) if o else set()
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled, fillcolor=white];"]
    for i in range(len(bg)):
        color = None
        if i in u_idx:
            color = "palegreen"
        elif i in f_idx:
            color = "lightcoral"
        elif i in o_idx:
            color = "lightblue"
        attrs = f' [fillcolor="{color}"]' if color else ""
        lines.append(f'  "{_dot_id(bg, i)}"{attrs};')
    for i in range(len(bg)):
        for j in bg.adj[i]:
            if j > i:
                lines.append(f'  "{_dot_id(bg, i)}" -- "{_dot_id(bg, j)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
