"""Shared test utilities: brute-force oracles and random generators.

The brute-force verifiers deliberately use the plainest possible
enumeration (permutations for matchings, depth-limited DFS over simple
paths for separation) so they stay independent of the library's BFS and
Hopcroft-Karp code paths.
"""

from __future__ import annotations

import itertools
from collections import deque

from ufolab import FreeGroup, Pattern
from ufolab.mirror import ALL_SYMBOLS


def brute_all_distances(adj):
    """Plain BFS from every vertex of a finite adjacency dict."""
    dist = {}
    for s in adj:
        d = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in d:
                    d[w] = d[v] + 1
                    q.append(w)
        dist[s] = d
    return dist


def brute_complete_matching(dist, u_list, o_list, k):
    """Exhaustive bijection search for a complete matching within distance k."""
    if len(u_list) != len(o_list):
        return False
    if not u_list:
        return True
    for perm in itertools.permutations(o_list):
        if all(dist[u].get(o, float("inf")) <= k
               for u, o in zip(u_list, perm)):
            return True
    return False


def brute_short_avoiding_path(adj, u_set, o_set, f_set, r):
    """Whether some simple F-avoiding path of length < r joins U and O."""
    if r <= 0:
        return False
    for start in u_set:
        if start in f_set:
            continue
        stack = [(start, {start})]
        if start in o_set:
            return True
        while stack:
            v, seen = stack.pop()
            if len(seen) - 1 >= r - 1:
                continue
            for w in adj[v]:
                if w in seen or w in f_set:
                    continue
                if w in o_set:
                    return True
                stack.append((w, seen | {w}))
    return False


def brute_verify(adj, dist, ufo, params):
    """(cond1, cond2, cond3) by direct enumeration on a finite graph."""
    cond1 = len(ufo.u) >= params.m * len(ufo.f)
    cond2 = brute_complete_matching(dist, list(ufo.u), list(ufo.o), params.k)
    cond3 = not brute_short_avoiding_path(adj, set(ufo.u), set(ufo.o),
                                          set(ufo.f), params.r)
    return cond1, cond2, cond3


def random_explicit_graph(rng, max_n=40):
    """A random symmetric graph on 4..max_n integer vertices."""
    n = rng.randrange(4, max_n + 1)
    adj = {v: [] for v in range(n)}
    # a random spanning tree keeps most graphs connected enough to be useful
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        adj[a].append(b)
        adj[b].append(a)
    extra = rng.randrange(0, n)
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b and b not in adj[a]:
            adj[a].append(b)
            adj[b].append(a)
    return adj


def random_disjoint_sets(rng, vertices, u_size, f_size):
    pool = list(vertices)
    rng.shuffle(pool)
    need = 2 * u_size + f_size
    if len(pool) < need:
        return None
    u = pool[:u_size]
    o = pool[u_size:2 * u_size]
    f = pool[2 * u_size:2 * u_size + f_size]
    return u, f, o


def random_pattern(rng, rank, k, a, oracle=None):
    from ufolab import shortlex_keys
    oracle = oracle or FreeGroup(rank)
    domain = shortlex_keys(oracle, (a + 1) * k)
    values = {key: ALL_SYMBOLS[rng.randrange(len(ALL_SYMBOLS))]
              for key in domain}
    return Pattern(rank, k, a, values, oracle=oracle)
