"""Generalized mirror-shift pattern machinery over free-group balls.

Patterns assign symbols from Lambda = {star,u,o} x {-,+} x {0,1} to every
element of the ball B_((A+1)k) of a free group. The {0,1} layer induces an
equivalence on B_k (equal translated bit-neighborhoods); coherent patterns
have constant {star,u,o}x{-,+} symbols on each class. A deterministic
inductive procedure matches u-positions to o-positions along shortlex word
order; allowed patterns are the coherent ones whose matching has equal
signs on every matched pair.

The inductive procedure follows these pinned interpretations:
  (a) at step i the boundary removal is symmetric: a u-position g is
      removed when g*w_i leaves the ball and an o-position h is removed
      when h*w_i^-1 does, i.e. exactly when the step-i partner of the
      element falls outside B_k and its fate would depend on symbols a
      larger pattern could carry;
  (b) within a step, removals happen before matching;
  (c) candidate pairs (g, g*w_i) are processed in shortlex order of g;
  (d) an element removed at step i is not matchable at step i.
(a) is what keeps the matching monotone under pattern extension (the
nesting property); the remaining choices fix the order ambiguities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InputError
from .graphs import BoundedGraph, sort_key
from .groups import FreeGroup, shortlex_keys
from .ufo import _pair_distances, bounded_matching

# Universal window-scale constant: bit-configurations distinguishing all
# pairs of group elements within linear windows exist at this scale in
# every infinite finitely generated group.
UNIVERSAL_A = 51

LETTERS = ("star", "u", "o")
SIGNS = ("+", "-")
BITS = (0, 1)
ALL_SYMBOLS = tuple((letter, sign, bit) for letter in LETTERS
                    for sign in SIGNS for bit in BITS)


def symbol_code(sym):
    letter, sign, bit = sym
    return f"{letter}{sign}{bit}"


def symbol_from_code(code):
    for letter in LETTERS:
        if code.startswith(letter):
            rest = code[len(letter):]
            if len(rest) == 2 and rest[0] in SIGNS and rest[1] in "01":
                return (letter, rest[0], int(rest[1]))
    raise InputError(f"bad symbol code {code!r}")


class Pattern:
    """A total symbol assignment on the ball B_((A+1)k) of a free group."""

    def __init__(self, rank, k, a, values, oracle=None):
        if k < 1 or a < 1:
            raise InputError("need k >= 1 and A >= 1")
        self.rank = rank
        self.k = k
        self.a = a
        self.oracle = oracle if oracle is not None else FreeGroup(rank)
        self.domain = shortlex_keys(self.oracle, (a + 1) * k)
        domain_set = set(self.domain)
        if set(values) != domain_set:
            missing = domain_set - set(values)
            extra = set(values) - domain_set
            raise InputError(
                f"pattern domain mismatch: {len(missing)} missing, "
                f"{len(extra)} extraneous keys")
        for sym in values.values():
            if sym not in ALL_SYMBOLS:
                raise InputError(f"bad symbol {sym!r}")
        self.values = dict(values)
        self.ball_k = shortlex_keys(self.oracle, k)
        self.ball_k_set = set(self.ball_k)
        self.ball_ka = shortlex_keys(self.oracle, a * k)
        self._rank_in_k = {key: i for i, key in enumerate(self.ball_k)}
        self._sigs = None

    # projections
    def bit(self, g):
        return self.values[g][2]

    def sigma(self, g):
        return self.values[g][:2]

    def letter(self, g):
        return self.values[g][0]

    def sign(self, g):
        return self.values[g][1]

    def signature(self, g):
        """Bit values on the translated window g * B_(kA)."""
        if self._sigs is None:
            self._sigs = {}
        sig = self._sigs.get(g)
        if sig is None:
            mul = self.oracle.multiply
            vals = self.values
            sig = tuple(vals[mul(g, t)][2] for t in self.ball_ka)
            self._sigs[g] = sig
        return sig

    def classes(self):
        """Equivalence classes of B_k under equal signatures."""
        groups = {}
        for g in self.ball_k:
            groups.setdefault(self.signature(g), []).append(g)
        return list(groups.values())

    def restrict(self, k_small):
        """The induced pattern with the same A on the smaller ball."""
        if k_small > self.k:
            raise InputError("can only restrict to a smaller k")
        sub_dom = shortlex_keys(self.oracle, (self.a + 1) * k_small)
        vals = {key: self.values[key] for key in sub_dom}
        return Pattern(self.rank, k_small, self.a, vals, oracle=self.oracle)

    def to_json(self):
        return {"rank": self.rank, "k": self.k, "A": self.a,
                "values": {self.oracle.key_json(g): symbol_code(sym)
                           for g, sym in sorted(self.values.items(),
                                                key=lambda kv: sort_key(kv[0]))}}


def pattern_from_json(obj):
    try:
        rank, k, a = int(obj["rank"]), int(obj["k"]), int(obj["A"])
        raw = obj["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad pattern JSON: {exc}") from None
    oracle = FreeGroup(rank)
    values = {}
    for word, code in raw.items():
        values[oracle.evaluate(word)] = symbol_from_code(code)
    return Pattern(rank, k, a, values, oracle=oracle)


def all_translates_coherent(p: Pattern):
    """Whether every translate-restriction of the pattern is coherent.

    The coherence rule forbids incoherent patterns at every position of a
    configuration, not just at the identity; this checks every center g and
    radius j <= k with g*B_((A+1)j) inside the domain. Patterns cut from
    admissible configurations always pass.
    """
    oracle = p.oracle
    for j in range(1, p.k + 1):
        max_center = (p.a + 1) * (p.k - j)
        ball_j = shortlex_keys(oracle, j)
        ball_ja = shortlex_keys(oracle, j * p.a)
        for g in p.domain:
            if len(oracle.key_word(g)) > max_center:
                continue
            seen = {}
            for x in ball_j:
                gx = oracle.multiply(g, x)
                window = tuple(p.values[oracle.multiply(gx, t)][2]
                               for t in ball_ja)
                other = seen.get(window)
                if other is None:
                    seen[window] = gx
                elif p.values[other][:2] != p.values[gx][:2]:
                    return False
    return True


def p_equiv(p: Pattern, g, h):
    """Whether g and h in B_k carry equal translated bit-neighborhoods."""
    if g not in p.ball_k_set or h not in p.ball_k_set:
        raise InputError("p_equiv arguments must lie in B_k")
    return p.signature(g) == p.signature(h)


def is_coherent(p: Pattern):
    """Every equivalence class of B_k carries one {star,u,o}x{-,+} symbol."""
    for cls in p.classes():
        first = p.sigma(cls[0])
        if any(p.sigma(g) != first for g in cls[1:]):
            return False
    return True


@dataclass
class PMatching:
    pairs: list
    trace: list = field(default_factory=list)

    def to_json(self, encode=lambda g: g):
        return {"pairs": [[encode(g), encode(h)] for g, h in self.pairs],
                "trace": [
                    {"step": t["step"], "w": encode(t["w"]),
                     "removed": [encode(g) for g in t["removed"]],
                     "matched": [[encode(g), encode(h)]
                                 for g, h in t["matched"]]}
                    for t in self.trace]}


def build_matching(p: Pattern):
    """Run the inductive matching procedure on a coherent pattern.

    Walks w_1,...,w_m (the shortlex order on B_k minus the identity),
    maintaining the available set; see the module docstring for the pinned
    interpretations (a)-(d). Returns the matching with a full step trace.
    """
    if not is_coherent(p):
        raise InputError("matching procedure requires a coherent pattern")
    oracle = p.oracle
    ws = p.ball_k[1:]
    m = len(ws)

    sig_class = {}
    for cls_id, cls in enumerate(p.classes()):
        for g in cls:
            sig_class[g] = cls_id

    available = {g for g in p.ball_k if p.letter(g) in ("u", "o")}
    rank_in_k = p._rank_in_k
    pairs = []
    trace = []
    for i in range(1, m + 1):
        w = ws[i - 1]
        w_inv = oracle.invert(w)

        removed = []
        for g in sorted(available, key=lambda g: rank_in_k[g]):
            if p.letter(g) == "u":
                if oracle.multiply(g, w) not in p.ball_k_set:
                    removed.append(g)
            else:
                if oracle.multiply(g, w_inv) not in p.ball_k_set:
                    removed.append(g)
        available.difference_update(removed)

        matched = []
        for g in sorted(available, key=lambda g: rank_in_k[g]):
            if g not in available or p.letter(g) != "u":
                continue
            h = oracle.multiply(g, w)
            if h not in p.ball_k_set or h not in available:
                continue
            if p.letter(h) != "o":
                continue
            pairs.append((g, h))
            matched.append((g, h))
            cg, ch = sig_class[g], sig_class[h]
            available = {t for t in available
                         if sig_class[t] != cg and sig_class[t] != ch}
        trace.append({"step": i, "w": w, "removed": removed,
                      "matched": matched})
    return PMatching(pairs=pairs, trace=trace)


def is_matched(p: Pattern, matching: PMatching | None = None):
    """Whether every matched pair carries equal {-,+} signs."""
    if matching is None:
        matching = build_matching(p)
    return all(p.sign(g) == p.sign(h) for g, h in matching.pairs)


COHERENCE_VIOLATION = "COHERENCE_VIOLATION"
MATCHING_VIOLATION = "MATCHING_VIOLATION"
ALLOWED = "ALLOWED"


def is_forbidden(p: Pattern):
    """Classify a pattern under the coherence and matching rules."""
    if not is_coherent(p):
        return COHERENCE_VIOLATION
    if not is_matched(p):
        return MATCHING_VIOLATION
    return ALLOWED


def enumerate_patterns(rank, k, a, budget):
    """Stream (pattern, classification) over all patterns, budget-limited.

    The full space has 12^|B_((A+1)k)| patterns; the stream walks it in a
    fixed order (positions in shortlex order, symbols in ALL_SYMBOLS order)
    and stops after `budget` patterns.
    """
    oracle = FreeGroup(rank)
    domain = shortlex_keys(oracle, (a + 1) * k)
    count = 0
    for combo in itertools.product(ALL_SYMBOLS, repeat=len(domain)):
        if count >= budget:
            return
        count += 1
        values = dict(zip(domain, combo))
        p = Pattern(rank, k, a, values, oracle=oracle)
        yield p, is_forbidden(p)


def greedy_separating_set(oracle, s, k, a):
    """Greedy maximal T in B_(kA) with T and sT disjoint, plus the size bound.

    Walks B_(kA) in shortlex order, adding t whenever (T+{t}) does not meet
    s(T+{t}). Returns (T, bound_ok) with bound_ok = (3|T| >= A|B_k|), the
    counting bound that holds for infinite groups.
    """
    if s == oracle.identity:
        raise InputError("s must differ from the identity")
    ball_k = set(shortlex_keys(oracle, k))
    if s not in ball_k:
        raise InputError("s must lie in B_k")
    ball_ka = shortlex_keys(oracle, k * a)
    s_inv = oracle.invert(s)
    t_set = set()
    out = []
    for t in ball_ka:
        # conflict iff t in sT, or st in T (s*t == t impossible for s != 1)
        if oracle.multiply(s_inv, t) in t_set:
            continue
        if oracle.multiply(s, t) in t_set:
            continue
        t_set.add(t)
        out.append(t)
    bound_ok = 3 * len(out) >= a * len(ball_k)
    return out, bound_ok


@dataclass
class GreedyBound:
    applicable: bool
    pairs: list
    bound_holds: bool | None

    def to_json(self, encode=lambda g: g):
        return {"applicable": self.applicable,
                "pairs": [[encode(a), encode(b)] for a, b in self.pairs],
                "bound_holds": self.bound_holds}


def greedy_matching_bound(bg: BoundedGraph, u_keys, o_keys, k):
    """Greedy short-pairs-first matching; checks 2|M_greedy| >= |U|.

    Applicable only when a complete length-k matching exists (any maximal
    matching then covers at least half of U). Pairs are taken in order of
    (distance, U key, O key), skipping used endpoints.
    """
    complete = bounded_matching(bg, u_keys, o_keys, k)
    if not complete.complete:
        return GreedyBound(applicable=False, pairs=[], bound_holds=None)
    u_list = sorted(set(u_keys), key=sort_key)
    o_list = sorted(set(o_keys), key=sort_key)
    u_idx = bg.require(u_list)
    o_idx = bg.require(o_list)
    dists = _pair_distances(bg, u_idx, o_idx, k)
    candidates = []
    for pos, ui in enumerate(u_idx):
        for oi, d in dists[ui].items():
            candidates.append((d, sort_key(bg.vertices[ui]),
                               sort_key(bg.vertices[oi]), ui, oi))
    candidates.sort()
    used_u = set()
    used_o = set()
    pairs = []
    for _d, _ku, _ko, ui, oi in candidates:
        if ui in used_u or oi in used_o:
            continue
        used_u.add(ui)
        used_o.add(oi)
        pairs.append((bg.vertices[ui], bg.vertices[oi]))
    return GreedyBound(applicable=True, pairs=pairs,
                       bound_holds=2 * len(pairs) >= len(u_list))
