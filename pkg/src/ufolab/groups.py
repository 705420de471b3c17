"""Word-problem backends with canonical normal forms.

Every backend produces hashable canonical keys: two keys are equal iff the
group elements are equal. Supported backends: free groups, free abelian
groups, Baumslag-Solitar groups BS(m,n) (presentation b a^m b^-1 = a^n),
direct products, and explicit finite multiplication tables.

Words are sequences of generator symbols. Generator order is declaration
order and drives the shortlex order used everywhere else.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


class GeneratorSet:
    """An ordered symmetric set of generator symbols with its involution."""

    def __init__(self, pairs, order=None):
        # pairs: list of (symbol, inverse_symbol); a symbol may be its own
        # inverse. order, when given, fixes the symbol order explicitly.
        symbols = []
        inverse = {}
        for sym, inv in pairs:
            if sym not in inverse:
                symbols.append(sym)
                inverse[sym] = inv
            if inv not in inverse:
                symbols.append(inv)
                inverse[inv] = sym
            if inverse[sym] != inv or inverse[inv] != sym:
                raise InputError(f"inconsistent involution for {sym!r}/{inv!r}")
        if order is not None:
            if sorted(order) != sorted(symbols):
                raise InputError("order must list every symbol exactly once")
            symbols = list(order)
        self.symbols = tuple(symbols)
        self._inverse = inverse
        self._index = {s: i for i, s in enumerate(self.symbols)}

    def inverse(self, sym):
        return self._inverse[sym]

    def index(self, sym):
        return self._index[sym]

    def __contains__(self, sym):
        return sym in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __repr__(self):
        return f"GeneratorSet({list(self.symbols)})"


def parse_word(word, gens: GeneratorSet):
    """Normalize a word to a list of generator symbols.

    Accepts a list/tuple of symbols, a whitespace-separated string, or (when
    every symbol is a single character) a compact string like "aAb".
    """
    if isinstance(word, str):
        if word == "":
            return []
        if any(c.isspace() for c in word):
            parts = word.split()
        elif all(len(s) == 1 for s in gens.symbols):
            parts = list(word)
        else:
            parts = [word]
    else:
        parts = list(word)
    for s in parts:
        if s not in gens:
            raise InputError(f"unknown generator symbol {s!r}")
    return parts


class GroupOracle:
    """Base for word-problem backends; subclasses implement mul_gen/key_word."""

    backend = "abstract"
    gens: GeneratorSet
    identity = None

    def mul_gen(self, key, sym):
        raise NotImplementedError

    def evaluate(self, word):
        key = self.identity
        for s in parse_word(word, self.gens):
            key = self.mul_gen(key, s)
        return key

    def key_word(self, key):
        """A canonical word spelling the element."""
        raise NotImplementedError

    def multiply(self, k1, k2):
        key = k1
        for s in self.key_word(k2):
            key = self.mul_gen(key, s)
        return key

    def invert(self, key):
        out = self.identity
        for s in reversed(self.key_word(key)):
            out = self.mul_gen(out, self.gens.inverse(s))
        return out

    def key_str(self, key):
        word = self.key_word(key)
        if not word:
            return "1"
        if all(len(s) == 1 for s in self.gens.symbols):
            return "".join(word)
        return " ".join(word)

    # JSON vertex-key encoding: strings for word-like backends, integer
    # arrays for coordinate-like ones. Subclasses override as needed.
    def key_json(self, key):
        return self.key_str(key) if key != self.identity else ""

    def key_from_json(self, obj):
        if not isinstance(obj, str):
            raise InputError(f"expected word string, got {obj!r}")
        return self.evaluate(obj)


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _letter_pairs(rank):
    if rank > 26:
        raise InputError("free rank > 26 not supported with default letters")
    return [(_LETTERS[i], _LETTERS[i].upper()) for i in range(rank)]


class FreeGroup(GroupOracle):
    """Free group of given rank; keys are reduced words as compact strings.

    Generators default to a,b,c,... with uppercase inverses; an explicit
    symbol order (e.g. ["a","A","b","B"]) may be supplied.
    """

    backend = "free"

    def __init__(self, rank, order=None):
        self.rank = rank
        pairs = _letter_pairs(rank)
        if order is None:
            # positive letters first, then inverses
            order = [s for s, _ in pairs] + [t for _, t in pairs]
        self.gens = GeneratorSet(pairs, order=order)
        self.identity = ""

    def mul_gen(self, key, sym):
        if key and key[-1] == self.gens.inverse(sym):
            return key[:-1]
        return key + sym

    def key_word(self, key):
        return list(key)

    def key_str(self, key):
        return key if key else "1"

    def key_json(self, key):
        return key


class FreeAbelian(GroupOracle):
    """Z^d with the standard basis; keys are integer coordinate tuples."""

    backend = "free_abelian"

    def __init__(self, d):
        self.d = d
        if d <= 3:
            names = ["x", "y", "z"][:d]
        else:
            names = [f"x{i+1}" for i in range(d)]
        self.gens = GeneratorSet([(nm, nm.upper()) for nm in names],
                                 order=names + [nm.upper() for nm in names])
        self._delta = {}
        for i, nm in enumerate(names):
            self._delta[nm] = (i, 1)
            self._delta[nm.upper()] = (i, -1)
        self.identity = (0,) * d

    def mul_gen(self, key, sym):
        i, d = self._delta[sym]
        return key[:i] + (key[i] + d,) + key[i + 1:]

    def multiply(self, k1, k2):
        return tuple(a + b for a, b in zip(k1, k2))

    def invert(self, key):
        return tuple(-a for a in key)

    def key_word(self, key):
        word = []
        for i, v in enumerate(key):
            sym = self.gens.symbols[2 * i] if v >= 0 else self.gens.symbols[2 * i + 1]
            word.extend([sym] * abs(v))
        return word

    def key_str(self, key):
        return str(tuple(key))

    def key_json(self, key):
        return list(key)

    def key_from_json(self, obj):
        if not (isinstance(obj, list) and len(obj) == self.d):
            raise InputError(f"expected length-{self.d} integer array, got {obj!r}")
        return tuple(int(v) for v in obj)


def _merge_syllables(syls):
    out = []
    for gen, exp in syls:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return out


def britton_reduce(m, n, word):
    """Reduce a word over {a,A,b,B} in BS(m,n) = <a,b | b a^m b^-1 = a^n>.

    Repeatedly rewrites the leftmost pinch, b a^(jm) b^-1 -> a^(jn) or
    b^-1 a^(jn) b -> a^(jm), merging adjacent powers. The input represents
    the identity iff the result is the empty word.
    """
    if m == 0 or n == 0:
        raise InputError("BS(m,n) requires nonzero m, n")
    delta = {"a": ("a", 1), "A": ("a", -1), "b": ("b", 1), "B": ("b", -1)}
    try:
        syls = _merge_syllables([delta[s] for s in word])
    except KeyError as exc:
        raise InputError(f"unknown symbol {exc.args[0]!r} (expected a/A/b/B)") from None

    changed = True
    while changed:
        changed = False
        for i in range(len(syls) - 2):
            g0, p = syls[i]
            g1, x = syls[i + 1]
            g2, q = syls[i + 2]
            if g0 != "b" or g1 != "a" or g2 != "b" or (p > 0) == (q > 0):
                continue
            if p > 0:  # ... b a^x b^-1 ...
                if x % m == 0:
                    repl = (x // m) * n
                else:
                    continue
            else:  # ... b^-1 a^x b ...
                if x % n == 0:
                    repl = (x // n) * m
                else:
                    continue
            head = syls[:i]
            mid = [["b", p - (1 if p > 0 else -1)], ["a", repl],
                   ["b", q - (1 if q > 0 else -1)]]
            syls = _merge_syllables([tuple(t) for t in head + mid + syls[i + 3:]])
            changed = True
            break

    out = []
    for gen, exp in syls:
        sym = gen if exp > 0 else gen.upper()
        out.extend([sym] * abs(exp))
    return out


class BaumslagSolitar(GroupOracle):
    """BS(m,n) with presentation b a^m b^-1 = a^n.

    Canonical keys are HNN normal forms with a-powers pushed leftward:
    (r0, ((e1,r1),...,(ek,rk))) encodes a^r0 b^e1 a^r1 ... b^ek a^rk with
    ri in [0,|m|) after b and in [0,|n|) after b^-1, and no pinch.
    """

    backend = "bs"

    def __init__(self, m, n):
        if m == 0 or n == 0:
            raise InputError("BS(m,n) requires nonzero m, n")
        self.m = m
        self.n = n
        self.gens = GeneratorSet([("a", "A"), ("b", "B")],
                                 order=["a", "b", "A", "B"])
        self.identity = (0, ())

    def _canonical(self, syls):
        # syls: merged [gen, exp] list, assumed alternating after merge
        changed = True
        while changed:
            changed = False
            for i in range(len(syls) - 2):
                g0, p = syls[i]
                g1, x = syls[i + 1]
                g2, q = syls[i + 2]
                if g0 != "b" or g1 != "a" or g2 != "b" or (p > 0) == (q > 0):
                    continue
                if p > 0 and x % self.m == 0:
                    repl = (x // self.m) * self.n
                elif p < 0 and x % self.n == 0:
                    repl = (x // self.n) * self.m
                else:
                    continue
                head = syls[:i]
                mid = [["b", p - (1 if p > 0 else -1)], ["a", repl],
                       ["b", q - (1 if q > 0 else -1)]]
                syls = _merge_syllables([tuple(t) for t in head + mid + syls[i + 3:]])
                changed = True
                break

        # expand b-powers into single letters, collect (eps, a-exp) pairs
        r0 = 0
        if syls and syls[0][0] == "a":
            r0 = syls[0][1]
            syls = syls[1:]
        seq = []
        for gen, exp in syls:
            if gen == "b":
                step = 1 if exp > 0 else -1
                for _ in range(abs(exp)):
                    seq.append([step, 0])
            else:
                seq[-1][1] = exp
        # push excess a-powers leftward; carries are multiples of the
        # receiving side's pinch modulus, so pinch-freeness is preserved
        for i in range(len(seq) - 1, -1, -1):
            eps, x = seq[i]
            if eps > 0:
                mod, num, den = abs(self.m), self.n, self.m
            else:
                mod, num, den = abs(self.n), self.m, self.n
            r = x % mod
            j = (x - r) // den
            seq[i][1] = r
            carry = j * num
            if carry:
                if i == 0:
                    r0 += carry
                else:
                    seq[i - 1][1] += carry
        return (r0, tuple((eps, r) for eps, r in seq))

    def mul_gen(self, key, sym):
        return self.multiply(key, self.evaluate_letter(sym))

    def evaluate(self, word):
        delta = {"a": ("a", 1), "A": ("a", -1), "b": ("b", 1), "B": ("b", -1)}
        syls = [delta[s] for s in parse_word(word, self.gens)]
        return self._canonical(_merge_syllables(syls))

    def evaluate_letter(self, sym):
        if sym == "a":
            return (1, ())
        if sym == "A":
            return (-1, ())
        if sym == "b":
            return (0, ((1, 0),))
        if sym == "B":
            return (0, ((-1, 0),))
        raise InputError(f"unknown symbol {sym!r}")

    def multiply(self, k1, k2):
        syls = []
        for key in (k1, k2):
            r0, seq = key
            syls.append(("a", r0))
            for eps, r in seq:
                syls.append(("b", eps))
                syls.append(("a", r))
        return self._canonical(_merge_syllables(syls))

    def key_word(self, key):
        r0, seq = key
        word = ["a" if r0 > 0 else "A"] * abs(r0)
        for eps, r in seq:
            word.append("b" if eps > 0 else "B")
            word.extend(["a"] * r)
        return word

    def affine(self, word):
        """Evaluate in the affine representation a -> x+1, b -> (n/m)x.

        Faithful whenever |m| = 1 or |n| = 1; always respects the relation.
        Returns (scale, translation) as exact fractions.
        """
        s, c = Fraction(1), Fraction(0)
        table = {
            "a": (Fraction(1), Fraction(1)),
            "A": (Fraction(1), Fraction(-1)),
            "b": (Fraction(self.n, self.m), Fraction(0)),
            "B": (Fraction(self.m, self.n), Fraction(0)),
        }
        for sym in parse_word(word, self.gens):
            s2, c2 = table[sym]
            s, c = s * s2, s * c2 + c
        return s, c


class DirectProduct(GroupOracle):
    """Direct product of oracles; keys are tuples of factor keys.

    Generator symbols are inherited from the factors; on a name clash they
    are prefixed with the factor index ("0:a").
    """

    backend = "product"

    def __init__(self, factors):
        self.factors = list(factors)
        names = {}
        pairs = []
        self._route = {}
        clash = len({s for f in self.factors for s in f.gens.symbols}) != sum(
            len(f.gens.symbols) for f in self.factors)
        for i, f in enumerate(self.factors):
            for sym in f.gens.symbols:
                name = f"{i}:{sym}" if clash else sym
                inv = f"{i}:{f.gens.inverse(sym)}" if clash else f.gens.inverse(sym)
                if name not in names:
                    names[name] = inv
                    pairs.append((name, inv))
                self._route[name] = (i, sym)
        self.gens = GeneratorSet(pairs)
        self.identity = tuple(f.identity for f in self.factors)

    def mul_gen(self, key, sym):
        i, sub = self._route[sym]
        parts = list(key)
        parts[i] = self.factors[i].mul_gen(parts[i], sub)
        return tuple(parts)

    def multiply(self, k1, k2):
        return tuple(f.multiply(a, b) for f, a, b in zip(self.factors, k1, k2))

    def invert(self, key):
        return tuple(f.invert(a) for f, a in zip(self.factors, key))

    def key_word(self, key):
        word = []
        clash = any(":" in s for s in self.gens.symbols)
        for i, (f, k) in enumerate(zip(self.factors, key)):
            for sym in f.key_word(k):
                word.append(f"{i}:{sym}" if clash else sym)
        return word

    def key_str(self, key):
        return "(" + ", ".join(f.key_str(k) for f, k in zip(self.factors, key)) + ")"

    def key_json(self, key):
        return [f.key_json(k) for f, k in zip(self.factors, key)]

    def key_from_json(self, obj):
        if not (isinstance(obj, list) and len(obj) == len(self.factors)):
            raise InputError(f"expected {len(self.factors)}-component key, got {obj!r}")
        return tuple(f.key_from_json(o) for f, o in zip(self.factors, obj))


class ExplicitGroup(GroupOracle):
    """Finite group given by a multiplication table.

    elements: list of hashable ids; table[i][j] = index of elements[i]*elements[j];
    generators: list of (symbol, element_id) with the involution inferred.
    """

    backend = "explicit"

    def __init__(self, elements, table, generators):
        self.elements = list(elements)
        self._idx = {e: i for i, e in enumerate(self.elements)}
        self.table = [list(row) for row in table]
        n = len(self.elements)
        ident = None
        for i in range(n):
            if all(self.table[i][j] == j and self.table[j][i] == j for j in range(n)):
                ident = i
                break
        if ident is None:
            raise InputError("multiplication table has no identity")
        self._ident_idx = ident
        self.identity = self.elements[ident]
        inv = {}
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == ident:
                    inv[i] = j
        self._gen_elem = {}
        pairs = []
        by_idx = {}
        for sym, eid in generators:
            self._gen_elem[sym] = self._idx[eid]
            by_idx[self._idx[eid]] = sym
        for sym, eid in generators:
            i = self._idx[eid]
            inv_sym = by_idx.get(inv[i])
            if inv_sym is None:
                raise InputError(f"generator set not symmetric: missing inverse of {sym!r}")
            pairs.append((sym, inv_sym))
        self.gens = GeneratorSet(pairs)

    def mul_gen(self, key, sym):
        return self.elements[self.table[self._idx[key]][self._gen_elem[sym]]]

    def multiply(self, k1, k2):
        return self.elements[self.table[self._idx[k1]][self._idx[k2]]]

    def key_word(self, key):
        # shortest word by BFS; only used for display on tiny groups
        if key == self.identity:
            return []
        seen = {self.identity: []}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for k in frontier:
                for s in self.gens.symbols:
                    k2 = self.mul_gen(k, s)
                    if k2 not in seen:
                        seen[k2] = seen[k] + [s]
                        if k2 == key:
                            return seen[k2]
                        nxt.append(k2)
            frontier = nxt
        raise InputError("element not generated by the given generators")

    def key_json(self, key):
        return key

    def key_from_json(self, obj):
        if obj not in self._idx:
            raise InputError(f"unknown element id {obj!r}")
        return obj


def evaluate_word(oracle: GroupOracle, word):
    """Canonical key of the element a word represents; [] gives the identity."""
    return oracle.evaluate(word)


def shortlex_enumerate(oracle: GroupOracle, k):
    """One (word, key) pair per element of the ball B_k, in shortlex order.

    The word is the shortlex-least representative; generator order is the
    declaration order of the oracle's generator set.
    """
    if k < 0:
        raise InputError("k must be >= 0")
    seen = {oracle.identity}
    out = [((), oracle.identity)]
    frontier = out
    for _ in range(k):
        nxt = []
        for word, key in frontier:
            for s in oracle.gens.symbols:
                key2 = oracle.mul_gen(key, s)
                if key2 not in seen:
                    seen.add(key2)
                    nxt.append((word + (s,), key2))
        out.extend(nxt)
        frontier = nxt
    return out


def shortlex_keys(oracle: GroupOracle, k):
    """Keys of B_k in shortlex order, without materializing the words."""
    if k < 0:
        raise InputError("k must be >= 0")
    seen = {oracle.identity}
    out = [oracle.identity]
    frontier = out
    for _ in range(k):
        nxt = []
        for key in frontier:
            for s in oracle.gens.symbols:
                key2 = oracle.mul_gen(key, s)
                if key2 not in seen:
                    seen.add(key2)
                    nxt.append(key2)
        out.extend(nxt)
        frontier = nxt
    return out


def group_from_json(spec):
    """Build an oracle from {"backend": ..., "params": {...}} JSON."""
    if not isinstance(spec, dict) or "backend" not in spec:
        raise InputError("group spec must be an object with a 'backend' field")
    backend = spec["backend"]
    params = spec.get("params", {})
    if backend == "free":
        return FreeGroup(int(params["rank"]), order=params.get("order"))
    if backend == "free_abelian":
        return FreeAbelian(int(params["d"]))
    if backend == "bs":
        return BaumslagSolitar(int(params["m"]), int(params["n"]))
    if backend == "product":
        return DirectProduct([group_from_json(sub) for sub in params["factors"]])
    if backend == "explicit":
        return ExplicitGroup(params["elements"], params["table"],
                             [tuple(g) for g in params["generators"]])
    raise InputError(f"unknown backend {backend!r}")
