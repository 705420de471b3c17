"""JSON loading/dumping for graphs, UFOs and QI witnesses.

Vertex keys travel as strings (reduced words) for word-like backends and as
integer arrays for coordinate-like ones; see each oracle's key_json.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InputError
from .graphs import (BoundedGraph, CayleyOracle, ExplicitOracle,
                     NeighborOracle, PentagonOracle, SchreierOracle,
                     bs_coset_normalizer, build_ball,
                     product_factor_normalizer)
from .groups import BaumslagSolitar, DirectProduct, group_from_json
from .qi import QiConstants
from .ufo import Ufo, UfoParams


@dataclass
class GraphContext:
    kind: str
    oracle: NeighborOracle
    ball: BoundedGraph
    spec: dict

    def encode(self, key):
        return self.oracle.key_json(key)

    def decode(self, obj):
        return self.oracle.key_from_json(obj)


def load_json_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _schreier_normalizer(group, sub):
    if sub == "cyclic_a":
        if not isinstance(group, BaumslagSolitar):
            raise InputError("subgroup 'cyclic_a' needs a bs group")
        return bs_coset_normalizer
    if isinstance(sub, dict) and "factor" in sub:
        if not isinstance(group, DirectProduct):
            raise InputError("subgroup {'factor': i} needs a product group")
        return product_factor_normalizer(int(sub["factor"]))
    raise InputError(f"unknown subgroup spec {sub!r}")


def load_graph(spec, budget=None) -> GraphContext:
    """Build a bounded graph from {"kind": ..., ...} JSON."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("graph spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "cayley":
        group = group_from_json(spec["group"])
        oracle = CayleyOracle(group)
        seeds_json = spec.get("seeds")
        seeds = ([group.key_from_json(s) for s in seeds_json]
                 if seeds_json else [group.identity])
        radius = int(spec["radius"])
    elif kind == "schreier":
        group = group_from_json(spec["group"])
        normalize = _schreier_normalizer(group, spec.get("subgroup"))
        seeds_json = spec.get("seeds")
        elements = ([group.key_from_json(s) for s in seeds_json]
                    if seeds_json else [group.identity])
        oracle = SchreierOracle(group, normalize, seed_elements=elements)
        seeds = sorted({normalize(el) for el in elements},
                       key=lambda c: repr(c))
        radius = int(spec["radius"])
    elif kind == "pentagon":
        oracle = PentagonOracle()
        seeds_json = spec.get("seeds") or [[0, 0]]
        seeds = [oracle.key_from_json(s) for s in seeds_json]
        radius = int(spec["radius"])
    elif kind == "explicit":
        adjacency = spec.get("adjacency")
        if not isinstance(adjacency, dict):
            raise InputError("explicit graph needs an 'adjacency' object")
        oracle = ExplicitOracle(adjacency)
        seeds_json = spec.get("seeds")
        seeds = seeds_json if seeds_json else oracle.vertices()
        radius = int(spec.get("radius", len(oracle.adj)))
    else:
        raise InputError(f"unknown graph kind {kind!r}")
    ball = build_ball(oracle, seeds, radius, budget=budget)
    return GraphContext(kind=kind, oracle=oracle, ball=ball, spec=spec)


def load_ufo(spec, ctx: GraphContext):
    """Parse {"u": [...], "f": [...], "o": [...], "params": {...}?}."""
    if not isinstance(spec, dict):
        raise InputError("ufo spec must be an object")
    try:
        u = [ctx.decode(v) for v in spec["u"]]
        f = [ctx.decode(v) for v in spec["f"]]
        o = [ctx.decode(v) for v in spec["o"]]
    except KeyError as exc:
        raise InputError(f"ufo spec missing field {exc.args[0]!r}") from None
    params = None
    if "params" in spec:
        pr = spec["params"]
        params = UfoParams(int(pr["m"]), int(pr["k"]), int(pr["r"]))
    return Ufo(u, f, o), params


def dump_ufo(ufo: Ufo, params: UfoParams | None, ctx: GraphContext):
    out = ufo.to_json(ctx.encode)
    if params is not None:
        out["params"] = params.to_json()
    return out


def parse_params(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError("--params expects m,k,r")
    try:
        return UfoParams(int(parts[0]), int(parts[1]), int(parts[2]))
    except ValueError:
        raise InputError("--params expects integers m,k,r") from None


def parse_constants(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError("--constants expects A,B,C")
    return QiConstants(parts[0], parts[1], parts[2])


def load_qi_map(spec, ctx_g: GraphContext, ctx_h: GraphContext):
    """Parse {"pairs": [[kG, kG'], ...], "constants": {...}?}."""
    if not isinstance(spec, dict) or "pairs" not in spec:
        raise InputError("map spec must be an object with a 'pairs' field")
    mapping = {}
    for pair in spec["pairs"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InputError(f"bad map pair {pair!r}")
        mapping[ctx_g.decode(pair[0])] = ctx_h.decode(pair[1])
    constants = None
    if "constants" in spec:
        c = spec["constants"]
        constants = QiConstants(c["A"], c["B"], c["C"])
    return mapping, constants
