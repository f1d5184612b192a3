"""One-object-per-file serialization for every instance kind.

Files are UTF-8 JSON with sorted keys and a fixed layout, so a fixed seed
gives the same bytes on every platform.  Tuple payloads list the colors of
the increasing tuples in colex order.
"""

import json
from dataclasses import dataclass, field
from itertools import combinations

from ..bushy_forcing import BadSet, Condition, to_mask
from ..core_model import StageColoring, Tournament, tuple_rank
from ..oracles import LimitFunction, UniformSetSequence
from ..tree_measure import DyadicTree

KINDS = ("stage_coloring", "tournament", "limit_function", "tree", "family", "condition")
TUPLE_ORDER = "colex over increasing tuples"
FORMAT_VERSION = 1


class InstanceError(ValueError):
    pass


@dataclass
class InstanceFile:
    kind: str
    params: dict
    payload: object
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown kind {self.kind!r}")

    def dumps(self):
        doc = {"format": FORMAT_VERSION, "kind": self.kind, "tuple_order": TUPLE_ORDER,
               "params": self.params, "payload": self.payload, "meta": self.meta}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"

    @classmethod
    def loads(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not an instance file: {exc}") from None
        for key in ("kind", "params", "payload"):
            if key not in doc:
                raise InstanceError(f"missing field {key!r}")
        inst = cls(doc["kind"], doc["params"], doc["payload"], doc.get("meta", {}))
        decode(inst)  # validates payload against params
        return inst

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def colex_tuples(N, n):
    return sorted(combinations(range(N), n), key=tuple_rank)


def encode(obj, meta=None):
    meta = dict(meta or {})
    if isinstance(obj, StageColoring):
        rows = [obj.table[t] for t in colex_tuples(obj.domain_size, obj.arity)]
        return InstanceFile("stage_coloring", {"arity": obj.arity, "domain": obj.domain_size}, rows, meta)
    if isinstance(obj, Tournament):
        bits = [1 if obj(x, y) else 0 for x, y in colex_tuples(obj.domain_size, 2)]
        return InstanceFile("tournament", {"domain": obj.domain_size}, bits, meta)
    if isinstance(obj, LimitFunction):
        return InstanceFile("limit_function", {"args": obj.arg_bound, "stages": obj.stage_bound},
                            {"rows": obj.table, "stab": obj.stab}, meta)
    if isinstance(obj, DyadicTree):
        return InstanceFile("tree", {"depth": obj.depth}, [sorted(lv) for lv in obj.levels], meta)
    if isinstance(obj, UniformSetSequence):
        return InstanceFile("family", {"domain": obj.domain_size, "count": len(obj)},
                            [sorted(R) for R in obj.sets], meta)
    if isinstance(obj, Condition):
        return InstanceFile("condition", {"universe": obj.B.M, "length": obj.B.L},
                            {"sigma": list(obj.sigma), "bound": list(obj.g),
                             "bad": [list(s) for s in obj.B.members()]}, meta)
    raise InstanceError(f"cannot serialize {type(obj).__name__}")


def decode(inst):
    p, body = inst.params, inst.payload
    try:
        if inst.kind == "stage_coloring":
            keys = colex_tuples(p["domain"], p["arity"])
            if len(body) != len(keys):
                raise InstanceError(f"payload has {len(body)} colors, expected {len(keys)}")
            return StageColoring(p["arity"], p["domain"], dict(zip(keys, body)))
        if inst.kind == "tournament":
            keys = colex_tuples(p["domain"], 2)
            if len(body) != len(keys):
                raise InstanceError(f"payload has {len(body)} edges, expected {len(keys)}")
            return Tournament(p["domain"], {k: bool(b) for k, b in zip(keys, body)})
        if inst.kind == "limit_function":
            f = LimitFunction(body["rows"], body["stab"])
            if (f.arg_bound, f.stage_bound) != (p["args"], p["stages"]) and f.arg_bound:
                raise InstanceError("table shape does not match params")
            return f
        if inst.kind == "tree":
            if len(body) != p["depth"] + 1:
                raise InstanceError("tree needs one level per length")
            for n, lv in enumerate(body):
                if any(not 0 <= v < 1 << n for v in lv):
                    raise InstanceError(f"level {n} holds a code outside [0, 2^{n})")
            T = DyadicTree(p["depth"], body)
            if T.check_prefix_closed() is not None:
                raise InstanceError(f"tree is not prefix closed at {T.check_prefix_closed()}")
            return T
        if inst.kind == "family":
            if len(body) != p["count"]:
                raise InstanceError("set count does not match params")
            return UniformSetSequence(body, p["domain"])
        if inst.kind == "condition":
            B = BadSet.from_strings([tuple(s) for s in body["bad"]], p["universe"], p["length"])
            to_mask(body["sigma"])
            return Condition(tuple(body["sigma"]), tuple(body["bound"]), B)
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"malformed {inst.kind} file: {exc}") from None
    raise InstanceError(f"unknown kind {inst.kind!r}")
