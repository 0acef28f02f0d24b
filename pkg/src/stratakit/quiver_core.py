"""Quivers, framed quivers, level windows and the repetition quiver.

Vertices of the repetition quiver are pairs (node, level); the framed
variant adds a frozen companion node i' per node i.  The involution sigma
and the translation tau act on vertices and arrows; sigma(sigma(u)) =
tau(u) everywhere.  All I/O uses the keys "i@p" (ordinary) and "i'@p"
(frozen), levels being arbitrary integers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .errors import InvalidInputError, WindowInsufficiencyError


@dataclass(frozen=True)
class QArrow:
    """An arrow of the base quiver."""

    id: str
    source: str
    target: str


class Quiver:
    """A finite acyclic quiver.  Parallel arrows are allowed, cycles are not."""

    def __init__(self, vertices: Iterable[str], arrows: Iterable[QArrow]):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInputError("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("duplicate arrow ids")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise InvalidInputError(f"arrow {a.id} has endpoint outside vertex set")
        self._topo = self._topological_order()
        self.topo_index = {v: i for i, v in enumerate(self._topo)}

    def _topological_order(self):
        out = {v: [] for v in self.vertices}
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a.target)
            indeg[a.target] += 1
        ready = sorted(v for v in self.vertices if indeg[v] == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
            ready.sort()
        if len(order) != len(self.vertices):
            raise InvalidInputError("quiver has an oriented cycle")
        return order

    def arrows_from(self, v: str):
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str):
        return [a for a in self.arrows if a.target == v]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def key(self) -> str:
        """Canonical string identifying the quiver (used as a cache key)."""
        return json.dumps(self.to_json(), sort_keys=True)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data) -> "Quiver":
        try:
            vertices = data["vertices"]
            arrows = [QArrow(str(a["id"]), str(a["source"]), str(a["target"])) for a in data["arrows"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed quiver JSON: {exc}") from exc
        return cls(vertices, arrows)

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {len(self.arrows)} arrows)"


# Some stock quivers used throughout the tests and demos.

def a_n_quiver(n: int) -> Quiver:
    """Linearly oriented A_n: 1 -> 2 -> ... -> n."""
    verts = [str(i) for i in range(1, n + 1)]
    arrows = [QArrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
    return Quiver(verts, arrows)


def d4_quiver() -> Quiver:
    """D4 with central source: 0 -> 1, 0 -> 2, 0 -> 3."""
    return Quiver(["0", "1", "2", "3"], [QArrow("b1", "0", "1"), QArrow("b2", "0", "2"), QArrow("b3", "0", "3")])


def kronecker_quiver(arrows: int = 2) -> Quiver:
    """The quiver with two vertices and the given number of parallel arrows 1 -> 2."""
    return Quiver(["1", "2"], [QArrow(f"k{i}", "1", "2") for i in range(1, arrows + 1)])


@dataclass(frozen=True, order=True)
class RepVertex:
    """A vertex (node, level) of the repetition quiver; frozen marks the primed copy."""

    node: str
    level: int
    frozen: bool = False

    def key(self) -> str:
        prime = "'" if self.frozen else ""
        return f"{self.node}{prime}@{self.level}"

    def __repr__(self):
        return self.key()


def parse_vertex(key: str) -> RepVertex:
    """Inverse of RepVertex.key: "i@p" or "i'@p"."""
    try:
        name, level = key.rsplit("@", 1)
        frozen = name.endswith("'")
        node = name[:-1] if frozen else name
        return RepVertex(node, int(level), frozen)
    except ValueError as exc:
        raise InvalidInputError(f"bad vertex key {key!r}") from exc


def tau(v: RepVertex) -> RepVertex:
    return RepVertex(v.node, v.level - 1, v.frozen)


def tau_inv(v: RepVertex) -> RepVertex:
    return RepVertex(v.node, v.level + 1, v.frozen)


def sigma(v: RepVertex) -> RepVertex:
    """The involutive shift: sigma(i,p) = (i',p-1), sigma(i',p) = (i,p).

    With this choice sigma o sigma = tau, which is the identity the mesh
    bookkeeping relies on (the frozen companion of x sits between tau(x)
    and x).
    """
    if v.frozen:
        return RepVertex(v.node, v.level, False)
    return RepVertex(v.node, v.level - 1, True)


def sigma_inv(v: RepVertex) -> RepVertex:
    if v.frozen:
        return RepVertex(v.node, v.level + 1, False)
    return RepVertex(v.node, v.level, True)


@dataclass(frozen=True)
class RepArrow:
    """An arrow of the (framed) repetition quiver.

    kind is one of:
      "a"  inherited copy of a base arrow, (i,p) -> (j,p)
      "s"  reversed copy, (j,p-1) -> (i,p)
      "f"  framing, (i,p) -> (i',p)
      "c"  co-framing, (i',p-1) -> (i,p)
    base is the base-arrow id for kinds a/s and the node id for kinds f/c.
    """

    kind: str
    base: str
    source: RepVertex
    target: RepVertex

    def key(self) -> str:
        return f"{self.kind}:{self.base}@{self.target.level}"

    def __repr__(self):
        return f"{self.key()}[{self.source}->{self.target}]"


def parse_arrow_key(q: Quiver, key: str) -> RepArrow:
    try:
        head, level = key.rsplit("@", 1)
        kind, base = head.split(":", 1)
        p = int(level)
    except ValueError as exc:
        raise InvalidInputError(f"bad arrow key {key!r}") from exc
    if kind in ("a", "s"):
        arr = next((a for a in q.arrows if a.id == base), None)
        if arr is None:
            raise InvalidInputError(f"unknown base arrow {base!r} in key {key!r}")
        if kind == "a":
            return RepArrow("a", base, RepVertex(arr.source, p), RepVertex(arr.target, p))
        return RepArrow("s", base, RepVertex(arr.target, p - 1), RepVertex(arr.source, p))
    if kind == "f":
        return RepArrow("f", base, RepVertex(base, p), RepVertex(base, p, True))
    if kind == "c":
        return RepArrow("c", base, RepVertex(base, p - 1, True), RepVertex(base, p))
    raise InvalidInputError(f"bad arrow kind in key {key!r}")


def sigma_arrow(q: Quiver, ra: RepArrow) -> RepArrow:
    """sigma on arrows; sigma^2 = tau (shift one level down)."""
    p = ra.target.level
    if ra.kind == "a":
        arr = next(a for a in q.arrows if a.id == ra.base)
        return RepArrow("s", ra.base, RepVertex(arr.target, p - 1), RepVertex(arr.source, p))
    if ra.kind == "s":
        arr = next(a for a in q.arrows if a.id == ra.base)
        return RepArrow("a", ra.base, RepVertex(arr.source, p - 1), RepVertex(arr.target, p - 1))
    if ra.kind == "f":
        return RepArrow("c", ra.base, RepVertex(ra.base, p - 1, True), RepVertex(ra.base, p))
    return RepArrow("f", ra.base, RepVertex(ra.base, p - 1), RepVertex(ra.base, p - 1, True))


def tau_arrow(q: Quiver, ra: RepArrow) -> RepArrow:
    return sigma_arrow(q, sigma_arrow(q, ra))


@dataclass(frozen=True)
class Window:
    """Inclusive level bounds [lo, hi].  No operation silently extends a window."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInputError(f"empty window [{self.lo},{self.hi}]")

    def contains_level(self, p: int) -> bool:
        return self.lo <= p <= self.hi

    def contains(self, v: RepVertex) -> bool:
        return self.contains_level(v.level)

    def levels(self):
        return range(self.lo, self.hi + 1)

    def to_json(self):
        return [self.lo, self.hi]

    @classmethod
    def from_json(cls, data) -> "Window":
        try:
            lo, hi = int(data[0]), int(data[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise InvalidInputError(f"bad window {data!r}") from exc
        return cls(lo, hi)


class Configuration:
    """A set C of non-frozen repetition-quiver vertices, given extensionally.

    The retained frozen vertices are exactly those u with sigma(u) in C.
    An optional period k makes membership tau^k-periodic, so Riedtmann-style
    periodic configurations need only one fundamental domain of data.
    The default (members=None) is the full configuration: every non-frozen
    vertex belongs to C and every frozen vertex is retained.
    """

    def __init__(self, members: Optional[Iterable[RepVertex]] = None, period: Optional[int] = None):
        if members is None:
            self.members = None
        else:
            ms = set(members)
            for v in ms:
                if v.frozen:
                    raise InvalidInputError("configuration members must be non-frozen vertices")
            self.members = frozenset(ms)
        if period is not None and period <= 0:
            raise InvalidInputError("configuration period must be positive")
        self.period = period

    @classmethod
    def full(cls) -> "Configuration":
        return cls(None)

    def is_full(self) -> bool:
        return self.members is None

    def contains(self, v: RepVertex) -> bool:
        if v.frozen:
            return False
        if self.members is None:
            return True
        if RepVertex(v.node, v.level) in self.members:
            return True
        if self.period is not None:
            return any(m.node == v.node and (v.level - m.level) % self.period == 0 for m in self.members)
        return False

    def retains(self, u: RepVertex) -> bool:
        """Whether the frozen vertex u survives in the configured categories."""
        if not u.frozen:
            raise InvalidInputError("retains() takes a frozen vertex")
        return self.contains(sigma(u))

    def key(self) -> str:
        if self.members is None:
            return "ALL"
        body = ",".join(sorted(v.key() for v in self.members))
        return f"{body};period={self.period}"

    def to_json(self):
        if self.members is None:
            return None
        data = {"members": sorted(v.key() for v in self.members)}
        if self.period is not None:
            data["period"] = self.period
        return data

    @classmethod
    def from_json(cls, data) -> "Configuration":
        if data is None:
            return cls.full()
        if isinstance(data, list):
            return cls([parse_vertex(k) for k in data])
        members = [parse_vertex(k) for k in data.get("members", [])]
        return cls(members, data.get("period"))

    def __repr__(self):
        return f"Configuration({self.key()})"


@dataclass(frozen=True)
class MeshRelator:
    """The mesh relator at a non-frozen vertex: one (sigma(beta), beta) term per incoming arrow beta."""

    vertex: RepVertex
    terms: tuple  # tuple of (RepArrow, RepArrow) pairs, each a path tau(x) -> y -> x


class RepQuiver:
    """A level-window slice of the (framed) repetition quiver.

    When a configuration is supplied, frozen vertices outside the retained
    set are dropped together with their incident arrows, which is exactly
    the quotient killing their identity morphisms.
    """

    def __init__(self, q: Quiver, framed: bool, window: Window, config: Optional[Configuration] = None):
        self.q = q
        self.framed = framed
        self.window = window
        self.config = config if config is not None else Configuration.full()
        self.vertices = []
        for p in window.levels():
            for node in q._topo:
                self.vertices.append(RepVertex(node, p))
                if framed:
                    u = RepVertex(node, p, True)
                    if self.config.retains(u):
                        self.vertices.append(u)
        self._vset = set(self.vertices)
        self.arrows = []
        for v in self.vertices:
            self.arrows.extend(self.in_arrows(v))
        self._pos = {v: i for i, v in enumerate(self.vertices)}

    def has_vertex(self, v: RepVertex) -> bool:
        return v in self._vset

    def topo_position(self, v: RepVertex) -> int:
        """Position in a topological order: arrows only go forward."""
        return self._pos[v]

    def in_arrows(self, v: RepVertex):
        """Arrows of the sliced quiver ending at v (sources inside the slice)."""
        if not self.has_vertex(v):
            return []
        out = []
        if v.frozen:
            src = RepVertex(v.node, v.level)
            if src in self._vset:
                out.append(RepArrow("f", v.node, src, v))
            return out
        for a in self.q.arrows_into(v.node):
            src = RepVertex(a.source, v.level)
            if src in self._vset:
                out.append(RepArrow("a", a.id, src, v))
        for a in self.q.arrows_from(v.node):
            src = RepVertex(a.target, v.level - 1)
            if src in self._vset:
                out.append(RepArrow("s", a.id, src, v))
        if self.framed:
            src = RepVertex(v.node, v.level - 1, True)
            if src in self._vset:
                out.append(RepArrow("c", v.node, src, v))
        return out

    def out_arrows(self, v: RepVertex):
        if not self.has_vertex(v):
            return []
        out = []
        if v.frozen:
            tgt = RepVertex(v.node, v.level + 1)
            if tgt in self._vset:
                out.append(RepArrow("c", v.node, v, tgt))
            return out
        for a in self.q.arrows_from(v.node):
            tgt = RepVertex(a.target, v.level)
            if tgt in self._vset:
                out.append(RepArrow("a", a.id, v, tgt))
        for a in self.q.arrows_into(v.node):
            tgt = RepVertex(a.source, v.level + 1)
            if tgt in self._vset:
                out.append(RepArrow("s", a.id, v, tgt))
        if self.framed:
            u = RepVertex(v.node, v.level, True)
            if u in self._vset:
                out.append(RepArrow("f", v.node, v, u))
        return out

    def relator(self, x: RepVertex) -> MeshRelator:
        if x.frozen:
            raise InvalidInputError("mesh relators are attached to non-frozen vertices only")
        if not self.window.contains(tau(x)):
            raise WindowInsufficiencyError(f"relator at {x} needs tau({x}) = {tau(x)} inside the window")
        terms = tuple((sigma_arrow(self.q, b), b) for b in self.in_arrows(x))
        return MeshRelator(x, terms)


def build_repetition(q: Quiver, frame: bool, w: Window, config: Optional[Configuration] = None) -> RepQuiver:
    """All vertices and arrows of ZQ (or framed ZQ~) with levels in the window."""
    return RepQuiver(q, frame, w, config)


def mesh_relators(rq: RepQuiver, w: Optional[Window] = None):
    """One relator per non-frozen vertex x with lo < level(x) <= hi."""
    w = w or rq.window
    out = []
    for x in rq.vertices:
        if not x.frozen and w.lo < x.level <= w.hi and rq.window.contains(x):
            out.append(rq.relator(x))
    return out


def check_configuration(q: Quiver, config: Configuration, w: Window) -> dict:
    """Report on condition (R) and on the two left-exact mesh sequences.

    For every vertex x of the window, condition (R) asks for some c in C
    with a nonzero mesh morphism x -> c.  A vertex whose morphisms could
    still reach a member above the window is reported "undetermined";
    vanishing on the entire top level certifies the support was seen.

    Left-exactness is checked per interior non-frozen vertex by a rank
    computation on Hom bases: the map Hom(u,x) -> (+) Hom(u,y) over arrows
    x -> y must be injective for every test object u (and dually).
    """
    from . import mesh_hom

    ctx = mesh_hom.MeshContext(q, "RC", config)
    kzq = mesh_hom.MeshContext(q, "kZQ", None)
    rq = RepQuiver(q, True, w, config)
    nonfrozen = [v for v in rq.vertices if not v.frozen]
    report = {"condition_R": {}, "left_exact": {}}

    for x in nonfrozen:
        found = None
        support_hits_top = False
        for c in nonfrozen:
            if c.level < x.level:
                continue
            if not config.contains(c):
                continue
            if mesh_hom.hom_dim(kzq, x, c, w) > 0:
                found = c
                break
        if found is None:
            for y in nonfrozen:
                if y.level == w.hi and mesh_hom.hom_dim(kzq, x, y, w) > 0:
                    support_hits_top = True
                    break
        if found is not None:
            report["condition_R"][x.key()] = {"holds": True, "witness": found.key()}
        elif support_hits_top:
            report["condition_R"][x.key()] = {"holds": None, "detail": "undetermined: window too small"}
        else:
            report["condition_R"][x.key()] = {"holds": False}

    for x in nonfrozen:
        if x.level >= w.hi:  # outgoing mesh leaves the window
            report["left_exact"][x.key()] = {"holds": None, "detail": "undetermined: boundary vertex"}
            continue
        ok = True
        outgoing = rq.out_arrows(x)
        incoming = rq.in_arrows(x)
        for u in rq.vertices:
            if u.level > x.level:
                continue
            dom = mesh_hom.hom_dim(ctx, u, x, w)
            if dom == 0:
                continue
            rk = mesh_hom.postcomposition_rank(ctx, u, x, [a for a in outgoing], w)
            if rk != dom:
                ok = False
                break
        if ok and x.level > w.lo:
            for u in rq.vertices:
                if u.level < x.level:
                    continue
                dom = mesh_hom.hom_dim(ctx, x, u, w)
                if dom == 0:
                    continue
                rk = mesh_hom.precomposition_rank(ctx, x, u, [a for a in incoming], w)
                if rk != dom:
                    ok = False
                    break
        report["left_exact"][x.key()] = {"holds": ok}
    return report


@lru_cache(maxsize=None)
def _quiver_from_key(key: str) -> Quiver:
    return Quiver.from_json(json.loads(key))
