"""Critical subintervals and the overlapping graph of the map on the recurrent set.

On the recurrent trace the dissipative step is an interval exchange.  Its
discontinuities project onto points ``{j*alpha}`` of the circle; cutting every
square's edge at those points gives the critical subintervals.  The
overlapping graph joins two of them when one step carries a positive length of
one onto the other.  A connected graph certifies that the map is ergodic
(indeed uniquely ergodic); a disconnected graph exhibits an invariant union of
vertices of intermediate measure, so the map is not ergodic.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import EndpointsNotInOrbit
from .flow import InducedMap, TransferMap, build_dissipative_map, first_return_map
from .intervals import IntervalSet
from .numeric import Coord
from .regions import RegionSet
from .surface import SystemInstance

__all__ = [
    "OverlappingGraph",
    "analyse_recurrent_set",
    "critical_decomposition",
    "detect_orbit_depth",
    "endpoint_decomposition",
    "induced_on_region",
    "is_minimal",
    "overlapping_graph",
]


def induced_on_region(instance: SystemInstance, region: RegionSet, fmap: TransferMap | None = None) -> InducedMap:
    """The dissipative step restricted to an invariant region's trace."""
    f = fmap or build_dissipative_map(instance)
    return first_return_map(f, region.trace)


def _endpoints(induced: InducedMap) -> list:
    pts = []
    for p in induced.pieces:
        pts.extend((p.lo, p.hi, p.lo + p.shift, p.hi + p.shift))
    return pts


def detect_orbit_depth(induced: InducedMap) -> int:
    """The least l0 with every endpoint projecting into ``{-a, 0, a, ..., l0*a}``."""
    l0 = 0
    for x in _endpoints(induced):
        if x.rat.denominator != 1 or x.mult < -1:
            raise EndpointsNotInOrbit(f"endpoint {x} does not project onto {{j*alpha}} with j >= -1")
        l0 = max(l0, x.mult)
    return l0


def critical_decomposition(induced: InducedMap, ell0: int | None = None) -> list:
    """Lifted critical subintervals intersected with the domain, in order."""
    alpha = induced.alpha
    if ell0 is None:
        ell0 = detect_orbit_depth(induced)
    else:
        for x in _endpoints(induced):
            if x.rat.denominator != 1 or not -1 <= x.mult <= ell0:
                raise EndpointsNotInOrbit(f"endpoint {x} is not among {{j*alpha}}, -1 <= j <= {ell0}")
    step = Coord._mk(0, 1, alpha)
    pts = sorted({(step * j).mod1() for j in range(-1, ell0 + 1)} | {Coord.of(0, alpha)})
    return _lift(induced, pts)


def _lift(induced: InducedMap, pts) -> list:
    cuts = sorted({p + i for i in range(induced.s) for p in pts})
    return induced.domain.split(cuts)


def endpoint_decomposition(induced: InducedMap) -> list:
    """Cells cut at the projections of every endpoint (used off the orbit case)."""
    pts = sorted({x.mod1() for x in _endpoints(induced)} | {Coord.of(0, induced.alpha)})
    return _lift(induced, pts)


@dataclass
class OverlappingGraph:
    vertices: list
    directed: set = field(default_factory=set)
    partition: str = "critical"

    @property
    def edges(self) -> set:
        out = set()
        for u, v in self.directed:
            if u != v:
                out.add((min(u, v), max(u, v)))
        return out

    def components(self) -> list:
        adj = {i: set() for i in range(len(self.vertices))}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, comps = set(), []
        for start in adj:
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_dot(self) -> str:
        lines = ["graph overlapping {"]
        for i, (lo, hi) in enumerate(self.vertices):
            lines.append(f'  v{i} [label="[{lo}, {hi})"];')
        for u, v in sorted(self.edges):
            lines.append(f"  v{u} -- v{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def overlapping_graph(induced: InducedMap, vertices: list | None = None) -> OverlappingGraph:
    """Graph on the cells with an edge wherever the map overlaps them in positive length."""
    partition = "critical"
    if vertices is None:
        try:
            vertices = critical_decomposition(induced)
        except EndpointsNotInOrbit:
            vertices = endpoint_decomposition(induced)
            partition = "endpoints"
    los = [lo for lo, _ in vertices]

    directed = set()
    for u, (lo, hi) in enumerate(vertices):
        for p in induced.pieces:
            a = lo if p.lo < lo else p.lo
            b = hi if hi < p.hi else p.hi
            if not a < b:
                continue
            ia, ib = a + p.shift, b + p.shift
            k = max(bisect_right(los, ia) - 1, 0)
            while k < len(vertices) and vertices[k][0] < ib:
                c, d = vertices[k]
                if (ia if c < ia else c) < (ib if ib < d else d):
                    directed.add((u, k))
                k += 1
    return OverlappingGraph(list(vertices), directed, partition)


def is_minimal(graph: OverlappingGraph) -> bool:
    return graph.is_connected()


def analyse_recurrent_set(instance: SystemInstance, region: RegionSet) -> dict:
    """Minimality verdict for the recurrent set with the graph that supports it.

    ``minimal`` is True only when the graph on the critical partition is
    connected, False when any partition's graph is disconnected, and None when
    the fallback partition is connected (no certificate either way).
    """
    induced = induced_on_region(instance, region)
    graph = overlapping_graph(induced)
    connected = graph.is_connected()
    if connected:
        verdict = True if graph.partition == "critical" else None
    else:
        verdict = False
    return {
        "minimal": verdict,
        "partition": graph.partition,
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "components": len(graph.components()),
        "graph": graph,
        "induced": induced,
    }
