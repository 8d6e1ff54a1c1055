"""Asymmetric metric instances: representation, validation, and generators.

An instance is a complete directed graph on nodes 0..n-1 with exact
rational distances satisfying the directed triangle inequality, plus a
designated source s and sink t.  Generators only ever emit integers, so
downstream bound checks stay exact.
"""

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, InputError
from .rational import as_fraction, rational_to_json


@dataclass(frozen=True)
class MetricInstance:
    """Complete asymmetric metric with source s and sink t.

    d is an n x n matrix of nonnegative rationals with zero diagonal.
    weights, when present, are positive per-node rationals used by the
    weighted latency objective.
    """

    n: int
    s: int
    t: int
    d: tuple
    weights: tuple = None

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"instance needs at least 2 nodes, got {self.n}")
        if len(self.d) != self.n or any(len(row) != self.n for row in self.d):
            raise InputError("distance matrix is not n x n")
        if not (0 <= self.s < self.n and 0 <= self.t < self.n):
            raise InputError("s or t out of range")
        if self.s == self.t:
            raise InputError("s and t must be distinct")
        if self.weights is not None:
            if len(self.weights) != self.n:
                raise InputError("weights length differs from n")
            if any(w <= 0 for w in self.weights):
                raise InputError("node weights must be positive")

    def dist(self, u, v):
        return self.d[u][v]

    def path_cost(self, nodes):
        """Total distance along a node sequence."""
        return sum((self.d[u][v] for u, v in zip(nodes, nodes[1:])), Fraction(0))

    def weight(self, v):
        return self.weights[v] if self.weights is not None else Fraction(1)

    def nodes(self):
        return range(self.n)

    def arcs(self):
        for u in range(self.n):
            for v in range(self.n):
                if u != v:
                    yield u, v


@dataclass
class ValidationReport:
    """Outcome of validate(): ok iff violations is empty.

    Violation entries are tagged tuples:
      ("triangle", u, v, w)  d[u][w] > d[u][v] + d[v][w]
      ("negative", u, v)     d[u][v] < 0
      ("diagonal", u)        d[u][u] != 0
    """

    ok: bool
    violations: list


def validate(inst):
    """Check nonnegativity, zero diagonal, and every triangle inequality."""
    violations = []
    d = inst.d
    for u in range(inst.n):
        if d[u][u] != 0:
            violations.append(("diagonal", u))
        for v in range(inst.n):
            if d[u][v] < 0:
                violations.append(("negative", u, v))
    for u in range(inst.n):
        for v in range(inst.n):
            if u == v:
                continue
            duv = d[u][v]
            row_w = d[v]
            for w in range(inst.n):
                if w == u or w == v:
                    continue
                if d[u][w] > duv + row_w[w]:
                    violations.append(("triangle", u, v, w))
    return ValidationReport(ok=not violations, violations=violations)


def metric_closure(n, arcs, s, t, weights=None):
    """Shortest-path metric of a weighted digraph given as {(u,v): cost}.

    Every ordered pair must be connected; an unreachable pair raises
    InfeasibleError naming the pair.
    """
    if n < 2:
        raise InputError("metric_closure needs n >= 2")
    inf = None
    dist = [[inf] * n for _ in range(n)]
    for u in range(n):
        dist[u][u] = Fraction(0)
    for (u, v), w in arcs.items():
        if u == v:
            continue
        w = as_fraction(w)
        if w < 0:
            raise InputError(f"negative arc weight on ({u}, {v})")
        if dist[u][v] is None or w < dist[u][v]:
            dist[u][v] = w
    for k in range(n):
        dk = dist[k]
        for u in range(n):
            duk = dist[u][k]
            if duk is None:
                continue
            du = dist[u]
            for v in range(n):
                if dk[v] is None:
                    continue
                alt = duk + dk[v]
                if du[v] is None or alt < du[v]:
                    du[v] = alt
    for u in range(n):
        for v in range(n):
            if dist[u][v] is None:
                raise InfeasibleError(f"node {v} is unreachable from node {u}")
    return MetricInstance(
        n=n,
        s=s,
        t=t,
        d=tuple(tuple(row) for row in dist),
        weights=tuple(as_fraction(w) for w in weights) if weights else None,
    )


def gen_random(n, seed, max_weight):
    """Random complete digraph with integer arc weights in [1, max_weight],
    closed under shortest paths.  s=0, t=n-1.  Deterministic per seed."""
    if n < 2:
        raise InputError("gen_random needs n >= 2")
    if max_weight < 1:
        raise InputError("max_weight must be >= 1")
    rng = random.Random(seed)
    arcs = {}
    for u in range(n):
        for v in range(n):
            if u != v:
                arcs[(u, v)] = Fraction(rng.randint(1, max_weight))
    return metric_closure(n, arcs, s=0, t=n - 1)


# Digraph behind the bad-gap family: unit arcs form two parallel branches
# 0->1->2->5 and 0->3->4->5 with 2-cycles {1,2} and {3,4}; one return arc
# 5->0 of cost D makes the graph strongly connected.
_BAD_GAP_UNIT_ARCS = (
    (0, 1), (1, 2), (2, 1), (2, 5),
    (0, 3), (3, 4), (4, 3), (4, 5),
)


def gen_bad_gap(D):
    """Six-node family whose half-cut LP value stays at 5 while every
    Hamiltonian s-t path costs at least D."""
    if not isinstance(D, int) or D < 10:
        raise InputError("gen_bad_gap needs an integer D >= 10")
    arcs = {arc: Fraction(1) for arc in _BAD_GAP_UNIT_ARCS}
    arcs[(5, 0)] = Fraction(D)
    return metric_closure(6, arcs, s=0, t=5)


def bad_gap_flow():
    """The fractional arc assignment that certifies gen_bad_gap's LP value 5.

    Half a unit on the six branch arcs, one unit on each 2-cycle's forward
    arc; feasible for the relaxation with cut requirement 1/2.
    """
    half = Fraction(1, 2)
    one = Fraction(1)
    return {
        (0, 1): half, (2, 1): half, (2, 5): half,
        (0, 3): half, (4, 3): half, (4, 5): half,
        (1, 2): one, (3, 4): one,
    }


def induced_subinstance(inst, W, s2, t2):
    """Restrict distances to the node set W with new endpoints s2, t2.

    Returns (sub_instance, mapping) where mapping[i] is the original index
    of sub-instance node i.  Distances are already metric, so no
    recomputation happens.
    """
    W = set(W)
    if s2 not in W or t2 not in W:
        raise InputError("s2 and t2 must belong to W")
    if s2 == t2:
        raise InputError("s2 and t2 must be distinct")
    mapping = sorted(W)
    index = {orig: i for i, orig in enumerate(mapping)}
    d = tuple(tuple(inst.d[u][v] for v in mapping) for u in mapping)
    weights = None
    if inst.weights is not None:
        weights = tuple(inst.weights[u] for u in mapping)
    sub = MetricInstance(n=len(mapping), s=index[s2], t=index[t2], d=d, weights=weights)
    return sub, mapping


def instance_to_json(inst):
    """Serialize to the package's JSON schema (rationals as int or "p/q")."""
    doc = {
        "n": inst.n,
        "s": inst.s,
        "t": inst.t,
        "d": [[rational_to_json(x) for x in row] for row in inst.d],
    }
    if inst.weights is not None:
        doc["weights"] = [rational_to_json(w) for w in inst.weights]
    return json.dumps(doc, indent=1)


def instance_from_json(text):
    doc = json.loads(text)
    try:
        n = doc["n"]
        d = tuple(tuple(as_fraction(x) for x in row) for row in doc["d"])
        weights = None
        if doc.get("weights") is not None:
            weights = tuple(as_fraction(w) for w in doc["weights"])
        return MetricInstance(n=n, s=doc["s"], t=doc["t"], d=d, weights=weights)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed instance JSON: {exc}") from exc


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(fh.read())


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))
        fh.write("\n")
