"""Exact combinatorial primitives used throughout the solvers.

All arithmetic is over Fraction; there are no epsilon comparisons in this
module.  Functions are pure and deterministic: ties break toward lower
node indices everywhere.
"""

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AcyclicityError, ContractError, InfeasibleError, InputError, InvariantError

ZERO = Fraction(0)


class ArcFlow:
    """Sparse nonnegative arc values over an integer node ground set.

    Zero-valued entries are never stored and self-loops are rejected, so
    iteration order and equality are well defined.
    """

    __slots__ = ("_m",)

    def __init__(self, mapping=None):
        self._m = {}
        if mapping:
            items = mapping.items() if hasattr(mapping, "items") else mapping
            for (u, v), amt in items:
                self.add(u, v, amt)

    @classmethod
    def from_paths(cls, paths, amount=Fraction(1)):
        """Sum of unit (or given-amount) flows along node sequences."""
        f = cls()
        for p in paths:
            for u, v in zip(p, p[1:]):
                f.add(u, v, amount)
        return f

    def add(self, u, v, amt):
        if u == v:
            raise InputError(f"self-loop ({u},{u}) not allowed in a flow")
        amt = Fraction(amt)
        new = self._m.get((u, v), ZERO) + amt
        if new < 0:
            raise InputError(f"flow on ({u},{v}) driven negative")
        if new == 0:
            self._m.pop((u, v), None)
        else:
            self._m[(u, v)] = new

    def __getitem__(self, arc):
        return self._m.get(arc, ZERO)

    def __contains__(self, arc):
        return arc in self._m

    def __len__(self):
        return len(self._m)

    def __bool__(self):
        return bool(self._m)

    def __eq__(self, other):
        if isinstance(other, ArcFlow):
            return self._m == other._m
        return NotImplemented

    def items(self):
        return self._m.items()

    def arcs(self):
        return self._m.keys()

    def copy(self):
        f = ArcFlow()
        f._m = dict(self._m)
        return f

    def scaled(self, factor):
        factor = Fraction(factor)
        if factor < 0:
            raise InputError("negative scale factor")
        f = ArcFlow()
        if factor:
            f._m = {arc: amt * factor for arc, amt in self._m.items()}
        return f

    def plus(self, other):
        f = self.copy()
        for (u, v), amt in other.items():
            f.add(u, v, amt)
        return f

    def out_flow(self, u):
        return sum((amt for (a, _), amt in self._m.items() if a == u), ZERO)

    def in_flow(self, v):
        return sum((amt for (_, b), amt in self._m.items() if b == v), ZERO)

    def nodes(self):
        seen = set()
        for u, v in self._m:
            seen.add(u)
            seen.add(v)
        return seen

    def cost(self, inst):
        return sum((amt * inst.d[u][v] for (u, v), amt in self._m.items()), ZERO)

    def to_jsonable(self):
        from .rational import rational_to_json

        return [[u, v, rational_to_json(amt)] for (u, v), amt in sorted(self._m.items())]

    def __repr__(self):
        inner = ", ".join(f"({u},{v}):{amt}" for (u, v), amt in sorted(self._m.items()))
        return f"ArcFlow({{{inner}}})"


@dataclass
class Decomposition:
    """Path-cycle decomposition of a flow.

    cycles: list of (node cycle, amount); the cycle [a, b, c] stands for
    arcs a->b, b->c, c->a.  paths: list of (s-t node sequence, amount).
    The union of all path arcs is acyclic.
    """

    cycles: list = field(default_factory=list)
    paths: list = field(default_factory=list)

    def as_flow(self):
        f = ArcFlow()
        for cyc, amt in self.cycles:
            for u, v in zip(cyc, cyc[1:] + cyc[:1]):
                f.add(u, v, amt)
        for p, amt in self.paths:
            for u, v in zip(p, p[1:]):
                f.add(u, v, amt)
        return f


def min_cost_perfect_matching(cost):
    """Minimum-cost perfect matching of a square rational matrix.

    cost[i][j] is the exact cost of pairing row i with column j, or None
    when the cell is forbidden.  Returns (matching, total) where
    matching[i] is the column assigned to row i.

    Shortest augmenting paths with potentials; O(m^3) exact arithmetic.
    """
    m = len(cost)
    if any(len(row) != m for row in cost):
        raise InputError("cost matrix must be square")
    if m == 0:
        return [], ZERO

    # 1-based with a virtual column 0, as in the classic formulation
    pot_u = [ZERO] * (m + 1)
    pot_v = [ZERO] * (m + 1)
    match_of_col = [0] * (m + 1)  # row matched to each column, 0 = free
    way = [0] * (m + 1)

    for i in range(1, m + 1):
        match_of_col[0] = i
        j0 = 0
        minv = [None] * (m + 1)  # None = unreachable
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = match_of_col[j0]
            delta = None
            j1 = -1
            row = cost[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c is not None:
                    cur = c - pot_u[i0] - pot_v[j]
                    if minv[j] is None or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] is not None and (delta is None or minv[j] < delta):
                    delta = minv[j]
                    j1 = j
            if delta is None:
                raise InfeasibleError("no perfect matching avoids the forbidden cells")
            for j in range(m + 1):
                if used[j]:
                    pot_u[match_of_col[j]] += delta
                    pot_v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_of_col[j0] = match_of_col[j1]
            j0 = j1

    matching = [0] * m
    for j in range(1, m + 1):
        matching[match_of_col[j] - 1] = j - 1
    total = sum((cost[i][matching[i]] for i in range(m)), ZERO)
    return matching, total


def max_flow_min_cut(capacities, source, sink, nodes=None):
    """Exact max flow and a minimum cut (sink side) in a directed graph.

    capacities: ArcFlow or {(u,v): rational}.  Returns (value, cut) where
    cut is a frozenset containing sink but not source whose incoming
    capacity equals value.  nodes widens the ground set the cut is drawn
    from (defaults to the capacity support plus the two terminals).
    """
    if source == sink:
        raise InputError("source and sink must differ")
    items = capacities.items()
    residual = {}
    node_set = set([source, sink])
    for (u, v), cap in items:
        if cap < 0:
            raise InputError(f"negative capacity on ({u},{v})")
        if cap == 0 or u == v:
            continue
        residual.setdefault(u, {})[v] = residual.get(u, {}).get(v, ZERO) + cap
        residual.setdefault(v, {}).setdefault(u, ZERO)
        node_set.add(u)
        node_set.add(v)
    if nodes is not None:
        node_set.update(nodes)

    value = ZERO
    while True:
        # BFS for the shortest augmenting path, neighbors in index order
        parent = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == sink:
                break
            for v in sorted(residual.get(u, {})):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        bottleneck = None
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap = residual[u][v]
            if bottleneck is None or cap < bottleneck:
                bottleneck = cap
            v = u
        v = sink
        while parent[v] is not None:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        value += bottleneck

    reachable = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, cap in residual.get(u, {}).items():
            if cap > 0 and v not in reachable:
                reachable.add(v)
                queue.append(v)
    cut = frozenset(v for v in node_set if v not in reachable)
    return value, cut


def max_bipartite_matching(adj):
    """Maximum-cardinality matching {left: right} via augmenting paths.

    adj maps each left node to an iterable of right nodes.
    """
    adj = {u: sorted(set(vs)) for u, vs in adj.items()}
    match_right = {}

    def try_augment(u, visited):
        for v in adj[u]:
            if v in visited:
                continue
            visited.add(v)
            if v not in match_right or try_augment(match_right[v], visited):
                match_right[v] = u
                return True
        return False

    for u in sorted(adj):
        try_augment(u, set())
    return {u: v for v, u in match_right.items()}


def _find_cycle(succ):
    """One directed cycle in an adjacency {u: set of v}, or None.

    Deterministic: DFS roots and neighbors are scanned in ascending order.
    """
    color = {}
    for root in sorted(succ):
        if color.get(root):
            continue
        stack = [(root, iter(sorted(succ[root])))]
        color[root] = 1
        trail = [root]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in succ:
                    continue
                c = color.get(nxt, 0)
                if c == 1:
                    return trail[trail.index(nxt):]
                if c == 0:
                    color[nxt] = 1
                    trail.append(nxt)
                    stack.append((nxt, iter(sorted(succ[nxt]))))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                trail.pop()
                stack.pop()
    return None


def decompose_flow(flow, s, t):
    """Split a flow into cycles plus s-t paths whose union is acyclic.

    Cycles are peeled first (each subtracts the minimum arc value on a
    deterministically-chosen cycle); the acyclic remainder then splits
    into s-t paths.  The weighted sum of the parts reproduces the input
    exactly.
    """
    if s == t:
        raise InputError("s and t must differ")
    work = flow.copy()
    for u in work.nodes():
        if u in (s, t):
            continue
        if work.in_flow(u) != work.out_flow(u):
            raise ContractError(f"flow imbalance at interior node {u}")
    excess = work.out_flow(s) - work.in_flow(s)
    deficit = work.in_flow(t) - work.out_flow(t)
    if excess != deficit or excess < 0:
        raise ContractError("source excess must equal sink deficit and be nonnegative")

    decomp = Decomposition()

    def succ_map():
        m = {}
        for (u, v) in work.arcs():
            m.setdefault(u, set()).add(v)
            m.setdefault(v, set())
        return m

    while True:
        cycle = _find_cycle(succ_map())
        if cycle is None:
            break
        amt = min(work[(u, v)] for u, v in zip(cycle, cycle[1:] + cycle[:1]))
        for u, v in zip(cycle, cycle[1:] + cycle[:1]):
            work.add(u, v, -amt)
        decomp.cycles.append((list(cycle), amt))

    while work.out_flow(s) > 0:
        path = [s]
        u = s
        while u != t:
            nxt = min(v for (a, v) in work.arcs() if a == u)
            path.append(nxt)
            u = nxt
        amt = min(work[(u, v)] for u, v in zip(path, path[1:]))
        for u, v in zip(path, path[1:]):
            work.add(u, v, -amt)
        decomp.paths.append((path, amt))

    if work:
        raise InvariantError("flow not fully decomposed", state=work)
    return decomp


def topological_order(arcs, nodes):
    """Node ordering with every arc pointing forward; ties by index.

    Raises AcyclicityError (carrying one cycle) if the arcs contain one.
    """
    import heapq

    nodes = sorted(set(nodes))
    indeg = {u: 0 for u in nodes}
    succ = {u: [] for u in nodes}
    arc_set = set()
    for u, v in arcs:
        if (u, v) in arc_set or u == v:
            if u == v:
                raise InputError(f"self-loop ({u},{u})")
            continue
        arc_set.add((u, v))
        succ[u].append(v)
        indeg[v] += 1
    heap = [u for u in nodes if indeg[u] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != len(nodes):
        remaining = {u: set(v for v in succ[u] if indeg[v] > 0)
                     for u in nodes if indeg[u] > 0}
        cycle = _find_cycle(remaining)
        raise AcyclicityError("arc set contains a cycle", cycle=cycle)
    return order


def euler_tour(arcs, start):
    """Closed walk from start using each arc of the multiset exactly once.

    arcs is an iterable of (u, v) pairs (repetitions allowed) or a Counter.
    Requires in-degree == out-degree everywhere and a connected support.
    """
    if isinstance(arcs, Counter):
        multi = Counter({a: c for a, c in arcs.items() if c})
    else:
        multi = Counter(arcs)
    if not multi:
        return []
    for (u, v), c in multi.items():
        if u == v:
            raise InputError(f"self-loop ({u},{u})")
        if c < 0:
            raise InputError("negative multiplicity")

    indeg = Counter()
    outdeg = Counter()
    support = set()
    for (u, v), c in multi.items():
        outdeg[u] += c
        indeg[v] += c
        support.add(u)
        support.add(v)
    for u in support:
        if indeg[u] != outdeg[u]:
            raise ContractError(f"node {u} is unbalanced: in {indeg[u]} out {outdeg[u]}")
    if start not in support:
        raise InputError(f"start node {start} carries no arcs")

    undirected = {u: set() for u in support}
    for u, v in multi:
        undirected[u].add(v)
        undirected[v].add(u)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in undirected[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if seen != support:
        raise ContractError("arc multiset support is disconnected")

    adj = {u: deque() for u in support}
    for (u, v) in sorted(multi):
        adj[u].extend([v] * multi[(u, v)])

    # Hierholzer, iterative
    stack = [start]
    walk = []
    while stack:
        u = stack[-1]
        if adj[u]:
            stack.append(adj[u].popleft())
        else:
            walk.append(stack.pop())
    walk.reverse()
    tour = list(zip(walk, walk[1:]))
    if Counter(tour) != multi:
        raise InvariantError("Euler tour failed to use each arc exactly once")
    return tour


def shortcut(walk):
    """Drop every repeated node after its first occurrence.

    Under the triangle inequality the resulting simple sequence never
    costs more than the walk.
    """
    seen = set()
    out = []
    for v in walk:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def reachability(arcs, nodes):
    """Transitive closure of an acyclic arc set as a set of (u, v) pairs."""
    nodes = sorted(set(nodes))
    order = topological_order(arcs, nodes)  # raises on cycles
    succ = {u: set() for u in nodes}
    for u, v in arcs:
        succ[u].add(v)
    reach = {u: set() for u in nodes}
    for u in reversed(order):
        acc = set()
        for v in succ[u]:
            acc.add(v)
            acc |= reach[v]
        reach[u] = acc
    return {(u, v) for u in nodes for v in reach[u]}
