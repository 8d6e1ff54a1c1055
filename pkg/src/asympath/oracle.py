"""Exact exponential-time baselines for verifying bounds at desk scale."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeLimitError

ZERO = Fraction(0)

ATSPP_CAP = 18
LATENCY_CAP = 16
K_PERSON_CAP = 9


@dataclass
class ExactResult:
    """Optimal value plus one witness achieving it.

    order is a node sequence for the path problems and a list of node
    sequences for the k-person problem.
    """

    value: Fraction
    order: list


def exact_atspp(inst):
    """Cheapest Hamiltonian s-t path by subset dynamic programming."""
    if inst.n > ATSPP_CAP:
        raise SizeLimitError(f"exact_atspp capped at n <= {ATSPP_CAP}")
    s, t, d = inst.s, inst.t, inst.d
    interior = [v for v in range(inst.n) if v not in (s, t)]
    m = len(interior)
    if m == 0:
        return ExactResult(value=d[s][t], order=[s, t])

    # dp[(mask, i)] = cheapest s -> interior[i] route visiting exactly mask
    dp = {}
    parent = {}
    for i, v in enumerate(interior):
        dp[(1 << i, i)] = d[s][v]
    for mask in range(1, 1 << m):
        for i in range(m):
            if not mask >> i & 1:
                continue
            cur = dp.get((mask, i))
            if cur is None:
                continue
            vi = interior[i]
            row = d[vi]
            for j in range(m):
                if mask >> j & 1:
                    continue
                nmask = mask | 1 << j
                cand = cur + row[interior[j]]
                key = (nmask, j)
                if key not in dp or cand < dp[key]:
                    dp[key] = cand
                    parent[key] = i
    full = (1 << m) - 1
    best = None
    best_i = None
    for i in range(m):
        cand = dp[(full, i)] + d[interior[i]][t]
        if best is None or cand < best:
            best = cand
            best_i = i
    order = [t]
    mask, i = full, best_i
    while True:
        order.append(interior[i])
        prev = parent.get((mask, i))
        if prev is None:
            break
        mask ^= 1 << i
        i = prev
    order.append(s)
    order.reverse()
    return ExactResult(value=best, order=order)


def exact_latency(inst, weights=None):
    """Minimum total weighted latency by subset dynamic programming.

    Traversing an arc charges its length times the total weight of all
    still-unvisited nodes, so the accumulated cost at the end equals the
    sum of per-node weighted latencies.
    """
    if inst.n > LATENCY_CAP:
        raise SizeLimitError(f"exact_latency capped at n <= {LATENCY_CAP}")
    s, t, d = inst.s, inst.t, inst.d

    def w(v):
        if weights is not None:
            return Fraction(weights[v])
        return inst.weight(v)

    interior = [v for v in range(inst.n) if v not in (s, t)]
    m = len(interior)
    # weight still waiting once mask is visited and we sit at some node
    total_interior = sum((w(v) for v in interior), ZERO)

    if m == 0:
        return ExactResult(value=w(t) * d[s][t], order=[s, t])

    def pending(mask):
        acc = w(t)
        for i in range(m):
            if not mask >> i & 1:
                acc += w(interior[i])
        return acc

    dp = {}
    parent = {}
    for i, v in enumerate(interior):
        dp[(1 << i, i)] = d[s][v] * (total_interior + w(t))
    for mask in range(1, 1 << m):
        for i in range(m):
            if not mask >> i & 1:
                continue
            cur = dp.get((mask, i))
            if cur is None:
                continue
            vi = interior[i]
            for j in range(m):
                if mask >> j & 1:
                    continue
                nmask = mask | 1 << j
                cand = cur + d[vi][interior[j]] * pending(mask)
                key = (nmask, j)
                if key not in dp or cand < dp[key]:
                    dp[key] = cand
                    parent[key] = i
    full = (1 << m) - 1
    best = None
    best_i = None
    for i in range(m):
        cand = dp[(full, i)] + d[interior[i]][t] * w(t)
        if best is None or cand < best:
            best = cand
            best_i = i
    order = [t]
    mask, i = full, best_i
    while True:
        order.append(interior[i])
        prev = parent.get((mask, i))
        if prev is None:
            break
        mask ^= 1 << i
        i = prev
    order.append(s)
    order.reverse()
    return ExactResult(value=best, order=order)


def exact_k_person(inst, k):
    """Minimum total cost of exactly k s-t paths covering every node.

    Exhaustive: each interior node is inserted at every position of every
    path.  Unused path slots count d(s,t) apiece, matching the solver's
    padding convention.
    """
    if inst.n > K_PERSON_CAP:
        raise SizeLimitError(f"exact_k_person capped at n <= {K_PERSON_CAP}")
    if k < 1:
        raise SizeLimitError("k must be >= 1")
    s, t = inst.s, inst.t
    interior = [v for v in range(inst.n) if v not in (s, t)]
    dst = inst.d[s][t]

    best = [None, None]

    def cost_of(groups):
        total = ZERO
        for g in groups:
            if g:
                total += inst.path_cost([s, *g, t])
            else:
                total += dst
        return total

    def place(idx, groups):
        if idx == len(interior):
            total = cost_of(groups)
            if best[0] is None or total < best[0]:
                best[0] = total
                best[1] = [[s, *g, t] for g in groups]
            return
        v = interior[idx]
        for g in groups:
            for pos in range(len(g) + 1):
                g.insert(pos, v)
                place(idx + 1, groups)
                g.pop(pos)

    place(0, [[] for _ in range(k)])
    return ExactResult(value=best[0], order=best[1])
