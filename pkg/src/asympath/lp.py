"""LP relaxations: the cut-requirement relaxation LP(alpha) for s-t path
problems and the ordering/flow relaxation for directed latency, both solved
to exact rational optimality with cutting planes.

Violated cut constraints are found by exact max-flow separation; rows are
appended to a solved tableau and reoptimized with dual simplex, so each
round costs only a handful of pivots.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateLatencyError, InputError, InvariantError
from .graphs import ArcFlow, max_flow_min_cut
from .rational import rational_to_json
from .simplex import OPTIMAL, LpModel, SimplexSolver

ZERO = Fraction(0)
ONE = Fraction(1)


def _separation_cap(n):
    # generous cap on cutting-plane rounds; exceeded only on a logic error
    return 10 * n * n


# ---------------------------------------------------------------------------
# LP(alpha): min sum d_e x_e with every s-avoiding cut receiving >= alpha
# ---------------------------------------------------------------------------


def build_alpha_lp(inst, alpha):
    """Degree constraints plus singleton cuts of the cut relaxation.

    The remaining (exponentially many) cut constraints are separated
    lazily by solve_lp_alpha.  Returns (model, var_index) with var_index
    mapping each arc to its column.
    """
    alpha = Fraction(alpha)
    if not ZERO < alpha <= ONE:
        raise InputError("alpha must lie in (0, 1]")
    n, s, t = inst.n, inst.s, inst.t
    model = LpModel()
    xv = {}
    for u, v in inst.arcs():
        xv[(u, v)] = model.add_var(f"x[{u},{v}]", obj=inst.d[u][v])

    for u in range(n):
        if u in (s, t):
            continue
        coeffs = {xv[(u, w)]: ONE for w in range(n) if w != u}
        for w in range(n):
            if w != u:
                coeffs[xv[(w, u)]] = -ONE
        model.add_eq(coeffs, ZERO)
    model.add_eq({xv[(s, w)]: ONE for w in range(n) if w != s}, ONE)
    model.add_eq({xv[(w, t)]: ONE for w in range(n) if w != t}, ONE)
    model.add_eq({xv[(w, s)]: ONE for w in range(n) if w != s}, ZERO)
    model.add_eq({xv[(t, w)]: ONE for w in range(n) if w != t}, ZERO)
    for v in range(n):
        if v == s:
            continue
        model.add_ge({xv[(w, v)]: ONE for w in range(n) if w != v}, alpha)
    return model, xv


def solve_lp_alpha(inst, alpha):
    """Exact optimum of the cut relaxation with requirement alpha in (0, 1].

    Starts from degree constraints plus singleton cuts and separates the
    remaining cut constraints with max-flow until none are violated.
    Returns (value, flow) where flow is an optimal fractional solution.
    """
    alpha = Fraction(alpha)
    n, s = inst.n, inst.s
    model, xv = build_alpha_lp(inst, alpha)
    solver = SimplexSolver(model)
    sol = solver.solve()
    if sol.status != OPTIMAL:
        raise InvariantError(f"cut relaxation reported {sol.status} on a complete metric")

    enforced = set()
    for _ in range(_separation_cap(n)):
        flow = _extract_flow(sol, inst)
        violated = set()
        for v in range(n):
            if v == s:
                continue
            value, cut = max_flow_min_cut(flow, s, v, nodes=range(n))
            if value < alpha:
                if cut in enforced:
                    # rows added in earlier rounds hold at an optimal tableau
                    raise InvariantError("an enforced cut row is violated")
                violated.add(cut)
        if not violated:
            return sol.objective, flow
        enforced |= violated
        for cut in sorted(violated, key=sorted):
            coeffs = {
                xv[(u, w)]: ONE
                for u in range(n)
                if u not in cut
                for w in cut
                if w != u
            }
            solver.add_ge_cut(coeffs, alpha)
        sol = solver.reoptimize()
        if sol.status != OPTIMAL:
            raise InvariantError("cut addition made the relaxation infeasible")
    raise InvariantError("cut separation did not converge within the round cap")


def _extract_flow(sol, inst):
    flow = ArcFlow()
    for u, v in inst.arcs():
        val = sol.values[f"x[{u},{v}]"]
        if val:
            flow.add(u, v, val)
    return flow


def flow_alpha_violations(nodes, s, t, flow, alpha):
    """All ways a flow fails feasibility for the cut relaxation.

    nodes is the ground set (an int n means 0..n-1).  Returns a list of
    human-readable violation strings; empty means the flow satisfies the
    degree equalities and every cut requirement.
    """
    if isinstance(nodes, int):
        nodes = range(nodes)
    nodes = sorted(nodes)
    alpha = Fraction(alpha)
    violations = []
    for u in nodes:
        out = flow.out_flow(u)
        inn = flow.in_flow(u)
        if u == s:
            if out != ONE:
                violations.append(f"source out-flow {out} != 1")
            if inn != ZERO:
                violations.append(f"source in-flow {inn} != 0")
        elif u == t:
            if inn != ONE:
                violations.append(f"sink in-flow {inn} != 1")
            if out != ZERO:
                violations.append(f"sink out-flow {out} != 0")
        elif out != inn:
            violations.append(f"imbalance at {u}: out {out} in {inn}")
    if not set(flow.nodes()) <= set(nodes):
        violations.append("flow leaves the node set")
        return violations
    for v in nodes:
        if v == s:
            continue
        value, cut = max_flow_min_cut(flow, s, v, nodes=nodes)
        if value < alpha:
            violations.append(f"cut {sorted(cut)} receives {value} < {alpha}")
    return violations


# ---------------------------------------------------------------------------
# Directed-latency LP
# ---------------------------------------------------------------------------


@dataclass
class LatencyLpSolution:
    """Exact optimal solution of the latency relaxation.

    x maps every ordered node pair to its order value, x3 every ordered
    triple, flows each target v != s to its unit s-v flow, ell each
    v != s to its fractional latency.
    """

    n: int
    s: int
    t: int
    x: dict
    x3: dict
    flows: dict
    ell: dict
    objective: Fraction
    weighted: bool = False
    rounds: int = 0

    def verify(self, inst):
        """Exact check of every constraint family; returns violations."""
        bad = []
        n, s, t = self.n, self.s, self.t
        d = inst.d

        for (u, v), val in self.x.items():
            if val < 0:
                bad.append(f"x[{u},{v}] negative")
        for key, val in self.x3.items():
            if val < 0:
                bad.append(f"x3{key} negative")

        for v in range(n):
            if v == s:
                continue
            fv = self.flows[v]
            lat = self.ell[v]
            if lat < 0:
                bad.append(f"ell[{v}] negative")
            if lat < fv.cost(inst):
                bad.append(f"ell[{v}] below its flow cost")
            if self.ell[t] < lat:
                bad.append(f"ell[{t}] < ell[{v}]")
            # unit flow out of the source and into the target
            if fv.out_flow(s) != ONE or fv.in_flow(v) != ONE:
                bad.append(f"flow {v} lacks unit source/target value")
            if fv.in_flow(s) != ZERO or fv.out_flow(v) != ZERO:
                bad.append(f"flow {v} enters the source or leaves its target")
            for u in range(n):
                if u in (s, v):
                    continue
                if fv.in_flow(u) != fv.out_flow(u):
                    bad.append(f"flow {v} unbalanced at {u}")
            for u in range(n):
                if u == v:
                    continue
                total = sum((fv[(u, w)] for w in range(n) if w != u), ZERO)
                if total != self.x[(u, v)]:
                    bad.append(f"flow {v} through {u} != x[{u},{v}]")

        for u in range(n):
            for w in range(n):
                if u == w:
                    continue
                if self.x[(u, w)] + self.x[(w, u)] != ONE:
                    bad.append(f"x[{u},{w}] + x[{w},{u}] != 1")
                for v in range(n):
                    if v in (u, w):
                        continue
                    total = self.x3[(v, u, w)] + self.x3[(u, v, w)] + self.x3[(u, w, v)]
                    if total != self.x[(u, w)]:
                        bad.append(f"triple split of x[{u},{w}] via {v} broken")
                    if v != s:
                        coef = d[s][u] + d[u][w] + d[w][v]
                        if self.ell[v] < coef * self.x3[(u, w, v)]:
                            bad.append(f"ell[{v}] below prefix bound via ({u},{w})")
        for u in range(n):
            if u in (s, t):
                continue
            if self.x[(s, u)] != ONE or self.x[(u, t)] != ONE:
                bad.append(f"endpoint order values wrong for {u}")

        for v in range(n):
            if v == s:
                continue
            fv = self.flows[v]
            for y in range(n):
                if y in (s, v, t):
                    continue
                need = self.x[(y, v)]
                if need == 0:
                    continue
                value, _ = max_flow_min_cut(fv, s, y, nodes=range(n))
                if value < need:
                    bad.append(f"flow {v} sends {value} < x[{y},{v}] through {y}")
        return bad

    def to_jsonable(self):
        return {
            "objective": rational_to_json(self.objective),
            "ell": {str(v): rational_to_json(val) for v, val in sorted(self.ell.items())},
            "x": {
                f"{u},{w}": rational_to_json(val)
                for (u, w), val in sorted(self.x.items())
                if val
            },
            "rounds": self.rounds,
        }


def build_latency_lp(inst, weighted=False, include_flow_domination=False):
    """The full ordering/flow relaxation as an explicit LpModel.

    Contains the latency, pairwise-order, triple-order, and per-target
    flow variables with every constraint family except the separated cut
    family (added lazily by solve_latency_lp) and, by default, the
    flow-domination rows f[v] <= f[t] that the bound analysis never uses;
    pass include_flow_domination=True to add them back for experiments.
    """
    n, s, t = inst.n, inst.s, inst.t
    d = inst.d
    model = LpModel()
    lv = {}
    for v in range(n):
        if v != s:
            lv[v] = model.add_var(f"l[{v}]", obj=inst.weight(v) if weighted else ONE)
    xp = {}
    for u in range(n):
        for w in range(n):
            if u != w:
                xp[(u, w)] = model.add_var(f"x[{u},{w}]")
    x3 = {}
    for u in range(n):
        for v in range(n):
            for w in range(n):
                if len({u, v, w}) == 3:
                    x3[(u, v, w)] = model.add_var(f"x3[{u},{v},{w}]")
    fv = {}
    for v in range(n):
        if v == s:
            continue
        fv[v] = {}
        for u in range(n):
            for w in range(n):
                if u != w:
                    fv[v][(u, w)] = model.add_var(f"f[{v}][{u},{w}]")

    for v in range(n):
        if v == s:
            continue
        coeffs = {lv[v]: ONE}
        for (u, w), idx in fv[v].items():
            if d[u][w]:
                coeffs[idx] = -d[u][w]
        model.add_ge(coeffs, ZERO)
        if v != t:
            model.add_ge({lv[t]: ONE, lv[v]: -ONE}, ZERO)

    for u in range(n):
        for w in range(n):
            if u == w:
                continue
            for v in range(n):
                if v in (u, w):
                    continue
                if v != s:
                    coef = d[s][u] + d[u][w] + d[w][v]
                    model.add_ge({lv[v]: ONE, x3[(u, w, v)]: -coef}, ZERO)
                model.add_eq(
                    {
                        xp[(u, w)]: ONE,
                        x3[(v, u, w)]: -ONE,
                        x3[(u, v, w)]: -ONE,
                        x3[(u, w, v)]: -ONE,
                    },
                    ZERO,
                )
            if u < w:
                model.add_eq({xp[(u, w)]: ONE, xp[(w, u)]: ONE}, ONE)
    for u in range(n):
        if u in (s, t):
            continue
        model.add_eq({xp[(s, u)]: ONE}, ONE)
        model.add_eq({xp[(u, t)]: ONE}, ONE)

    for v in range(n):
        if v == s:
            continue
        arcs = fv[v]
        for u in range(n):
            if u in (s, v):
                continue
            coeffs = {}
            for w in range(n):
                if w != u:
                    coeffs[arcs[(w, u)]] = coeffs.get(arcs[(w, u)], ZERO) + ONE
                    coeffs[arcs[(u, w)]] = coeffs.get(arcs[(u, w)], ZERO) - ONE
            model.add_eq(coeffs, ZERO)
        model.add_eq({arcs[(s, w)]: ONE for w in range(n) if w != s}, ONE)
        model.add_eq({arcs[(w, v)]: ONE for w in range(n) if w != v}, ONE)
        for u in range(n):
            if u != s:
                model.add_eq({arcs[(u, s)]: ONE}, ZERO)
            if u != v:
                model.add_eq({arcs[(v, u)]: ONE}, ZERO)
        for u in range(n):
            if u == v:
                continue
            coeffs = {arcs[(u, w)]: ONE for w in range(n) if w != u}
            coeffs[xp[(u, v)]] = -ONE
            model.add_eq(coeffs, ZERO)
    if include_flow_domination:
        for v in range(n):
            if v in (s, t):
                continue
            for arc, idx in fv[v].items():
                model.add_ge({fv[t][arc]: ONE, idx: -ONE}, ZERO)
    return model


class _ReducedLatency:
    """Equivalent latency program over a substituted variable set.

    Order values against the endpoints are constants (the source precedes
    and the sink follows everything), one direction of each interior pair
    is eliminated through x_uw + x_wu = 1, triple variables survive only
    for all-interior triples, and flow variables exist only on arcs not
    already forced to zero.  The public solution is reconstructed over the
    full variable set and re-verified exactly, so the substitution cannot
    silently change the program.
    """

    def __init__(self, inst, weighted=False):
        self.inst = inst
        self.weighted = weighted
        n, s, t = inst.n, inst.s, inst.t
        self.n, self.s, self.t = n, s, t
        self.P = [v for v in range(n) if v not in (s, t)]
        model = LpModel()
        self.model = model

        self.lv = {}
        for v in range(n):
            if v != s:
                self.lv[v] = model.add_var(f"l[{v}]", obj=inst.weight(v) if weighted else ONE)
        self.y = {}
        for i, u in enumerate(self.P):
            for w in self.P[i + 1:]:
                self.y[(u, w)] = model.add_var(f"x[{u},{w}]")
        self.z = {}
        for a in self.P:
            for b in self.P:
                for c in self.P:
                    if len({a, b, c}) == 3:
                        self.z[(a, b, c)] = model.add_var(f"x3[{a},{b},{c}]")
        self.fv = {}
        for v in self.P:
            arcs = {}
            for u in [s, *self.P]:
                if u == v:
                    continue
                for w in self.P:
                    if w != u:
                        arcs[(u, w)] = model.add_var(f"f[{v}][{u},{w}]")
            self.fv[v] = arcs
        arcs = {}
        for u in [s, *self.P]:
            for w in [*self.P, t]:
                if w != u:
                    arcs[(u, w)] = model.add_var(f"f[{t}][{u},{w}]")
        self.fv[t] = arcs

        self._build_rows()

    # pair/triple order values as (constant, {var: coef}) expressions

    def pair_expr(self, u, w):
        if u == self.s or w == self.t:
            return ONE, {}
        if w == self.s or u == self.t:
            return ZERO, {}
        if u < w:
            return ZERO, {self.y[(u, w)]: ONE}
        return ONE, {self.y[(w, u)]: -ONE}

    def triple_expr(self, a, b, c):
        if a == self.s:
            return self.pair_expr(b, c)
        if b == self.s or c == self.s:
            return ZERO, {}
        if c == self.t:
            return self.pair_expr(a, b)
        if a == self.t or b == self.t:
            return ZERO, {}
        return ZERO, {self.z[(a, b, c)]: ONE}

    def pair_value(self, values, u, w):
        const, terms = self.pair_expr(u, w)
        return const + sum((values[j] * c for j, c in terms.items()), ZERO)

    def triple_value(self, values, a, b, c):
        const, terms = self.triple_expr(a, b, c)
        return const + sum((values[j] * c for j, c in terms.items()), ZERO)

    def _build_rows(self):
        inst, model = self.inst, self.model
        n, s, t = self.n, self.s, self.t
        d = inst.d

        for v in range(n):
            if v == s:
                continue
            coeffs = {self.lv[v]: ONE}
            for (u, w), idx in self.fv[v].items():
                if d[u][w]:
                    coeffs[idx] = -d[u][w]
            model.add_ge(coeffs, ZERO)
            if v != t:
                model.add_ge({self.lv[t]: ONE, self.lv[v]: -ONE}, ZERO)

        for idx in self.y.values():
            model.add_le({idx: ONE}, ONE)

        p = self.P
        for i, a in enumerate(p):
            for j, b in enumerate(p[i + 1:], i + 1):
                for c in p[j + 1:]:
                    z = self.z
                    # orderings of {a,b,c} carrying "a before b" etc.
                    model.add_eq(
                        {z[(a, b, c)]: ONE, z[(a, c, b)]: ONE, z[(c, a, b)]: ONE,
                         self.y[(a, b)]: -ONE},
                        ZERO,
                    )
                    model.add_eq(
                        {z[(a, b, c)]: ONE, z[(a, c, b)]: ONE, z[(b, a, c)]: ONE,
                         self.y[(a, c)]: -ONE},
                        ZERO,
                    )
                    model.add_eq(
                        {z[(a, b, c)]: ONE, z[(b, a, c)]: ONE, z[(b, c, a)]: ONE,
                         self.y[(b, c)]: -ONE},
                        ZERO,
                    )
                    model.add_eq(
                        {z[key]: ONE for key in (
                            (a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a))},
                        ONE,
                    )

        for v in self.P:
            arcs = self.fv[v]
            for u in self.P:
                if u == v:
                    continue
                coeffs = {}
                for (a, b), idx in arcs.items():
                    if b == u:
                        coeffs[idx] = coeffs.get(idx, ZERO) + ONE
                    if a == u:
                        coeffs[idx] = coeffs.get(idx, ZERO) - ONE
                model.add_eq(coeffs, ZERO)
            model.add_eq({idx: ONE for (a, b), idx in arcs.items() if a == s}, ONE)
            model.add_eq({idx: ONE for (a, b), idx in arcs.items() if b == v}, ONE)
            for u in self.P:
                if u == v:
                    continue
                const, terms = self.pair_expr(u, v)
                coeffs = {idx: ONE for (a, b), idx in arcs.items() if a == u}
                for j, c in terms.items():
                    coeffs[j] = coeffs.get(j, ZERO) - c
                model.add_eq(coeffs, const)

        arcs = self.fv[t]
        for u in self.P:
            coeffs = {}
            for (a, b), idx in arcs.items():
                if b == u:
                    coeffs[idx] = coeffs.get(idx, ZERO) + ONE
                if a == u:
                    coeffs[idx] = coeffs.get(idx, ZERO) - ONE
            model.add_eq(coeffs, ZERO)
            model.add_eq({idx: ONE for (a, b), idx in arcs.items() if a == u}, ONE)
        model.add_eq({idx: ONE for (a, b), idx in arcs.items() if a == s}, ONE)
        model.add_eq({idx: ONE for (a, b), idx in arcs.items() if b == t}, ONE)

    # lazy constraint families ------------------------------------------

    def order_latency_rows(self):
        """All prefix-length rows: (v, coef, expr, row coefficients, rhs)."""
        n, s = self.n, self.s
        d = self.inst.d
        rows = []
        for u in range(n):
            for w in range(n):
                if u == w:
                    continue
                for v in range(n):
                    if v in (u, w) or v == s:
                        continue
                    const, terms = self.triple_expr(u, w, v)
                    if const == 0 and not terms:
                        continue
                    coef = d[s][u] + d[u][w] + d[w][v]
                    if coef == 0:
                        continue
                    coeffs = {self.lv[v]: ONE}
                    for j, c in terms.items():
                        coeffs[j] = coeffs.get(j, ZERO) - coef * c
                    rows.append(((u, w, v), coeffs, coef * const, coef, const, terms))
        return rows

    def violated_order_rows(self, values, already):
        out = []
        for key, coeffs, rhs, coef, const, terms in self._order_rows:
            if key in already:
                continue
            lhs = sum((values[j] * c for j, c in coeffs.items()), ZERO)
            if lhs < rhs:
                out.append((key, coeffs, rhs))
        return out

    def flow_of(self, values, v):
        f = ArcFlow()
        for arc, idx in self.fv[v].items():
            val = values[idx]
            if val:
                f.add(*arc, val)
        return f

    def violated_cut_rows(self, values, already):
        out = []
        n, s = self.n, self.s
        for v in sorted(self.fv):
            flow = self.flow_of(values, v)
            for ynode in self.P:
                if ynode == v:
                    continue
                need = self.pair_value(values, ynode, v)
                if need <= 0:
                    continue
                value, cut = max_flow_min_cut(flow, s, ynode, nodes=range(n))
                if value >= need:
                    continue
                key = (v, ynode, cut)
                if key in already:
                    continue
                const, terms = self.pair_expr(ynode, v)
                coeffs = {}
                for (a, b), idx in self.fv[v].items():
                    if a not in cut and b in cut:
                        coeffs[idx] = ONE
                for j, c in terms.items():
                    coeffs[j] = coeffs.get(j, ZERO) - c
                out.append((key, coeffs, const))
        return out

    def solve(self):
        solver = SimplexSolver(self.model)
        sol = solver.solve()
        if sol.status != OPTIMAL:
            raise InvariantError(f"latency relaxation reported {sol.status}")
        self._order_rows = self.order_latency_rows()
        added = set()
        rounds = 0
        for _ in range(_separation_cap(self.n)):
            rounds += 1
            values = [sol.values[name] for name in self.model.names]
            new_rows = self.violated_order_rows(values, added)
            new_rows += self.violated_cut_rows(values, added)
            if not new_rows:
                return sol, values, rounds
            for key, coeffs, rhs in new_rows:
                added.add(key)
                solver.add_ge_cut(coeffs, rhs)
            sol = solver.reoptimize()
            if sol.status != OPTIMAL:
                raise InvariantError("latency cut addition made the program infeasible")
        raise InvariantError("latency separation did not converge within the round cap")

    def reconstruct(self, values, objective, rounds):
        n, s, t = self.n, self.s, self.t
        x = {}
        for u in range(n):
            for w in range(n):
                if u != w:
                    x[(u, w)] = self.pair_value(values, u, w)
        x3 = {}
        for u in range(n):
            for v in range(n):
                for w in range(n):
                    if len({u, v, w}) == 3:
                        x3[(u, v, w)] = self.triple_value(values, u, v, w)
        flows = {v: self.flow_of(values, v) for v in self.fv}
        ell = {v: values[self.lv[v]] for v in self.lv}
        return LatencyLpSolution(
            n=n, s=s, t=t, x=x, x3=x3, flows=flows, ell=ell,
            objective=objective, weighted=self.weighted, rounds=rounds,
        )


def solve_latency_lp(inst, weighted=False):
    """Exact optimum of the latency relaxation with lazy cut separation.

    The returned solution is reconstructed over the full variable set and
    every constraint family is re-verified exactly before returning.
    """
    if inst.n < 2:
        raise InputError("latency LP needs n >= 2")
    prog = _ReducedLatency(inst, weighted=weighted)
    sol, values, rounds = prog.solve()
    full = prog.reconstruct(values, sol.objective, rounds)
    bad = full.verify(inst)
    if bad:
        raise InvariantError("reconstructed latency solution failed verification",
                             state=bad)
    return full


def _solve_latency_lp_reference(inst, weighted=False, max_rounds=None):
    """Slow reference: the full model solved directly, cuts separated on
    the full flow variables.  Used by tests to pin down equivalence."""
    model = build_latency_lp(inst, weighted=weighted)
    n, s = inst.n, inst.s
    solver = SimplexSolver(model)
    sol = solver.solve()
    if sol.status != OPTIMAL:
        raise InvariantError(f"full latency model reported {sol.status}")
    added = set()
    cap = max_rounds if max_rounds is not None else _separation_cap(n)
    for _ in range(cap):
        new_rows = []
        for v in range(n):
            if v == s:
                continue
            flow = ArcFlow()
            for u in range(n):
                for w in range(n):
                    if u != w:
                        val = sol.values[f"f[{v}][{u},{w}]"]
                        if val:
                            flow.add(u, w, val)
            for ynode in range(n):
                if ynode in (s, v):
                    continue
                need = sol.values[f"x[{ynode},{v}]"]
                if need <= 0:
                    continue
                value, cut = max_flow_min_cut(flow, s, ynode, nodes=range(n))
                if value >= need:
                    continue
                key = (v, ynode, cut)
                if key in added:
                    continue
                added.add(key)
                coeffs = {
                    model.var(f"f[{v}][{u},{w}]"): ONE
                    for u in range(n)
                    if u not in cut
                    for w in cut
                    if w != u
                }
                coeffs[model.var(f"x[{ynode},{v}]")] = -ONE
                new_rows.append(coeffs)
        if not new_rows:
            return sol
        for coeffs in new_rows:
            solver.add_ge_cut(coeffs, ZERO)
        sol = solver.reoptimize()
        if sol.status != OPTIMAL:
            raise InvariantError("full latency model became infeasible")
    raise InvariantError("full latency separation did not converge")


def normalize_latencies(sol, inst):
    """Raise tiny latencies to the max/n^2 floor and compute the unit scale.

    Returns (floored_solution, sigma) where sigma is the factor that, once
    distances are measured in units of 1/sigma, makes the smallest latency
    exactly 1 and the largest at most n^2.  The floored objective exceeds
    the original by a factor of at most 1 + 1/n.
    """
    n, t = sol.n, sol.t
    for v, val in sol.ell.items():
        if val == 0:
            raise DegenerateLatencyError(f"latency of node {v} is zero")
    top = sol.ell[t]
    floor = top / (n * n)
    ell2 = {v: max(val, floor) for v, val in sol.ell.items()}

    def weight(v):
        return inst.weight(v) if sol.weighted else ONE

    objective2 = sum((weight(v) * val for v, val in ell2.items()), ZERO)
    if objective2 > (ONE + Fraction(1, n)) * sol.objective:
        raise InvariantError("latency floor rule exceeded its growth bound")
    floored = LatencyLpSolution(
        n=sol.n, s=sol.s, t=sol.t, x=sol.x, x3=sol.x3, flows=sol.flows,
        ell=ell2, objective=objective2, weighted=sol.weighted, rounds=sol.rounds,
    )
    sigma = ONE / min(ell2.values())
    return floored, sigma


def order_distance_violations(sol, inst):
    """Exact check that strongly ordered pairs force latency lower bounds.

    For every triple with x_uw + x_wv = 1 + eps, eps > 0, the latency of v
    must be at least eps times d(u, w).
    """
    bad = []
    for u in range(sol.n):
        for w in range(sol.n):
            if u == w:
                continue
            for v in range(sol.n):
                if v in (u, w) or v == sol.s:
                    continue
                eps = sol.x[(u, w)] + sol.x[(w, v)] - ONE
                if eps > 0 and sol.ell[v] < eps * inst.d[u][w]:
                    bad.append((u, w, v))
    return bad
