"""Exact rational linear programming via a dense two-phase simplex.

Minimization only; all variables are nonnegative.  Every number is a
Fraction, so optima are exact and all comparisons are strict.  Pricing is
Dantzig's rule with an automatic permanent switch to Bland's rule when the
objective stalls, which guarantees termination.  Constraint rows can be
appended after a solve and the optimum restored with dual simplex pivots,
which keeps cutting-plane loops cheap.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, SolverError
from .rational import rational_to_json

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpModel:
    """Minimize c.x subject to linear constraints, x >= 0.

    Variables are created with add_var (returning an index) and referenced
    by index in constraint coefficient dicts.
    """

    def __init__(self):
        self.names = []
        self.obj = []
        self.constraints = []  # (sense, coeffs dict, rhs); sense in {"<=", ">=", "="}
        self._by_name = {}

    def add_var(self, name, obj=ZERO):
        if name in self._by_name:
            raise InputError(f"duplicate variable name {name!r}")
        idx = len(self.names)
        self.names.append(name)
        self._by_name[name] = idx
        self.obj.append(Fraction(obj))
        return idx

    def var(self, name):
        return self._by_name[name]

    @property
    def num_vars(self):
        return len(self.names)

    def _check_coeffs(self, coeffs):
        clean = {}
        for j, c in coeffs.items():
            if not (0 <= j < len(self.names)):
                raise InputError(f"constraint references undeclared variable {j}")
            c = Fraction(c)
            if c:
                clean[j] = c
        return clean

    def add_le(self, coeffs, rhs):
        self.constraints.append(("<=", self._check_coeffs(coeffs), Fraction(rhs)))

    def add_ge(self, coeffs, rhs):
        self.constraints.append((">=", self._check_coeffs(coeffs), Fraction(rhs)))

    def add_eq(self, coeffs, rhs):
        self.constraints.append(("=", self._check_coeffs(coeffs), Fraction(rhs)))

    def to_jsonable(self):
        return {
            "minimize": {n: rational_to_json(c) for n, c in zip(self.names, self.obj) if c},
            "constraints": [
                {
                    "sense": sense,
                    "coeffs": {self.names[j]: rational_to_json(c) for j, c in sorted(coeffs.items())},
                    "rhs": rational_to_json(rhs),
                }
                for sense, coeffs, rhs in self.constraints
            ],
        }


@dataclass
class LpSolution:
    status: str
    values: dict
    objective: Fraction

    def to_jsonable(self):
        doc = {"status": self.status}
        if self.status == OPTIMAL:
            doc["objective"] = rational_to_json(self.objective)
            doc["values"] = {n: rational_to_json(v) for n, v in self.values.items() if v}
        return doc


class SimplexSolver:
    """Stateful solver: solve() once, then optionally add cut rows and
    reoptimize() with dual simplex."""

    def __init__(self, model):
        self.model = model
        self.status = None
        self._rows = []      # tableau rows, each length ncols+1 (rhs last)
        self._basis = []     # basic column per row
        self._obj = []       # reduced-cost row for the real objective
        self._ncols = 0
        self._nstruct = model.num_vars
        self._bland = False
        self._stall = 0
        self._pivots = 0

    # -- public API ---------------------------------------------------

    def solve(self):
        self._build()
        if not self._phase1():
            self.status = INFEASIBLE
            return self.solution()
        if not self._phase2():
            self.status = UNBOUNDED
            return self.solution()
        self.status = OPTIMAL
        return self.solution()

    def add_ge_cut(self, coeffs, rhs):
        """Append coeffs . x >= rhs to a solved program.

        Several cuts may be stacked before one reoptimize(): extra rows
        leave the reduced costs nonnegative, so the tableau stays dual
        feasible.
        """
        if self.status not in (OPTIMAL, None) or not self._rows and not self._obj:
            raise SolverError("cuts can only be added after a successful solve")
        row = [ZERO] * (self._ncols + 1)
        for j, c in coeffs.items():
            row[j] = -Fraction(c)
        row[-1] = -Fraction(rhs)
        # new slack column, basic in the new row
        for r in self._rows:
            r.insert(self._ncols, ZERO)
        self._obj.insert(self._ncols, ZERO)
        row.insert(self._ncols, ONE)
        slack_col = self._ncols
        self._ncols += 1
        # express the new row in terms of the current basis
        for i, bc in enumerate(self._basis):
            f = row[bc]
            if f:
                brow = self._rows[i]
                row = [a - f * b if b else a for a, b in zip(row, brow)]
        self._rows.append(row)
        self._basis.append(slack_col)
        self.status = None

    def reoptimize(self):
        """Restore primal feasibility (after cuts) with dual simplex."""
        steps = 0
        bland_after = 60 + 2 * (len(self._rows) + self._ncols)
        while True:
            steps += 1
            r = -1
            if steps > bland_after:
                # dual Bland: lowest basis index among infeasible rows
                for i, row in enumerate(self._rows):
                    if row[-1] < 0 and (r == -1 or self._basis[i] < self._basis[r]):
                        r = i
            else:
                worst = ZERO
                for i, row in enumerate(self._rows):
                    v = row[-1]
                    if v < worst or (v == worst < 0 and (r == -1 or self._basis[i] < self._basis[r])):
                        worst = v
                        r = i
            if r == -1:
                break
            row = self._rows[r]
            best_j = -1
            best_ratio = None
            for j in range(self._ncols):
                a = row[j]
                if a < 0:
                    ratio = self._obj[j] / -a
                    if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and j < best_j):
                        best_ratio = ratio
                        best_j = j
            if best_j == -1:
                self.status = INFEASIBLE
                return self.solution()
            self._pivot(r, best_j)
        self.status = OPTIMAL
        return self.solution()

    def solution(self):
        if self.status != OPTIMAL:
            return LpSolution(status=self.status, values={}, objective=None)
        vals = [ZERO] * self._nstruct
        for i, bc in enumerate(self._basis):
            if bc < self._nstruct:
                vals[bc] = self._rows[i][-1]
        values = {name: vals[j] for j, name in enumerate(self.model.names)}
        return LpSolution(status=OPTIMAL, values=values, objective=-self._obj[-1])

    @property
    def pivots(self):
        return self._pivots

    # -- construction ---------------------------------------------------

    def _build(self):
        m = self.model
        nstruct = m.num_vars
        rows = []
        senses = []
        for sense, coeffs, rhs in m.constraints:
            row = [ZERO] * nstruct
            for j, c in coeffs.items():
                row[j] = c
            if rhs < 0:
                row = [-c for c in row]
                rhs = -rhs
                sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
            rows.append((row, Fraction(rhs)))
            senses.append(sense)

        nslack = sum(1 for s in senses if s in ("<=", ">="))
        nart = sum(1 for s in senses if s in (">=", "="))
        ncols = nstruct + nslack + nart
        slack_at = nstruct
        art_at = nstruct + nslack

        tableau = []
        basis = []
        art_cols = []
        si = slack_at
        ai = art_at
        for (row, rhs), sense in zip(rows, senses):
            full = row + [ZERO] * (nslack + nart) + [rhs]
            if sense == "<=":
                full[si] = ONE
                basis.append(si)
                si += 1
            elif sense == ">=":
                full[si] = -ONE
                si += 1
                full[ai] = ONE
                basis.append(ai)
                art_cols.append(ai)
                ai += 1
            else:
                full[ai] = ONE
                basis.append(ai)
                art_cols.append(ai)
                ai += 1
            tableau.append(full)

        obj = [Fraction(c) for c in m.obj] + [ZERO] * (nslack + nart) + [ZERO]
        self._rows = tableau
        self._basis = basis
        self._obj = obj
        self._ncols = ncols
        self._art_cols = set(art_cols)
        self._art_start = art_at

    # -- phases ---------------------------------------------------------

    def _phase1(self):
        if not self._art_cols:
            return True
        p1 = [ZERO] * (self._ncols + 1)
        for j in self._art_cols:
            p1[j] = ONE
        for i, bc in enumerate(self._basis):
            if bc in self._art_cols:
                row = self._rows[i]
                p1 = [a - b if b else a for a, b in zip(p1, row)]
        self._bland = False
        self._stall = 0
        # artificials may leave the basis but never re-enter
        if not self._optimize(p1, forbid=self._art_cols):
            raise SolverError("phase 1 cannot be unbounded")
        if -p1[-1] != 0:
            return False
        self._purge_artificials(p1)
        return True

    def _purge_artificials(self, p1):
        """Pivot artificials out of the basis, drop redundant rows, then
        cut the artificial columns off the tableau."""
        drop = []
        for i in range(len(self._rows)):
            if self._basis[i] not in self._art_cols:
                continue
            row = self._rows[i]
            pivot_col = -1
            for j in range(self._art_start):
                if row[j] != 0:
                    pivot_col = j
                    break
            if pivot_col == -1:
                drop.append(i)  # all-zero in real columns: redundant row
            else:
                self._pivot(i, pivot_col, extra=p1)
        for i in reversed(drop):
            del self._rows[i]
            del self._basis[i]
        keep = self._art_start
        self._rows = [r[:keep] + r[-1:] for r in self._rows]
        self._obj = self._obj[:keep] + self._obj[-1:]
        self._ncols = keep
        self._art_cols = set()

    def _phase2(self):
        self._bland = False
        self._stall = 0
        return self._optimize(self._obj, forbid=None)

    # -- core mechanics ---------------------------------------------------

    def _optimize(self, objrow, forbid):
        stall_limit = 60 + 2 * (len(self._rows) + self._ncols)
        last_val = objrow[-1]
        while True:
            c = self._entering(objrow, forbid)
            if c == -1:
                return True
            r = self._leaving(c)
            if r == -1:
                return False
            self._pivot(r, c, extra=objrow if objrow is not self._obj else None)
            if objrow[-1] != last_val:
                last_val = objrow[-1]
                self._stall = 0
            else:
                self._stall += 1
                if self._stall > stall_limit:
                    self._bland = True

    def _entering(self, objrow, forbid):
        if self._bland:
            for j in range(self._ncols):
                if objrow[j] < 0 and (forbid is None or j not in forbid):
                    return j
            return -1
        best = -1
        best_val = ZERO
        for j in range(self._ncols):
            v = objrow[j]
            if v < best_val and (forbid is None or j not in forbid):
                best_val = v
                best = j
        return best

    def _leaving(self, c):
        best = -1
        best_ratio = None
        for i, row in enumerate(self._rows):
            a = row[c]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self._basis[i] < self._basis[best])
                ):
                    best_ratio = ratio
                    best = i
        return best

    def _pivot(self, r, c, extra=None):
        self._pivots += 1
        rows = self._rows
        prow = rows[r]
        piv = prow[c]
        if piv != 1:
            inv = ONE / piv
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        f = self._obj[c]
        if f:
            self._obj[:] = [a - f * b if b else a for a, b in zip(self._obj, prow)]
        if extra is not None:
            f = extra[c]
            if f:
                extra[:] = [a - f * b if b else a for a, b in zip(extra, prow)]
        self._basis[r] = c


def simplex_solve(model):
    """Solve an LpModel to exact optimality (or report infeasible/unbounded)."""
    return SimplexSolver(model).solve()
