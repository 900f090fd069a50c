"""Clause-based satisfiability: Tseitin encoding plus a plain DPLL search.

Used where enumerating configurations is not possible or not wanted, e.g.
checking that a large feature model's constraints are consistent at load
time.  The extensional :class:`~pnpl.formula.ConfigSet` route remains the
engine's primary satisfiability check; the tests cross-validate the two.
"""

from __future__ import annotations

from pnpl.formula import And, Const, Formula, Iff, Implies, Not, Or, Var


class _Encoder:
    def __init__(self):
        self.ids: dict[str, int] = {}
        self.next_id = 1
        self.clauses: list[list[int]] = []

    def fresh(self):
        v = self.next_id
        self.next_id += 1
        return v

    def var(self, name):
        if name not in self.ids:
            self.ids[name] = self.fresh()
        return self.ids[name]

    def lit(self, f):
        """Return a literal equivalent to ``f``, adding defining clauses."""
        if isinstance(f, Var):
            return self.var(f.name)
        if isinstance(f, Const):
            v = self.fresh()
            self.clauses.append([v] if f.value else [-v])
            return v
        if isinstance(f, Not):
            return -self.lit(f.arg)
        a = self.lit(f.left)
        b = self.lit(f.right)
        g = self.fresh()
        add = self.clauses.append
        if isinstance(f, And):
            add([-g, a]); add([-g, b]); add([g, -a, -b])
        elif isinstance(f, Or):
            add([-g, a, b]); add([g, -a]); add([g, -b])
        elif isinstance(f, Implies):
            add([-g, -a, b]); add([g, a]); add([g, -b])
        elif isinstance(f, Iff):
            add([-g, -a, b]); add([-g, a, -b]); add([g, a, b]); add([g, -a, -b])
        else:
            raise TypeError(f"not a formula: {f!r}")
        return g


def tseitin(*formulas: Formula) -> tuple[list[list[int]], dict[str, int]]:
    """CNF equisatisfiable with the conjunction of ``formulas``."""
    enc = _Encoder()
    for f in formulas:
        enc.clauses.append([enc.lit(f)])
    return enc.clauses, enc.ids


def dpll(clauses: list[list[int]]) -> dict[int, bool] | None:
    """Return a satisfying partial assignment, or None if unsatisfiable."""
    return _search([list(c) for c in clauses], {})


def _propagate(clauses, assignment):
    while True:
        unit = None
        simplified = []
        for clause in clauses:
            live = []
            satisfied = False
            for lit in clause:
                val = assignment.get(abs(lit))
                if val is None:
                    live.append(lit)
                elif val == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not live:
                return None
            if len(live) == 1 and unit is None:
                unit = live[0]
            simplified.append(live)
        if unit is None:
            return simplified
        assignment[abs(unit)] = unit > 0
        clauses = simplified


def _search(clauses, assignment):
    clauses = _propagate(clauses, assignment)
    if clauses is None:
        return None
    if not clauses:
        return assignment
    # branch on the most frequent variable
    counts: dict[int, int] = {}
    for clause in clauses:
        for lit in clause:
            counts[abs(lit)] = counts.get(abs(lit), 0) + 1
    v = max(counts, key=lambda k: (counts[k], -k))
    for value in (True, False):
        trial = dict(assignment)
        trial[v] = value
        result = _search(clauses, trial)
        if result is not None:
            return result
    return None


def solve(*formulas: Formula) -> dict[str, bool] | None:
    """A model of the conjunction over its named variables, or None."""
    clauses, ids = tseitin(*formulas)
    model = dpll(clauses)
    if model is None:
        return None
    return {name: model.get(v, False) for name, v in ids.items()}


def is_satisfiable(*formulas: Formula) -> bool:
    return solve(*formulas) is not None
