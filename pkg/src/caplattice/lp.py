"""Exact rational linear programming.

Two-phase primal simplex on a dense tableau.  Pricing is Dantzig's rule
with a lexicographic ratio test; long degenerate stalls fall back to
Bland's rule, so the method cannot cycle.  All arithmetic is on
:class:`fractions.Fraction` (or plain ints); there are no tolerances.
Every optimal answer is replayed against the original program: primal
feasibility, dual feasibility, equal objective values and complementary
slackness must hold exactly or an ``AssertionError`` is raised.

Dual sign convention (for the program as stated):

* minimize: ``c - A^T y >= 0``; ``y_i >= 0`` on ``>=`` rows, ``<= 0`` on ``<=`` rows
* maximize: ``c - A^T y <= 0``; ``y_i >= 0`` on ``<=`` rows, ``<= 0`` on ``>=`` rows
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DimensionMismatch

LE, GE, EQ = "<=", ">=", "="
_SENSES = {"<=": LE, ">=": GE, "=": EQ, "==": EQ, "≤": LE, "≥": GE}


@dataclass
class LinearProgram:
    """min (or max) c·x subject to rows, x >= 0."""

    objective: Sequence
    rows: Sequence[Sequence]
    senses: Sequence[str]
    rhs: Sequence
    maximize: bool = False

    def __post_init__(self):
        n = len(self.objective)
        if len(self.rows) != len(self.senses) or len(self.rows) != len(self.rhs):
            raise DimensionMismatch("rows, senses and rhs must have equal length")
        for k, row in enumerate(self.rows):
            if len(row) != n:
                raise DimensionMismatch(f"row {k} has {len(row)} coefficients, expected {n}")
        for s in self.senses:
            if s not in _SENSES:
                raise DimensionMismatch(f"unknown constraint sense {s!r}")

    @property
    def shape(self):
        return len(self.rows), len(self.objective)


@dataclass
class LpOutcome:
    status: str
    value: Fraction | None = None
    x: list = field(default_factory=list)
    duals: list = field(default_factory=list)
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Dense tableau stored as integer rows over positive row denominators.

    Row ``i`` stands for ``M[i] / den[i]``; the last entry is the right-hand
    side.  The reduced-cost row is kept the same way in ``obj``/``oden``.
    """

    def __init__(self, rows, rhs, ncols, basis, barred, init_cols):
        self.M, self.den = [], []
        for r, b in zip(rows, rhs):
            m, d = _as_int_row(list(r) + [b])
            self.M.append(m)
            self.den.append(d)
        self.ncols = ncols
        self.basis = basis
        self.barred = barred
        self.init_cols = init_cols
        self.obj, self.oden = None, 1
        self.pivots = 0

    def entry(self, i, k) -> Fraction:
        return Fraction(self.M[i][k], self.den[i])

    def set_cost(self, cost):
        """Install the reduced-cost row for ``cost`` under the current basis."""
        d = [Fraction(c) for c in cost] + [Fraction(0)]
        for i, j in enumerate(self.basis):
            cb = cost[j]
            if cb:
                f = Fraction(cb) / self.den[i]
                for k, v in enumerate(self.M[i]):
                    if v:
                        d[k] -= f * v
        self.obj, self.oden = _as_int_row(d)

    def objective_value(self) -> Fraction:
        """Minus the last reduced-cost entry: the current objective."""
        return -Fraction(self.obj[-1], self.oden)

    def pivot(self, r, e):
        M = self.M
        prow = M[r]
        p = prow[e]
        if p < 0:
            prow = [-v for v in prow]
            p = -p
            M[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(len(M)):
            if i != r and M[i][e]:
                M[i], self.den[i] = _eliminate(M[i], self.den[i], prow, p, e, nz)
        if self.obj is not None and self.obj[e]:
            self.obj, self.oden = _eliminate(self.obj, self.oden, prow, p, e, nz)
        g = gcd(p, *prow)
        if g > 1:
            prow = [v // g for v in prow]
            M[r] = prow
        self.den[r] = prow[e]
        self.basis[r] = e
        self.pivots += 1

    def _leaving(self, e, bland):
        M = self.M
        rows = [i for i in range(len(M)) if M[i][e] > 0]
        if not rows:
            return None, None
        ratio = {i: Fraction(M[i][-1], M[i][e]) for i in rows}
        low = min(ratio.values())
        tied = [i for i in rows if ratio[i] == low]
        if len(tied) > 1:
            if bland:
                tied = [min(tied, key=lambda i: self.basis[i])]
            else:
                tied = [min(tied, key=lambda i: [Fraction(M[i][c], M[i][e]) for c in self.init_cols])]
        return tied[0], low

    def run(self):
        """Pivot until optimal ('optimal') or an unbounded ray ('unbounded').

        Entering columns are priced by most negative reduced cost with a
        lexicographic ratio test.  A long run of degenerate pivots switches
        to Bland's rule until the objective moves again, which rules out
        cycling in every case.
        """
        stall_limit = 4 * len(self.M) + 16
        stall = 0
        while True:
            obj = self.obj
            cands = [j for j in range(self.ncols) if obj[j] < 0 and j not in self.barred]
            if not cands:
                return "optimal"
            bland = stall > stall_limit
            e = cands[0] if bland else min(cands, key=lambda j: (obj[j], j))
            r, step = self._leaving(e, bland)
            if r is None:
                return "unbounded"
            stall = stall + 1 if step == 0 else 0
            self.pivot(r, e)


def _as_int_row(vals):
    """Integer numerators over one positive common denominator, reduced."""
    den = 1
    for v in vals:
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    row = [int(v * den) for v in vals]
    g = gcd(den, *row)
    if g > 1:
        row = [v // g for v in row]
        den //= g
    return row, den


def _eliminate(row, den, prow, p, e, nz):
    """row/den minus (row[e]/p) times prow, as an integer row and denominator."""
    f = row[e]
    g = gcd(p, f)
    ps, fs = p // g, f // g
    if ps == 1:
        row = list(row)
        for k in nz:
            row[k] -= fs * prow[k]
    else:
        row = [ps * a for a in row]
        for k in nz:
            row[k] -= fs * prow[k]
        den *= ps
    g = gcd(den, *row)
    if g > 1:
        row = [v // g for v in row]
        den //= g
    return row, den


def _standardize(lp: LinearProgram):
    """Drop zero rows, make rhs >= 0, add slack/surplus/artificial columns."""
    n = len(lp.objective)
    keep, flips = [], []
    for k, (row, s, b) in enumerate(zip(lp.rows, lp.senses, lp.rhs)):
        s = _SENSES[s]
        b = Fraction(b)
        if not any(row):
            ok = (b == 0) if s == EQ else (b >= 0 if s == LE else b <= 0)
            if not ok:
                return None
            continue
        flip = b < 0
        if flip:
            row = [-Fraction(v) for v in row]
            b = -b
            s = {LE: GE, GE: LE, EQ: EQ}[s]
        else:
            row = [Fraction(v) for v in row]
        keep.append((k, row, s, b))
        flips.append(flip)
    n_slack = sum(1 for _, _, s, _ in keep if s != EQ)
    n_art = sum(1 for _, _, s, _ in keep if s != LE)
    ncols = n + n_slack + n_art
    rows, rhs, basis, init_col = [], [], [], []
    slack_at, art_at = n, n + n_slack
    artificial = set()
    for _, row, s, b in keep:
        full = row + [0] * (n_slack + n_art)
        if s == LE:
            full[slack_at] = 1
            basis.append(slack_at)
            init_col.append(slack_at)
            slack_at += 1
        else:
            if s == GE:
                full[slack_at] = -1
                slack_at += 1
            full[art_at] = 1
            basis.append(art_at)
            init_col.append(art_at)
            artificial.add(art_at)
            art_at += 1
        rows.append(full)
        rhs.append(b)
    return keep, flips, rows, rhs, basis, init_col, artificial, ncols


def _phase_one(std):
    keep, flips, rows, rhs, basis, init_col, artificial, ncols = std
    tab = _Tableau(rows, rhs, ncols, list(basis), barred=set(), init_cols=init_col)
    if artificial:
        tab.set_cost([1 if j in artificial else 0 for j in range(ncols)])
        tab.run()
        if tab.objective_value() != 0:
            return tab, False
        for i, j in enumerate(tab.basis):
            if j in artificial:
                row = tab.M[i]
                e = next((k for k in range(ncols) if k not in artificial and row[k]), None)
                if e is not None:
                    tab.pivot(i, e)
    tab.barred = set(artificial)
    return tab, True


def _extract_x(tab, n):
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.entry(i, -1)
    return x


def feasible(lp: LinearProgram):
    """Phase-one feasibility: ``(True, x)`` with an exact point, or ``(False, None)``."""
    std = _standardize(lp)
    if std is None:
        return False, None
    tab, ok = _phase_one(std)
    if not ok:
        return False, None
    x = _extract_x(tab, len(lp.objective))
    _check_primal(lp, x)
    return True, x


def solve(lp: LinearProgram) -> LpOutcome:
    n = len(lp.objective)
    std = _standardize(lp)
    if std is None:
        return LpOutcome("infeasible")
    keep, flips, rows, rhs, basis, init_col, artificial, ncols = std
    tab, ok = _phase_one(std)
    if not ok:
        return LpOutcome("infeasible", pivots=tab.pivots)
    sign = -1 if lp.maximize else 1
    cost = [sign * Fraction(c) for c in lp.objective] + [0] * (ncols - n)
    tab.set_cost(cost)
    status = tab.run()
    if status == "unbounded":
        return LpOutcome("unbounded", pivots=tab.pivots)
    x = _extract_x(tab, n)

    # y = c_B B^{-1}; B^{-1} sits in the columns of the initial basis.
    y_std = []
    for col in init_col:
        y_std.append(sum((cost[j] * tab.entry(i, col) for i, j in enumerate(tab.basis) if cost[j]), Fraction(0)))
    duals = [Fraction(0)] * len(lp.rows)
    for (k, _, _, _), flip, y in zip(keep, flips, y_std):
        duals[k] = sign * (-y if flip else y)
    value = sum((Fraction(c) * v for c, v in zip(lp.objective, x)), Fraction(0))
    outcome = LpOutcome("optimal", value, x, duals, tab.pivots)
    certify(lp, outcome)
    return outcome


def _row_values(lp, x):
    return [sum((Fraction(a) * v for a, v in zip(row, x) if a), Fraction(0)) for row in lp.rows]


def _check_primal(lp, x):
    if any(v < 0 for v in x):
        raise AssertionError("negative primal variable")
    for lhs, s, b in zip(_row_values(lp, x), lp.senses, lp.rhs):
        s, b = _SENSES[s], Fraction(b)
        ok = lhs == b if s == EQ else (lhs <= b if s == LE else lhs >= b)
        if not ok:
            raise AssertionError("primal point violates a constraint")


def certify(lp: LinearProgram, out: LpOutcome) -> None:
    """Exact optimality replay; raises AssertionError on any violation."""
    x, y = out.x, out.duals
    _check_primal(lp, x)
    sign = -1 if lp.maximize else 1
    for yi, s in zip(y, lp.senses):
        s = _SENSES[s]
        if s == LE and sign * yi > 0 or s == GE and sign * yi < 0:
            raise AssertionError("dual multiplier has the wrong sign")
    n = len(lp.objective)
    for j in range(n):
        red = Fraction(lp.objective[j]) - sum((Fraction(row[j]) * yi for row, yi in zip(lp.rows, y) if yi), Fraction(0))
        if sign * red < 0:
            raise AssertionError("dual infeasible")
        if red and x[j]:
            raise AssertionError("complementary slackness fails on a variable")
    for lhs, b, yi in zip(_row_values(lp, x), lp.rhs, y):
        if yi and lhs != Fraction(b):
            raise AssertionError("complementary slackness fails on a row")
    dual_value = sum((yi * Fraction(b) for yi, b in zip(y, lp.rhs)), Fraction(0))
    if dual_value != out.value:
        raise AssertionError("primal and dual values differ")


def dual_program(lp: LinearProgram):
    """The dual of a minimization program, with its free or nonpositive
    multipliers written as differences of nonnegative columns.

    Returns ``(dual_lp, recover)`` where ``recover(z)`` maps a dual point
    back to one multiplier per original row.
    """
    if lp.maximize:
        raise ValueError("dual_program expects a minimization program")
    m, n = lp.shape
    cols = []  # (row index, sign)
    for i, s in enumerate(lp.senses):
        s = _SENSES[s]
        if s in (GE, EQ):
            cols.append((i, 1))
        if s in (LE, EQ):
            cols.append((i, -1))
    objective = [sign * Fraction(lp.rhs[i]) for i, sign in cols]
    rows = [[sign * Fraction(lp.rows[i][j]) for i, sign in cols] for j in range(n)]
    dual = LinearProgram(objective, rows, [LE] * n, list(lp.objective), maximize=True)

    def recover(z):
        y = [Fraction(0)] * m
        for (i, sign), v in zip(cols, z):
            y[i] += sign * v
        return y

    return dual, recover


def solve_via_dual(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` by running the simplex on its dual.

    Worth it when the program has many more rows than columns.  The primal
    point is read off the dual's multipliers and the pair is certified
    against the original program exactly as :func:`solve` does.
    """
    flip = -1 if lp.maximize else 1
    base = LinearProgram([flip * Fraction(c) for c in lp.objective], lp.rows, lp.senses, lp.rhs)
    dual, recover = dual_program(base)
    out = solve(dual)
    if out.status == "unbounded":
        return LpOutcome("infeasible", pivots=out.pivots)
    if out.status == "infeasible":
        ok, _ = feasible(base)
        return LpOutcome("unbounded" if ok else "infeasible", pivots=out.pivots)
    x = out.duals
    y = [flip * v for v in recover(out.x)]
    value = sum((Fraction(c) * v for c, v in zip(lp.objective, x)), Fraction(0))
    outcome = LpOutcome("optimal", value, x, y, out.pivots)
    certify(lp, outcome)
    return outcome
