"""Exact rational linear programming via two-phase simplex with Bland's rule.

Sized for redundancy elimination and feasibility probes on desk-scale
polyhedra (tens of variables and constraints).  Bland's rule guarantees
termination; all arithmetic is Fraction-exact.
"""

from __future__ import annotations

from enum import Enum, auto
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class LPStatus(Enum):
    OPTIMAL = auto()
    UNBOUNDED = auto()
    INFEASIBLE = auto()


def _pivot(tableau, basis, row, col):
    piv = tableau[row][col]
    tableau[row] = [x / piv for x in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            f = tableau[i][col]
            tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[row])]
    basis[row] = col


def _simplex(tableau, basis, obj, allowed):
    """Minimize obj (a full-length cost row) given a feasible basis.

    tableau rows are [coeffs..., rhs]; obj is priced out against the basis
    before iterating.  Returns (status, objective row).
    """
    ncols = len(tableau[0]) - 1
    z = list(obj) + [ZERO]
    for i, b in enumerate(basis):
        if z[b] != 0:
            f = z[b]
            z = [x - f * y for x, y in zip(z, tableau[i])]
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and z[j] < 0), None)
        if enter is None:
            return LPStatus.OPTIMAL, z
        best = None
        for i in range(len(tableau)):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return LPStatus.UNBOUNDED, z
        _pivot(tableau, basis, best[1], enter)
        f = z[enter]
        if f != 0:
            z = [x - f * y for x, y in zip(z, tableau[best[1]])]


def lp_solve(n, objective, equations, inequalities, maximize=False):
    """Optimize objective . x over {x free : A x = b, C x <= d}.

    equations / inequalities are lists of (coeffs, rhs) with len(coeffs) == n.
    Returns (status, value, x) with x a tuple of Fractions (None unless OPTIMAL).
    """
    objective = [Fraction(c) for c in objective]
    if n == 0:
        for coeffs, rhs in equations:
            if rhs != 0:
                return LPStatus.INFEASIBLE, None, None
        for coeffs, rhs in inequalities:
            if rhs < 0:
                return LPStatus.INFEASIBLE, None, None
        return LPStatus.OPTIMAL, ZERO, ()

    nineq = len(inequalities)
    nvars = 2 * n + nineq  # x = u - w plus one slack per inequality
    rows = []
    for coeffs, rhs in equations:
        rows.append(([Fraction(c) for c in coeffs], [ZERO] * nineq, Fraction(rhs)))
    for k, (coeffs, rhs) in enumerate(inequalities):
        slack = [ZERO] * nineq
        slack[k] = ONE
        rows.append(([Fraction(c) for c in coeffs], slack, Fraction(rhs)))

    m = len(rows)
    tableau = []
    for coeffs, slack, rhs in rows:
        row = coeffs + [-c for c in coeffs] + slack + [rhs]
        if rhs < 0:
            row = [-x for x in row]
        tableau.append(row)
    if m == 0:
        # unconstrained: optimum 0 iff objective is zero
        if all(c == 0 for c in objective):
            return LPStatus.OPTIMAL, ZERO, tuple([ZERO] * n)
        return LPStatus.UNBOUNDED, None, None

    # phase 1: artificial variable per row
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        tableau[i] = tableau[i][:-1] + art + [tableau[i][-1]]
    total = nvars + m
    basis = [nvars + i for i in range(m)]
    allowed = [True] * total
    phase1 = [ZERO] * nvars + [ONE] * m
    status, z = _simplex(tableau, basis, phase1, allowed)
    assert status is LPStatus.OPTIMAL
    if -z[-1] != 0:  # priced-out objective stores -value in the rhs slot
        return LPStatus.INFEASIBLE, None, None

    # drive artificials out of the basis; rows that cannot pivot are redundant
    drop_rows = []
    for i in range(m):
        if basis[i] >= nvars:
            col = next((j for j in range(nvars) if tableau[i][j] != 0), None)
            if col is None:
                drop_rows.append(i)
            else:
                _pivot(tableau, basis, i, col)
    for i in sorted(drop_rows, reverse=True):
        del tableau[i]
        del basis[i]
    for j in range(nvars, total):
        allowed[j] = False

    sense = -1 if maximize else 1
    phase2 = [sense * c for c in objective] + [-sense * c for c in objective] + [ZERO] * (nineq + m)
    status, z = _simplex(tableau, basis, phase2, allowed)
    if status is LPStatus.UNBOUNDED:
        return LPStatus.UNBOUNDED, None, None
    value = sense * -z[-1]  # z stores the negated phase-2 objective in the rhs slot
    x = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] += tableau[i][-1]
        elif b < 2 * n:
            x[b - n] -= tableau[i][-1]
    return LPStatus.OPTIMAL, value, tuple(x)


def feasible_point(n, equations, inequalities):
    status, _, x = lp_solve(n, [ZERO] * n, equations, inequalities)
    return x if status is LPStatus.OPTIMAL else None
