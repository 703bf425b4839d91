"""Exact two-phase simplex over the rationals (Bland's rule).

Only what the polytope code needs: free variables ``u``, constraints of the
form ``a.u + b >= 0`` or ``a.u + b == 0``, and repeated maximization of
different objectives from the same feasible basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Row = Tuple[Sequence[Fraction], Fraction]


class ExactLP:
    def __init__(self, dim: int, ineqs: Sequence[Row], eqs: Sequence[Row] = ()):
        self.dim = dim
        n_s = len(ineqs)
        self.n_struct = 2 * dim + n_s
        rows = []
        for k, (a, b) in enumerate(ineqs):
            row = [Fraction(x) for x in a] + [-Fraction(x) for x in a] + [Fraction(0)] * n_s
            row[2 * dim + k] = Fraction(-1)
            rows.append((row, -Fraction(b)))
        for a, b in eqs:
            row = [Fraction(x) for x in a] + [-Fraction(x) for x in a] + [Fraction(0)] * n_s
            rows.append((row, -Fraction(b)))
        m = len(rows)
        self.ncols = self.n_struct + m
        self.tab: List[List[Fraction]] = []
        for i, (row, rhs) in enumerate(rows):
            if rhs < 0:
                row = [-x for x in row]
                rhs = -rhs
            art = [Fraction(0)] * m
            art[i] = Fraction(1)
            self.tab.append(row + art + [rhs])
        self.basis = [self.n_struct + i for i in range(m)]
        self.feasible = self._phase_one()

    # -- core pivoting -----------------------------------------------------
    def _pivot(self, r: int, c: int, obj: Optional[List[Fraction]] = None) -> None:
        tab = self.tab
        prow = tab[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            tab[r] = prow
        nz = [(j, x) for j, x in enumerate(prow) if x]
        for i, row in enumerate(tab):
            if i != r:
                f = row[c]
                if f:
                    for j, x in nz:
                        row[j] -= f * x
        if obj is not None:
            f = obj[c]
            if f:
                for j, x in nz:
                    obj[j] -= f * x
        self.basis[r] = c

    def _optimize(self, cost: Sequence[Fraction], allowed: int) -> bool:
        """Maximize ``cost . x`` over current tableau; False when unbounded."""
        width = self.ncols + 1
        # obj[j] holds the reduced cost c_j - c_B B^-1 A_j; obj[-1] = -value
        obj = [Fraction(0)] * width
        for j in range(len(cost)):
            obj[j] = Fraction(cost[j])
        for i, bcol in enumerate(self.basis):
            cb = cost[bcol] if bcol < len(cost) else 0
            if cb:
                row = self.tab[i]
                for j in range(width):
                    if row[j]:
                        obj[j] -= cb * row[j]
        while True:
            enter = next((j for j in range(allowed) if obj[j] > 0), None)
            if enter is None:
                self._obj = obj
                return True
            best = None
            for i, row in enumerate(self.tab):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self._pivot(best[1], enter, obj)

    def _phase_one(self) -> bool:
        m = len(self.tab)
        cost = [Fraction(0)] * self.n_struct + [Fraction(-1)] * m
        self._optimize(cost, self.ncols)
        if any(self.tab[i][-1] != 0 for i, b in enumerate(self.basis) if b >= self.n_struct):
            return False
        # drive artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(self.tab):
            if self.basis[i] >= self.n_struct:
                col = next((j for j in range(self.n_struct) if self.tab[i][j] != 0), None)
                if col is None:
                    del self.tab[i]
                    del self.basis[i]
                    continue
                self._pivot(i, col)
            i += 1
        return True

    # -- public ------------------------------------------------------------
    def point(self) -> List[Fraction]:
        x = [Fraction(0)] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.tab[i][-1]
        return [x[k] - x[self.dim + k] for k in range(self.dim)]

    def maximize(self, c: Sequence[Fraction], c0: Fraction = Fraction(0)):
        """Return ``(value, point)``; value is ``None`` when unbounded."""
        if not self.feasible:
            raise ValueError("infeasible system")
        cost = [Fraction(x) for x in c] + [-Fraction(x) for x in c]
        if not self._optimize(cost, self.n_struct):
            return None, None
        u = self.point()
        return Fraction(c0) + sum((Fraction(a) * x for a, x in zip(c, u)), Fraction(0)), u
