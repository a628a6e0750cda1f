# -*- coding: utf-8 -*-

"""
Dense two-phase revised simplex on `numpy` arrays.

Rows are given as `(coefficients, sense, rhs)` triples where
`coefficients` maps a variable index to its coefficient and `sense` is one
of `<=`, `>=` or `==`. Every variable is nonnegative; upper bounds are
written as rows.

```python
>>> from Spanr import simplex
>>> res = simplex.lp_core_solve([1.], [({0: 1.}, ">=", .5), ({0: 1.}, "<=", 1.)])
>>> res.status, float(res.x[0])
('optimal', 0.5)
>>> simplex.lp_core_solve([1.], [({0: 1.}, ">=", 2.), ({0: 1.}, "<=", 1.)]).status
'infeasible'
```
"""

import logging
import collections

import numpy as np

from Spanr import InputError, SolverError

LOG = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration-limit"
UNBOUNDED = "unbounded"

#: basis condition number considered singular
MAX_CONDITION = 1e12

LpResult = collections.namedtuple(
    "LpResult", ["status", "x", "objective", "iterations", "basis",
                 "diagnostics"]
)


class _Revised(object):
    """Basis inverse, basic values and the pivoting rules."""

    def __init__(self, A, b, basis, tol, max_iter, refactor, bland_after):
        self.A = A
        self.b = b
        self.basis = list(basis)
        self.tol = tol
        self.max_iter = max_iter
        self.refactor_every = refactor
        self.bland_after = bland_after
        self.iterations = 0
        self.degenerate = 0
        self.bland = False
        self.B_inv = np.eye(len(b))
        self.x_B = b.copy()
        self._since = 0

    def diagnostics(self, **extra):
        info = {
            "iterations": self.iterations,
            "bland": self.bland,
            "rows": int(self.A.shape[0]),
            "columns": int(self.A.shape[1]),
        }
        info.update(extra)
        return info

    def refactor(self):
        B = self.A[:, self.basis]
        try:
            B_inv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            raise SolverError(
                "singular basis", self.diagnostics(condition=float("inf"))
            )
        # 1-norm condition number, no SVD
        condition = float(
            np.abs(B).sum(axis=0).max() * np.abs(B_inv).sum(axis=0).max()
        )
        if not np.isfinite(condition) or condition > MAX_CONDITION:
            raise SolverError(
                "ill-conditioned basis (condition %.3g)" % condition,
                self.diagnostics(condition=condition)
            )
        self.B_inv = B_inv
        self.x_B = self.B_inv @ self.b
        self._clean()
        self._since = 0

    def _clean(self):
        low = self.x_B.min() if self.x_B.size else 0.
        if low < -1e3 * self.tol * (1. + np.abs(self.b).max()):
            raise SolverError(
                "primal infeasibility %.3g in basic solution" % low,
                self.diagnostics(min_basic=float(low))
            )
        self.x_B[self.x_B < 0.] = 0.

    def pivot(self, row, column, u):
        theta = self.x_B[row] / u[row]
        self.x_B -= theta * u
        self.x_B[row] = theta
        pivot_row = self.B_inv[row] / u[row]
        self.B_inv -= np.outer(u, pivot_row)
        self.B_inv[row] = pivot_row
        self.basis[row] = column
        self._clean()
        return theta

    def run(self, cost, allowed):
        """Optimize `cost` over columns flagged in `allowed`."""
        tol = self.tol
        self.degenerate, self.bland = 0, False
        while True:
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT
            if self._since >= self.refactor_every:
                self.refactor()
            y = cost[self.basis] @ self.B_inv
            reduced = cost - y @ self.A
            reduced[~allowed] = 0.
            reduced[self.basis] = 0.
            candidates = np.flatnonzero(reduced < -tol)
            if not candidates.size:
                return OPTIMAL
            if self.bland:
                column = int(candidates[0])
            else:
                column = int(candidates[np.argmin(reduced[candidates])])
            u = self.B_inv @ self.A[:, column]
            rows = np.flatnonzero(u > tol)
            if not rows.size:
                return UNBOUNDED
            ratios = self.x_B[rows] / u[rows]
            ties = rows[ratios <= ratios.min() + tol]
            row = int(min(ties, key=lambda i: self.basis[i]))
            theta = self.pivot(row, column, u)
            self.iterations += 1
            self._since += 1
            if theta <= tol:
                self.degenerate += 1
                if not self.bland and self.degenerate >= self.bland_after:
                    LOG.debug(
                        "%d degenerate pivots, switching to Bland's rule",
                        self.degenerate
                    )
                    self.bland = True
            else:
                self.degenerate = 0


def _standard_form(rows, n):
    m = len(rows)
    slacks = sum(1 for _, sense, _ in rows if sense != "==")
    A = np.zeros((m, n + slacks))
    b = np.zeros(m)
    basis = [None] * m
    k = n
    for i, (coefficients, sense, rhs) in enumerate(rows):
        for j, a in coefficients.items():
            if not 0 <= j < n:
                raise InputError("variable index %r out of range" % (j,))
            A[i, j] += a
        slack = None
        if sense == "<=":
            A[i, k] = 1.
        elif sense == ">=":
            A[i, k] = -1.
        elif sense != "==":
            raise InputError("unknown row sense %r" % (sense,))
        if sense != "==":
            slack, k = k, k + 1
        b[i] = rhs
        if b[i] < 0. or (b[i] == 0. and slack is not None and
                         A[i, slack] < 0.):
            A[i] *= -1.
            b[i] = -b[i]
        # a +1 slack is a feasible starting column for its row
        if slack is not None and A[i, slack] > 0.:
            basis[i] = slack
    needy = [i for i in range(m) if basis[i] is None]
    artificial = np.zeros((m, len(needy)))
    for column, i in enumerate(needy):
        artificial[i, column] = 1.
        basis[i] = n + slacks + column
    return np.hstack([A, artificial]), b, n + slacks, basis


def lp_core_solve(objective, rows, n_vars=None, tol=1e-7, max_iter=None,
                  refactor=50, bland_after=50):
    """
    Minimize `objective . x` subject to `rows` and `x >= 0`.

    Pricing is Dantzig's rule with lowest-index ties; after `bland_after`
    consecutive degenerate pivots it switches to Bland's rule for the rest
    of the phase. The ratio test breaks ties by lowest basic variable index.

    Arguments:
        objective (sequence): cost per variable
        rows (sequence): `(coefficients, sense, rhs)` triples
        n_vars (int): variable count, `len(objective)` by default
        tol (float): feasibility and optimality tolerance
        max_iter (int): pivot cap over both phases
        refactor (int): pivots between two basis refactorizations
    Returns:
        `Spanr.simplex.LpResult`
    Raises:
        `Spanr.SolverError` on an ill-conditioned basis
    """
    c = np.zeros(len(objective) if n_vars is None else n_vars)
    c[:len(objective)] = objective
    n, m = len(c), len(rows)
    if max_iter is None:
        max_iter = 50 * (n + m) + 100

    if m == 0:
        if (c < -tol).any():
            return LpResult(UNBOUNDED, None, None, 0, (), {})
        return LpResult(OPTIMAL, np.zeros(n), 0., 0, (), {})

    A, b, structural, basis = _standard_form(rows, n)
    total = A.shape[1]
    core = _Revised(A, b, basis, tol, max_iter, refactor, bland_after)

    # phase 1: drive artificials to zero, rows starting on a slack need none
    cost = np.zeros(total)
    cost[structural:] = 1.
    status = core.run(cost, np.ones(total, dtype=bool))
    if status == ITERATION_LIMIT:
        return LpResult(status, None, None, core.iterations,
                        tuple(core.basis), core.diagnostics(phase=1))
    infeasibility = float(core.x_B[np.array(core.basis) >= structural].sum())
    if infeasibility > 10. * tol * (1. + np.abs(b).max()):
        LOG.debug("phase 1 ended with infeasibility %.3g", infeasibility)
        return LpResult(INFEASIBLE, None, None, core.iterations,
                        tuple(core.basis),
                        core.diagnostics(phase=1, infeasibility=infeasibility))

    # pivot remaining artificials out where a structural column allows it
    for row, column in enumerate(list(core.basis)):
        if column < structural:
            continue
        weights = core.B_inv[row] @ A[:, :structural]
        nonzero = np.flatnonzero(np.abs(weights) > tol)
        if nonzero.size:
            entering = int(nonzero[np.argmax(np.abs(weights[nonzero]))])
            core.x_B[row] = 0.
            core.pivot(row, entering, core.B_inv @ A[:, entering])

    # phase 2
    cost = np.zeros(total)
    cost[:n] = c
    allowed = np.zeros(total, dtype=bool)
    allowed[:structural] = True
    status = core.run(cost, allowed)

    values = np.zeros(total)
    values[core.basis] = core.x_B
    x = values[:n]
    x[np.abs(x) < tol * 1e-3] = 0.
    LOG.debug(
        "simplex %s after %d pivots (%d rows, %d columns)",
        status, core.iterations, m, total
    )
    return LpResult(
        status, x, float(c @ x), core.iterations, tuple(core.basis),
        core.diagnostics(phase=2)
    )
