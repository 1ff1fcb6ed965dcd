"""Player programs and a small branch-and-bound integer solver.

A player minimizes  c.x + opp' C x  over a polyhedron with optional
integrality marks.  The opponent vector enters only the objective, so a
best response is a plain IP with the parametrized cost vector.
"""

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted
from .lp import LinearProgram, LPResult, LPStatus, solve_lp
from .numerics import SparseMatrix
from .poly import Polyhedron

_INT_FEAS_TOL = 1e-6
_PRUNE_TOL = 1e-9


def _as_sparse(mat, nrows, ncols, what):
    if isinstance(mat, SparseMatrix):
        if mat.shape != (nrows, ncols):
            raise ValueError(f"{what} must have shape ({nrows}, {ncols}), got {mat.shape}")
        return mat
    dense = np.asarray(mat, dtype=float)
    if dense.shape != (nrows, ncols):
        raise ValueError(f"{what} must have shape ({nrows}, {ncols}), got {dense.shape}")
    return SparseMatrix.from_dense(dense)


@dataclass(eq=False)
class PlayerProgram:
    """One player's data: objective, coupling, constraints, bounds.

    C has one row per opponent variable (all opponents stacked in player
    order) and one column per own variable.  Integer variables must come
    with finite bounds.
    """

    name: str
    c: np.ndarray
    C: SparseMatrix
    A: SparseMatrix
    b: np.ndarray
    integers: tuple = ()
    lb: np.ndarray = None
    ub: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if self.c.ndim != 1 or self.c.size == 0:
            raise ValueError("c must be a nonempty vector")
        m = self.c.size
        if not np.all(np.isfinite(self.c)):
            raise ValueError("c must be finite")
        if not isinstance(self.C, SparseMatrix):
            self.C = _as_sparse(self.C, np.asarray(self.C).shape[0], m, "C")
        if self.C.ncols != m:
            raise ValueError(f"C must have {m} columns")
        nrows = self.A.shape[0] if isinstance(self.A, SparseMatrix) else np.asarray(self.A).shape[0]
        self.A = _as_sparse(self.A, nrows, m, "A")
        self.b = np.asarray(self.b, dtype=float)
        if self.b.shape != (nrows,) or not np.all(np.isfinite(self.b)):
            raise ValueError("b must be finite with one entry per row of A")
        ints = sorted(int(j) for j in self.integers)
        if len(set(ints)) != len(ints):
            raise ValueError("duplicate integer index")
        if ints and (ints[0] < 0 or ints[-1] >= m):
            raise ValueError("integer index out of range")
        self.integers = tuple(ints)
        self.lb = np.zeros(m) if self.lb is None else np.asarray(self.lb, dtype=float)
        self.ub = np.ones(m) if self.ub is None else np.asarray(self.ub, dtype=float)
        if self.lb.shape != (m,) or self.ub.shape != (m,):
            raise ValueError("bounds must match the variable count")
        if np.any(self.lb > self.ub):
            raise ValueError("lb must not exceed ub")
        for j in self.integers:
            if not (np.isfinite(self.lb[j]) and np.isfinite(self.ub[j])):
                raise ValueError(f"integer variable {j} needs finite bounds")
        self._dense_A = self.A.to_dense()

    @property
    def nvars(self):
        return self.c.size

    @property
    def opp_vars(self):
        return self.C.nrows

    def relaxation(self):
        """LP relaxation feasible set as a Polyhedron."""
        return Polyhedron(self._dense_A, self.b, self.lb, self.ub)


def parametrized_objective(program, opponents):
    """Effective cost  c + C' opp  seen by the player at a fixed opponent point."""
    opponents = np.asarray(opponents, dtype=float)
    if opponents.shape != (program.opp_vars,):
        raise ValueError(f"expected opponent vector of length {program.opp_vars}")
    return program.c + program.C.rmatvec(opponents)


def payoff(program, own, opponents):
    """Objective value  c.x + opp' C x  at a strategy pair."""
    own = np.asarray(own, dtype=float)
    if own.shape != (program.nvars,):
        raise ValueError(f"expected own vector of length {program.nvars}")
    return float(parametrized_objective(program, opponents) @ own)


def solve_ip(program, opponents=None, node_limit=200000, deadline=None, tol=1e-9):
    """Best response by branch and bound.

    Most-fractional branching with lowest-index ties, best-bound node
    selection.  Returns an LPResult (Optimal or Infeasible); raises
    BudgetExhausted carrying the incumbent when a limit is hit.
    """
    if opponents is None:
        opponents = np.zeros(program.opp_vars)
    cost = parametrized_objective(program, opponents)
    A, b = program._dense_A, program.b
    ints = np.array(program.integers, dtype=np.int64)

    best_x, best_val = None, np.inf
    heap = []
    counter = 0
    root = (program.lb.copy(), program.ub.copy())
    res = solve_lp(LinearProgram(cost, A, b, *root), tol=tol)
    if res.status is LPStatus.INFEASIBLE:
        return LPResult(LPStatus.INFEASIBLE)
    if res.status is LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED)
    heapq.heappush(heap, (res.value, counter, root, res.x))
    nodes = 1

    def out_of_budget():
        if nodes >= node_limit:
            return True
        return deadline is not None and time.monotonic() > deadline

    while heap:
        bound, _, (lo, hi), x = heapq.heappop(heap)
        if bound >= best_val - _PRUNE_TOL:
            continue
        frac = np.abs(x[ints] - np.round(x[ints])) if ints.size else np.zeros(0)
        if not ints.size or frac.max() <= _INT_FEAS_TOL:
            cand = x.copy()
            if ints.size:
                cand[ints] = np.round(cand[ints])
                np.clip(cand, program.lb, program.ub, out=cand)
            if bool(np.all(A @ cand <= b + 1e-7)):
                val = float(cost @ cand)
                if val < best_val - _PRUNE_TOL:
                    best_val, best_x = val, cand
                continue
            # rounding broke a row; split on the most perturbed integer
            if not ints.size:
                continue
            j = int(ints[np.argmax(frac)])
        else:
            # most fractional first, lowest index on ties
            j = int(ints[np.argmax(frac)])
        if out_of_budget():
            inc = None
            if best_x is not None:
                inc = LPResult(LPStatus.OPTIMAL, x=best_x, value=best_val)
            raise BudgetExhausted("branch-and-bound budget exhausted", incumbent=inc)
        xj = x[j]
        for lo_j, hi_j in ((lo[j], math.floor(xj)), (math.ceil(xj), hi[j])):
            child_lo, child_hi = lo.copy(), hi.copy()
            child_lo[j], child_hi[j] = max(lo[j], lo_j), min(hi[j], hi_j)
            if child_lo[j] > child_hi[j]:
                continue
            child = solve_lp(LinearProgram(cost, A, b, child_lo, child_hi), tol=tol)
            nodes += 1
            if child.status is LPStatus.INFEASIBLE:
                continue
            if child.status is LPStatus.UNBOUNDED:
                return LPResult(LPStatus.UNBOUNDED)
            if child.value < best_val - _PRUNE_TOL:
                counter += 1
                heapq.heappush(heap, (child.value, counter, (child_lo, child_hi), child.x))

    if best_x is None:
        return LPResult(LPStatus.INFEASIBLE)
    return LPResult(LPStatus.OPTIMAL, x=best_x, value=best_val, iterations=nodes)
