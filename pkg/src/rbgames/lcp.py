"""Linear complementarity:  0 <= z  perp  M z + q >= 0.

Two solvers.  Branching fixes complementarity pairs one index at a time
(z_j = 0 or w_j = 0), solving a bounded LP relaxation per node; it is
complete, so an exhausted tree certifies that no solution exists.
Lemke pivoting with the all-ones covering vector is faster on clean
instances but ray termination proves nothing.
"""

import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BudgetExhausted, NumericalFailure
from .lp import LinearProgram, LPStatus, solve_lp
from .numerics import DEFAULT_TOLS

FIX_FREE = 0
FIX_Z_ZERO = 1
FIX_W_ZERO = 2


class LCPMethod(Enum):
    BRANCHING = "branching"
    LEMKE = "lemke"


@dataclass(eq=False)
class LCP:
    M: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.M = np.asarray(self.M, dtype=float)
        self.q = np.asarray(self.q, dtype=float)
        if self.M.ndim != 2 or self.M.shape[0] != self.M.shape[1]:
            raise ValueError("M must be square")
        if self.q.shape != (self.M.shape[0],):
            raise ValueError("q must match the order of M")
        if not (np.all(np.isfinite(self.M)) and np.all(np.isfinite(self.q))):
            raise ValueError("M and q must be finite")

    @property
    def order(self):
        return self.M.shape[0]


@dataclass(eq=False)
class LCPSolution:
    z: np.ndarray
    w: np.ndarray
    method: LCPMethod
    nodes: int = 0

    def residuals(self):
        """(min z, min w, z.w) for quick invariant checks."""
        zmin = float(self.z.min()) if self.z.size else 0.0
        wmin = float(self.w.min()) if self.w.size else 0.0
        return zmin, wmin, float(self.z @ self.w)


@dataclass(eq=False)
class NoSolution:
    """Outcome of an unsuccessful search; ``certified`` means the whole

    complementarity tree was exhausted, proving the LCP has no solution.
    """

    certified: bool
    nodes: int = 0


def solve_lcp_with_fixings(problem, fixings, tol=1e-9):
    """LP relaxation of the LCP under per-index fixings.

    Minimizes the sum of z_j + w_j over unfixed indexes subject to
    z >= 0, M z + q >= 0 and the fixings.  Returns an LCPSolution-shaped
    point (complementarity not guaranteed) or None when infeasible.
    """
    n = problem.order
    fixings = np.asarray(fixings, dtype=np.int64)
    if fixings.shape != (n,):
        raise ValueError("one fixing per index required")
    M, q = problem.M, problem.q
    # rows: -(M z) <= q  encodes w >= 0;  w_j = 0 adds the opposite row
    rows = [-M]
    rhs = [q]
    wzero = np.nonzero(fixings == FIX_W_ZERO)[0]
    if wzero.size:
        rows.append(M[wzero])
        rhs.append(-q[wzero])
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    ub[fixings == FIX_Z_ZERO] = 0.0
    free = fixings == FIX_FREE
    cost = free.astype(float) + M[free].sum(axis=0)
    res = solve_lp(LinearProgram(cost, A, b, lb, ub), tol=tol)
    if res.status is LPStatus.INFEASIBLE:
        return None
    if res.status is LPStatus.UNBOUNDED:
        # the heuristic objective can be unbounded; fall back to feasibility
        res = solve_lp(LinearProgram(np.zeros(n), A, b, lb, ub), tol=tol)
        if res.status is not LPStatus.OPTIMAL:
            return None
    z = res.x
    return LCPSolution(z=z, w=M @ z + q, method=LCPMethod.BRANCHING)


def _pattern_solve(problem, basic, tol=1e-9):
    """Exact solution attempt for a guessed complementarity pattern.

    ``basic`` marks the indexes where w is pinned to zero; the rest get
    z = 0.  One linear solve either yields a verified solution or None.
    """
    M, q = problem.M, problem.q
    n = problem.order
    z = np.zeros(n)
    idx = np.nonzero(basic)[0]
    if idx.size:
        try:
            zb = np.linalg.solve(M[np.ix_(idx, idx)], -q[idx])
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(zb)) or np.any(zb < -tol):
            return None
        z[idx] = np.clip(zb, 0.0, None)
    w = M @ z + q
    if np.any(w < -tol):
        return None
    w[idx] = 0.0
    return LCPSolution(z=z, w=w, method=LCPMethod.BRANCHING)


def _branching(problem, eps, node_limit, deadline):
    n = problem.order
    nodes = 0
    stack = [np.zeros(n, dtype=np.int64)]
    while stack:
        if nodes >= node_limit or (deadline is not None and time.monotonic() > deadline):
            raise BudgetExhausted("LCP branching budget exhausted")
        fixings = stack.pop()
        nodes += 1
        sol = solve_lcp_with_fixings(problem, fixings)
        if sol is None:
            continue
        prod = np.abs(sol.z * sol.w)
        free = fixings == FIX_FREE
        prod[~free] = 0.0
        j = int(np.argmax(prod))
        if prod[j] <= eps:
            sol.nodes = nodes
            return sol
        # guess the pattern the relaxation is pointing at; one linear
        # solve often settles the node without deeper branching
        basic = (fixings == FIX_W_ZERO) | (free & (sol.z > np.maximum(sol.w, eps)))
        polished = _pattern_solve(problem, basic)
        if polished is not None:
            polished.nodes = nodes
            return polished
        # explore the side the relaxation already leans toward first
        hi = fixings.copy()
        hi[j] = FIX_W_ZERO
        lo = fixings.copy()
        lo[j] = FIX_Z_ZERO
        if sol.z[j] > sol.w[j]:
            stack.append(lo)
            stack.append(hi)
        else:
            stack.append(hi)
            stack.append(lo)
    return NoSolution(certified=True, nodes=nodes)


def _lemke(problem, eps, max_iter):
    n = problem.order
    M, q = problem.M, problem.q
    if np.all(q >= -eps):
        z = np.zeros(n)
        return LCPSolution(z=z, w=q.copy(), method=LCPMethod.LEMKE, nodes=0)
    # tableau over columns [w | z | z0], basis starts as w
    piv_tol = 1e-10
    T = np.hstack([np.eye(n), -M, -np.ones((n, 1)), q.reshape(-1, 1)])
    basis = list(range(n))
    r = int(np.argmin(q))
    entering = 2 * n  # z0

    for it in range(max_iter):
        piv = T[r, entering]
        if abs(piv) < piv_tol:
            return NoSolution(certified=False, nodes=it)
        T[r] /= piv
        for i in range(n):
            if i != r and T[i, entering] != 0.0:
                T[i] -= T[i, entering] * T[r]
        leaving = basis[r]
        basis[r] = entering
        if leaving == 2 * n:
            break
        # complement of the leaving variable enters next
        entering = leaving + n if leaving < n else leaving - n
        col = T[:, entering]
        rhs = T[:, -1]
        ratios = np.full(n, np.inf)
        pos = col > piv_tol
        ratios[pos] = rhs[pos] / col[pos]
        if not np.isfinite(ratios.min()):
            return NoSolution(certified=False, nodes=it)  # ray termination
        best = ratios.min()
        ties = np.nonzero(ratios <= best + 1e-9)[0]
        # drive z0 out as soon as it blocks; otherwise lowest row index
        z0_rows = [i for i in ties if basis[i] == 2 * n]
        r = int(z0_rows[0]) if z0_rows else int(ties[0])
    else:
        raise BudgetExhausted("Lemke iteration cap hit")

    z = np.zeros(n)
    rhs = T[:, -1]
    for i, var in enumerate(basis):
        if n <= var < 2 * n:
            z[var - n] = max(rhs[i], 0.0)
    return LCPSolution(z=z, w=M @ z + q, method=LCPMethod.LEMKE, nodes=it + 1)


def _within_residuals(out, eps, order):
    zmin, wmin, gap = out.residuals()
    norm = 1.0 + float(np.max(np.abs(out.z), initial=0.0)) * float(np.max(np.abs(out.w), initial=0.0))
    return zmin >= -eps and wmin >= -eps and gap <= eps * max(norm, order)


def solve_lcp(problem, method=LCPMethod.BRANCHING, tols=DEFAULT_TOLS,
              node_limit=100000, deadline=None, max_iter=None):
    """Solve the LCP; returns LCPSolution or NoSolution.

    Branching exhausts the complementarity tree, so its NoSolution is a
    certificate of emptiness; complementary pivoting is tried first as a
    root heuristic because it is far cheaper when it lands.  Lemke's own
    NoSolution (ray termination) is inconclusive.  Raises
    BudgetExhausted when limits run out.
    """
    eps = tols.complementarity
    if method is LCPMethod.BRANCHING:
        try:
            probe = _lemke(problem, eps, 200 + 30 * problem.order)
        except BudgetExhausted:
            probe = None
        if isinstance(probe, LCPSolution) and _within_residuals(probe, eps, problem.order):
            probe.nodes = 0
            return probe
        out = _branching(problem, eps, node_limit, deadline)
    elif method is LCPMethod.LEMKE:
        out = _lemke(problem, eps, max_iter or (200 + 30 * problem.order))
    else:
        raise ValueError(f"unknown LCP method: {method}")
    if isinstance(out, LCPSolution) and not _within_residuals(out, eps, problem.order):
        if method is LCPMethod.LEMKE:
            return NoSolution(certified=False, nodes=out.nodes)
        raise NumericalFailure("LCP residuals out of tolerance")
    return out
