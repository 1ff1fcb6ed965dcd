"""Polyhedra and lifted convex hulls of unions.

The hull of a union of bounded polyhedra is kept in extended form: one
scaled copy of each piece plus convex multipliers.  Membership and
decomposition are feasibility LPs over the lifted variables; no vertex
or facet enumeration happens anywhere.
"""

import numpy as np

from .errors import EmptyUnion
from .lp import LinearProgram, LPStatus, solve_lp
from .numerics import DEFAULT_TOLS


class Polyhedron:
    """{ x : A x <= b, lb <= x <= ub } with possibly infinite bounds."""

    __slots__ = ("A", "b", "lb", "ub", "_box")

    def __init__(self, A, b, lb, ub):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.lb = np.asarray(lb, dtype=float)
        self.ub = np.asarray(ub, dtype=float)
        if self.A.ndim != 2:
            raise ValueError("A must be 2-d")
        n = self.A.shape[1]
        if self.b.shape != (self.A.shape[0],):
            raise ValueError("b must match the row count of A")
        if self.lb.shape != (n,) or self.ub.shape != (n,):
            raise ValueError("bounds must have one entry per column")
        if np.any(self.lb > self.ub):
            raise ValueError("lb must not exceed ub")
        self._box = None

    @property
    def dim(self):
        return self.A.shape[1]

    @property
    def nrows(self):
        return self.A.shape[0]

    def contains(self, x, eps=DEFAULT_TOLS.feasibility):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"point must have dimension {self.dim}")
        if np.any(x < self.lb - eps) or np.any(x > self.ub + eps):
            return False
        return bool(np.all(self.A @ x <= self.b + eps)) if self.nrows else True

    def with_rows(self, rows, rhs):
        """New polyhedron with extra <= rows appended."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        return Polyhedron(np.vstack([self.A, rows]), np.concatenate([self.b, rhs]), self.lb, self.ub)

    def with_bound(self, j, lo=None, hi=None):
        """New polyhedron with variable j's bounds tightened.

        Returns None when the tightened bounds cross (empty child).
        """
        lb, ub = self.lb.copy(), self.ub.copy()
        if lo is not None:
            lb[j] = max(lb[j], lo)
        if hi is not None:
            ub[j] = min(ub[j], hi)
        if lb[j] > ub[j]:
            return None
        return Polyhedron(self.A, self.b, lb, ub)

    def is_empty(self, feas_tol=None):
        n = self.dim
        res = solve_lp(LinearProgram(np.zeros(n), self.A, self.b, self.lb, self.ub), feas_tol=feas_tol)
        return res.status is LPStatus.INFEASIBLE

    def bounding_box(self):
        """Componentwise (min, max) over the set; raises if unbounded.

        Finite declared bounds are taken as-is; coordinates with an
        infinite bound are tightened by an LP in that direction.
        """
        if self._box is not None:
            return self._box
        lo, hi = self.lb.copy(), self.ub.copy()
        for j in range(self.dim):
            for sign, arr in ((1.0, lo), (-1.0, hi)):
                if np.isfinite(arr[j]):
                    continue
                c = np.zeros(self.dim)
                c[j] = sign
                res = solve_lp(LinearProgram(c, self.A, self.b, self.lb, self.ub))
                if res.status is LPStatus.UNBOUNDED:
                    raise ValueError(f"polyhedron unbounded in coordinate {j}")
                if res.status is LPStatus.INFEASIBLE:
                    raise ValueError("cannot box an empty polyhedron")
                arr[j] = res.x[j]
        self._box = (lo, hi)
        return self._box

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, rows={self.nrows})"


class ExtendedHull:
    """Closure of the convex hull of a union of bounded polyhedra."""

    __slots__ = ("pieces", "boxes", "dim")

    def __init__(self, pieces, boxes):
        self.pieces = list(pieces)
        self.boxes = list(boxes)
        self.dim = self.pieces[0].dim

    def __repr__(self):
        return f"ExtendedHull(dim={self.dim}, pieces={len(self.pieces)})"


def convex_hull(pieces, tols=DEFAULT_TOLS):
    """Build the hull of a union of pieces (Polyhedron or ExtendedHull).

    Empty pieces are dropped; nested hulls are flattened.  Every piece
    must be bounded.  Raises EmptyUnion when nothing remains.
    """
    flat = []
    for p in pieces:
        if isinstance(p, ExtendedHull):
            flat.extend(p.pieces)
        else:
            flat.append(p)
    if not flat:
        raise EmptyUnion("hull of an empty union")
    dim = flat[0].dim
    kept, boxes = [], []
    for p in flat:
        if p.dim != dim:
            raise ValueError("hull pieces must share a dimension")
        if p.is_empty():
            continue
        kept.append(p)
        boxes.append(p.bounding_box())
    if not kept:
        raise EmptyUnion("every piece of the union is empty")
    return ExtendedHull(kept, boxes)


def _lifted_lp(hull, x, eps):
    """Feasibility LP for x in hull; variables are (x_k, theta_k) per piece."""
    n, K = hull.dim, len(hull.pieces)
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"point must have dimension {n}")
    width = K * (n + 1)

    def xk(k):
        return slice(k * n, (k + 1) * n)

    theta0 = K * n
    rows, rhs = [], []
    for k, (piece, (lo, hi)) in enumerate(zip(hull.pieces, hull.boxes)):
        # piece rows scaled by theta_k:  A_k x_k - b_k theta_k <= 0
        for i in range(piece.nrows):
            row = np.zeros(width)
            row[xk(k)] = piece.A[i]
            row[theta0 + k] = -piece.b[i]
            rows.append(row)
            rhs.append(0.0)
        # box rows:  lo_k theta_k <= x_k <= hi_k theta_k
        for j in range(n):
            row = np.zeros(width)
            row[k * n + j] = 1.0
            row[theta0 + k] = -hi[j]
            rows.append(row)
            rhs.append(0.0)
            row = np.zeros(width)
            row[k * n + j] = -1.0
            row[theta0 + k] = lo[j]
            rows.append(row)
            rhs.append(0.0)
    # linking: sum_k x_k = x (within eps), convexity: sum theta = 1
    for j in range(n):
        row = np.zeros(width)
        for k in range(K):
            row[k * n + j] = 1.0
        rows.append(row.copy())
        rhs.append(x[j] + eps)
        rows.append(-row)
        rhs.append(-(x[j] - eps))
    row = np.zeros(width)
    row[theta0:] = 1.0
    rows.append(row.copy())
    rhs.append(1.0)
    rows.append(-row)
    rhs.append(-1.0)

    lb = np.zeros(width)
    ub = np.zeros(width)
    for k, (lo, hi) in enumerate(hull.boxes):
        lb[xk(k)] = np.minimum(lo, 0.0)
        ub[xk(k)] = np.maximum(hi, 0.0)
    ub[theta0:] = 1.0
    return LinearProgram(np.zeros(width), np.array(rows), np.array(rhs), lb, ub), theta0, n


def hull_contains(hull, x, eps=DEFAULT_TOLS.feasibility):
    """Membership of x in the hull, up to eps slack on the linking rows."""
    lp, _, _ = _lifted_lp(hull, x, eps)
    return solve_lp(lp).status is LPStatus.OPTIMAL


def decompose(hull, x, tols=DEFAULT_TOLS):
    """Write x as a convex combination of points of the pieces.

    Returns a list of (weight, point) pairs, one per piece with weight
    above the zero tolerance, weights renormalized to sum to one.
    Raises ValueError when x is not a member.
    """
    lp, theta0, n = _lifted_lp(hull, x, tols.feasibility)
    res = solve_lp(lp)
    if res.status is not LPStatus.OPTIMAL:
        raise ValueError("point is not in the hull")
    theta = res.x[theta0:]
    out = []
    for k, t in enumerate(theta):
        if t <= tols.zero:
            continue
        point = res.x[k * n : (k + 1) * n] / t
        out.append((float(t), point))
    total = sum(w for w, _ in out)
    return [(w / total, p) for w, p in out]
