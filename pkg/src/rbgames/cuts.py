"""Valid inequalities for the integer points of a player's region.

Two families: knapsack cover cuts from single <= rows over binary
variables, and Gomory fractional cuts read off an optimal simplex
tableau of the integer-data subsystem.  Every cut returned here keeps
all integer-feasible points and strictly separates the queried point.
"""

import numpy as np

from .lp import LinearProgram, LPStatus, solve_lp
from .lp import _AT_LB, _AT_UB, _BASIC  # noqa: F401  (tableau status codes)
from .numerics import DEFAULT_TOLS

_FRAC_TOL = 1e-6


def _is_integral(arr, tol=1e-9):
    return bool(np.all(np.abs(arr - np.round(arr)) <= tol))


def cover_cuts(A, b, sigma, binary, eps=DEFAULT_TOLS.feasibility):
    """Greedy minimal-cover separation on each eligible knapsack row.

    A row is eligible when every variable it touches is binary and its
    coefficients are positive.  Returns (pi, pi0) pairs with pi.sigma >
    pi0 + eps.
    """
    sigma = np.asarray(sigma, dtype=float)
    out = []
    for i in range(A.shape[0]):
        a = A[i]
        sup = np.nonzero(a)[0]
        if sup.size < 2:
            continue
        if not np.all(binary[sup]) or np.any(a[sup] < 0) or not _is_integral(a[sup]) or not _is_integral(b[i : i + 1]):
            continue
        if a[sup].sum() <= b[i]:
            continue
        # take items by descending sigma until the weights overflow b
        order = sup[np.argsort(-sigma[sup], kind="stable")]
        cover, weight = [], 0.0
        for j in order:
            cover.append(int(j))
            weight += a[j]
            if weight > b[i]:
                break
        if weight <= b[i]:
            continue
        # minimalize: drop items while the rest still overflows
        for j in sorted(cover, key=lambda t: sigma[t]):
            if weight - a[j] > b[i]:
                cover.remove(j)
                weight -= a[j]
        if sigma[cover].sum() > len(cover) - 1 + eps:
            pi = np.zeros(A.shape[1])
            pi[cover] = 1.0
            out.append((pi, float(len(cover) - 1)))
    return out


def gomory_cuts(A, b, lb, ub, integers, cost, sigma, eps=DEFAULT_TOLS.feasibility):
    """Gomory fractional cuts violated by sigma.

    Requires a pure-integer system with integral data and bounds; rows
    that fail this are dropped from the subsystem before solving, which
    keeps the generated cuts valid for all integer points.  The LP is
    solved with the supplied cost (sigma's supporting objective), and
    cuts come from fractional basic rows of its optimal tableau.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.size
    if len(integers) != n or not (_is_integral(lb) and _is_integral(ub)):
        return []
    if not (np.all(np.isfinite(lb)) and np.all(np.isfinite(ub))):
        return []
    keep = [i for i in range(A.shape[0]) if _is_integral(A[i]) and _is_integral(b[i : i + 1])]
    if not keep:
        return []
    As, bs = A[keep], b[keep]
    res = solve_lp(LinearProgram(np.asarray(cost, dtype=float), As, bs, lb, ub), keep_tableau=True)
    if res.status is not LPStatus.OPTIMAL:
        return []
    tab = res.tableau
    m = tab.nrows
    out = []
    for r in range(m):
        bvar = int(tab.basis[r])
        if bvar >= n:
            continue  # slack basic; its row cannot cut a structural point
        val = tab.x[bvar]
        f0 = val - np.floor(val)
        if f0 < _FRAC_TOL or f0 > 1 - _FRAC_TOL:
            continue
        pi = np.zeros(n)
        pi0 = -f0
        ok = True
        for j in range(tab.T.shape[1]):
            st = tab.status[j]
            if st == _BASIC:
                continue
            t = tab.T[r, j]
            if st == _AT_LB:
                abar = t
            elif st == _AT_UB:
                abar = -t
            else:
                if abs(t) > 1e-9:
                    ok = False
                    break
                continue
            f = abar - np.floor(abar)
            if f <= 1e-9 or f >= 1 - 1e-9:
                continue
            gamma = -f if st == _AT_LB else f
            if j < n:
                pi[j] += gamma
                pi0 += gamma * (lb[j] if st == _AT_LB else ub[j])
            else:
                # slack of subsystem row j-n stands for b_row - A_row x
                row = j - n
                pi += -gamma * As[row]
                pi0 += -gamma * bs[row]
        if not ok:
            continue
        if float(pi @ sigma) > pi0 + eps:
            out.append((pi, float(pi0)))
    return out
