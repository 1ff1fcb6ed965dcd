"""Equilibria by outer approximation: cut and play.

Each player's mixed-strategy hull is approximated from outside by a
union of polyhedral pieces, starting from the LP relaxation.  Each
round solves the stacked KKT complementarity system of the convexified
game, then asks a separation oracle whether every player's strategy
point really lies in its hull.  Points that do not are cut off (cover
or Gomory cuts) or branched away; certified members trigger the final
best-response check.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import cuts as cutgen
from .enumeration import full_enumeration, lattice_points
from .errors import BudgetExhausted, InfeasibleGame, NumericalFailure
from .game import (EqStatus, EquilibriumResult, PlayerStrategy,
                   SolveStats, StrategyProfile, build_nash_lcp,
                   deviation_check, opponents_vector, profile_payoffs,
                   support_from_points)
from .ip import parametrized_objective, solve_ip
from .lcp import LCPMethod, NoSolution, solve_lcp
from .lp import LPStatus
from .numerics import DEFAULT_TOLS, Tolerances
from .poly import ExtendedHull, convex_hull, decompose

_INT_TOL = 1e-6
_ORACLE_CAP = 1 << 16


class Algorithm:
    CUT_AND_PLAY = "cutandplay"
    FULL_ENUMERATION = "fullenum"


@dataclass(eq=False)
class SolverOptions:
    """Knobs shared by both algorithms.

    ``seed`` is accepted for reproducibility of callers that generate
    instances; the solvers themselves are deterministic and break every
    tie by lowest index.
    """

    algorithm: str = Algorithm.CUT_AND_PLAY
    deviation_eps: float = DEFAULT_TOLS.deviation
    time_limit: float = None
    workers: int = 1
    lcp_method: LCPMethod = LCPMethod.BRANCHING
    max_iterations: int = 100
    seed: int = 0
    tols: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.algorithm not in (Algorithm.CUT_AND_PLAY, Algorithm.FULL_ENUMERATION):
            raise ValueError(f"unknown algorithm: {self.algorithm}")
        if self.deviation_eps <= 0:
            raise ValueError("deviation_eps must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(eq=False)
class Member:
    pass


@dataclass(eq=False)
class Cuts:
    cuts: list  # (pi, pi0) pairs over the player's own variables


@dataclass(eq=False)
class Branch:
    index: int
    floor: int


class PlayerState:
    """Outer approximation of one player's mixed-strategy hull."""

    def __init__(self, program, tols=DEFAULT_TOLS):
        self.program = program
        self.tols = tols
        self.pieces = [program.relaxation()]
        self.cut_pool = []  # (pi, pi0), all valid for every integer point
        self._region = None
        self._pure = False  # False: not computed yet; None: unavailable

    def region(self):
        if self._region is None:
            if len(self.pieces) == 1:
                self._region = self.pieces[0]
            else:
                self._region = convex_hull(self.pieces, self.tols)
        return self._region

    def pure_points(self):
        if self._pure is False:
            self._pure = lattice_points(self.program, cap=_ORACLE_CAP)
        return self._pure

    def base_rows(self):
        """Original rows plus pooled cuts: the valid-row system for cut search."""
        A = self.program._dense_A
        b = self.program.b
        if self.cut_pool:
            A = np.vstack([A] + [pi[None, :] for pi, _ in self.cut_pool])
            b = np.concatenate([b, [pi0 for _, pi0 in self.cut_pool]])
        return A, b

    def apply_cuts(self, new_cuts):
        pure = self.pure_points()
        for pi, pi0 in new_cuts:
            if pure is not None and pure.size:
                worst = float(np.max(pure @ pi) - pi0)
                if worst > self.tols.feasibility:
                    raise NumericalFailure(f"generated cut drops an integer point by {worst:.2e}")
        self.cut_pool.extend(new_cuts)
        rows = np.array([pi for pi, _ in new_cuts])
        rhs = np.array([pi0 for _, pi0 in new_cuts])
        survivors = []
        for piece in self.pieces:
            child = piece.with_rows(rows, rhs)
            if not child.is_empty():
                survivors.append(child)
        if not survivors:
            raise InfeasibleGame(f"player {self.program.name}: region emptied by cuts")
        self.pieces = survivors
        self._region = None

    def apply_branch(self, j, floor_val):
        survivors = []
        for piece in self.pieces:
            for child in (piece.with_bound(j, hi=floor_val), piece.with_bound(j, lo=floor_val + 1)):
                if child is not None and not child.is_empty():
                    survivors.append(child)
        if not survivors:
            raise InfeasibleGame(f"player {self.program.name}: region emptied by branching")
        self.pieces = survivors
        self._region = None


class OuterApproximation:
    """Per-player refinement state for one cut-and-play run."""

    def __init__(self, game, tols=DEFAULT_TOLS):
        self.game = game
        self.states = [PlayerState(p, tols) for p in game.players]

    def regions(self):
        return [s.region() for s in self.states]


def separation_oracle(state, sigma, cost=None, tols=DEFAULT_TOLS):
    """Decide Member / Cuts / Branch for a strategy point.

    Member is only returned with a certificate: the point is integral
    and feasible, or it is a convex combination of enumerated pure
    strategies.  Otherwise prefer cuts (cover, then Gomory with the
    supplied supporting cost); branching on the most fractional integer
    coordinate is the fallback.
    """
    p = state.program
    sigma = np.asarray(sigma, dtype=float)
    ints = np.array(p.integers, dtype=np.int64)

    if ints.size:
        frac = np.abs(sigma[ints] - np.round(sigma[ints]))
        if frac.max() <= _INT_TOL:
            snapped = sigma.copy()
            snapped[ints] = np.round(snapped[ints])
            if p.relaxation().contains(snapped, tols.feasibility):
                return Member()
    else:
        if p.relaxation().contains(sigma, tols.feasibility):
            return Member()

    pure = state.pure_points()
    if pure is not None and pure.size:
        if support_from_points(pure, sigma, tols) is not None:
            return Member()

    A, b = state.base_rows()
    binary = np.zeros(p.nvars, dtype=bool)
    for j in ints:
        binary[j] = p.lb[j] == 0.0 and p.ub[j] == 1.0
    found = cutgen.cover_cuts(A, b, sigma, binary, tols.feasibility)
    if not found and cost is not None and ints.size == p.nvars:
        found = cutgen.gomory_cuts(A, b, p.lb, p.ub, p.integers, cost, sigma, tols.feasibility)
    if found:
        return Cuts(found)

    if not ints.size:
        raise NumericalFailure(
            f"player {p.name}: continuous point escaped its hull with no cut available"
        )
    # branch on the most fractional coordinate whose split still divides
    # some piece; a split that every piece already satisfies one side of
    # would leave the region unchanged and stall the refinement loop
    frac = np.abs(sigma[ints] - np.round(sigma[ints]))
    for k in np.argsort(-frac, kind="stable"):
        if frac[k] <= _INT_TOL:
            break
        j = int(ints[k])
        f = math.floor(sigma[j])
        if _splits_a_piece(state, j, f):
            return Branch(index=j, floor=f)
    for j in ints:
        j = int(j)
        for piece in state.pieces:
            lo, hi = piece.lb[j], piece.ub[j]
            f = math.floor((lo + hi) / 2.0)
            if f < lo:
                f = math.ceil(lo)
            if lo <= f < hi:
                return Branch(index=j, floor=f)
    raise NumericalFailure(
        f"player {p.name}: point escaped the hull but every piece is fully branched"
    )


def _splits_a_piece(state, j, floor_value):
    return any(piece.lb[j] <= floor_value < piece.ub[j] for piece in state.pieces)


def refine_region(state, action):
    """Apply a separation outcome to the player's piece set."""
    if isinstance(action, Cuts):
        state.apply_cuts(action.cuts)
    elif isinstance(action, Branch):
        state.apply_branch(action.index, action.floor)
    else:
        raise TypeError("refine_region expects Cuts or Branch")


def _result(status, stats, profile=None, payoffs=None):
    return EquilibriumResult(status=status, profile=profile, payoffs=payoffs, stats=stats)


def cut_and_play(game, opts=None, watcher=None):
    """Find one equilibrium of the game by outer approximation.

    ``watcher(outer, iteration)`` runs after every refinement round, a
    hook used by the test suite to audit the outer-ness invariant.
    """
    opts = opts or SolverOptions()
    tols = opts.tols
    t0 = time.monotonic()
    deadline = t0 + opts.time_limit if opts.time_limit is not None else None
    stats = SolveStats()

    def finish(status, profile=None, payoffs=None):
        stats.wall_ms = (time.monotonic() - t0) * 1000.0
        return _result(status, stats, profile, payoffs)

    # a player with an empty strategy set means no equilibrium of any kind
    for i, p in enumerate(game.players):
        try:
            probe = solve_ip(p, np.zeros(p.opp_vars), deadline=deadline)
        except BudgetExhausted:
            return finish(EqStatus.TIME_LIMIT)
        if probe.status is LPStatus.INFEASIBLE:
            return finish(EqStatus.INFEASIBLE)
        if probe.status is LPStatus.UNBOUNDED:
            raise ValueError(f"player {i} ({p.name}) must have a bounded feasible set")

    outer = OuterApproximation(game, tols)
    for iteration in range(1, opts.max_iterations + 1):
        stats.iterations = iteration
        if deadline is not None and time.monotonic() > deadline:
            return finish(EqStatus.TIME_LIMIT)
        problem, index_map = build_nash_lcp(game, outer.regions(), tols)
        try:
            sol = solve_lcp(problem, method=opts.lcp_method, tols=tols, deadline=deadline)
        except BudgetExhausted:
            if deadline is not None and time.monotonic() > deadline:
                return finish(EqStatus.TIME_LIMIT)
            return finish(EqStatus.NUMERICAL_FAILURE)
        if isinstance(sol, NoSolution):
            if sol.certified:
                return finish(EqStatus.NO_EQUILIBRIUM_FOUND)
            return finish(EqStatus.NUMERICAL_FAILURE)
        stats.lcp_nodes += sol.nodes

        sigmas = index_map.extract(sol.z)
        actions = []
        for i, state in enumerate(outer.states):
            cost = parametrized_objective(game.players[i], opponents_vector(game, sigmas, i))
            actions.append(separation_oracle(state, sigmas[i], cost, tols))

        if all(isinstance(a, Member) for a in actions):
            return _certify(game, outer, sigmas, opts, stats, deadline, finish)

        for state, action in zip(outer.states, actions):
            if isinstance(action, Cuts):
                stats.cuts += len(action.cuts)
                refine_region(state, action)
            elif isinstance(action, Branch):
                stats.branches += 1
                refine_region(state, action)
        if watcher is not None:
            watcher(outer, iteration)

    return finish(EqStatus.NUMERICAL_FAILURE)


def _certify(game, outer, sigmas, opts, stats, deadline, finish):
    """All oracle calls said Member: round, deviation-check, and report."""
    tols = opts.tols
    strategies = []
    all_pure = True
    for i, (p, state) in enumerate(zip(game.players, outer.states)):
        sigma = sigmas[i].copy()
        ints = np.array(p.integers, dtype=np.int64)
        pure_point = True
        if ints.size:
            frac = np.abs(sigma[ints] - np.round(sigma[ints]))
            if frac.max() <= _INT_TOL:
                sigma[ints] = np.round(sigma[ints])
            else:
                pure_point = False
        if pure_point and not p.relaxation().contains(sigma, tols.feasibility):
            pure_point = False
        if pure_point:
            strategies.append(PlayerStrategy(barycenter=sigma, support=[(1.0, sigma.copy())]))
        else:
            all_pure = False
            support = None
            pure = state.pure_points()
            if pure is not None and pure.size:
                support = support_from_points(pure, sigma, tols)
            if support is None:
                region = state.region()
                hull = region if isinstance(region, ExtendedHull) else convex_hull([region], tols)
                support = decompose(hull, sigma, tols)
            strategies.append(PlayerStrategy(barycenter=sigma, support=support))

    profile = StrategyProfile(strategies)
    try:
        devs = deviation_check(game, profile, eps=opts.deviation_eps, deadline=deadline)
    except BudgetExhausted:
        return finish(EqStatus.TIME_LIMIT)
    if devs:
        return finish(EqStatus.NUMERICAL_FAILURE)
    status = EqStatus.PNE if all_pure else EqStatus.MNE
    return finish(status, profile=profile, payoffs=profile_payoffs(game, profile))


def solve_game(game, opts=None, deadline=None):
    """Dispatch on the selected algorithm; returns a list of results."""
    opts = opts or SolverOptions()
    if opts.algorithm == Algorithm.FULL_ENUMERATION:
        t0 = time.monotonic()
        if deadline is None and opts.time_limit is not None:
            deadline = t0 + opts.time_limit
        try:
            found = full_enumeration(game, deadline=deadline)
        except BudgetExhausted:
            return [_result(EqStatus.TIME_LIMIT, SolveStats(wall_ms=(time.monotonic() - t0) * 1000.0))]
        except InfeasibleGame:
            return [_result(EqStatus.INFEASIBLE, SolveStats(wall_ms=(time.monotonic() - t0) * 1000.0))]
        if not found:
            return [_result(EqStatus.NO_EQUILIBRIUM_FOUND, SolveStats(wall_ms=(time.monotonic() - t0) * 1000.0))]
        return found
    try:
        return [cut_and_play(game, opts)]
    except InfeasibleGame:
        return [_result(EqStatus.INFEASIBLE, SolveStats())]
