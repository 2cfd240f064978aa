"""Dense-tableau simplex for small LPs with bounded variables.

Two-phase primal simplex where every variable carries finite (or, for
internal slacks, half-open) bounds.  Nonbasic variables sit at one of
their bounds; pivots are chosen by largest reduced cost, falling back to
Bland's rule after a configurable streak of degenerate pivots so the
solver cannot cycle.  Constraints can be appended after a solve, which is
how the cutting-plane loop grows its LP.

Scale target is a few thousand variables; no sparse factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

EPS_FEAS = 1e-7
EPS_OPT = 1e-7
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 40  # pivots between tableau rebuilds from the basis

SENSES = ("<=", ">=", "==")


class LpError(RuntimeError):
    """Numerical breakdown or cycling guard exceeded."""


@dataclass
class LinearProgram:
    """Sparse constraint system with per-variable finite bounds.

    The objective sense is always minimize.  Rows are dicts mapping
    variable index -> coefficient.
    """

    num_vars: int
    bounds: list[tuple[float, float]]
    constraints: list[tuple[dict[int, float], str, float]] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.bounds) != self.num_vars:
            raise ValueError("bounds length must equal num_vars")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"bad bounds ({lo}, {hi})")

    def add_constraint(self, row: dict[int, float], sense: str, rhs: float) -> None:
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        if not all(math.isfinite(c) for c in row.values()) or not math.isfinite(rhs):
            raise ValueError("non-finite coefficient")
        self.constraints.append((dict(row), sense, rhs))


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    values: list[float]
    objective_value: float


def dump(lp: LinearProgram) -> str:
    """Plain-text form of the LP, one constraint per line, for cross-checks."""
    lines = ["min " + " + ".join(f"{c:g}*x{j}" for j, c in sorted(lp.objective.items()))]
    for row, sense, rhs in lp.constraints:
        expr = " + ".join(f"{c:g}*x{j}" for j, c in sorted(row.items()))
        lines.append(f"{expr} {sense} {rhs:g}")
    for j, (lo, hi) in enumerate(lp.bounds):
        lines.append(f"{lo:g} <= x{j} <= {hi:g}")
    return "\n".join(lines) + "\n"


class _Simplex:
    """One solve of a LinearProgram in bounded equality form."""

    def __init__(self, lp: LinearProgram, bland_after: int, max_iters: int | None):
        self.lp = lp
        self.bland_after = bland_after
        n = lp.num_vars
        m = len(lp.constraints)
        n_slack = sum(1 for _, sense, _ in lp.constraints if sense != "==")
        total = n + n_slack + m  # structural + slacks + artificials
        self.n, self.m, self.ns = n, m, n + n_slack
        self.total = total
        self.max_iters = max_iters if max_iters is not None else 2000 + 200 * (m + n)

        A = np.zeros((m, total))
        b = np.zeros(m)
        lo = np.zeros(total)
        hi = np.full(total, np.inf)
        for j, (l, h) in enumerate(lp.bounds):
            lo[j], hi[j] = l, h
        slack = n
        for i, (row, sense, rhs) in enumerate(lp.constraints):
            for j, c in row.items():
                if not 0 <= j < n:
                    raise ValueError(f"constraint references unknown variable {j}")
                A[i, j] += c
            b[i] = rhs
            if sense == "<=":
                A[i, slack] = 1.0
                slack += 1
            elif sense == ">=":
                A[i, slack] = -1.0
                slack += 1
        self.A, self.b, self.lo, self.hi = A, b, lo, hi

    def solve(self) -> LpSolution:
        n, m, ns, total = self.n, self.m, self.ns, self.total
        lo, hi = self.lo, self.hi

        c_struct = np.zeros(total)
        for j, c in self.lp.objective.items():
            c_struct[j] = c

        if m == 0:
            # bound-optimal point, no constraints
            x = np.where(c_struct[:n] >= 0, lo[:n], hi[:n])
            return LpSolution("optimal", list(x), float(c_struct[:n] @ x))

        # initial point: structural and slack vars at lower bound
        x_init = lo[:ns].copy()
        resid = self.b - self.A[:, :ns] @ x_init
        sigma = np.where(resid >= 0, 1.0, -1.0)
        for i in range(m):
            self.A[i, ns + i] = sigma[i]

        self.T = self.A * sigma[:, None]  # B^{-1} A with B = diag(sigma)
        self.beta = np.abs(resid)
        self.basis = list(range(ns, total))
        self.in_basis = np.zeros(total, dtype=bool)
        self.in_basis[ns:] = True
        self.at_upper = np.zeros(total, dtype=bool)

        # phase 1: minimize sum of artificials
        c1 = np.zeros(total)
        c1[ns:] = 1.0
        self._run_phase(c1)
        if float(self.beta @ c1[self.basis]) + self._nonbasic_cost(c1) > 1e-6:
            return LpSolution("infeasible", [], math.nan)

        # pin artificials at zero for phase 2
        lo[ns:] = 0.0
        hi[ns:] = 0.0
        status = self._run_phase(c_struct)
        if status == "unbounded":
            return LpSolution("unbounded", [], math.nan)

        x = np.where(self.at_upper, hi, lo)
        x[self.basis] = self.beta
        values = [float(v) for v in x[:n]]
        return LpSolution("optimal", values, float(c_struct[:n] @ x[:n]))

    def _nonbasic_cost(self, c: np.ndarray) -> float:
        x = np.where(self.at_upper, self.hi, self.lo)
        nb = ~self.in_basis
        return float(c[nb] @ x[nb])

    def _refactorize(self) -> None:
        """Rebuild T = B^{-1} A and beta from the current basis.

        Rank-one tableau updates accumulate roundoff, and a pivot on a
        near-zero element can corrupt the tableau outright; rebuilding from
        the basis columns restores both.
        """
        B = self.A[:, self.basis]
        x = np.where(self.at_upper, self.hi, self.lo)
        nb = ~self.in_basis
        rhs = self.b - self.A[:, nb] @ x[nb]
        try:
            self.T = np.linalg.solve(B, self.A)
            self.beta = np.linalg.solve(B, rhs)
        except np.linalg.LinAlgError as exc:
            raise LpError("numerical breakdown: singular basis") from exc

    def _run_phase(self, c: np.ndarray) -> str:
        z = c - c[self.basis] @ self.T
        degenerate_streak = 0
        since_refactor = 0
        iters = 0
        while True:
            bland = degenerate_streak >= self.bland_after
            j = self._choose_entering(z, bland)
            if j is None:
                if since_refactor == 0:
                    return "optimal"
                # confirm against a freshly rebuilt tableau before stopping
                self._refactorize()
                z = c - c[self.basis] @ self.T
                since_refactor = 0
                continue
            if iters >= self.max_iters:
                raise LpError(
                    f"cycling guard exceeded after {self.max_iters} pivots "
                    f"(m={self.m}, vars={self.total})"
                )
            iters += 1
            step = self._pivot(j, z, c, bland)
            if step is None:
                return "unbounded"
            degenerate_streak = degenerate_streak + 1 if step < PIVOT_TOL else 0
            since_refactor += 1
            if since_refactor >= REFACTOR_EVERY:
                self._refactorize()
                z = c - c[self.basis] @ self.T
                since_refactor = 0

    def _choose_entering(self, z: np.ndarray, bland: bool) -> int | None:
        movable = (~self.in_basis) & (self.hi > self.lo)
        improving = movable & (
            (~self.at_upper & (z < -EPS_OPT)) | (self.at_upper & (z > EPS_OPT))
        )
        idx = np.flatnonzero(improving)
        if idx.size == 0:
            return None
        if bland:
            return int(idx[0])
        return int(idx[np.argmax(np.abs(z[idx]))])

    def _pivot(self, j: int, z: np.ndarray, c: np.ndarray, bland: bool) -> float | None:
        sigma = -1.0 if self.at_upper[j] else 1.0
        col = self.T[:, j]
        rate = -sigma * col  # d(beta_i)/dt

        lo_b = self.lo[self.basis]
        hi_b = self.hi[self.basis]
        t_best = self.hi[j] - self.lo[j]
        leave_row = -1
        leave_var = -1
        leave_piv = 0.0
        for i in range(self.m):
            r = rate[i]
            if r < -PIVOT_TOL:
                t_i = (self.beta[i] - lo_b[i]) / (-r)
            elif r > PIVOT_TOL:
                if not math.isfinite(hi_b[i]):
                    continue
                t_i = (hi_b[i] - self.beta[i]) / r
            else:
                continue
            t_i = max(t_i, 0.0)
            var_i = self.basis[i]
            if t_i < t_best - PIVOT_TOL:
                better_tie = False
            elif t_i < t_best + PIVOT_TOL and leave_row >= 0:
                # near-tie: Bland breaks by index (anti-cycling), otherwise
                # take the largest pivot element for numerical stability
                better_tie = (
                    var_i < leave_var if bland else abs(col[i]) > leave_piv
                )
            else:
                continue
            if t_i < t_best - PIVOT_TOL or better_tie:
                t_best = t_i
                leave_row = i
                leave_var = var_i
                leave_piv = abs(col[i])

        if not math.isfinite(t_best):
            return None

        if leave_row < 0:
            # entering variable travels to its opposite bound (bound flip)
            self.beta += rate * t_best
            self.at_upper[j] = not self.at_upper[j]
            return t_best

        # entering value after moving t_best from its current bound
        enter_val = (self.lo[j] + t_best) if sigma > 0 else (self.hi[j] - t_best)
        self.beta += rate * t_best
        leaving = self.basis[leave_row]
        # leaving variable parks at whichever bound it hit
        self.at_upper[leaving] = rate[leave_row] > 0
        self.in_basis[leaving] = False
        self.in_basis[j] = True
        self.basis[leave_row] = j
        self.beta[leave_row] = enter_val

        piv = self.T[leave_row, j]
        if abs(piv) < PIVOT_TOL:
            raise LpError("numerical breakdown: vanishing pivot element")
        self.T[leave_row] /= piv
        pivot_row = self.T[leave_row]
        col_copy = self.T[:, j].copy()
        col_copy[leave_row] = 0.0
        self.T -= np.outer(col_copy, pivot_row)
        z -= z[j] * pivot_row
        z[j] = 0.0
        return t_best


def solve(
    lp: LinearProgram,
    bland_after: int = 50,
    max_iters: int | None = None,
) -> LpSolution:
    """Solve the LP (minimize); deterministic for identical inputs."""
    sol = _Simplex(lp, bland_after, max_iters).solve()
    if sol.status == "optimal":
        _check_feasible(lp, sol)
    return sol


def _check_feasible(lp: LinearProgram, sol: LpSolution, tol: float = 1e-6) -> None:
    x = sol.values
    for j, (l, h) in enumerate(lp.bounds):
        if x[j] < l - tol or x[j] > h + tol:
            raise LpError(f"solution violates bounds of x{j}")
    for row, sense, rhs in lp.constraints:
        lhs = sum(c * x[j] for j, c in row.items())
        if sense == "<=" and lhs > rhs + tol:
            raise LpError("solution violates a <= constraint")
        if sense == ">=" and lhs < rhs - tol:
            raise LpError("solution violates a >= constraint")
        if sense == "==" and abs(lhs - rhs) > tol:
            raise LpError("solution violates an == constraint")


def add_constraint_and_resolve(
    lp: LinearProgram,
    sol: LpSolution,
    row: dict[int, float],
    sense: str,
    rhs: float,
) -> LpSolution:
    """Append a constraint and re-optimize.

    Equivalent to solving the augmented LP from scratch (and currently
    implemented that way; a warm start would be an internal optimization
    with an identical result).
    """
    if sol.status != "optimal":
        raise ValueError("prior solution must be optimal")
    lp.add_constraint(row, sense, rhs)
    return solve(lp)
