# -*- coding: utf-8 -*-
"""
Second-order cone programs in standard form.

    minimize    c'x + c0
    subject to  A x = b
                G x + s = h,  s in K

K is an ordered product of nonnegative orthants ("l") and second-order
cones ("q", first entry is the bound). Programs are assembled with
ProgramBuilder from sparse Affine expressions, presolved (fixed variables,
empty rows, row equilibration) and solved through cvxpy with the Clarabel
interior-point backend. Every solution carries the primal-dual
certificates recomputed on the original program.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import cvxpy as cp
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr

from config import SOLVER_CONFIG
from errors import ConicProgramError

logger = logging.getLogger(__name__)

Number = Union[int, float]

STATUS_OPTIMAL = "optimal"
STATUS_PRIMAL_INFEASIBLE = "primal_infeasible"
STATUS_DUAL_INFEASIBLE = "dual_infeasible"
STATUS_MAX_ITER = "max_iter"
STATUS_INACCURATE = "inaccurate"  # backend optimal, certificates above tol

_STATUS_MAP = {
    cp.OPTIMAL: STATUS_OPTIMAL,
    cp.INFEASIBLE: STATUS_PRIMAL_INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: STATUS_PRIMAL_INFEASIBLE,
    cp.UNBOUNDED: STATUS_DUAL_INFEASIBLE,
    cp.UNBOUNDED_INACCURATE: STATUS_DUAL_INFEASIBLE,
    cp.OPTIMAL_INACCURATE: STATUS_MAX_ITER,
    cp.USER_LIMIT: STATUS_MAX_ITER,
}


class Affine:
    """Sparse affine expression sum_j coef[j] * x_j + const."""

    __slots__ = ("coef", "const")

    def __init__(self, coef: Optional[Dict[int, float]] = None, const: float = 0.0):
        self.coef = dict(coef or {})
        self.const = float(const)

    @classmethod
    def var(cls, j: int) -> "Affine":
        return cls({j: 1.0})

    @classmethod
    def constant(cls, value: Number) -> "Affine":
        return cls({}, value)

    @staticmethod
    def lift(value) -> "Affine":
        return value if isinstance(value, Affine) else Affine.constant(value)

    def copy(self) -> "Affine":
        return Affine(self.coef, self.const)

    def __add__(self, other):
        other = Affine.lift(other)
        out = self.copy()
        for j, v in other.coef.items():
            out.coef[j] = out.coef.get(j, 0.0) + v
        out.const += other.const
        return out

    __radd__ = __add__

    def __neg__(self):
        return Affine({j: -v for j, v in self.coef.items()}, -self.const)

    def __sub__(self, other):
        return self + (-Affine.lift(other))

    def __rsub__(self, other):
        return Affine.lift(other) - self

    def __mul__(self, k: Number):
        if isinstance(k, Affine):
            raise ConicProgramError("product of two affine expressions is not affine")
        k = float(k)
        return Affine({j: k * v for j, v in self.coef.items()}, k * self.const)

    __rmul__ = __mul__

    def __truediv__(self, k: Number):
        return self * (1.0 / float(k))

    def value(self, x: np.ndarray) -> float:
        return self.const + sum(v * x[j] for j, v in self.coef.items())

    def is_constant(self) -> bool:
        return all(v == 0.0 for v in self.coef.values())

    def __repr__(self):
        terms = " + ".join(f"{v:g}*x{j}" for j, v in sorted(self.coef.items()))
        return f"Affine({terms or '0'} + {self.const:g})"


def affine_sum(terms: Iterable) -> Affine:
    total = Affine()
    for t in terms:
        total = total + t
    return total


@dataclass(eq=False)
class ConicProgram:
    c: np.ndarray
    A: sp.csr_matrix
    b: np.ndarray
    G: sp.csr_matrix
    h: np.ndarray
    cones: List[Tuple[str, int]]
    c0: float = 0.0
    names: Optional[List[str]] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A = sp.csr_matrix(self.A) if self.A.shape[0] else sp.csr_matrix((0, n))
        self.G = sp.csr_matrix(self.G) if self.G.shape[0] else sp.csr_matrix((0, n))
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.h = np.asarray(self.h, dtype=float).ravel()
        self.A.sum_duplicates()
        self.G.sum_duplicates()
        if self.A.shape != (self.b.size, n):
            raise ConicProgramError(f"A has shape {self.A.shape}, expected {(self.b.size, n)}")
        if self.G.shape != (self.h.size, n):
            raise ConicProgramError(f"G has shape {self.G.shape}, expected {(self.h.size, n)}")
        total = 0
        for kind, dim in self.cones:
            if kind not in ("l", "q"):
                raise ConicProgramError(f"unknown cone kind '{kind}'")
            if kind == "q" and dim < 2:
                raise ConicProgramError("second-order cone segments need length >= 2")
            if dim < 1:
                raise ConicProgramError("empty cone segment")
            total += dim
        if total != self.h.size:
            raise ConicProgramError(f"cone segments cover {total} rows, G has {self.h.size}")
        if self.names is not None and len(self.names) != n:
            raise ConicProgramError("one name per variable expected")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.h)) and np.all(np.isfinite(self.b))):
            raise ConicProgramError("program data must be finite")

    @property
    def n(self) -> int:
        return self.c.size

    def segments(self):
        """Yields (kind, start, stop) row ranges of the cone segments."""
        start = 0
        for kind, dim in self.cones:
            yield kind, start, start + dim
            start += dim

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x + self.c0)


@dataclass(eq=False)
class ConicSolution:
    status: str
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    primal_objective: float = float("nan")
    dual_objective: float = float("nan")
    gap: float = float("inf")
    primal_residual: float = float("inf")
    dual_residual: float = float("inf")
    cone_violation: float = float("inf")
    iterations: int = 0
    solve_time: float = 0.0
    certified: bool = False
    messages: List[str] = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.primal_objective

    @property
    def usable(self) -> bool:
        """Optimal, or stopped early with certificates inside the loose bound."""
        return self.x is not None and (self.status == STATUS_OPTIMAL or self.certified)

    def value(self, expr) -> float:
        return Affine.lift(expr).value(self.x)


class ProgramBuilder:
    """Collects variables, rows and the objective of a cone program."""

    def __init__(self):
        self.names: List[str] = []
        self._eq: List[Tuple[Dict[int, float], float]] = []
        self._ineq: List[Tuple[str, List[Affine]]] = []
        self._objective = Affine()

    @property
    def n(self) -> int:
        return len(self.names)

    def add_variable(self, name: Optional[str] = None, lb: Optional[float] = None, ub: Optional[float] = None) -> Affine:
        j = len(self.names)
        self.names.append(name or f"x{j}")
        v = Affine.var(j)
        if lb is not None:
            self.add_nonneg(v - lb)
        if ub is not None:
            self.add_nonneg(ub - v)
        return v

    def add_eq(self, expr, rhs: Number = 0.0):
        """expr == rhs."""
        e = Affine.lift(expr) - rhs
        self._eq.append((dict(e.coef), -e.const))

    def add_nonneg(self, expr):
        """expr >= 0."""
        self._ineq.append(("l", [Affine.lift(expr)]))

    def add_le(self, lhs, rhs):
        self.add_nonneg(Affine.lift(rhs) - lhs)

    def add_soc(self, bound, entries: Sequence):
        """||entries||_2 <= bound."""
        if len(entries) < 1:
            raise ConicProgramError("a second-order cone needs at least one entry besides its bound")
        self._ineq.append(("q", [Affine.lift(bound)] + [Affine.lift(e) for e in entries]))

    def set_objective(self, expr):
        self._objective = Affine.lift(expr)

    def build(self) -> ConicProgram:
        n = self.n
        c = np.zeros(n)
        for j, v in self._objective.coef.items():
            c[j] += v
        A = _rows_to_csr([coef for coef, _ in self._eq], n)
        b = np.array([rhs for _, rhs in self._eq], dtype=float)
        g_rows, h, cones = [], [], []
        for kind, exprs in self._ineq:
            if kind == "l" and cones and cones[-1][0] == "l":
                cones[-1] = ("l", cones[-1][1] + 1)
            else:
                cones.append((kind, len(exprs)))
            for e in exprs:
                g_rows.append({j: -v for j, v in e.coef.items()})
                h.append(e.const)
        G = _rows_to_csr(g_rows, n)
        return ConicProgram(
            c=c, A=A, b=b, G=G, h=np.array(h, dtype=float), cones=cones,
            c0=self._objective.const, names=list(self.names),
        )


def _rows_to_csr(rows: List[Dict[int, float]], n: int) -> sp.csr_matrix:
    indptr, indices, data = [0], [], []
    for row in rows:
        for j, v in row.items():
            if v != 0.0:
                indices.append(j)
                data.append(v)
        indptr.append(len(indices))
    return sp.csr_matrix((data, indices, indptr), shape=(len(rows), n))


# ---------------------------------------------------------------------------
# Presolve
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class _Presolved:
    program: ConicProgram
    keep: np.ndarray  # column indices kept
    x_fixed: np.ndarray  # full-length values of the fixed columns (nan elsewhere)
    ineq_rows: np.ndarray  # original G rows kept
    ineq_scale: np.ndarray  # per kept G row factor, z_orig = scale * z_scaled
    infeasible: Optional[str] = None


def presolve(p: ConicProgram, tol: float) -> _Presolved:
    """Removes fixed variables and empty rows, then equilibrates rows."""
    n = p.n
    x_fixed = np.full(n, np.nan)
    A = p.A.tocsr()
    b = p.b.copy()
    live = np.ones(A.shape[0], dtype=bool)

    changed = True
    while changed:
        changed = False
        for i in np.flatnonzero(live):
            lo, hi = A.indptr[i], A.indptr[i + 1]
            cols = A.indices[lo:hi]
            vals = A.data[lo:hi]
            known = ~np.isnan(x_fixed[cols])
            rhs = b[i] - float(np.sum(vals[known] * x_fixed[cols[known]]))
            free = ~known & (vals != 0.0)
            if np.count_nonzero(free) == 1:
                j = cols[free][0]
                x_fixed[j] = rhs / vals[free][0]
                live[i] = False
                changed = True
            elif np.count_nonzero(free) == 0:
                if abs(rhs) > tol * (1.0 + abs(b[i])):
                    return _Presolved(p, np.arange(n), x_fixed, np.arange(p.h.size), np.ones(p.h.size),
                                      infeasible=f"equality row {i} reduces to 0 = {rhs:g}")
                live[i] = False

    fixed_mask = ~np.isnan(x_fixed)
    keep = np.flatnonzero(~fixed_mask)
    xf = np.where(fixed_mask, x_fixed, 0.0)

    c0 = p.c0 + float(p.c @ xf)
    A_live = A[np.flatnonzero(live)]
    A_red = A_live[:, keep]
    b_red = b[live] - A_live @ xf
    G = p.G.tocsr()
    h_red = p.h - G @ xf
    G_red = G[:, keep].tocsr()

    # empty rows
    row_nnz = np.diff(G_red.indptr)
    ineq_keep, cones = [], []
    for kind, lo, hi in p.segments():
        if kind == "l":
            for i in range(lo, hi):
                if row_nnz[i] == 0:
                    if h_red[i] < -tol:
                        return _Presolved(p, keep, x_fixed, np.arange(p.h.size), np.ones(p.h.size),
                                          infeasible=f"inequality row {i} reduces to {h_red[i]:g} >= 0")
                    continue
                ineq_keep.append(i)
                if cones and cones[-1][0] == "l":
                    cones[-1] = ("l", cones[-1][1] + 1)
                else:
                    cones.append(("l", 1))
            continue
        if np.all(row_nnz[lo:hi] == 0):
            vals = h_red[lo:hi]
            if vals[0] < np.linalg.norm(vals[1:]) - tol:
                return _Presolved(p, keep, x_fixed, np.arange(p.h.size), np.ones(p.h.size),
                                  infeasible=f"cone rows {lo}:{hi} are constant and outside the cone")
            continue
        ineq_keep.extend(range(lo, hi))
        cones.append((kind, hi - lo))
    ineq_keep = np.array(ineq_keep, dtype=int)
    G_red = G_red[ineq_keep]
    h_red = h_red[ineq_keep]

    eq_nnz = np.diff(A_red.tocsr().indptr)
    nonempty = eq_nnz > 0
    if np.any(np.abs(b_red[~nonempty]) > tol):
        return _Presolved(p, keep, x_fixed, ineq_keep, np.ones(ineq_keep.size),
                          infeasible="an equality row reduces to 0 = nonzero")
    A_red = A_red[nonempty]
    b_red = b_red[nonempty]

    # max-norm equilibration: one factor per linear row, one per cone segment
    row_max = np.zeros(G_red.shape[0])
    if G_red.nnz:
        row_max = np.asarray(abs(G_red).max(axis=1).todense()).ravel()
    scale = np.ones(G_red.shape[0])
    start = 0
    for kind, dim in cones:
        seg = slice(start, start + dim)
        if kind == "l":
            scale[seg] = np.where(row_max[seg] > 0, 1.0 / np.maximum(row_max[seg], 1e-300), 1.0)
        else:
            m = float(np.max(row_max[seg]))
            scale[seg] = 1.0 / m if m > 0 else 1.0
        start += dim
    G_red = sp.diags(scale) @ G_red
    h_red = scale * h_red
    eq_scale = np.ones(A_red.shape[0])
    if A_red.nnz:
        eq_max = np.asarray(abs(A_red).max(axis=1).todense()).ravel()
        eq_scale = 1.0 / np.where(eq_max > 0, eq_max, 1.0)
    A_red = sp.diags(eq_scale) @ A_red
    b_red = eq_scale * b_red

    reduced = ConicProgram(
        c=p.c[keep], A=sp.csr_matrix(A_red), b=b_red, G=sp.csr_matrix(G_red), h=h_red,
        cones=cones, c0=c0,
    )
    return _Presolved(reduced, keep, x_fixed, ineq_keep, scale)


# ---------------------------------------------------------------------------
# Solve
# ---------------------------------------------------------------------------


def _backend_problem(p: ConicProgram):
    x = cp.Variable(p.n)
    constraints, handles = [], []
    start = 0
    lin_rows, soc_groups = [], {}
    for kind, dim in p.cones:
        if kind == "l":
            lin_rows.extend(range(start, start + dim))
        else:
            soc_groups.setdefault(dim, []).append(start)
        start += dim
    if lin_rows:
        rows = np.array(lin_rows)
        con = cp.Constant(p.G[rows]) @ x <= p.h[rows]
        constraints.append(con)
        handles.append(("l", rows, None, con))
    for dim, starts in sorted(soc_groups.items()):
        starts = np.array(starts)
        t_rows = starts
        v_rows = (starts[:, None] + np.arange(1, dim)[None, :]).ravel()
        t = p.h[t_rows] - cp.Constant(p.G[t_rows]) @ x
        V = cp.reshape(p.h[v_rows] - cp.Constant(p.G[v_rows]) @ x, (starts.size, dim - 1), order="C")
        con = cp.SOC(t, V, axis=1)
        constraints.append(con)
        handles.append(("q", t_rows, v_rows, con))
    if p.A.shape[0]:
        constraints.append(cp.Constant(p.A) @ x == p.b)
    problem = cp.Problem(cp.Minimize(p.c @ x), constraints)
    return problem, x, handles


def _collect_z(p: ConicProgram, handles) -> np.ndarray:
    z = np.zeros(p.h.size)
    for kind, rows, v_rows, con in handles:
        if kind == "l":
            z[rows] = np.asarray(con.dual_value, dtype=float).ravel()
        else:
            t_dual, v_dual = con.dual_value
            z[rows] = np.asarray(t_dual, dtype=float).ravel()
            z[v_rows] = np.asarray(v_dual, dtype=float).reshape(-1)
    return z


def cone_violation(p: ConicProgram, slack: np.ndarray) -> float:
    """Largest distance of a slack segment outside its cone."""
    worst = 0.0
    for kind, lo, hi in p.segments():
        seg = slack[lo:hi]
        if kind == "l":
            worst = max(worst, float(np.max(-seg, initial=0.0)))
        else:
            worst = max(worst, float(np.linalg.norm(seg[1:]) - seg[0]))
    return max(worst, 0.0)


def certify(p: ConicProgram, x: np.ndarray, z: np.ndarray) -> Dict[str, float]:
    """Primal/dual residuals and relative gap of (x, z) on program p.

    Equality multipliers are recovered by least squares on the stationarity
    condition c + G'z + A'y = 0.
    """
    r_eq = p.A @ x - p.b if p.b.size else np.zeros(0)
    slack = p.h - p.G @ x
    primal_res = float(np.linalg.norm(r_eq)) / (1.0 + float(np.linalg.norm(p.b)))
    cone_res = cone_violation(p, slack) / (1.0 + float(np.linalg.norm(p.h, ord=np.inf)))
    partial = p.c + p.G.T @ z
    if p.b.size:
        y = lsqr(p.A.T.tocsr(), -partial, atol=1e-14, btol=1e-14)[0]
    else:
        y = np.zeros(0)
    dual_res = float(np.linalg.norm(partial + (p.A.T @ y if p.b.size else 0.0))) / (
        1.0 + float(np.linalg.norm(p.c))
    )
    dual_cone = cone_violation(p, z) / (1.0 + float(np.linalg.norm(z, ord=np.inf)))
    pobj = p.objective(x)
    dobj = float(-p.h @ z - (p.b @ y if p.b.size else 0.0)) + p.c0
    gap = abs(pobj - dobj) / max(1.0, min(abs(pobj), abs(dobj)))
    return {
        "y": y,
        "primal_objective": pobj,
        "dual_objective": dobj,
        "gap": gap,
        "primal_residual": max(primal_res, cone_res),
        "dual_residual": max(dual_res, dual_cone),
        "cone_violation": cone_violation(p, slack),
    }


def solve(p: ConicProgram, tol: Optional[float] = None, max_iter: Optional[int] = None) -> ConicSolution:
    """Solves a cone program; the solution is certified on p itself."""
    tol = SOLVER_CONFIG["tol"] if tol is None else tol
    max_iter = SOLVER_CONFIG["max_iter"] if max_iter is None else max_iter
    started = time.perf_counter()

    pre = presolve(p, tol)
    if pre.infeasible:
        logger.debug(f"Presolve detected infeasibility: {pre.infeasible}")
        return ConicSolution(
            STATUS_PRIMAL_INFEASIBLE, messages=[pre.infeasible], solve_time=time.perf_counter() - started
        )

    red = pre.program
    x = np.where(np.isnan(pre.x_fixed), 0.0, pre.x_fixed)
    z = np.zeros(p.h.size)
    status, iterations = STATUS_OPTIMAL, 0
    messages = []
    if red.n:
        problem, var, handles = _backend_problem(red)
        inner = tol * SOLVER_CONFIG["inner_tol_factor"]
        try:
            problem.solve(
                solver=SOLVER_CONFIG["backend"],
                max_iter=max_iter,
                tol_gap_abs=inner,
                tol_gap_rel=inner,
                tol_feas=inner,
                verbose=False,
            )
            status = _STATUS_MAP.get(problem.status, STATUS_MAX_ITER)
            iterations = int(getattr(problem.solver_stats, "num_iters", 0) or 0)
        except cp.error.SolverError as e:
            status = STATUS_MAX_ITER
            messages.append(f"backend failure: {e}")
            logger.warning(f"Conic backend failed: {e}")
        if status in (STATUS_PRIMAL_INFEASIBLE, STATUS_DUAL_INFEASIBLE) or var.value is None:
            return ConicSolution(
                status, iterations=iterations, messages=messages,
                solve_time=time.perf_counter() - started,
            )
        x[pre.keep] = np.asarray(var.value, dtype=float)
        z_red = _collect_z(red, handles)
        z[pre.ineq_rows] = pre.ineq_scale * z_red
    elif cone_violation(p, p.h - p.G @ x) > tol:
        return ConicSolution(
            STATUS_PRIMAL_INFEASIBLE, messages=["every variable is fixed and a cone row fails"],
            solve_time=time.perf_counter() - started,
        )

    cert = certify(p, x, z)
    worst = max(cert["gap"], cert["primal_residual"], cert["dual_residual"])
    certified = worst <= tol * SOLVER_CONFIG["loose_accept"]
    if status == STATUS_OPTIMAL and worst > tol:
        status = STATUS_INACCURATE
        messages.append(f"certificates above tolerance: {worst:.3e}")
        logger.debug(f"Optimal backend status downgraded, certificate {worst:.3e} > tol {tol:.1e}")
    return ConicSolution(
        status=status,
        x=x,
        y=cert["y"],
        z=z,
        primal_objective=cert["primal_objective"],
        dual_objective=cert["dual_objective"],
        gap=cert["gap"],
        primal_residual=cert["primal_residual"],
        dual_residual=cert["dual_residual"],
        cone_violation=cert["cone_violation"],
        iterations=iterations,
        solve_time=time.perf_counter() - started,
        certified=certified,
        messages=messages,
    )


# ---------------------------------------------------------------------------
# Debug text format
#
#   conic-program <n>
#   offset <c0>
#   c <j>:<v> ...
#   eq <b> <j>:<v> ...
#   l <h> <j>:<v> ...            one nonnegative row
#   q <dim>                      followed by <dim> "row <h> <j>:<v> ..." lines
# ---------------------------------------------------------------------------


def _fmt_row(matrix: sp.csr_matrix, i: int) -> str:
    lo, hi = matrix.indptr[i], matrix.indptr[i + 1]
    return " ".join(f"{j}:{v:.17g}" for j, v in zip(matrix.indices[lo:hi], matrix.data[lo:hi]))


def dump_program(p: ConicProgram) -> str:
    """Plain-text rendering of p, one row per line."""
    lines = [f"conic-program {p.n}", f"offset {p.c0:.17g}"]
    lines.append("c " + " ".join(f"{j}:{v:.17g}" for j, v in enumerate(p.c) if v != 0.0))
    for i in range(p.b.size):
        lines.append(f"eq {p.b[i]:.17g} {_fmt_row(p.A, i)}".rstrip())
    for kind, lo, hi in p.segments():
        if kind == "l":
            for i in range(lo, hi):
                lines.append(f"l {p.h[i]:.17g} {_fmt_row(p.G, i)}".rstrip())
        else:
            lines.append(f"q {hi - lo}")
            for i in range(lo, hi):
                lines.append(f"row {p.h[i]:.17g} {_fmt_row(p.G, i)}".rstrip())
    return "\n".join(lines) + "\n"


def _parse_terms(tokens: List[str], lineno: int) -> Dict[int, float]:
    row = {}
    for tok in tokens:
        try:
            j, v = tok.split(":")
            row[int(j)] = row.get(int(j), 0.0) + float(v)
        except ValueError:
            raise ConicProgramError(f"line {lineno}: bad term '{tok}'")
    return row


def load_program(text: str) -> ConicProgram:
    """Inverse of dump_program."""
    lines = [ln.split() for ln in text.splitlines()]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "conic-program":
        raise ConicProgramError("line 1: expected 'conic-program <n>'")
    n = int(lines[0][1])
    c = np.zeros(n)
    c0 = 0.0
    eq_rows, b, g_rows, h, cones = [], [], [], [], []
    pending = 0
    for lineno, tokens in enumerate(lines[1:], start=2):
        if not tokens:
            continue
        tag = tokens[0]
        if pending and tag != "row":
            raise ConicProgramError(f"line {lineno}: {pending} cone rows missing")
        if tag == "offset":
            c0 = float(tokens[1])
        elif tag == "c":
            for j, v in _parse_terms(tokens[1:], lineno).items():
                c[j] = v
        elif tag == "eq":
            b.append(float(tokens[1]))
            eq_rows.append(_parse_terms(tokens[2:], lineno))
        elif tag == "l":
            h.append(float(tokens[1]))
            g_rows.append(_parse_terms(tokens[2:], lineno))
            if cones and cones[-1][0] == "l":
                cones[-1] = ("l", cones[-1][1] + 1)
            else:
                cones.append(("l", 1))
        elif tag == "q":
            pending = int(tokens[1])
            cones.append(("q", pending))
        elif tag == "row":
            if not pending:
                raise ConicProgramError(f"line {lineno}: cone row outside a 'q' block")
            h.append(float(tokens[1]))
            g_rows.append(_parse_terms(tokens[2:], lineno))
            pending -= 1
        else:
            raise ConicProgramError(f"line {lineno}: unknown tag '{tag}'")
    if pending:
        raise ConicProgramError("truncated cone block at end of input")
    return ConicProgram(
        c=c, A=_rows_to_csr(eq_rows, n), b=np.array(b), G=_rows_to_csr(g_rows, n),
        h=np.array(h), cones=cones, c0=c0,
    )
