"""Constructive coupled iteration with geometric bound tracking.

From a seed (x0, y0) satisfying the launch condition, the iteration

    x_{n+1} = F(x_n, y_n),    y_{n+1} = G(y_n, x_n)

produces a nondecreasing X sequence and a nonincreasing Y sequence whose
step distances are dominated, family by family, by geometric envelopes
computable from the first step alone.  With d1x = d_X(x1, x0),
d1y = d_Y(y1, y0), D = d1x + d1y, theta = (k+l)/2 and delta the family
ratio, the per-step bounds for n >= 1 are

    SYM_HALF     bx = (k/2) theta^(n-1) D      by = (l/2) theta^(n-1) D
    LIN_ASYM     bx = by = (k+l)^n D
    KANNAN       bx = (l/(1-k))^n d1x          by = (k/(1-l))^n d1y
    CHATTERJEA   bx = (l/(1-l))^n d1x          by = (k/(1-k))^n d1y

and the Cauchy tail bound on d_X(x_m, x_n), m >= n, is the corresponding
geometric series sum from n.  ``verify_trace_bounds`` replays a recorded
trace against these envelopes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .errors import (DimensionMismatch, DomainError, EvaluationError,
                     SeedConditionError, SolveError)
from .hypotheses import ContractionFamily, FamilyKind, check_seed
from .maps import MapSpec, eval_map
from .spaces import (Point, SpaceSpec, leq, metric_distance,
                     product_metric_distance)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10000
# Additive slack for trace-vs-bound comparisons (accumulated rounding).
BOUND_SLACK = 1e-12
# Consecutive step-sum increases before a run is declared divergent.
DIVERGENCE_PATIENCE = 50
# Slack for the uniqueness decay comparison.
DECAY_SLACK = 1e-10


@dataclass(frozen=True)
class ProblemSpec:
    """Everything the solver needs: spaces, maps, family, and a seed."""

    X: SpaceSpec
    Y: SpaceSpec
    F: MapSpec
    G: MapSpec
    family: ContractionFamily
    seed: tuple[Point, Point]
    declared_fixed_point: tuple[Point, Point] | None = None

    def __post_init__(self):
        if (self.F.first_arg_dim, self.F.second_arg_dim, self.F.out_dim) != \
                (self.X.dim, self.Y.dim, self.X.dim):
            raise DimensionMismatch("F must map X x Y -> X")
        if (self.G.first_arg_dim, self.G.second_arg_dim, self.G.out_dim) != \
                (self.Y.dim, self.X.dim, self.Y.dim):
            raise DimensionMismatch("G must map Y x X -> Y")
        x0, y0 = self.seed
        if x0.dim != self.X.dim or y0.dim != self.Y.dim:
            raise DimensionMismatch("seed dimensions do not match the spaces")
        if not self.X.contains(x0) or not self.Y.contains(y0):
            raise DomainError("seed lies outside the space boxes")
        if self.declared_fixed_point is not None:
            fx, fy = self.declared_fixed_point
            if fx.dim != self.X.dim or fy.dim != self.Y.dim:
                raise DimensionMismatch("declared fixed point dimensions do not match")

    def with_seed(self, seed: tuple[Point, Point]) -> "ProblemSpec":
        return dataclasses.replace(self, seed=seed)


@dataclass
class IterationTrace:
    """Recorded run: points, step distances, bound envelopes, order flags.

    Index convention: ``points[n]`` is the n-th iterate; ``step_x[n]`` is
    d_X(x_{n+1}, x_n).  ``bound_x[0]`` repeats step_x[0] (= d1x, the base
    distance); entries from index 1 on are the family envelopes.
    ``monotone_ok[n]`` records x_n <= x_{n+1} and y_{n+1} <= y_n.
    """

    points: list[tuple[Point, Point]] = field(default_factory=list)
    step_x: list[float] = field(default_factory=list)
    step_y: list[float] = field(default_factory=list)
    bound_x: list[float] = field(default_factory=list)
    bound_y: list[float] = field(default_factory=list)
    monotone_ok: list[bool] = field(default_factory=list)
    range_warnings: list[str] = field(default_factory=list)

    @property
    def d1x(self) -> float:
        return self.step_x[0] if self.step_x else 0.0

    @property
    def d1y(self) -> float:
        return self.step_y[0] if self.step_y else 0.0


@dataclass(frozen=True)
class BoundViolation:
    n: int
    component: str  # "x" or "y"
    step: float
    bound: float

    def to_dict(self) -> dict:
        return {"n": self.n, "component": self.component,
                "step": self.step, "bound": self.bound}


@dataclass(frozen=True)
class FGFixedPointResult:
    x_star: Point
    y_star: Point
    residual_x: float
    residual_y: float
    iterations: int
    converged: bool
    bound_violations: tuple[BoundViolation, ...]

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_x": self.residual_x,
            "residual_y": self.residual_y,
            "limit_x": list(self.x_star.coords),
            "limit_y": list(self.y_star.coords),
            "bound_violations": [v.to_dict() for v in self.bound_violations],
        }


def step_bound(family: ContractionFamily, n: int, d1x: float, d1y: float) -> tuple[float, float]:
    """Family envelope on (d_X(x_{n+1}, x_n), d_Y(y_{n+1}, y_n)), n >= 1."""
    if n < 1:
        raise ValueError("step bounds are defined for n >= 1")
    if d1x < 0 or d1y < 0:
        raise ValueError("base distances must be nonnegative")
    k, l = family.k, family.l
    if family.kind is FamilyKind.SYM_HALF:
        theta = (k + l) / 2.0
        base = theta ** (n - 1) * (d1x + d1y)
        return 0.5 * k * base, 0.5 * l * base
    if family.kind is FamilyKind.LIN_ASYM:
        b = (k + l) ** n * (d1x + d1y)
        return b, b
    if family.kind is FamilyKind.KANNAN:
        return (l / (1.0 - k)) ** n * d1x, (k / (1.0 - l)) ** n * d1y
    return (l / (1.0 - l)) ** n * d1x, (k / (1.0 - k)) ** n * d1y


def tail_bound(family: ContractionFamily, n: int, d1x: float, d1y: float,
               component: str = "x") -> float:
    """Geometric-series bound on d(z_m, z_n) for all m >= n (n >= 1).

    ``component`` selects the X or the Y sequence; the bound is the sum of
    the corresponding step envelopes from n on.
    """
    if n < 1:
        raise ValueError("tail bounds are defined for n >= 1")
    if d1x < 0 or d1y < 0:
        raise ValueError("base distances must be nonnegative")
    if component not in ("x", "y"):
        raise ValueError("component must be 'x' or 'y'")
    k, l = family.k, family.l
    if family.kind is FamilyKind.SYM_HALF:
        theta = (k + l) / 2.0
        if theta >= 1.0:
            raise ValueError("family ratio must be < 1")
        coeff = 0.5 * (k if component == "x" else l)
        return coeff * theta ** (n - 1) / (1.0 - theta) * (d1x + d1y)
    if family.kind is FamilyKind.LIN_ASYM:
        delta = k + l
        if delta >= 1.0:
            raise ValueError("family ratio must be < 1")
        return delta ** n / (1.0 - delta) * (d1x + d1y)
    if family.kind is FamilyKind.KANNAN:
        delta = l / (1.0 - k) if component == "x" else k / (1.0 - l)
    else:  # CHATTERJEA
        delta = l / (1.0 - l) if component == "x" else k / (1.0 - k)
    if delta >= 1.0:
        raise ValueError("family ratio must be < 1")
    base = d1x if component == "x" else d1y
    return delta ** n / (1.0 - delta) * base


def verify_trace_bounds(trace: IterationTrace,
                        family: ContractionFamily) -> list[BoundViolation]:
    """Check every recorded step (n >= 1) against its family envelope."""
    violations: list[BoundViolation] = []
    d1x, d1y = trace.d1x, trace.d1y
    for n in range(1, len(trace.step_x)):
        bx, by = step_bound(family, n, d1x, d1y)
        if trace.step_x[n] > bx + BOUND_SLACK:
            violations.append(BoundViolation(n, "x", trace.step_x[n], bx))
        if trace.step_y[n] > by + BOUND_SLACK:
            violations.append(BoundViolation(n, "y", trace.step_y[n], by))
    return violations


def solve(problem: ProblemSpec, tol: float = DEFAULT_TOL,
          max_iter: int = DEFAULT_MAX_ITER,
          force: bool = False) -> tuple[IterationTrace, FGFixedPointResult]:
    """Iterate to a coupled fixed point, recording the full trace.

    Stops when d_X(x_{n+1}, x_n) + d_Y(y_{n+1}, y_n) < tol, at max_iter,
    or after DIVERGENCE_PATIENCE consecutive step-sum increases.  The
    returned residuals come from one extra evaluation at the final pair;
    ``converged`` requires both the step criterion and residual sum <= tol.

    The seed must satisfy the launch condition unless ``force`` is given.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if not force:
        seed_check = check_seed(problem.F, problem.G, problem.X, problem.Y,
                                problem.seed[0], problem.seed[1])
        if not seed_check.passed:
            raise SeedConditionError(
                "seed violates the launch condition "
                f"(x0 <= F(x0, y0): {seed_check.x_ok}, "
                f"G(y0, x0) <= y0: {seed_check.y_ok}); pass force=True to override")

    X, Y, F, G = problem.X, problem.Y, problem.F, problem.G
    x, y = problem.seed
    trace = IterationTrace(points=[(x, y)])

    hit_tol = False
    growth_run = 0
    prev_sum: float | None = None
    for n in range(max_iter):
        try:
            x_next = eval_map(F, x, y)
            y_next = eval_map(G, y, x)
        except EvaluationError as exc:
            raise SolveError(f"evaluation failed at iteration {n + 1}: {exc}",
                             trace=trace) from exc
        sx = metric_distance(X, x_next, x)
        sy = metric_distance(Y, y_next, y)
        trace.step_x.append(sx)
        trace.step_y.append(sy)
        trace.monotone_ok.append(leq(X, x, x_next) and leq(Y, y_next, y))
        if not X.contains(x_next):
            trace.range_warnings.append(
                f"iteration {n + 1}: F value {x_next.coords} left the X box")
        if not Y.contains(y_next):
            trace.range_warnings.append(
                f"iteration {n + 1}: G value {y_next.coords} left the Y box")
        if n == 0:
            trace.bound_x.append(sx)
            trace.bound_y.append(sy)
        else:
            bx, by = step_bound(problem.family, n, trace.d1x, trace.d1y)
            trace.bound_x.append(bx)
            trace.bound_y.append(by)
        trace.points.append((x_next, y_next))
        x, y = x_next, y_next

        step_sum = sx + sy
        if step_sum < tol:
            hit_tol = True
            break
        if prev_sum is not None and step_sum > prev_sum:
            growth_run += 1
            if growth_run >= DIVERGENCE_PATIENCE:
                break
        else:
            growth_run = 0
        prev_sum = step_sum

    try:
        fx = eval_map(F, x, y)
        gy = eval_map(G, y, x)
    except EvaluationError as exc:
        raise SolveError(f"residual evaluation failed: {exc}", trace=trace) from exc
    residual_x = metric_distance(X, fx, x)
    residual_y = metric_distance(Y, gy, y)
    converged = hit_tol and (residual_x + residual_y <= tol)
    result = FGFixedPointResult(
        x_star=x,
        y_star=y,
        residual_x=residual_x,
        residual_y=residual_y,
        iterations=len(trace.points) - 1,
        converged=converged,
        bound_violations=tuple(verify_trace_bounds(trace, problem.family)),
    )
    return trace, result


def decay_rate(family: ContractionFamily, n: int) -> float | None:
    """Advertised decay factor for the product distance of two comparable
    starting pairs after n coupled steps; None where no rate is claimed."""
    if family.kind is FamilyKind.SYM_HALF:
        return (family.k / 2.0) ** n + (family.l / 2.0) ** n
    if family.kind is FamilyKind.LIN_ASYM:
        return 2.0 * (family.k + family.l) ** n
    return None


@dataclass(frozen=True)
class DecayCheck:
    seed_i: int
    seed_j: int
    initial_distance: float
    steps_checked: int
    violations: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"seed_i": self.seed_i, "seed_j": self.seed_j,
                "initial_distance": self.initial_distance,
                "steps_checked": self.steps_checked,
                "violations": list(self.violations)}


@dataclass(frozen=True)
class UniquenessReport:
    seeds: tuple[tuple[Point, Point], ...]
    limits: tuple[tuple[Point, Point], ...]
    iterations: tuple[int, ...]
    all_converged: bool
    pairwise: tuple[dict, ...]
    max_pairwise_distance: float
    passed: bool
    decay_checks: tuple[DecayCheck, ...]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "all_converged": self.all_converged,
            "seeds": [{"x0": list(x.coords), "y0": list(y.coords)}
                      for x, y in self.seeds],
            "limits": [{"x": list(x.coords), "y": list(y.coords)}
                       for x, y in self.limits],
            "iterations": list(self.iterations),
            "pairwise_distances": list(self.pairwise),
            "max_pairwise_distance": self.max_pairwise_distance,
            "decay_checks": [d.to_dict() for d in self.decay_checks],
        }


def uniqueness_probe(problem: ProblemSpec,
                     extra_seeds: list[tuple[Point, Point]],
                     tol: float = DEFAULT_TOL,
                     max_iter: int = DEFAULT_MAX_ITER,
                     force_seeds: bool = False,
                     decay_steps: int = 40) -> UniquenessReport:
    """Solve from several seeds and compare the limits.

    PASS iff all pairwise product distances between limits stay below
    10*tol.  For product-comparable seed pairs the probe also replays the
    advertised decay rate (SYM_HALF and LIN_ASYM only) against the
    observed iterate distances; exceedances are recorded as data, they do
    not fail the probe.
    """
    from .maps import iterate_pair  # local import keeps module deps one-way
    from .spaces import product_leq

    seeds = [problem.seed] + [
        (s[0] if isinstance(s[0], Point) else Point(tuple(s[0])),
         s[1] if isinstance(s[1], Point) else Point(tuple(s[1])))
        for s in extra_seeds]
    runs = []
    for sd in seeds:
        sub = problem.with_seed(sd)
        runs.append(solve(sub, tol=tol, max_iter=max_iter, force=force_seeds))
    limits = tuple((r.x_star, r.y_star) for _, r in runs)
    iterations = tuple(r.iterations for _, r in runs)
    all_converged = all(r.converged for _, r in runs)

    pairwise = []
    max_dist = 0.0
    for i in range(len(limits)):
        for j in range(i + 1, len(limits)):
            d = product_metric_distance(problem.X, problem.Y, limits[i], limits[j])
            pairwise.append({"i": i, "j": j, "distance": d})
            max_dist = max(max_dist, d)
    passed = all_converged and max_dist < 10.0 * tol

    decay_checks: list[DecayCheck] = []
    if decay_rate(problem.family, 1) is not None:
        for i in range(len(seeds)):
            for j in range(i + 1, len(seeds)):
                si, sj = seeds[i], seeds[j]
                if not (product_leq(problem.X, problem.Y, si, sj)
                        or product_leq(problem.X, problem.Y, sj, si)):
                    continue
                d0 = product_metric_distance(problem.X, problem.Y, si, sj)
                pi, pj = si, sj
                violations = []
                for n in range(1, decay_steps + 1):
                    pi = iterate_pair(problem.F, problem.G, pi[0], pi[1], 1)
                    pj = iterate_pair(problem.F, problem.G, pj[0], pj[1], 1)
                    observed = product_metric_distance(problem.X, problem.Y, pi, pj)
                    allowed = decay_rate(problem.family, n) * d0 + DECAY_SLACK
                    if observed > allowed:
                        violations.append({"n": n, "observed": observed,
                                           "allowed": allowed})
                decay_checks.append(DecayCheck(i, j, d0, decay_steps,
                                               tuple(violations)))

    return UniquenessReport(
        seeds=tuple(seeds),
        limits=limits,
        iterations=iterations,
        all_converged=all_converged,
        pairwise=tuple(pairwise),
        max_pairwise_distance=max_dist,
        passed=passed,
        decay_checks=tuple(decay_checks),
    )


def trace_to_csv(trace: IterationTrace, x_dim: int, y_dim: int, fh) -> None:
    """Write the trace in the stable CSV layout.

    Header: n, x coordinates, y coordinates, step_x, step_y, bound_x,
    bound_y, monotone_ok.  Step columns on row n describe the move from
    iterate n to n+1, so the last row leaves them empty.
    """
    cols = (["n"] + [f"x{i + 1}" for i in range(x_dim)]
            + [f"y{i + 1}" for i in range(y_dim)]
            + ["step_x", "step_y", "bound_x", "bound_y", "monotone_ok"])
    fh.write(",".join(cols) + "\n")
    fmt = lambda v: f"{v:.17g}"
    for n, (px, py) in enumerate(trace.points):
        row = [str(n)] + [fmt(c) for c in px.coords] + [fmt(c) for c in py.coords]
        if n < len(trace.step_x):
            row += [fmt(trace.step_x[n]), fmt(trace.step_y[n]),
                    fmt(trace.bound_x[n]), fmt(trace.bound_y[n]),
                    "true" if trace.monotone_ok[n] else "false"]
        else:
            row += ["", "", "", "", ""]
        fh.write(",".join(row) + "\n")
