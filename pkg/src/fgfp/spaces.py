"""Boxes in R^d carrying a partial order and an (optionally weighted) L1 metric.

A space is a box domain together with a metric and a partial order.  The
product of two spaces X and Y uses the componentwise sum of the metrics
and the order that keeps the X component and *reverses* the Y component:

    (x, y) <= (u, v)   iff   x <= u in X  and  v <= y in Y.

Boxes may be unbounded on either side; every space still carries a bounded
``sampling_box`` so that sampling-based checks have a region to draw from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, DomainError

# Absolute tolerance for box-membership checks; iterates may graze a face.
DOMAIN_TOL = 1e-9
# Default slack absorbing floating-point noise in order comparisons.
DEFAULT_SLACK = 1e-12
# Extent of the derived sampling box along an unbounded side.
UNBOUNDED_EXTENT = 10.0


class OrderKind(str, Enum):
    COMPONENTWISE = "COMPONENTWISE"
    COMPONENTWISE_REVERSED = "COMPONENTWISE_REVERSED"
    DISCRETE = "DISCRETE"
    DISCRETE_PLUS_PAIRS = "DISCRETE_PLUS_PAIRS"


class MetricKind(str, Enum):
    L1 = "L1"
    WEIGHTED_L1 = "WEIGHTED_L1"


@dataclass(frozen=True)
class Point:
    """An element of a space: a finite coordinate vector."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise ValueError("point needs at least one coordinate")
        for c in coords:
            if not math.isfinite(c):
                raise ValueError(f"point coordinates must be finite, got {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def point(*coords: float) -> Point:
    """Shorthand constructor: ``point(-1.0)`` or ``point(0.5, 2.0)``."""
    return Point(tuple(coords))


def _as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(tuple(p))


def _transitive_closure(pairs: tuple[tuple[Point, Point], ...]):
    """Close the listed strict relations under transitivity.

    Raises if the closure relates two distinct points both ways, which
    would break antisymmetry.
    """
    if not pairs:
        return ()
    nodes: list[tuple[float, ...]] = []
    index: dict[tuple[float, ...], int] = {}
    for a, b in pairs:
        for p in (a.coords, b.coords):
            if p not in index:
                index[p] = len(nodes)
                nodes.append(p)
    m = len(nodes)
    reach = [[False] * m for _ in range(m)]
    for a, b in pairs:
        reach[index[a.coords]][index[b.coords]] = True
    for w in range(m):
        for i in range(m):
            if reach[i][w]:
                row_i, row_w = reach[i], reach[w]
                for j in range(m):
                    if row_w[j]:
                        row_i[j] = True
    for i in range(m):
        for j in range(i + 1, m):
            if reach[i][j] and reach[j][i]:
                raise ValueError("extra_pairs break antisymmetry (two distinct points related both ways)")
    return tuple(
        (nodes[i], nodes[j]) for i in range(m) for j in range(m) if i != j and reach[i][j]
    )


@dataclass(frozen=True)
class OrderSpec:
    """How two points of one space compare.

    ``extra_pairs`` lists strict relations added on top of equality and is
    valid only for DISCRETE_PLUS_PAIRS; the transitive closure is taken at
    construction so ``leq`` is a plain lookup.
    """

    kind: OrderKind = OrderKind.COMPONENTWISE
    extra_pairs: tuple[tuple[Point, Point], ...] = ()
    slack: float = DEFAULT_SLACK

    def __post_init__(self):
        kind = OrderKind(self.kind)
        object.__setattr__(self, "kind", kind)
        slack = float(self.slack)
        if not math.isfinite(slack) or slack < 0:
            raise ValueError("slack must be a finite nonnegative real")
        object.__setattr__(self, "slack", slack)
        pairs = tuple((_as_point(a), _as_point(b)) for a, b in self.extra_pairs)
        if pairs and kind is not OrderKind.DISCRETE_PLUS_PAIRS:
            raise ValueError("extra_pairs are only valid for kind=DISCRETE_PLUS_PAIRS")
        dims = {p.dim for ab in pairs for p in ab}
        if len(dims) > 1:
            raise DimensionMismatch("extra_pairs mix dimensions")
        object.__setattr__(self, "extra_pairs", pairs)
        object.__setattr__(self, "_closure", _transitive_closure(pairs))

    @property
    def closure(self) -> tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]:
        return self._closure


@dataclass(frozen=True)
class MetricSpec:
    kind: MetricKind = MetricKind.L1
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        kind = MetricKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MetricKind.WEIGHTED_L1:
            if not self.weights:
                raise ValueError("WEIGHTED_L1 requires weights")
            w = tuple(float(x) for x in self.weights)
            if any(not math.isfinite(x) or x <= 0 for x in w):
                raise ValueError("weights must be strictly positive finite reals")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ValueError("weights are only valid for WEIGHTED_L1")


@dataclass(frozen=True)
class SpaceSpec:
    """A box in R^dim with a metric and a partial order.

    ``lower``/``upper`` may contain ``-inf``/``+inf``.  ``sampling_box``
    must be bounded and contained in the box; when omitted it defaults to
    the box itself, truncated to extent ``UNBOUNDED_EXTENT`` along each
    unbounded side (e.g. (-inf, 0] gives [-10, 0]).
    """

    dim: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    metric: MetricSpec = MetricSpec()
    order: OrderSpec = OrderSpec()
    sampling_box: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError("dim must be a positive integer")
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != self.dim or len(upper) != self.dim:
            raise DimensionMismatch(f"lower/upper must have length {self.dim}")
        for lo, hi in zip(lower, upper):
            if math.isnan(lo) or math.isnan(hi) or lo == math.inf or hi == -math.inf:
                raise ValueError("invalid box bounds")
            if lo > hi:
                raise ValueError(f"lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.metric.kind is MetricKind.WEIGHTED_L1 and len(self.metric.weights) != self.dim:
            raise DimensionMismatch("metric weights length must equal dim")
        for a, b in self.order.extra_pairs:
            if a.dim != self.dim:
                raise DimensionMismatch("order extra_pairs dimension differs from space dim")
        if self.sampling_box is None:
            lo_s = tuple(
                lo if math.isfinite(lo) else (hi - UNBOUNDED_EXTENT if math.isfinite(hi) else -UNBOUNDED_EXTENT)
                for lo, hi in zip(lower, upper)
            )
            hi_s = tuple(
                hi if math.isfinite(hi) else (lo + UNBOUNDED_EXTENT if math.isfinite(lo) else UNBOUNDED_EXTENT)
                for lo, hi in zip(lower, upper)
            )
        else:
            lo_s = tuple(float(v) for v in self.sampling_box[0])
            hi_s = tuple(float(v) for v in self.sampling_box[1])
            if len(lo_s) != self.dim or len(hi_s) != self.dim:
                raise DimensionMismatch(f"sampling_box must have dimension {self.dim}")
        for i, (a, b) in enumerate(zip(lo_s, hi_s)):
            if not (math.isfinite(a) and math.isfinite(b)) or a > b:
                raise ValueError("sampling_box must be bounded with lower <= upper")
            if a < lower[i] - DOMAIN_TOL or b > upper[i] + DOMAIN_TOL:
                raise ValueError("sampling_box must be contained in the space box")
        object.__setattr__(self, "sampling_box", (lo_s, hi_s))

    def contains(self, p: Point, tol: float = DOMAIN_TOL) -> bool:
        if p.dim != self.dim:
            raise DimensionMismatch(f"point has dimension {p.dim}, space has {self.dim}")
        return all(lo - tol <= c <= hi + tol for c, lo, hi in zip(p.coords, self.lower, self.upper))

    def weights_array(self) -> np.ndarray:
        if self.metric.kind is MetricKind.WEIGHTED_L1:
            return np.asarray(self.metric.weights, dtype=np.float64)
        return np.ones(self.dim, dtype=np.float64)


def box_space(lower, upper, *, metric: MetricSpec | None = None,
              order: OrderSpec | None = None, sampling_box=None) -> SpaceSpec:
    """Build a SpaceSpec from bound sequences, inferring the dimension."""
    lower = tuple(float(v) for v in lower)
    return SpaceSpec(
        dim=len(lower),
        lower=lower,
        upper=tuple(float(v) for v in upper),
        metric=metric or MetricSpec(),
        order=order or OrderSpec(),
        sampling_box=sampling_box,
    )


def metric_distance(space: SpaceSpec, a: Point, b: Point) -> float:
    """Metric value without domain-membership checks (used along traces)."""
    if a.dim != space.dim or b.dim != space.dim:
        raise DimensionMismatch(
            f"points have dimensions {a.dim}, {b.dim}; space has {space.dim}")
    if space.metric.kind is MetricKind.WEIGHTED_L1:
        total = 0.0
        for w, x, y in zip(space.metric.weights, a.coords, b.coords):
            total += w * abs(x - y)
        return total
    total = 0.0
    for x, y in zip(a.coords, b.coords):
        total += abs(x - y)
    return total


def distance(space: SpaceSpec, a: Point, b: Point) -> float:
    """Distance between two points of the space.

    Raises DimensionMismatch on shape errors and DomainError if either
    point lies outside the box (up to DOMAIN_TOL).
    """
    d = metric_distance(space, a, b)  # checks dimensions first
    for p in (a, b):
        if not space.contains(p):
            raise DomainError(f"point {p.coords} lies outside the box "
                              f"[{space.lower}, {space.upper}]")
    return d


def leq_batch(space: SpaceSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rowwise order test for (n, dim) coordinate arrays."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    s = space.order.slack
    kind = space.order.kind
    if kind is OrderKind.COMPONENTWISE:
        return np.all(A <= B + s, axis=1)
    if kind is OrderKind.COMPONENTWISE_REVERSED:
        return np.all(B <= A + s, axis=1)
    eq = np.all(np.abs(A - B) <= s, axis=1)
    if kind is OrderKind.DISCRETE:
        return eq
    out = eq
    for lo, hi in space.order.closure:
        lo_arr = np.asarray(lo, dtype=np.float64)
        hi_arr = np.asarray(hi, dtype=np.float64)
        hit = np.all(np.abs(A - lo_arr) <= s, axis=1) & np.all(np.abs(B - hi_arr) <= s, axis=1)
        out = out | hit
    return out


def leq(space: SpaceSpec, a: Point, b: Point) -> bool:
    """True iff a <= b under the space's order (with slack)."""
    if a.dim != space.dim or b.dim != space.dim:
        raise DimensionMismatch(
            f"points have dimensions {a.dim}, {b.dim}; space has {space.dim}")
    return bool(leq_batch(space, np.asarray([a.coords]), np.asarray([b.coords]))[0])


def comparable(space: SpaceSpec, a: Point, b: Point) -> bool:
    """True iff a <= b or b <= a."""
    return leq(space, a, b) or leq(space, b, a)


def product_distance(X: SpaceSpec, Y: SpaceSpec,
                     p: tuple[Point, Point], q: tuple[Point, Point]) -> float:
    """Sum metric on X x Y: d(p, q) = d_X(p0, q0) + d_Y(p1, q1)."""
    return distance(X, p[0], q[0]) + distance(Y, p[1], q[1])


def product_metric_distance(X: SpaceSpec, Y: SpaceSpec,
                            p: tuple[Point, Point], q: tuple[Point, Point]) -> float:
    """Like product_distance, without domain checks (for trace points)."""
    return metric_distance(X, p[0], q[0]) + metric_distance(Y, p[1], q[1])


def product_leq(X: SpaceSpec, Y: SpaceSpec,
                p: tuple[Point, Point], q: tuple[Point, Point]) -> bool:
    """Product order: (x, y) <= (u, v) iff x <= u in X and v <= y in Y."""
    return leq(X, p[0], q[0]) and leq(Y, q[1], p[1])


def distance_batch(space: SpaceSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rowwise metric values for (n, dim) coordinate arrays (no domain check)."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    return np.abs(A - B) @ space.weights_array()


def sample_points(space: SpaceSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the sampling box, shape (n, dim)."""
    lo, hi = space.sampling_box
    return rng.uniform(lo, hi, size=(n, space.dim))
