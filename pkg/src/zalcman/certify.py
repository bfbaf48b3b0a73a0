"""
Interval branch-and-bound certification of the auxiliary maximization
problems behind the sharp coefficient bounds.

With x = |c_1| and y = |c_2| the proofs reduce each functional to a bound
of one of

    f1(x, y) = (1 - x^2 - 4y^2/(1+x)) / 3 + 4y + x^2 + 3x      (Z:3, bound 4)
    f2(x, y) = (1 - x^2 - 4y^2/(1+x)) / 3 + 2y + 3x            (GZ:2,4, bound 3)
    g(x, y)  = (1 - x^2 - 4y^2/(1+x)) / 3 + 4y + 2x^2 + 9x     (K:5,1, bound 11)

over G = {0 <= x <= 1, 0 <= y <= (1 - x^2)/2}. The certifier encloses the
global supremum over G directly; the edge and y-partial certificates
reproduce the boundary-maximum argument.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from .errors import InputError
from .functionals import FunctionalSpec
from .interval import Interval

logger = logging.getLogger('zalcman.certify')

DEFAULT_TOL = 1e-6
DEFAULT_MAX_BOXES = 10_000_000
DEFAULT_EDGE_POINTS = 1000

# Boxes narrower than this cannot be refined further in double precision.
MIN_BOX_WIDTH = 1e-15

Status = Literal['proven', 'refuted', 'budget_exceeded']


class AuxKind(str, Enum):
    """Auxiliary two-variable majorants."""

    F1 = 'f1'
    F2 = 'f2'
    G = 'g'


CLAIMED_BOUNDS = {AuxKind.F1: 4.0, AuxKind.F2: 3.0, AuxKind.G: 11.0}


def _f1(x, y):
    return (1 - x * x - 4 * y * y / (1 + x)) / 3 + 4 * y + x * x + 3 * x


def _f2(x, y):
    return (1 - x * x - 4 * y * y / (1 + x)) / 3 + 2 * y + 3 * x


def _g(x, y):
    return (1 - x * x - 4 * y * y / (1 + x)) / 3 + 4 * y + 2 * x * x + 9 * x


# Written against +, -, *, / only, so the same code evaluates floats,
# numpy arrays and Intervals.
_AUX_FUNCTIONS = {AuxKind.F1: _f1, AuxKind.F2: _f2, AuxKind.G: _g}

# y-partials as printed alongside the boundary-maximum argument. They do not
# follow from differentiating the displayed functions; kept for reference.
PRINTED_Y_PARTIALS = {
    AuxKind.F1: '4/3 (y/(1+x))^2 + 4/3 x + 3',
    AuxKind.F2: '4/3 (y/(1+x))^2 - 2/3 x + 3',
    AuxKind.G: '10/3 x + 4/3 (y/(1+x))^2 + 9',
}

RECOMPUTED_Y_PARTIALS = {
    AuxKind.F1: '4 - 8/3 y/(1+x)',
    AuxKind.F2: '2 - 8/3 y/(1+x)',
    AuxKind.G: '4 - 8/3 y/(1+x)',
}


def printed_y_partial(kind: AuxKind, x, y):
    ratio = y / (1 + x)
    if kind is AuxKind.F1:
        return 4 * ratio * ratio / 3 + 4 * x / 3 + 3
    if kind is AuxKind.F2:
        return 4 * ratio * ratio / 3 - 2 * x / 3 + 3
    return 10 * x / 3 + 4 * ratio * ratio / 3 + 9


def y_partial(kind: AuxKind, x, y):
    """d/dy of the auxiliary function (recomputed)."""
    linear = 2 if kind is AuxKind.F2 else 4
    return linear - 8 * y / (1 + x) / 3


class Certificate(BaseModel):
    """Outcome of one branch-and-bound maximization."""

    kind: str
    claimed_bound: float
    certified_sup_hi: float
    attained_lo: float
    witness_x: float
    witness_y: float
    boxes_processed: int
    max_depth: int
    status: Status

    @property
    def witness(self) -> Tuple[float, float]:
        return (self.witness_x, self.witness_y)


class PositivityCertificate(BaseModel):
    """Outcome of an interval proof that a function is positive."""

    kind: str
    certified_inf: float
    attained_min: float
    witness_x: float
    witness_y: float
    boxes_processed: int
    max_depth: int
    status: Status


class EdgeReport(BaseModel):
    """Restriction of an auxiliary function to one edge of G."""

    edge: str
    closed_form: str
    closed_form_max: float
    argmax: float
    certified_max_hi: float
    status: Status
    max_discrepancy: float


@dataclass(frozen=True)
class Box:
    """Axis-aligned box x-interval times y-interval."""

    x: Interval
    y: Interval

    @property
    def width(self) -> float:
        return max(self.x.width, self.y.width)

    def split(self) -> Tuple[Box, Box]:
        """Bisect the wider dimension, ties toward x."""
        if self.x.width >= self.y.width:
            left, right = self.x.bisect()
            return Box(left, self.y), Box(right, self.y)
        lower, upper = self.y.bisect()
        return Box(self.x, lower), Box(self.x, upper)

    def sample_points(self) -> List[Tuple[float, float]]:
        """Corners and midpoint."""
        return [
            (self.x.lo, self.y.lo),
            (self.x.hi, self.y.lo),
            (self.x.lo, self.y.hi),
            (self.x.hi, self.y.hi),
            (self.x.midpoint, self.y.midpoint),
        ]


REGION_BOX = Box(Interval(0.0, 1.0), Interval(0.0, 0.5))


def in_region(x: float, y: float) -> bool:
    """Point membership in G."""
    return 0.0 <= x <= 1.0 and 0.0 <= y <= 0.5 * (1.0 - x * x)


def _check_domain(x: float, y: float) -> None:
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 0.5):
        raise InputError(f"({x}, {y}) outside [0,1] x [0,1/2]")


def aux_eval(kind: AuxKind, x: float, y: float) -> float:
    """Value of f1, f2 or g at (x, y) in [0,1] x [0,1/2]."""
    _check_domain(x, y)
    return float(_AUX_FUNCTIONS[AuxKind(kind)](x, y))


def aux_eval_interval(kind: AuxKind, box: Box) -> Interval:
    """Natural interval extension of the auxiliary function over ``box``."""
    if not REGION_BOX.x.encloses(box.x) or not REGION_BOX.y.encloses(box.y):
        raise InputError(f"Box {box} outside the bounding rectangle")
    return _AUX_FUNCTIONS[AuxKind(kind)](box.x, box.y)


def clip_to_G(box: Box) -> Optional[Box]:
    """
    Shrink ``box`` to the part that can meet G.

    The constraint y <= (1 - x^2)/2 is evaluated at x.lo (its largest value
    over the box) with outward rounding; returns None when the box misses G.
    """
    cap = ((1 - Interval.point(box.x.lo) * box.x.lo) / 2).hi
    if box.y.lo > cap:
        return None
    if box.y.hi <= cap:
        return box
    return Box(box.x, Interval(box.y.lo, cap))


@dataclass
class _SearchOutcome:
    sup_hi: float
    best_value: float
    witness: Tuple[float, float]
    boxes_processed: int
    max_depth: int
    status: Status


def _branch_and_bound(
    enclose: Callable[[Box], Interval],
    evaluate: Callable[[float, float], float],
    root: Box,
    threshold: float,
    max_boxes: int,
    clip: Optional[Callable[[Box], Optional[Box]]] = None,
    admissible: Callable[[float, float], bool] = lambda x, y: True
) -> _SearchOutcome:
    """
    Depth-first subdivision proving sup <= threshold.

    A box is accepted once its enclosure's upper end is <= threshold and
    bisected otherwise. A sampled point above the threshold refutes the
    claim. On early exit the enclosures of all pending boxes are folded
    into ``sup_hi`` so it remains a valid upper bound.
    """
    stack: List[Tuple[Box, int]] = [(root, 0)]
    sup_hi = -np.inf
    best_value = -np.inf
    witness = (float('nan'), float('nan'))
    processed = 0
    max_depth = 0
    status: Status = 'proven'

    def finish(pending: List[Box]) -> None:
        nonlocal sup_hi
        for pending_box in pending:
            region = clip(pending_box) if clip is not None else pending_box
            if region is not None:
                sup_hi = max(sup_hi, enclose(region).hi)

    while stack:
        box, depth = stack.pop()
        processed += 1
        max_depth = max(max_depth, depth)
        if processed > max_boxes:
            status = 'budget_exceeded'
            finish([box] + [b for b, _ in stack])
            break

        region = clip(box) if clip is not None else box
        if region is None:
            continue

        for px, py in region.sample_points():
            if admissible(px, py):
                value = evaluate(px, py)
                if value > best_value:
                    best_value, witness = value, (px, py)

        enclosure = enclose(region)
        if best_value > threshold:
            status = 'refuted'
            sup_hi = max(sup_hi, enclosure.hi)
            finish([b for b, _ in stack])
            break

        if enclosure.hi <= threshold:
            sup_hi = max(sup_hi, enclosure.hi)
            continue

        if region.width < MIN_BOX_WIDTH:
            status = 'budget_exceeded'
            sup_hi = max(sup_hi, enclosure.hi)
            finish([b for b, _ in stack])
            break

        first, second = region.split()
        stack.append((second, depth + 1))
        stack.append((first, depth + 1))

    return _SearchOutcome(
        sup_hi=float(sup_hi),
        best_value=float(best_value),
        witness=witness,
        boxes_processed=min(processed, max_boxes + 1),
        max_depth=max_depth,
        status=status,
    )


def certify_max(
    kind: AuxKind,
    claimed_bound: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    max_boxes: int = DEFAULT_MAX_BOXES
) -> Certificate:
    """
    Certify sup over G of the auxiliary function <= claimed_bound + tol.

    Args:
        kind: f1, f2 or g
        claimed_bound: Bound to prove (defaults to the sharp constant 4, 3, 11)
        tol: Slack; must be positive
        max_boxes: Work budget

    Returns:
        Certificate with status proven, refuted or budget_exceeded
    """
    kind = AuxKind(kind)
    if tol <= 0:
        raise InputError(f"Certification tolerance must be positive, got {tol}")
    claimed = CLAIMED_BOUNDS[kind] if claimed_bound is None else float(claimed_bound)
    function = _AUX_FUNCTIONS[kind]
    outcome = _branch_and_bound(
        enclose=lambda box: function(box.x, box.y),
        evaluate=lambda x, y: float(function(x, y)),
        root=REGION_BOX,
        threshold=claimed + tol,
        max_boxes=max_boxes,
        clip=clip_to_G,
        admissible=in_region,
    )
    logger.debug("certify_max %s: %s after %d boxes", kind.value, outcome.status, outcome.boxes_processed)
    return Certificate(
        kind=kind.value,
        claimed_bound=claimed,
        certified_sup_hi=outcome.sup_hi,
        attained_lo=outcome.best_value,
        witness_x=outcome.witness[0],
        witness_y=outcome.witness[1],
        boxes_processed=outcome.boxes_processed,
        max_depth=outcome.max_depth,
        status=outcome.status,
    )


def _certify_positive(
    label: str,
    function: Callable,
    root: Box,
    max_boxes: int,
    clip: Optional[Callable[[Box], Optional[Box]]] = None,
    admissible: Callable[[float, float], bool] = lambda x, y: True
) -> PositivityCertificate:
    # Positivity of h is sup(-h) <= 0 with every accepted box strictly negative.
    outcome = _branch_and_bound(
        enclose=lambda box: -function(box.x, box.y),
        evaluate=lambda x, y: -float(function(x, y)),
        root=root,
        threshold=-np.finfo(float).tiny,
        max_boxes=max_boxes,
        clip=clip,
        admissible=admissible,
    )
    return PositivityCertificate(
        kind=label,
        certified_inf=-outcome.sup_hi,
        attained_min=-outcome.best_value,
        witness_x=outcome.witness[0],
        witness_y=outcome.witness[1],
        boxes_processed=outcome.boxes_processed,
        max_depth=outcome.max_depth,
        status=outcome.status,
    )


def certify_dy_positive(kind: AuxKind, max_boxes: int = DEFAULT_MAX_BOXES) -> PositivityCertificate:
    """
    Certify d/dy of the auxiliary function > 0 on G (no interior critical
    points, so the maximum lies on the boundary of G).
    """
    kind = AuxKind(kind)
    return _certify_positive(
        f"d{kind.value}/dy",
        lambda x, y: y_partial(kind, x, y),
        REGION_BOX,
        max_boxes,
        clip=clip_to_G,
        admissible=in_region,
    )


@dataclass(frozen=True)
class _Edge:
    name: str
    closed_form: str
    profile: Callable
    derivative: Optional[Callable]
    lo: float
    hi: float
    point: Callable[[float], Tuple[float, float]]


def _edges(kind: AuxKind) -> Tuple[_Edge, _Edge, _Edge]:
    on_y_axis = lambda t: (0.0, t)
    on_x_axis = lambda t: (t, 0.0)
    on_curve = lambda t: (t, 0.5 * (1.0 - t * t))
    if kind is AuxKind.F1:
        return (
            _Edge('x=0', '(1 - 4y^2)/3 + 4y', lambda t: (1 - 4 * t * t) / 3 + 4 * t, None, 0.0, 0.5, on_y_axis),
            _Edge('y=0', '(1 - x^2)/3 + x^2 + 3x', lambda t: (1 - t * t) / 3 + t * t + 3 * t, None, 0.0, 1.0, on_x_axis),
            _Edge('y=(1-x^2)/2', '2 + 10/3 x - x^2 - x^3/3',
                  lambda t: 2 + 10 * t / 3 - t * t - t * t * t / 3,
                  lambda t: 10 / 3 - 2 * t - t * t, 0.0, 1.0, on_curve),
        )
    if kind is AuxKind.F2:
        return (
            _Edge('x=0', '(1 - 4y^2)/3 + 2y', lambda t: (1 - 4 * t * t) / 3 + 2 * t, None, 0.0, 0.5, on_y_axis),
            _Edge('y=0', '(1 - x^2)/3 + 3x', lambda t: (1 - t * t) / 3 + 3 * t, None, 0.0, 1.0, on_x_axis),
            _Edge('y=(1-x^2)/2', '1 + 10/3 x - x^2 - x^3/3',
                  lambda t: 1 + 10 * t / 3 - t * t - t * t * t / 3,
                  lambda t: 10 / 3 - 2 * t - t * t, 0.0, 1.0, on_curve),
        )
    return (
        _Edge('x=0', '(1 + 12y - 4y^2)/3', lambda t: (1 + 12 * t - 4 * t * t) / 3, None, 0.0, 0.5, on_y_axis),
        _Edge('y=0', '5/3 x^2 + 9x + 1/3', lambda t: 5 * t * t / 3 + 9 * t + 1 / 3, None, 0.0, 1.0, on_x_axis),
        _Edge('y=(1-x^2)/2', '2 + 28/3 x - x^3/3',
              lambda t: 2 + 28 * t / 3 - t * t * t / 3,
              lambda t: 28 / 3 - t * t, 0.0, 1.0, on_curve),
    )


def _segment(lo: float, hi: float) -> Box:
    return Box(Interval(lo, hi), Interval(0.0, 0.0))


def edge_profiles(
    kind: AuxKind,
    tol: float = DEFAULT_TOL,
    points: int = DEFAULT_EDGE_POINTS,
    max_boxes: int = DEFAULT_MAX_BOXES
) -> List[EdgeReport]:
    """
    Restrictions of the auxiliary function to the three edges of G.

    For each edge the closed-form profile is cross-checked against
    aux_eval on ``points`` edge points, its maximum located on the same
    points, and the 1-D maximum certified by interval bisection.
    """
    kind = AuxKind(kind)
    function = _AUX_FUNCTIONS[kind]
    reports = []
    for edge in _edges(kind):
        t = np.linspace(edge.lo, edge.hi, points)
        closed = np.array([edge.profile(s) for s in t])
        direct = np.array([function(*edge.point(s)) for s in t])
        best = int(np.argmax(closed))
        closed_max = float(closed[best])
        outcome = _branch_and_bound(
            enclose=lambda box, profile=edge.profile: profile(box.x),
            evaluate=lambda x, y, profile=edge.profile: float(profile(x)),
            root=_segment(edge.lo, edge.hi),
            threshold=closed_max + tol,
            max_boxes=max_boxes,
        )
        reports.append(EdgeReport(
            edge=edge.name,
            closed_form=edge.closed_form,
            closed_form_max=closed_max,
            argmax=float(t[best]),
            certified_max_hi=outcome.sup_hi,
            status=outcome.status,
            max_discrepancy=float(np.max(np.abs(closed - direct))),
        ))
    return reports


def certify_edge_monotone(kind: AuxKind, max_boxes: int = DEFAULT_MAX_BOXES) -> PositivityCertificate:
    """Certify the curved-edge profile is increasing on [0, 1]."""
    kind = AuxKind(kind)
    curve = _edges(kind)[2]
    return _certify_positive(
        f"{kind.value} on y=(1-x^2)/2, d/dx",
        lambda x, y: curve.derivative(x),
        _segment(0.0, 1.0),
        max_boxes,
    )


# One-variable majorants of the GZ:2,3 and K:4,1 proofs, in x = |c_1|.
UNIVARIATE_MAJORANTS = {
    'gz23': ('(1 - x^2 + 4x)/2', lambda x: (1 - x * x + 4 * x) / 2, 2.0),
    'k41': ('(1 + 8x - x^2)/2', lambda x: (1 + 8 * x - x * x) / 2, 4.0),
}


def certify_univariate_max(
    name: str,
    claimed_bound: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    max_boxes: int = DEFAULT_MAX_BOXES
) -> Certificate:
    """Certify a one-variable majorant over x in [0, 1]."""
    if name not in UNIVARIATE_MAJORANTS:
        raise InputError(f"Unknown univariate majorant {name!r}")
    _, function, sharp = UNIVARIATE_MAJORANTS[name]
    claimed = sharp if claimed_bound is None else float(claimed_bound)
    outcome = _branch_and_bound(
        enclose=lambda box: function(box.x),
        evaluate=lambda x, y: float(function(x)),
        root=_segment(0.0, 1.0),
        threshold=claimed + tol,
        max_boxes=max_boxes,
    )
    return Certificate(
        kind=name,
        claimed_bound=claimed,
        certified_sup_hi=outcome.sup_hi,
        attained_lo=outcome.best_value,
        witness_x=outcome.witness[0],
        witness_y=outcome.witness[1],
        boxes_processed=outcome.boxes_processed,
        max_depth=outcome.max_depth,
        status=outcome.status,
    )


def grid_oracle(kind: AuxKind, resolution: int = 2001) -> Tuple[float, Tuple[float, float]]:
    """
    Brute-force maximum over a resolution x resolution grid of the
    bounding rectangle, skipping points outside G.
    """
    if resolution < 101:
        raise InputError(f"Grid oracle needs resolution >= 101, got {resolution}")
    function = _AUX_FUNCTIONS[AuxKind(kind)]
    xs = np.linspace(0.0, 1.0, resolution)
    ys = np.linspace(0.0, 0.5, resolution)
    best, where = -np.inf, (float('nan'), float('nan'))
    for start in range(0, resolution, 256):
        x = xs[start:start + 256, None]
        values = function(x, ys[None, :])
        values = np.where(ys[None, :] <= 0.5 * (1.0 - x * x), values, -np.inf)
        flat = int(np.argmax(values))
        row, col = np.unravel_index(flat, values.shape)
        if values[row, col] > best:
            best, where = float(values[row, col]), (float(x[row, 0]), float(ys[col]))
    return best, where


def proof_majorant(spec: FunctionalSpec, c1: complex, c2: complex) -> float:
    """
    Majorant in (|c_1|, |c_2|) that the proof of a proven spec bounds the
    functional by.

    Raises:
        InputError: For specs without a proof over class U
    """
    x, y = min(abs(c1), 1.0), min(abs(c2), 0.5)
    label = spec.label
    if label == 'Z:2':
        return x
    if label == 'GZ:2,3':
        return UNIVARIATE_MAJORANTS['gz23'][1](x)
    if label == 'K:4,1':
        return UNIVARIATE_MAJORANTS['k41'][1](x)
    if label == 'Z:3':
        return float(_f1(x, y))
    if label == 'GZ:2,4':
        return float(_f2(x, y))
    if label == 'K:5,1':
        return float(_g(x, y))
    raise InputError(f"No proof majorant for {label}")
