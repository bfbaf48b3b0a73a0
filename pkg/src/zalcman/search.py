"""
Randomized extremal search over class-U parameters.

A rejection sampler draws strictly admissible (a_2, Schur parameter)
pairs; a multi-restart Nelder-Mead search then maximizes a coefficient
functional over the unconstrained encoding

    x = [Re a_2, Im a_2, u_0, v_0, u_1, v_1, ...],
    gamma_k = R w_k / (1 + |w_k|),  w_k = u_k + i v_k,  R = 1 - margin,

with infeasible points scored as -inf. A final descent started next to the
Koebe rotation aligned with the best restart reaches the boundary points
random restarts cannot. Best-found records are appended to a JSONL file.
"""
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize

from src.utils.reproducibility import make_rng, spawn_rngs

from .classu import ClassUFunction, build_admissible, build_from_params
from .config import SamplerConfig, SearchConfig
from .errors import PersistenceError, SamplingStarvedError, ToolkitError
from .functionals import FunctionalSpec, bound, evaluate
from .schwarz import GAMMA_MARGIN, SchurParams

logger = logging.getLogger('zalcman.search')

# Initial simplex edge in the unconstrained coordinates.
SIMPLEX_STEP = 0.25

_WRITE_LOCK = threading.Lock()


def _uniform_disk(rng: np.random.Generator, radius: float) -> complex:
    r = radius * np.sqrt(rng.random())
    angle = 2.0 * np.pi * rng.random()
    return complex(r * np.cos(angle), r * np.sin(angle))


def sample_function(
    rng: np.random.Generator,
    degree: int,
    config: Optional[SamplerConfig] = None
) -> ClassUFunction:
    """
    Draw one strictly admissible class-U function.

    a_2 is uniform on |a_2| <= a2_radius and gamma_k uniform on the disk of
    radius gamma_radius * gamma_decay**k; draws are rejected until the
    function they build has margin >= config.margin and no denominator
    zero in the closed disk.

    Args:
        rng: Source of randomness
        degree: Number of Schur parameters
        config: Sampler settings (defaults used when omitted)

    Returns:
        The accepted function, built at config.order

    Raises:
        SamplingStarvedError: If max_tries draws are all rejected
    """
    config = config or SamplerConfig(degree=degree)
    for _ in range(config.max_tries):
        gammas = tuple(
            _uniform_disk(rng, config.gamma_radius * config.gamma_decay ** k)
            for k in range(degree)
        )
        a2 = _uniform_disk(rng, config.a2_radius)
        f = build_admissible(a2, SchurParams(gammas), config.margin, config.order, config.grid_size)
        if f is not None:
            return f
    raise SamplingStarvedError(
        f"No admissible sample of degree {degree} in {config.max_tries} tries "
        f"(margin {config.margin})"
    )


def sample(
    rng: np.random.Generator,
    degree: int,
    config: Optional[SamplerConfig] = None
) -> Tuple[complex, SchurParams]:
    """(a2, Schur parameters) of ``sample_function``."""
    f = sample_function(rng, degree, config)
    return f.a2, f.params


def sample_functions(config: SamplerConfig, count: int) -> Iterator[ClassUFunction]:
    """Stream of ``count`` accepted class-U functions from ``config.seed``."""
    rng = make_rng(config.seed)
    for _ in range(count):
        yield sample_function(rng, config.degree, config)


class BestRecord(BaseModel):
    """Best function found by one restart (or across restarts)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec: str
    value: float
    bound: float
    excess: float
    a2: complex
    gammas: List[complex] = Field(default_factory=list)
    membership_margin: float
    pole_free: bool
    seed: int
    evaluations: int = Field(ge=0)
    wall_ms: int = Field(ge=0)

    @property
    def params(self) -> SchurParams:
        return SchurParams(tuple(self.gammas))

    def rebuild(self, order: int = 64, grid_size: int = 2048) -> ClassUFunction:
        """Reconstruct the recorded function."""
        return build_from_params(self.a2, self.params, order, grid_size)

    def reevaluate(self, order: int = 64) -> float:
        """Functional value of the rebuilt function."""
        return evaluate(FunctionalSpec.parse(self.spec), self.rebuild(order))

    def to_json_record(self) -> Dict[str, Any]:
        """Flat JSON-serializable form (one JSONL line)."""
        return {
            'spec': self.spec,
            'value': self.value,
            'bound': self.bound,
            'excess': self.excess,
            'a2': [self.a2.real, self.a2.imag],
            'gammas': [[g.real, g.imag] for g in self.gammas],
            'margin': self.membership_margin,
            'pole_free': self.pole_free,
            'seed': self.seed,
            'evals': self.evaluations,
            'wall_ms': self.wall_ms,
        }

    @classmethod
    def from_json_record(cls, data: Dict[str, Any]) -> 'BestRecord':
        return cls(
            spec=data['spec'],
            value=data['value'],
            bound=data['bound'],
            excess=data['excess'],
            a2=complex(*data['a2']),
            gammas=[complex(re, im) for re, im in data['gammas']],
            membership_margin=data['margin'],
            pole_free=data['pole_free'],
            seed=data['seed'],
            evaluations=data['evals'],
            wall_ms=data['wall_ms'],
        )


def _radius(margin: float) -> float:
    return 1.0 - max(margin, GAMMA_MARGIN)


def encode(a2: complex, params: SchurParams, margin: float) -> np.ndarray:
    """Unconstrained coordinates of (a_2, gammas); inverse of ``decode``."""
    radius = _radius(margin)
    coords = [a2.real, a2.imag]
    for g in params.gamma:
        w = g / (radius - abs(g))
        coords.extend([w.real, w.imag])
    return np.array(coords, dtype=np.float64)


def decode(x: np.ndarray, margin: float) -> Tuple[complex, SchurParams]:
    """Map unconstrained coordinates into |a_2| free, |gamma_k| < 1 - margin."""
    radius = _radius(margin)
    a2 = complex(x[0], x[1])
    gammas = []
    for k in range(2, len(x), 2):
        w = complex(x[k], x[k + 1])
        gammas.append(radius * w / (1.0 + abs(w)))
    return a2, SchurParams(tuple(gammas))


class _Objective:
    """Negated functional value with best-feasible-point bookkeeping."""

    def __init__(self, config: SearchConfig):
        self.config = config
        self.evaluations = 0
        self.best_value = -np.inf
        self.best: Optional[ClassUFunction] = None

    def consider(self, f: ClassUFunction) -> float:
        value = evaluate(self.config.spec, f)
        if value > self.best_value:
            self.best_value = value
            self.best = f
        return value

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        try:
            a2, params = decode(x, self.config.margin)
            f = build_admissible(a2, params, self.config.margin, self.config.order, self.config.grid_size)
        except ToolkitError:
            return np.inf
        if f is None:
            return np.inf
        return -self.consider(f)


def _record(config: SearchConfig, objective: _Objective, started: float) -> BestRecord:
    f = objective.best
    spec_bound = bound(config.spec)
    return BestRecord(
        spec=config.spec.label,
        value=objective.best_value,
        bound=spec_bound,
        excess=objective.best_value - spec_bound,
        a2=f.a2,
        gammas=list(f.params.gamma),
        membership_margin=f.membership_margin,
        pole_free=f.pole_free,
        seed=config.rng_seed,
        evaluations=objective.evaluations,
        wall_ms=int(round(1000.0 * (time.perf_counter() - started))),
    )


def _descend(config: SearchConfig, start: ClassUFunction, started: float) -> BestRecord:
    """Nelder-Mead from an admissible start; the start itself is always a candidate."""
    objective = _Objective(config)
    x0 = encode(start.a2, start.params, config.margin)
    objective(x0)
    if objective.best is None:
        # Encoding round-off pushed the start over the margin.
        objective.consider(start)

    if config.iterations > 0:
        simplex = np.vstack([x0] + [x0 + SIMPLEX_STEP * e for e in np.eye(x0.size)])
        minimize(
            objective,
            x0,
            method='Nelder-Mead',
            options={
                'maxiter': config.iterations,
                'initial_simplex': simplex,
                'adaptive': True,
                'xatol': 1e-10,
                'fatol': 1e-12,
            },
        )
    return _record(config, objective, started)


def _restart(config: SearchConfig, rng: np.random.Generator) -> BestRecord:
    started = time.perf_counter()
    return _descend(config, sample_function(rng, config.degree, config.sampler()), started)


def koebe_seed(theta: float, config: SearchConfig) -> Optional[ClassUFunction]:
    """
    Admissible function next to the Koebe rotation with a_2 = 2 e^{i theta}.

    Uses gamma_0 = -r e^{2i theta} (remaining gammas 0) and a_2 = 2 r e^{i theta}
    with r = 1 - 2 margin. The zeros of 1 - a_2 z - gamma_0 z^2 then have
    modulus r^{-1/2} > 1, and the membership margin is 2 margin.
    """
    if config.degree == 0:
        return None
    r = 1.0 - 2.0 * config.margin
    rotation = np.exp(1j * theta)
    gammas = (-r * rotation ** 2,) + (0j,) * (config.degree - 1)
    return build_admissible(
        2.0 * r * rotation, SchurParams(gammas), config.margin, config.order, config.grid_size
    )


def polish(config: SearchConfig, best: BestRecord) -> Optional[BestRecord]:
    """
    Extra descent started next to the Koebe rotation aligned with ``best.a2``.

    Koebe rotations lie on the closure of the feasible set, where the
    squashing map needs |w_0| of order 1/margin; random restarts stall well
    before that. Skipped for degree 0 (no admissible start) and for a zero
    iteration budget.
    """
    if config.iterations == 0:
        return None
    started = time.perf_counter()
    start = koebe_seed(float(np.angle(best.a2)), config)
    if start is None:
        return None
    return _descend(config, start, started)


def run_restarts(config: SearchConfig) -> List[BestRecord]:
    """
    One best record per restart, in restart order.

    Restart k draws from the k-th stream spawned from rng_seed, so the
    result does not depend on ``workers``.
    """
    rngs = spawn_rngs(config.rng_seed, config.restarts)
    logger.info(
        "Searching %s: %d restarts x %d iterations, degree %d",
        config.spec.label, config.restarts, config.iterations, config.degree
    )
    if config.workers == 1:
        return [_restart(config, rng) for rng in rngs]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda rng: _restart(config, rng), rngs))


def select_best(records: List[BestRecord]) -> BestRecord:
    """Highest value; ties go to the earliest restart."""
    best = records[0]
    for record in records[1:]:
        if record.value > best.value:
            best = record
    return best


def final_record(records: List[BestRecord]) -> BestRecord:
    best = select_best(records)
    return best.model_copy(update={
        'evaluations': sum(r.evaluations for r in records),
        'wall_ms': sum(r.wall_ms for r in records),
    })


def search_records(config: SearchConfig) -> List[BestRecord]:
    """
    Restart records followed by the final best.

    The final record also covers the polishing descent, and its evaluations
    and wall time include it.
    """
    records = run_restarts(config)
    candidates = list(records)
    polished = polish(config, select_best(records))
    if polished is not None:
        logger.info("Polishing descent for %s reached %.12g", config.spec.label, polished.value)
        candidates.append(polished)
    return records + [final_record(candidates)]


def maximize(config: SearchConfig) -> BestRecord:
    """
    Multi-restart search for the largest functional value over class U.

    Returns:
        Best record across restarts and the polishing descent, with
        evaluations and wall time summed
    """
    return search_records(config)[-1]


def append_records(path: Path, records: List[BestRecord]) -> None:
    """
    Append records as JSONL lines.

    Raises:
        PersistenceError: If the file cannot be written
    """
    lines = ''.join(json.dumps(r.to_json_record()) + '\n' for r in records)
    with _WRITE_LOCK:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'a', encoding='utf-8') as handle:
                handle.write(lines)
        except OSError as e:
            raise PersistenceError(f"Cannot append to {path}: {e}") from e


def load_records(path: Path) -> List[BestRecord]:
    """
    Read every record of a JSONL file.

    Raises:
        PersistenceError: If the file is missing or a line is malformed
    """
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            lines = [line for line in handle if line.strip()]
    except OSError as e:
        raise PersistenceError(f"Cannot read {path}: {e}") from e
    records = []
    for number, line in enumerate(lines, start=1):
        try:
            records.append(BestRecord.from_json_record(json.loads(line)))
        except (ValueError, KeyError, TypeError) as e:
            raise PersistenceError(f"{path}:{number}: malformed record ({e})") from e
    return records


def run_and_persist(config: SearchConfig, path: Path) -> List[BestRecord]:
    """
    Run the search and append one line per restart plus the final best.

    Returns:
        The appended records, final best last
    """
    path = Path(path)
    records = search_records(config)
    append_records(path, records)
    logger.info("Appended %d records to %s", len(records), path)
    return records
