"""Search trajectories, progress measures, and query-count bounds.

Runs the marked-item search experiment on any sector-decomposed model: one
trajectory per candidate marked item, interleaving the sign-flip oracle with
a schedule of reversible maps, next to the oracle-free control trajectory.
From the pair it derives the per-query progress measure (the summed squared
distance between the two trajectory families), its schedule-independent
ceiling ``4 h k^2``, the companion distances to the target states, and the
finite-N floor that any successful run must have climbed above.

Quantum runs with the standard amplitude-amplification schedule have a fast
path that simulates N-dimensional amplitudes directly; it is exactly
equivalent to the dense sector-coordinate simulation (the embedding is an
isometry) and is cross-checked against it in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, TextIO

import numpy as np

from ._version import __version__
from .models import (
    DEFAULT_TOL,
    LinearMap,
    Model,
    StateVector,
    classical_model,
    haar_orthogonal,
    inner,
    lift_unitary_conjugation,
    quantum_model,
    sign_flip_oracle,
    synthetic_model,
)

__all__ = [
    "Schedule",
    "TrajectoryPair",
    "ProgressReport",
    "UpperBoundCheck",
    "LowerBoundCheck",
    "SweepRow",
    "SweepResult",
    "uniform_start",
    "success_probability",
    "oracle_displacement",
    "reflection_about",
    "diffusion_unitary",
    "grover_schedule",
    "reflection_schedule",
    "random_schedule",
    "constant_schedule",
    "make_schedule",
    "run_search",
    "progress_measures",
    "quantum_grover_report",
    "check_upper_bound",
    "analytic_crossing_floor",
    "check_lower_bound",
    "scaling_sweep",
    "default_k_max",
    "write_report_csv",
    "write_sweep_csv",
    "reports_to_json",
    "sweep_to_json",
    "LOWER_BOUND_CONSTANT",
    "REPORT_CSV_COLUMNS",
    "SWEEP_CSV_COLUMNS",
]

# Any constant below (sqrt(2)-1)^2 ~ 0.1716 works asymptotically; 0.17 is the
# conventional round figure reported alongside sweep results.
LOWER_BOUND_CONSTANT = 0.17

REPORT_CSV_COLUMNS = (
    "model_kind",
    "N",
    "h",
    "strategy",
    "seed",
    "k",
    "D_k",
    "upper_4hk2",
    "E_k",
    "F_k",
    "lower_exact",
    "success_mean",
    "success_min",
)

SWEEP_CSV_COLUMNS = (
    "model_kind",
    "N",
    "h",
    "strategy",
    "seed",
    "k_star",
    "k_peak",
    "success_at_k_star",
    "max_success",
    "k_max",
    "floor_sqrt_cN_4h",
    "saturated",
)

# Dense sector simulation of the quantum model costs O(N^2) coordinates; above
# this the amplitude fast path takes over for the standard quantum schedule.
QUANTUM_DENSE_LIMIT = 32


# ---------------------------------------------------------------------------
# Elementary quantities
# ---------------------------------------------------------------------------

def uniform_start(model: Model) -> StateVector:
    """The canonical starting state of the search experiment."""
    return model.uniform_state.copy()


def success_probability(model: Model, state: StateVector, marked: int) -> float:
    """Overlap of a state with the marked basis state.

    For classical and quantum states this is the probability of finding the
    marked item; exploratory synthetic dynamics can leave the physical state
    set, in which case the raw overlap (possibly outside [0, 1]) is reported
    unclamped.
    """
    if not 0 <= marked < model.n_slits:
        raise ValueError(f"marked item {marked} out of range 0..{model.n_slits - 1}")
    return inner(model.basis_states[marked], state)


def oracle_displacement(model: Model, state: StateVector) -> float:
    """How far one query moves a state, summed over all possible marked items.

    Sum over x of ``|| (1 - O_x) s ||^2``. Because each oracle doubles exactly
    the coherence blocks containing its marked slit (size > 1) and kills the
    rest of the difference, the sum collapses to ``4 * sum_I |I| * ||s_I||^2``
    over the multi-slit sectors; the test suite cross-checks this against the
    literal per-oracle evaluation.
    """
    space = model.space
    if state.space != space:
        raise ValueError("state does not live on the model's space")
    total = 0.0
    for sector in space.sectors:
        size = len(sector)
        if size > 1:
            block = state.coords[space.sector_slice(sector)]
            total += 4.0 * size * float(np.dot(block, block))
    return total


def reflection_about(model: Model, state: StateVector) -> LinearMap:
    """The orthogonal reflection fixing one state: ``2 s s^t / <s,s> - 1``.

    The generalised diffusion step for models without a native algorithm.
    Note that on the quantum model this sector-coordinate reflection is not
    the lift of the amplitude-space diffusion unitary; quantum schedules use
    the lifted conjugation instead.
    """
    coords = state.coords
    sq = float(np.dot(coords, coords))
    if sq <= 0.0:
        raise ValueError("cannot reflect about the zero vector")
    mat = (2.0 / sq) * np.outer(coords, coords) - np.eye(coords.shape[0])
    return LinearMap(model.space, mat)


def diffusion_unitary(n_items: int) -> np.ndarray:
    """The amplitude-space inversion about the uniform superposition."""
    return np.full((n_items, n_items), 2.0 / n_items) - np.eye(n_items)


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """A named source of reversible steps, indexed from 1."""

    name: str
    step_fn: Callable[[int], LinearMap]

    def step(self, index: int) -> LinearMap:
        if index < 1:
            raise ValueError(f"step index starts at 1, got {index}")
        return self.step_fn(index)


def constant_schedule(step: LinearMap, name: str) -> Schedule:
    return Schedule(name, lambda _i: step)


def grover_schedule(model: Model) -> Schedule:
    """Every step is the lifted inversion-about-uniform conjugation."""
    if model.kind != "quantum":
        raise ValueError("the grover strategy is defined on the quantum model only")
    step = lift_unitary_conjugation(model, diffusion_unitary(model.n_slits))
    return constant_schedule(step, "grover")


def reflection_schedule(model: Model) -> Schedule:
    """Every step reflects about the model's uniform state."""
    return constant_schedule(reflection_about(model, model.uniform_state), "reflect")


def random_schedule(model: Model, seed: int) -> Schedule:
    """Independent Haar-orthogonal steps, reproducible from the seed."""
    dim = model.space.total_dim
    space = model.space

    def step_fn(index: int) -> LinearMap:
        rng = np.random.default_rng((int(seed), int(index)))
        return LinearMap(space, haar_orthogonal(dim, rng))

    return Schedule(f"random:{seed}", step_fn)


def make_schedule(model: Model, strategy: str, seed: int = 0) -> Schedule:
    if strategy == "grover":
        return grover_schedule(model)
    if strategy == "reflect":
        return reflection_schedule(model)
    if strategy == "random":
        return random_schedule(model, seed)
    raise ValueError(f"unknown strategy {strategy!r}")


def default_strategy(kind: str) -> str:
    return "grover" if kind == "quantum" else "reflect"


def default_k_max(n_items: int) -> int:
    return int(math.ceil(4.0 * math.sqrt(n_items)))


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------

@dataclass
class TrajectoryPair:
    """Oracle-driven trajectories (one per marked item) and their control.

    ``states_with_oracle[k, i]`` is the state after k queries when item
    ``marked[i]`` is marked; ``states_without_oracle[k]`` applies the same
    schedule without any query. Row 0 of both is the shared starting state.
    """

    model: Model
    schedule_name: str
    marked: tuple[int, ...]
    start: StateVector
    states_with_oracle: np.ndarray  # (k_max + 1, n_marked, M)
    states_without_oracle: np.ndarray  # (k_max + 1, M)

    @property
    def k_max(self) -> int:
        return self.states_with_oracle.shape[0] - 1

    def state_with_oracle(self, k: int, marked: int) -> StateVector:
        i = self.marked.index(marked)
        return StateVector(self.model.space, self.states_with_oracle[k, i].copy())

    def state_without_oracle(self, k: int) -> StateVector:
        return StateVector(self.model.space, self.states_without_oracle[k].copy())


def run_search(
    model: Model,
    schedule: Schedule,
    k_max: int,
    *,
    marked: Sequence[int] | None = None,
    start: StateVector | None = None,
    tol: float = DEFAULT_TOL,
) -> TrajectoryPair:
    """Evolve the full trajectory pair for ``k_max`` queries.

    Each query applies the marked item's sign-flip oracle and then the
    schedule step, exactly as the search experiment prescribes. Steps are
    required to be reversible: small spaces get a full orthogonality check
    (cached per distinct step object), large ones a per-step norm-drift check
    on every evolved state, which is the property the bounds actually use.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    marked_items = tuple(range(model.n_slits)) if marked is None else tuple(marked)
    start_state = model.uniform_state if start is None else start
    if start_state.space != model.space:
        raise ValueError("start state does not live on the model's space")

    m_dim = model.space.total_dim
    n_marked = len(marked_items)
    # last batch row is the oracle-free control: its "oracle" is the identity,
    # and sharing the batched matmul keeps it bit-identical to trajectories the
    # oracle leaves untouched (the classical collapse is then exact)
    oracle_diags = np.vstack(
        [sign_flip_oracle(model, x).map.diagonal for x in marked_items]
        + [np.ones(m_dim)]
    )

    with_states = np.empty((k_max + 1, n_marked, m_dim))
    free_states = np.empty((k_max + 1, m_dim))
    with_states[0] = np.tile(start_state.coords, (n_marked, 1))
    free_states[0] = start_state.coords

    batch = np.tile(start_state.coords, (n_marked + 1, 1))
    start_norms = np.linalg.norm(batch, axis=1)
    drift_tol = max(tol, 1e-10)
    checked_steps: set[int] = set()

    for k in range(1, k_max + 1):
        step = schedule.step(k)
        if step.space != model.space:
            raise ValueError(f"schedule step {k} lives on a different space")
        small = m_dim <= 512
        if small and id(step) not in checked_steps:
            defect = step.orthogonality_defect()
            if defect > tol:
                raise ValueError(
                    f"schedule step {k} is not reversible "
                    f"(orthogonality defect {defect:.3e} > {tol:.1e})"
                )
            checked_steps.add(id(step))
        batch = step.apply_rows(batch * oracle_diags)
        if not small:
            drift = float(np.max(np.abs(np.linalg.norm(batch, axis=1) - start_norms)))
            if drift > drift_tol:
                raise ValueError(
                    f"schedule step {k} is not norm preserving "
                    f"(drift {drift:.3e} > {drift_tol:.1e})"
                )
        with_states[k] = batch[:n_marked]
        free_states[k] = batch[n_marked]

    return TrajectoryPair(
        model=model,
        schedule_name=schedule.name,
        marked=marked_items,
        start=start_state.copy(),
        states_with_oracle=with_states,
        states_without_oracle=free_states,
    )


# ---------------------------------------------------------------------------
# Progress measures
# ---------------------------------------------------------------------------

@dataclass
class ProgressReport:
    """Per-query bound data for one search run.

    ``divergence`` is the summed squared distance between the oracle-driven
    and oracle-free trajectories (the quantity squeezed by the query bounds);
    ``gap_with_oracle`` / ``gap_without_oracle`` are the summed squared
    distances of each family to the target basis states; ``pair_lower_bound``
    is the reverse-triangle floor the divergence can never undercut.
    """

    descriptor: dict
    strategy: str
    seed: int | None
    n_slits: int
    order: int
    marked: tuple[int, ...]
    k: np.ndarray
    divergence: np.ndarray
    upper_bound: np.ndarray
    gap_with_oracle: np.ndarray
    gap_without_oracle: np.ndarray
    pair_lower_bound: np.ndarray
    success: np.ndarray  # (k_max + 1, n_marked)

    @property
    def success_mean(self) -> np.ndarray:
        return self.success.mean(axis=1)

    @property
    def success_min(self) -> np.ndarray:
        return self.success.min(axis=1)

    def success_series(self, mode: str = "per-item") -> np.ndarray:
        if mode == "per-item":
            return self.success_min
        if mode == "averaged":
            return self.success_mean
        raise ValueError(f"unknown success mode {mode!r}")

    def first_crossing(
        self, threshold: float = 0.5, mode: str = "per-item"
    ) -> int | None:
        """Smallest query count whose success reaches the threshold."""
        series = self.success_series(mode)
        hits = np.nonzero(series >= threshold)[0]
        return int(hits[0]) if hits.size else None

    def first_peak(self, mode: str = "per-item") -> int:
        """First query count at which the success series stops increasing.

        For the standard quantum schedule this is the textbook iteration
        count; for flat series (classical saturation) it degenerates to the
        final index.
        """
        series = self.success_series(mode)
        for k in range(len(series) - 1):
            if series[k + 1] < series[k] - 1e-12:
                return k
        return len(series) - 1


def progress_measures(model: Model, trajectories: TrajectoryPair) -> ProgressReport:
    """Distances, bounds, and success probabilities along a trajectory pair."""
    basis = np.stack(
        [model.basis_states[x].coords for x in trajectories.marked]
    )  # (X, M)
    with_states = trajectories.states_with_oracle
    free_states = trajectories.states_without_oracle
    k_max = trajectories.k_max
    ks = np.arange(k_max + 1)

    diff_pair = with_states - free_states[:, None, :]
    divergence = np.einsum("kxm,kxm->k", diff_pair, diff_pair)
    diff_target = with_states - basis[None, :, :]
    gap_with = np.einsum("kxm,kxm->k", diff_target, diff_target)
    diff_free = free_states[:, None, :] - basis[None, :, :]
    gap_without = np.einsum("kxm,kxm->k", diff_free, diff_free)
    success = np.einsum("kxm,xm->kx", with_states, basis)

    pair_lower = np.maximum(0.0, np.sqrt(gap_without) - np.sqrt(gap_with)) ** 2
    upper = 4.0 * model.order * ks.astype(float) ** 2

    seed = _seed_from_schedule_name(trajectories.schedule_name)
    return ProgressReport(
        descriptor=model.descriptor(),
        strategy=trajectories.schedule_name,
        seed=seed,
        n_slits=model.n_slits,
        order=model.order,
        marked=trajectories.marked,
        k=ks,
        divergence=divergence,
        upper_bound=upper,
        gap_with_oracle=gap_with,
        gap_without_oracle=gap_without,
        pair_lower_bound=pair_lower,
        success=success,
    )


def _seed_from_schedule_name(name: str) -> int | None:
    if name.startswith("random:"):
        try:
            return int(name.split(":", 1)[1])
        except ValueError:
            return None
    return None


def quantum_grover_report(n_items: int, k_max: int) -> ProgressReport:
    """Fast exact path for the quantum model under the standard schedule.

    Simulates the N real amplitude vectors directly (one trajectory per
    marked item plus the oracle-free control) and converts overlaps to
    sector-coordinate distances through the embedding identities for pure
    states: ``<emb a, emb b> = <a, b>^2`` and
    ``||emb a - emb b||^2 = 2 (1 - <a, b>^2)``.
    """
    if n_items < 2:
        raise ValueError(f"need at least 2 items, got {n_items}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    n = n_items
    u = np.full(n, 1.0 / math.sqrt(n))
    psi = np.tile(u[:, None], (1, n))  # column x: trajectory with item x marked
    phi = u.copy()
    idx = np.arange(n)

    succ = np.empty((k_max + 1, n))
    fid_free = np.empty((k_max + 1, n))
    phi_at_targets = np.empty((k_max + 1, n))
    succ[0] = psi[idx, idx] ** 2
    fid_free[0] = (phi @ psi) ** 2
    phi_at_targets[0] = phi**2

    for k in range(1, k_max + 1):
        diag = psi[idx, idx]
        psi[idx, idx] = -diag  # the query: flip the marked amplitude
        psi = 2.0 * np.outer(u, u @ psi) - psi  # inversion about uniform
        phi = 2.0 * u * float(u @ phi) - phi
        succ[k] = psi[idx, idx] ** 2
        fid_free[k] = (phi @ psi) ** 2
        phi_at_targets[k] = phi**2

    ks = np.arange(k_max + 1)
    divergence = 2.0 * np.sum(1.0 - fid_free, axis=1)
    gap_with = 2.0 * np.sum(1.0 - succ, axis=1)
    gap_without = 2.0 * np.sum(1.0 - phi_at_targets, axis=1)
    pair_lower = np.maximum(0.0, np.sqrt(gap_without) - np.sqrt(gap_with)) ** 2

    descriptor = {
        "kind": "quantum",
        "n_slits": n,
        "order": 2,
        "dims_per_size": {"1": 1, "2": 2},
    }
    return ProgressReport(
        descriptor=descriptor,
        strategy="grover",
        seed=None,
        n_slits=n,
        order=2,
        marked=tuple(range(n)),
        k=ks,
        divergence=divergence,
        upper_bound=8.0 * ks.astype(float) ** 2,
        gap_with_oracle=gap_with,
        gap_without_oracle=gap_without,
        pair_lower_bound=pair_lower,
        success=succ,
    )


# ---------------------------------------------------------------------------
# Bound checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UpperBoundCheck:
    holds: bool
    max_excess: float
    worst_k: int


def check_upper_bound(report: ProgressReport, *, tol: float = 1e-7) -> UpperBoundCheck:
    """Assert the schedule-independent ceiling ``D_k <= 4 h k^2`` at every k."""
    excess = report.divergence - report.upper_bound
    worst = int(np.argmax(excess))
    max_excess = float(excess[worst])
    return UpperBoundCheck(holds=max_excess <= tol, max_excess=max_excess, worst_k=worst)


def analytic_crossing_floor(n_items: int) -> float:
    """Exact finite-N floor the divergence must exceed once every marked item
    is found with probability at least 1/2:
    ``(sqrt(2 (N - sqrt(N))) - sqrt(N))^2``, clamped at zero where vacuous.
    """
    root = math.sqrt(n_items)
    return max(0.0, math.sqrt(2.0 * (n_items - root)) - root) ** 2


@dataclass(frozen=True)
class LowerBoundCheck:
    crossed: bool
    crossing_k: int | None
    floor: float
    measured: float | None
    holds: bool


def check_lower_bound(
    report: ProgressReport,
    *,
    mode: str = "per-item",
    threshold: float = 0.5,
    tol: float = 1e-6,
) -> LowerBoundCheck:
    """At the first success crossing, the divergence must sit above the
    finite-N floor. Vacuously true when the run never crosses (saturation is
    data, not failure)."""
    crossing = report.first_crossing(threshold, mode)
    floor = analytic_crossing_floor(report.n_slits)
    if crossing is None:
        return LowerBoundCheck(False, None, floor, None, True)
    measured = float(report.divergence[crossing])
    return LowerBoundCheck(
        crossed=True,
        crossing_k=crossing,
        floor=floor,
        measured=measured,
        holds=measured >= floor - tol,
    )


# ---------------------------------------------------------------------------
# Scaling sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    kind: str
    n_slits: int
    order: int
    strategy: str
    seed: int | None
    k_star: int | None
    k_peak: int
    success_at_k_star: float | None
    max_success: float
    k_max: int
    floor: float

    @property
    def saturated(self) -> bool:
        return self.k_star is None


@dataclass
class SweepResult:
    rows: list[SweepRow]
    mode: str
    threshold: float

    def exponent(self, statistic: str = "crossing") -> float | None:
        """Log-log slope of the chosen query count against the list size."""
        xs, ys = [], []
        for row in self.rows:
            value = row.k_star if statistic == "crossing" else row.k_peak
            if value is not None and value >= 1:
                xs.append(math.log(row.n_slits))
                ys.append(math.log(value))
        if len(xs) < 2:
            return None
        slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
        return float(slope)


def scaling_floor(n_items: int, order: int) -> float:
    """The asymptotic query floor ``sqrt(c N / (4 h))`` with c = 0.17."""
    return math.sqrt(LOWER_BOUND_CONSTANT * n_items / (4.0 * order))


def _report_for(
    kind: str,
    n_items: int,
    *,
    order: int | None,
    strategy: str,
    seed: int,
    k_max: int,
    tol: float,
) -> ProgressReport:
    if kind == "quantum" and strategy == "grover" and n_items > QUANTUM_DENSE_LIMIT:
        return quantum_grover_report(n_items, k_max)
    if kind == "classical":
        model: Model = classical_model(n_items)
    elif kind == "quantum":
        model = quantum_model(n_items)
    elif kind == "synthetic":
        if order is None:
            raise ValueError("synthetic models need an explicit order")
        model = synthetic_model(n_items, order)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    schedule = make_schedule(model, strategy, seed)
    trajectories = run_search(model, schedule, k_max, tol=tol)
    return progress_measures(model, trajectories)


def scaling_sweep(
    kind: str,
    n_list: Sequence[int],
    strategy: str | None = None,
    *,
    order: int | None = None,
    seed: int = 0,
    k_max: int | None = None,
    threshold: float = 0.5,
    mode: str = "per-item",
    tol: float = DEFAULT_TOL,
) -> SweepResult:
    """Query counts against list size for one model family and strategy.

    Records, per N, both the first success crossing (the search-problem
    count) and the first success peak (the canonical iteration count for the
    quantum schedule), alongside the asymptotic floor. Runs that never cross
    within the step budget are recorded as saturated, not failed.
    """
    if strategy is None:
        strategy = default_strategy(kind)
    rows: list[SweepRow] = []
    for n_items in n_list:
        steps = default_k_max(n_items) if k_max is None else k_max
        report = _report_for(
            kind,
            n_items,
            order=order,
            strategy=strategy,
            seed=seed,
            k_max=steps,
            tol=tol,
        )
        k_star = report.first_crossing(threshold, mode)
        series = report.success_series(mode)
        rows.append(
            SweepRow(
                kind=kind,
                n_slits=n_items,
                order=report.order,
                strategy=report.strategy,
                seed=report.seed,
                k_star=k_star,
                k_peak=report.first_peak(mode),
                success_at_k_star=float(series[k_star]) if k_star is not None else None,
                max_success=float(series.max()),
                k_max=steps,
                floor=scaling_floor(n_items, report.order),
            )
        )
    return SweepResult(rows=rows, mode=mode, threshold=threshold)


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _header_lines(config: Mapping | None) -> list[str]:
    lines = [f"# version: hoisearch {__version__}"]
    if config is not None:
        lines.append("# config: " + json.dumps(dict(config), sort_keys=True))
    return lines


def report_rows(report: ProgressReport) -> list[dict]:
    mean = report.success_mean
    low = report.success_min
    rows = []
    for i, k in enumerate(report.k):
        rows.append(
            {
                "model_kind": report.descriptor["kind"],
                "N": report.n_slits,
                "h": report.order,
                "strategy": report.strategy,
                "seed": report.seed,
                "k": int(k),
                "D_k": float(report.divergence[i]),
                "upper_4hk2": float(report.upper_bound[i]),
                "E_k": float(report.gap_with_oracle[i]),
                "F_k": float(report.gap_without_oracle[i]),
                "lower_exact": float(report.pair_lower_bound[i]),
                "success_mean": float(mean[i]),
                "success_min": float(low[i]),
            }
        )
    return rows


def write_report_csv(
    reports: ProgressReport | Iterable[ProgressReport],
    fh: TextIO,
    *,
    config: Mapping | None = None,
) -> None:
    if isinstance(reports, ProgressReport):
        reports = [reports]
    for line in _header_lines(config):
        fh.write(line + "\n")
    fh.write(",".join(REPORT_CSV_COLUMNS) + "\n")
    for report in reports:
        for row in report_rows(report):
            fh.write(",".join(_fmt(row[c]) for c in REPORT_CSV_COLUMNS) + "\n")


def sweep_rows(result: SweepResult) -> list[dict]:
    rows = []
    for row in result.rows:
        rows.append(
            {
                "model_kind": row.kind,
                "N": row.n_slits,
                "h": row.order,
                "strategy": row.strategy,
                "seed": row.seed,
                "k_star": row.k_star,
                "k_peak": row.k_peak,
                "success_at_k_star": row.success_at_k_star,
                "max_success": row.max_success,
                "k_max": row.k_max,
                "floor_sqrt_cN_4h": row.floor,
                "saturated": row.saturated,
            }
        )
    return rows


def write_sweep_csv(
    result: SweepResult, fh: TextIO, *, config: Mapping | None = None
) -> None:
    for line in _header_lines(config):
        fh.write(line + "\n")
    for stat in ("crossing", "peak"):
        exp = result.exponent(stat)
        fh.write(f"# exponent_{stat}: {_fmt(exp) if exp is not None else 'n/a'}\n")
    fh.write(",".join(SWEEP_CSV_COLUMNS) + "\n")
    for row in sweep_rows(result):
        fh.write(",".join(_fmt(row[c]) for c in SWEEP_CSV_COLUMNS) + "\n")


def reports_to_json(
    reports: ProgressReport | Iterable[ProgressReport],
    *,
    config: Mapping | None = None,
) -> str:
    if isinstance(reports, ProgressReport):
        reports = [reports]
    payload = {
        "version": __version__,
        "config": dict(config) if config is not None else None,
        "reports": [
            {
                "model": r.descriptor,
                "strategy": r.strategy,
                "seed": r.seed,
                "rows": report_rows(r),
            }
            for r in reports
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def sweep_to_json(result: SweepResult, *, config: Mapping | None = None) -> str:
    payload = {
        "version": __version__,
        "config": dict(config) if config is not None else None,
        "mode": result.mode,
        "threshold": result.threshold,
        "exponent_crossing": result.exponent("crossing"),
        "exponent_peak": result.exponent("peak"),
        "rows": sweep_rows(result),
    }
    return json.dumps(payload, sort_keys=True, indent=2)
