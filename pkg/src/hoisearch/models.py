"""Concrete sector-decomposed state spaces and their operator algebra.

A model fixes a number of distinguishable states N, an interference order h,
and one real coordinate block per slit subset of size at most h. Coordinates
are chosen orthonormal for the self-dualising inner product, so the inner
product is the plain Euclidean dot product, reversible dynamics are exactly
the orthogonal matrices, and every coherence projector is an axis-aligned
block indicator. Three families are provided:

* classical (h = 1): probability vectors over N outcomes;
* quantum (h = 2): N x N density matrices embedded as real vectors, with the
  off-diagonal pairs scaled by sqrt(2) so the Euclidean norm equals the
  Hilbert-Schmidt norm (pure states then have norm exactly 1);
* synthetic (any h): an abstract carrier with one dimension per sector by
  default. No claim is made that a complete physical theory with h > 2
  exists; these are bound-testing carriers only.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .subsets import (
    SlitSet,
    coherence_expansion,
    decomposition_coefficient,
    enumerate_sectors,
)

__all__ = [
    "SectorSpace",
    "StateVector",
    "LinearMap",
    "Oracle",
    "OracleCheck",
    "Model",
    "build_sector_space",
    "classical_model",
    "quantum_model",
    "synthetic_model",
    "model_from_descriptor",
    "coherence_projector",
    "slit_projector",
    "sign_flip_oracle",
    "verify_oracle",
    "embed_density",
    "unembed_density",
    "lift_superoperator",
    "lift_unitary_conjugation",
    "random_reversible",
    "haar_orthogonal",
    "inner",
    "norm",
    "coherence_completeness_defect",
    "verify_coherence_completeness",
    "coherence_orthogonality_defects",
    "verify_coherence_orthogonality",
    "coherence_from_slit_projectors",
    "interference_order",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SectorSpace:
    """Coordinate layout of a sector-decomposed state space."""

    n_slits: int
    order: int
    sectors: tuple[SlitSet, ...]
    dims: Mapping[SlitSet, int]
    offsets: Mapping[SlitSet, int]
    dims_per_size: Mapping[int, int]
    total_dim: int

    def sector_slice(self, sector: SlitSet) -> slice:
        if sector not in self.offsets:
            raise ValueError(f"unknown sector {sector!r} for this space")
        start = self.offsets[sector]
        return slice(start, start + self.dims[sector])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SectorSpace):
            return NotImplemented
        return (
            self.n_slits == other.n_slits
            and self.order == other.order
            and dict(self.dims_per_size) == dict(other.dims_per_size)
        )


@dataclass
class StateVector:
    """A real coordinate vector partitioned across the sectors of a space."""

    space: SectorSpace
    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (self.space.total_dim,):
            raise ValueError(
                f"coordinate vector has shape {coords.shape}, "
                f"expected ({self.space.total_dim},)"
            )
        self.coords = coords

    def sector_component(self, sector: SlitSet) -> np.ndarray:
        """The coordinates living on one coherence block."""
        return self.coords[self.space.sector_slice(sector)]

    def copy(self) -> "StateVector":
        return StateVector(self.space, self.coords.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __sub__(self, other: "StateVector") -> "StateVector":
        _check_same_space(self.space, other.space)
        return StateVector(self.space, self.coords - other.coords)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_same_space(self.space, other.space)
        return StateVector(self.space, self.coords + other.coords)

    def __mul__(self, scalar: float) -> "StateVector":
        return StateVector(self.space, self.coords * float(scalar))

    __rmul__ = __mul__


class LinearMap:
    """A real linear map on a sector space.

    Backed either by a dense matrix or, for maps that are diagonal in the
    sector coordinates (projectors, sign-flip oracles, the identity), by the
    diagonal alone. The dense form is materialised on demand.
    """

    __slots__ = ("space", "_matrix", "_diag")

    def __init__(
        self,
        space: SectorSpace,
        matrix: np.ndarray | None = None,
        *,
        diag: np.ndarray | None = None,
    ) -> None:
        if (matrix is None) == (diag is None):
            raise ValueError("provide exactly one of matrix= or diag=")
        self.space = space
        m = space.total_dim
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=float)
            if matrix.shape != (m, m):
                raise ValueError(f"matrix has shape {matrix.shape}, expected ({m}, {m})")
            self._matrix: np.ndarray | None = matrix
            self._diag: np.ndarray | None = None
        else:
            diag = np.asarray(diag, dtype=float)
            if diag.shape != (m,):
                raise ValueError(f"diagonal has shape {diag.shape}, expected ({m},)")
            self._matrix = None
            self._diag = diag

    @classmethod
    def identity(cls, space: SectorSpace) -> "LinearMap":
        return cls(space, diag=np.ones(space.total_dim))

    @classmethod
    def zero(cls, space: SectorSpace) -> "LinearMap":
        return cls(space, diag=np.zeros(space.total_dim))

    @property
    def diagonal(self) -> np.ndarray | None:
        """The diagonal if the map is stored diagonally, else None."""
        return self._diag

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix
        return np.diag(self._diag)

    def apply(self, state: StateVector) -> StateVector:
        _check_same_space(self.space, state.space)
        if self._diag is not None:
            return StateVector(state.space, self._diag * state.coords)
        return StateVector(state.space, self._matrix @ state.coords)

    def apply_rows(self, rows: np.ndarray) -> np.ndarray:
        """Apply to a batch of states stored as rows of shape (n, M)."""
        if self._diag is not None:
            return rows * self._diag
        return rows @ self._matrix.T

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        _check_same_space(self.space, other.space)
        if self._diag is not None and other._diag is not None:
            return LinearMap(self.space, diag=self._diag * other._diag)
        return LinearMap(self.space, self.matrix @ other.matrix)

    def transpose(self) -> "LinearMap":
        if self._diag is not None:
            return self
        return LinearMap(self.space, self._matrix.T)

    def orthogonality_defect(self) -> float:
        """Max-abs deviation of T^t T from the identity (0 iff norm preserving)."""
        if self._diag is not None:
            return float(np.max(np.abs(self._diag**2 - 1.0)))
        m = self._matrix
        return float(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))))

    def __repr__(self) -> str:
        kind = "diag" if self._diag is not None else "dense"
        return f"LinearMap({kind}, dim={self.space.total_dim})"


@dataclass(frozen=True, eq=False)
class Model:
    """A concrete theory carrier: space, distinguished basis, uniform state."""

    kind: str
    space: SectorSpace
    basis_states: tuple[StateVector, ...]
    uniform_state: StateVector

    @property
    def n_slits(self) -> int:
        return self.space.n_slits

    @property
    def order(self) -> int:
        return self.space.order

    def descriptor(self) -> dict:
        """JSON-serialisable description sufficient to rebuild the model."""
        return {
            "kind": self.kind,
            "n_slits": self.space.n_slits,
            "order": self.space.order,
            "dims_per_size": {str(k): v for k, v in sorted(self.space.dims_per_size.items())},
        }

    def descriptor_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)


@dataclass(frozen=True)
class Oracle:
    """A reversible marked-item query: trivial off the marked slit's coherences."""

    marked: int
    map: LinearMap
    model: Model


@dataclass(frozen=True)
class OracleCheck:
    """Per-condition deviations of a candidate oracle map.

    ``fixed_sector_defect`` covers the sectors the map must leave untouched
    (marked slit absent, or singleton); ``commutation_defect`` covers
    commutation with every sector projector; ``orthogonality_defect`` is the
    norm-preservation proxy.
    """

    marked: int
    fixed_sector_defect: float
    commutation_defect: float
    orthogonality_defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.fixed_sector_defect < self.tol
            and self.commutation_defect < self.tol
            and self.orthogonality_defect < self.tol
        )


# ---------------------------------------------------------------------------
# Space and model construction
# ---------------------------------------------------------------------------

def build_sector_space(
    n_slits: int, order: int, dims_per_size: Mapping[int, int]
) -> SectorSpace:
    """Lay out one coordinate block per sector, in canonical order.

    ``dims_per_size`` assigns a block dimension to every sector size from 1
    to `order`; missing or non-positive entries are rejected.
    """
    sectors = tuple(enumerate_sectors(n_slits, order))
    dims: dict[SlitSet, int] = {}
    per_size: dict[int, int] = {}
    for size in range(1, order + 1):
        if size not in dims_per_size:
            raise ValueError(f"dims_per_size is missing an entry for sector size {size}")
        dim = int(dims_per_size[size])
        if dim < 1:
            raise ValueError(f"sector dimension for size {size} must be >= 1, got {dim}")
        per_size[size] = dim
    offsets: dict[SlitSet, int] = {}
    total = 0
    for sector in sectors:
        dim = per_size[len(sector)]
        dims[sector] = dim
        offsets[sector] = total
        total += dim
    return SectorSpace(
        n_slits=n_slits,
        order=order,
        sectors=sectors,
        dims=dims,
        offsets=offsets,
        dims_per_size=per_size,
        total_dim=total,
    )


def classical_model(n_slits: int) -> Model:
    """Order-1 theory: states are probability vectors over the slits.

    The uniform state is the uniform distribution, a mixed state of norm
    ``1/sqrt(N)``; search experiments on this model therefore start from a
    mixed state.
    """
    space = build_sector_space(n_slits, 1, {1: 1})
    basis = tuple(
        StateVector(space, _unit_vector(space.total_dim, i)) for i in range(n_slits)
    )
    uniform = StateVector(space, np.full(space.total_dim, 1.0 / n_slits))
    return Model("classical", space, basis, uniform)


def quantum_model(n_slits: int) -> Model:
    """Order-2 theory: N x N density matrices in real sector coordinates.

    Each singleton block holds a diagonal entry; each pair block holds
    ``(sqrt(2) Re rho_ij, sqrt(2) Im rho_ij)``, making the embedding a
    Hilbert-Schmidt isometry. Basis states embed the projectors onto the
    computational basis; the uniform state embeds the maximal-superposition
    pure state (all matrix entries 1/N).
    """
    if n_slits < 2:
        raise ValueError(f"the quantum model needs at least 2 slits, got {n_slits}")
    space = build_sector_space(n_slits, 2, {1: 1, 2: 2})
    basis = []
    for i in range(n_slits):
        rho = np.zeros((n_slits, n_slits), dtype=complex)
        rho[i, i] = 1.0
        basis.append(_embed_density_into(space, rho))
    uniform = _embed_density_into(
        space, np.full((n_slits, n_slits), 1.0 / n_slits, dtype=complex)
    )
    return Model("quantum", space, tuple(basis), uniform)


def synthetic_model(
    n_slits: int, order: int, dims_per_size: Mapping[int, int] | None = None
) -> Model:
    """Abstract order-h carrier, one dimension per sector unless configured.

    Basis state i is the unit vector on the first coordinate of singleton
    block i. The uniform state puts 1/N on each of those coordinates and
    spreads the remaining weight evenly over all higher-sector coordinates so
    that its norm is exactly 1 and its overlap with every basis state is 1/N,
    mimicking the quantum uniform state. With no higher sectors (order 1) the
    leftover weight has nowhere to go and the uniform state is the classical
    mixed one of norm ``1/sqrt(N)``.
    """
    if dims_per_size is None:
        dims_per_size = {size: 1 for size in range(1, order + 1)}
    space = build_sector_space(n_slits, order, dims_per_size)
    basis = []
    singleton_index = np.zeros(space.total_dim, dtype=bool)
    for i in range(n_slits):
        sector = SlitSet((i,), n_slits)
        off = space.offsets[sector]
        basis.append(StateVector(space, _unit_vector(space.total_dim, off)))
        singleton_index[space.sector_slice(sector)] = True

    coords = np.zeros(space.total_dim)
    for i in range(n_slits):
        coords[space.offsets[SlitSet((i,), n_slits)]] = 1.0 / n_slits
    higher = ~singleton_index
    n_higher = int(higher.sum())
    if n_higher > 0:
        residual = 1.0 - n_slits * (1.0 / n_slits) ** 2
        coords[higher] = np.sqrt(residual / n_higher)
    uniform = StateVector(space, coords)
    return Model("synthetic", space, tuple(basis), uniform)


def model_from_descriptor(descriptor: Mapping | str) -> Model:
    """Rebuild a model from `Model.descriptor` output (dict or JSON text)."""
    if isinstance(descriptor, str):
        descriptor = json.loads(descriptor)
    kind = descriptor["kind"]
    n = int(descriptor["n_slits"])
    if kind == "classical":
        return classical_model(n)
    if kind == "quantum":
        return quantum_model(n)
    if kind == "synthetic":
        order = int(descriptor["order"])
        dims = {int(k): int(v) for k, v in descriptor["dims_per_size"].items()}
        return synthetic_model(n, order, dims)
    raise ValueError(f"unknown model kind {kind!r}")


# ---------------------------------------------------------------------------
# Projectors and oracles
# ---------------------------------------------------------------------------

def coherence_projector(model: Model, sector: SlitSet) -> LinearMap:
    """Orthogonal projector onto one coherence block (zero elsewhere)."""
    space = model.space
    diag = np.zeros(space.total_dim)
    diag[space.sector_slice(sector)] = 1.0
    return LinearMap(space, diag=diag)


def slit_projector(model: Model, open_slits: SlitSet) -> LinearMap:
    """Projector implementing "block every slit outside this subset".

    Sum of the coherence blocks of all nonempty subsets of the open slits
    with size up to the model order. The empty subset gives the zero map.
    """
    space = model.space
    if open_slits.universe != space.n_slits:
        raise ValueError(
            f"subset universe {open_slits.universe} does not match the "
            f"model's {space.n_slits} slits"
        )
    diag = np.zeros(space.total_dim)
    for sub in open_slits.subsets(max_size=space.order):
        diag[space.sector_slice(sub)] = 1.0
    return LinearMap(space, diag=diag)


def sign_flip_oracle(model: Model, marked: int) -> Oracle:
    """The canonical search oracle: flip the sign of every coherence block
    that involves the marked slit together with at least one other slit.

    Diagonal in sector coordinates, hence orthogonal and an involution. In the
    quantum model this reproduces conjugation by the phase unitary that flags
    the marked basis state; in the classical model no block qualifies and the
    oracle is the identity.
    """
    space = model.space
    if not 0 <= marked < space.n_slits:
        raise ValueError(f"marked item {marked} out of range 0..{space.n_slits - 1}")
    diag = np.ones(space.total_dim)
    for sector in space.sectors:
        if len(sector) > 1 and marked in sector:
            diag[space.sector_slice(sector)] = -1.0
    return Oracle(marked, LinearMap(space, diag=diag), model)


def verify_oracle(
    model: Model, candidate: LinearMap, marked: int, *, tol: float = DEFAULT_TOL
) -> OracleCheck:
    """Check a map against the search-oracle conditions for one marked item.

    Conditions are checked on the coherence blocks, which span every slit
    projector: (a) blocks not involving the marked slit, and singleton
    blocks, must be fixed; (b) the map must commute with every block
    projector; (c) the map must preserve the norm (orthogonality).
    """
    _check_same_space(model.space, candidate.space)
    space = model.space
    mat = candidate.matrix
    eye = np.eye(space.total_dim)
    fix_defect = 0.0
    commute_defect = 0.0
    for sector in space.sectors:
        sl = space.sector_slice(sector)
        # the commutator with a block projector is exactly the two cross-block
        # strips of the matrix: rows in the block against columns outside, and
        # vice versa
        col_strip = mat[:, sl].copy()
        col_strip[sl, :] = 0.0
        row_strip = mat[sl, :].copy()
        row_strip[:, sl] = 0.0
        commute_defect = max(
            commute_defect,
            float(np.max(np.abs(col_strip))) if col_strip.size else 0.0,
            float(np.max(np.abs(row_strip))) if row_strip.size else 0.0,
        )
        if marked not in sector or len(sector) == 1:
            fix_defect = max(
                fix_defect, float(np.max(np.abs(mat[:, sl] - eye[:, sl])))
            )
    return OracleCheck(
        marked=marked,
        fixed_sector_defect=fix_defect,
        commutation_defect=commute_defect,
        orthogonality_defect=candidate.orthogonality_defect(),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Quantum embedding
# ---------------------------------------------------------------------------

def _embed_density_into(space: SectorSpace, rho: np.ndarray) -> StateVector:
    n = space.n_slits
    coords = np.zeros(space.total_dim)
    for i in range(n):
        coords[space.offsets[SlitSet((i,), n)]] = rho[i, i].real
    sqrt2 = np.sqrt(2.0)
    for i, j in itertools.combinations(range(n), 2):
        off = space.offsets[SlitSet((i, j), n)]
        coords[off] = sqrt2 * rho[i, j].real
        coords[off + 1] = sqrt2 * rho[i, j].imag
    return StateVector(space, coords)


def embed_density(model: Model, rho: np.ndarray) -> StateVector:
    """Embed a Hermitian N x N matrix into the quantum model's coordinates."""
    _require_quantum(model)
    rho = np.asarray(rho, dtype=complex)
    n = model.space.n_slits
    if rho.shape != (n, n):
        raise ValueError(f"matrix has shape {rho.shape}, expected ({n}, {n})")
    return _embed_density_into(model.space, rho)


def unembed_density(model: Model, state: StateVector) -> np.ndarray:
    """Invert `embed_density`; always returns a Hermitian matrix."""
    _require_quantum(model)
    _check_same_space(model.space, state.space)
    space = model.space
    n = space.n_slits
    rho = np.zeros((n, n), dtype=complex)
    for i in range(n):
        rho[i, i] = state.coords[space.offsets[SlitSet((i,), n)]]
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i, j in itertools.combinations(range(n), 2):
        off = space.offsets[SlitSet((i, j), n)]
        val = (state.coords[off] + 1j * state.coords[off + 1]) * inv_sqrt2
        rho[i, j] = val
        rho[j, i] = val.conjugate()
    return rho


def lift_superoperator(
    model: Model, fn: Callable[[np.ndarray], np.ndarray]
) -> LinearMap:
    """Lift a Hermitian-matrix map to the quantum model's real coordinates.

    ``fn`` must send Hermitian matrices to Hermitian matrices (projection
    sandwiches and unitary conjugations both qualify); the lift is assembled
    column by column from the images of the coordinate basis.
    """
    _require_quantum(model)
    space = model.space
    m = space.total_dim
    out = np.zeros((m, m))
    basis_state = StateVector(space, np.zeros(m))
    for k in range(m):
        basis_state.coords[:] = 0.0
        basis_state.coords[k] = 1.0
        image = fn(unembed_density(model, basis_state))
        out[:, k] = _embed_density_into(space, image).coords
    return LinearMap(space, out)


def lift_unitary_conjugation(model: Model, unitary: np.ndarray) -> LinearMap:
    """The real sector-coordinate form of ``rho -> U rho U^dagger``."""
    _require_quantum(model)
    u = np.asarray(unitary, dtype=complex)
    n = model.space.n_slits
    if u.shape != (n, n):
        raise ValueError(f"unitary has shape {u.shape}, expected ({n}, {n})")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if defect > 1e-9:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    u_dag = u.conj().T
    return lift_superoperator(model, lambda rho: u @ rho @ u_dag)


def _require_quantum(model: Model) -> None:
    if model.kind != "quantum":
        raise ValueError(f"operation requires the quantum model, got {model.kind!r}")


# ---------------------------------------------------------------------------
# Inner product, randomness, verification
# ---------------------------------------------------------------------------

def inner(left: StateVector, right: StateVector) -> float:
    """Self-dualising inner product; Euclidean in these coordinates."""
    _check_same_space(left.space, right.space)
    return float(np.dot(left.coords, right.coords))


def norm(state: StateVector) -> float:
    return state.norm()


def haar_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform orthogonal matrix (QR of a Gaussian, sign-fixed)."""
    a = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def random_reversible(model: Model, seed: int) -> LinearMap:
    """A seeded uniformly-random orthogonal map on the model's space."""
    rng = np.random.default_rng(seed)
    return LinearMap(model.space, haar_orthogonal(model.space.total_dim, rng))


def _projector_family(
    model: Model, projectors: Sequence[LinearMap] | None
) -> list[LinearMap]:
    if projectors is None:
        return [coherence_projector(model, s) for s in model.space.sectors]
    family = list(projectors)
    if len(family) != len(model.space.sectors):
        raise ValueError(
            f"expected {len(model.space.sectors)} projectors, got {len(family)}"
        )
    return family


def coherence_completeness_defect(
    model: Model, projectors: Sequence[LinearMap] | None = None
) -> float:
    """Max-abs deviation of the summed coherence blocks from the identity."""
    family = _projector_family(model, projectors)
    m = model.space.total_dim
    if all(p.diagonal is not None for p in family):
        total = np.zeros(m)
        for p in family:
            total += p.diagonal
        return float(np.max(np.abs(total - 1.0)))
    total = np.zeros((m, m))
    for p in family:
        total += p.matrix
    return float(np.max(np.abs(total - np.eye(m))))


def verify_coherence_completeness(
    model: Model,
    *,
    tol: float = DEFAULT_TOL,
    projectors: Sequence[LinearMap] | None = None,
) -> bool:
    return coherence_completeness_defect(model, projectors) < tol


def coherence_orthogonality_defects(
    model: Model,
    projectors: Sequence[LinearMap] | None = None,
    *,
    n_vectors: int = 100,
    seed: int = 20240,
) -> tuple[float, float]:
    """(pairwise product defect, Pythagoras defect) of the coherence blocks.

    The first number is the largest entry of ``w_i w_j - delta_ij w_i`` over
    all block pairs; the second is the largest deviation of the blockwise
    norm-squared sum from the total, over seeded random vectors.
    """
    family = _projector_family(model, projectors)
    m = model.space.total_dim
    if all(p.diagonal is not None for p in family):
        diags = np.stack([p.diagonal for p in family])  # (S, M)
        prod = diags[:, None, :] * diags[None, :, :]
        prod[np.arange(len(family)), np.arange(len(family)), :] -= diags
        pair_defect = float(np.max(np.abs(prod)))
        rng = np.random.default_rng(seed)
        vecs = rng.standard_normal((n_vectors, m))
        block_sq = (vecs**2) @ (diags**2).T  # (n_vectors, S)
        pyth_defect = float(
            np.max(np.abs(block_sq.sum(axis=1) - (vecs**2).sum(axis=1)))
        )
        return pair_defect, pyth_defect

    mats = [p.matrix for p in family]
    pair_defect = 0.0
    for i, wi in enumerate(mats):
        for j, wj in enumerate(mats):
            prod = wi @ wj
            if i == j:
                prod = prod - wi
            pair_defect = max(pair_defect, float(np.max(np.abs(prod))))
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((n_vectors, m))
    total = np.zeros(n_vectors)
    for w in mats:
        total += ((vecs @ w.T) ** 2).sum(axis=1)
    pyth_defect = float(np.max(np.abs(total - (vecs**2).sum(axis=1))))
    return pair_defect, pyth_defect


def verify_coherence_orthogonality(
    model: Model,
    *,
    tol: float = DEFAULT_TOL,
    projectors: Sequence[LinearMap] | None = None,
    n_vectors: int = 100,
    seed: int = 20240,
) -> bool:
    pair, pyth = coherence_orthogonality_defects(
        model, projectors, n_vectors=n_vectors, seed=seed
    )
    return pair < tol and pyth < tol


def interference_order(model: Model, *, tol: float = DEFAULT_TOL) -> int:
    """Smallest order at which the identity decomposition over the model's
    slit projectors closes; equals the construction order for healthy models.
    """
    space = model.space
    n = space.n_slits
    for candidate in range(1, n + 1):
        diag = np.zeros(space.total_dim)
        for subset in enumerate_sectors(n, candidate):
            coeff = decomposition_coefficient(candidate, len(subset), n)
            if coeff == 0:
                continue
            diag += coeff * slit_projector(model, subset).diagonal
        if float(np.max(np.abs(diag - 1.0))) < tol:
            return candidate
    raise ValueError("the identity decomposition never closes; corrupt model?")


def coherence_from_slit_projectors(model: Model, sector: SlitSet) -> LinearMap:
    """Instantiate a coherence block from its formal slit-projector expansion.

    This is the inclusion-exclusion route; it must agree with
    `coherence_projector` on every sector and is tested as an invariant
    rather than assumed.
    """
    expansion = coherence_expansion(sector)
    diag = np.zeros(model.space.total_dim)
    for subset, coeff in expansion.items():
        diag += coeff * slit_projector(model, subset).diagonal
    return LinearMap(model.space, diag=diag)


def _unit_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim)
    v[index] = 1.0
    return v


def _check_same_space(a: SectorSpace, b: SectorSpace) -> None:
    if a is b:
        return
    if a != b:
        raise ValueError("objects live on different sector spaces")
