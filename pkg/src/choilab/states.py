"""Multipartite states with party bookkeeping.

A ``PartySystem`` is an ordered list of party labels with local dimensions;
computational-basis indices map big-endian (first party most significant).
``MultipartiteState`` wraps a validated density operator, ``PureState`` a
unit vector.  Bipartite cuts are unordered two-block partitions of the
labels; by convention operations that transpose or decompose act on
``side_one``.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotHermitian,
    NothingLeft,
    NotPSD,
    UnknownParty,
)

TRACE_TOL = 1e-10
PURE_NORM_TOL = 1e-12
SCHMIDT_RANK_TOL = 1e-9


@dataclass(frozen=True)
class PartySystem:
    """Ordered party labels with matching local dimensions."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.labels) != len(set(self.labels)):
            raise UnknownParty(f"duplicate party labels in {self.labels}")
        if len(self.labels) != len(self.dims):
            raise DimensionMismatch("labels and dims must have equal length")
        if not self.labels:
            raise DimensionMismatch("a system needs at least one party")
        if any(d < 2 for d in self.dims):
            raise DimensionMismatch(f"local dimensions must be >= 2, got {self.dims}")

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def num_parties(self) -> int:
        return len(self.labels)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownParty(f"no party {label!r} in {self.labels}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.axis(label)]

    def require(self, labels: Iterable[str]) -> frozenset[str]:
        got = frozenset(labels)
        unknown = got - set(self.labels)
        if unknown:
            raise UnknownParty(f"unknown parties {sorted(unknown)}; have {self.labels}")
        return got

    def subsystem(self, keep: Iterable[str]) -> "PartySystem":
        keep = self.require(keep)
        pairs = [(l, d) for l, d in zip(self.labels, self.dims) if l in keep]
        return PartySystem(tuple(l for l, _ in pairs), tuple(d for _, d in pairs))

    def is_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)


@dataclass(frozen=True)
class BipartiteCut:
    """Unordered two-block partition of a party set."""

    side_one: frozenset[str]
    side_two: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "side_one", frozenset(self.side_one))
        object.__setattr__(self, "side_two", frozenset(self.side_two))
        if not self.side_one or not self.side_two:
            raise UnknownParty("both sides of a cut must be nonempty")
        if self.side_one & self.side_two:
            raise UnknownParty(f"cut sides overlap: {sorted(self.side_one & self.side_two)}")

    @classmethod
    def from_side(cls, system: PartySystem, side: Iterable[str]) -> "BipartiteCut":
        one = system.require(side)
        two = frozenset(system.labels) - one
        return cls(one, two)

    def validate(self, system: PartySystem) -> None:
        system.require(self.side_one)
        system.require(self.side_two)
        if self.side_one | self.side_two != set(system.labels):
            raise UnknownParty(
                f"cut {sorted(self.side_one)} | {sorted(self.side_two)} "
                f"does not cover {system.labels}"
            )

    def describe(self, system: PartySystem) -> str:
        one = [l for l in system.labels if l in self.side_one]
        two = [l for l in system.labels if l in self.side_two]
        return f"{','.join(one)} | {','.join(two)}"


@dataclass(eq=False)
class MultipartiteState:
    """Density operator with its party system; validated at construction."""

    system: PartySystem
    matrix: np.ndarray
    psd_threshold: InitVar[float | None] = None

    def __post_init__(self, psd_threshold):
        self.matrix = linalg.as_matrix(self.matrix)
        d = self.system.total_dim
        if self.matrix.shape != (d, d):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} != system dimension {d}"
            )
        defect = linalg.hermiticity_defect(self.matrix)
        if defect > linalg.HERMITICITY_TOL:
            raise NotHermitian(f"hermiticity defect {defect:.3e}")
        tr = linalg.trace(self.matrix)
        if abs(tr - 1.0) > TRACE_TOL:
            raise DimensionMismatch(f"trace {tr} is not 1 within {TRACE_TOL}")
        threshold = linalg.PSD_THRESHOLD if psd_threshold is None else psd_threshold
        low = linalg.min_eigenvalue(self.matrix)
        if low < threshold:
            raise NotPSD(f"min eigenvalue {low:.3e} below threshold {threshold:.1e}")


@dataclass(eq=False)
class PureState:
    """Unit vector with its party system."""

    system: PartySystem
    vector: np.ndarray

    def __post_init__(self):
        self.vector = linalg.as_vector(self.vector)
        if self.vector.shape != (self.system.total_dim,):
            raise DimensionMismatch(
                f"vector length {self.vector.shape[0]} != system dimension "
                f"{self.system.total_dim}"
            )
        norm = float(np.linalg.norm(self.vector))
        if abs(norm - 1.0) > PURE_NORM_TOL:
            raise DimensionMismatch(f"vector norm {norm} is not 1 within {PURE_NORM_TOL}")

    def density(self) -> MultipartiteState:
        return MultipartiteState(self.system, np.outer(self.vector, self.vector.conj()))


# ---------------------------------------------------------------------------
# raw index gymnastics (shared with the channels module)
# ---------------------------------------------------------------------------


def permute_matrix_parties(
    matrix: np.ndarray, dims: Sequence[int], perm: Sequence[int]
) -> np.ndarray:
    """Reorder the tensor factors of a (D x D) matrix; perm[i] = old axis of new slot i."""
    n = len(dims)
    d = math.prod(dims)
    t = matrix.reshape(tuple(dims) * 2)
    axes = tuple(perm) + tuple(p + n for p in perm)
    return np.ascontiguousarray(t.transpose(axes)).reshape(d, d)


def permute_vector_parties(
    vector: np.ndarray, dims: Sequence[int], perm: Sequence[int]
) -> np.ndarray:
    return np.ascontiguousarray(
        vector.reshape(tuple(dims)).transpose(tuple(perm))
    ).reshape(-1)


def transpose_parties(matrix: np.ndarray, dims: Sequence[int], axes: Iterable[int]) -> np.ndarray:
    """Transpose the row/column indices of the given tensor factors only."""
    n = len(dims)
    d = math.prod(dims)
    t = matrix.reshape(tuple(dims) * 2)
    order = list(range(2 * n))
    for ax in axes:
        order[ax], order[ax + n] = order[ax + n], order[ax]
    return np.ascontiguousarray(t.transpose(order)).reshape(d, d)


def trace_out_axes(matrix: np.ndarray, dims: Sequence[int], axes: Iterable[int]) -> np.ndarray:
    """Partial trace over the given tensor factors of a (D x D) matrix."""
    dims = list(dims)
    out = matrix
    for ax in sorted(axes, reverse=True):
        pre = math.prod(dims[:ax])
        d = dims[ax]
        post = math.prod(dims[ax + 1 :])
        out = out.reshape(pre, d, post, pre, d, post).trace(axis1=1, axis2=4)
        out = out.reshape(pre * post, pre * post)
        del dims[ax]
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def basis_index(system: PartySystem, bits: str) -> int:
    """Big-endian computational-basis index of |bits> (first party most significant)."""
    if len(bits) != system.num_parties:
        raise IndexOutOfRange(
            f"index string {bits!r} has length {len(bits)}, expected {system.num_parties}"
        )
    idx = 0
    for ch, d in zip(bits, system.dims):
        k = int(ch)
        if k >= d:
            raise IndexOutOfRange(f"index {k} out of range for local dimension {d}")
        idx = idx * d + k
    return idx


def basis_projector(system: PartySystem, bits: str) -> MultipartiteState:
    """Rank-1 projector onto the computational basis ket |bits>."""
    idx = basis_index(system, bits)
    m = np.zeros((system.total_dim, system.total_dim), dtype=np.complex128)
    m[idx, idx] = 1.0
    return MultipartiteState(system, m)


def ghz_basis_state(system: PartySystem, j: str, sign: int | str) -> PureState:
    """GHZ-basis element (|j,0> +/- |jbar,1>)/sqrt(2) on an all-qubit system.

    The last party carries the reference bit; j indexes the first N-1 parties
    and jbar is its bitwise complement.  Over all (j, sign) the family is an
    orthonormal basis of the N-qubit space.
    """
    if not system.is_qubits():
        raise DimensionMismatch("GHZ basis is defined for qubit systems only")
    n = system.num_parties
    if len(j) != n - 1 or any(c not in "01" for c in j):
        raise IndexOutOfRange(f"j must be a {n - 1}-bit string, got {j!r}")
    s = {"+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
    if s is None:
        raise IndexOutOfRange(f"sign must be +/-, got {sign!r}")
    jbar = "".join("1" if c == "0" else "0" for c in j)
    v = np.zeros(system.total_dim, dtype=np.complex128)
    v[basis_index(system, j + "0")] = 1 / math.sqrt(2)
    v[basis_index(system, jbar + "1")] = s / math.sqrt(2)
    return PureState(system, v)


def max_entangled(d: int, labels: tuple[str, str] = ("A", "B")) -> PureState:
    """Maximally entangled pair (1/sqrt(d)) sum_k |k>|k> on two d-level parties."""
    if d < 2:
        raise DimensionMismatch("maximally entangled state needs dimension >= 2")
    v = np.zeros(d * d, dtype=np.complex128)
    for k in range(d):
        v[k * d + k] = 1 / math.sqrt(d)
    return PureState(PartySystem(labels, (d, d)), v)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def partial_transpose(state: MultipartiteState, cut: BipartiteCut) -> np.ndarray:
    """Transpose the indices of the side_one parties; returns a raw matrix.

    The result is Hermitian with unit trace but need not be positive; its
    spectrum is independent of which side of the cut is transposed.
    """
    cut.validate(state.system)
    axes = [state.system.axis(l) for l in cut.side_one]
    return transpose_parties(state.matrix, state.system.dims, axes)


def partial_trace(state: MultipartiteState, traced: Iterable[str]) -> MultipartiteState:
    """Trace out the given parties, keeping the remaining ones in order."""
    traced = state.system.require(traced)
    if traced == set(state.system.labels):
        raise NothingLeft("cannot trace out every party")
    axes = [state.system.axis(l) for l in traced]
    reduced = trace_out_axes(state.matrix, state.system.dims, axes)
    keep = [l for l in state.system.labels if l not in traced]
    return MultipartiteState(state.system.subsystem(keep), reduced)


def permute_parties(state: MultipartiteState, order: Sequence[str]) -> MultipartiteState:
    """Return the same state with parties listed in the requested order."""
    from .errors import BadPermutation

    if sorted(order) != sorted(state.system.labels):
        raise BadPermutation(f"{tuple(order)} is not a permutation of {state.system.labels}")
    perm = [state.system.axis(l) for l in order]
    m = permute_matrix_parties(state.matrix, state.system.dims, perm)
    dims = tuple(state.system.dims[p] for p in perm)
    return MultipartiteState(PartySystem(tuple(order), dims), m)


def fidelity(phi: PureState, rho: MultipartiteState) -> float:
    """Quadratic form <phi|rho|phi>."""
    if phi.system.total_dim != rho.system.total_dim:
        raise DimensionMismatch(
            f"pure state dimension {phi.system.total_dim} != state dimension "
            f"{rho.system.total_dim}"
        )
    return float(np.real(phi.vector.conj() @ rho.matrix @ phi.vector))


class SchmidtDecomposition(NamedTuple):
    coefficients: np.ndarray  # descending, nonnegative
    left_vectors: np.ndarray  # columns, on side_one (in system order)
    right_vectors: np.ndarray  # rows, on side_two (in system order)
    left_labels: tuple[str, ...]
    right_labels: tuple[str, ...]

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > SCHMIDT_RANK_TOL))


def schmidt_decomposition(phi: PureState, cut: BipartiteCut) -> SchmidtDecomposition:
    """Bi-orthogonal expansion of phi across the cut (side_one on the left).

    phi = sum_i c_i  left[:, i] (x) right[i, :]  after grouping the parties of
    each side in system order; coefficients come back descending.
    """
    cut.validate(phi.system)
    left = [l for l in phi.system.labels if l in cut.side_one]
    right = [l for l in phi.system.labels if l in cut.side_two]
    perm = [phi.system.axis(l) for l in left + right]
    v = permute_vector_parties(phi.vector, phi.system.dims, perm)
    dl = math.prod(phi.system.dim_of(l) for l in left)
    dr = math.prod(phi.system.dim_of(l) for l in right)
    u, s, vh = np.linalg.svd(v.reshape(dl, dr), full_matrices=False)
    return SchmidtDecomposition(
        coefficients=s,
        left_vectors=u,
        right_vectors=vh,
        left_labels=tuple(left),
        right_labels=tuple(right),
    )
