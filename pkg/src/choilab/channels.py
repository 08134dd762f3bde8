"""Kraus-form CPTP maps and the channel/state isomorphism.

A channel E(rho) = sum_k A_k rho A_k^dagger is stored as its Kraus list
with declared input/output party systems.  Its Choi state is obtained by
sending the second half of a maximally entangled pair through the channel,

    E_state = (1 (x) E) |Phi><Phi|,   |Phi> = (1/sqrt(d)) sum_k |k>|k>,

normalized to unit trace; the reference half may be declared with any
party structure whose total dimension matches the input.  The inverse
direction (Choi -> Kraus) comes from the spectral decomposition of the
Choi matrix.  Channel equality is always action equality on a spanning
operator basis, never Kraus-list equality (gauge freedom).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    BadWeights,
    DimensionMismatch,
    NothingLeft,
    NotPSD,
    NotTracePreserving,
    SystemMismatch,
)
from .states import (
    MultipartiteState,
    PartySystem,
    permute_parties,
    trace_out_axes,
)

COMPLETENESS_TOL = 1e-10
CHOI_RANK_CUTOFF = 1e-11
REF_MARGINAL_TOL = 1e-8


@dataclass(eq=False)
class KrausChannel:
    """A linear map in Kraus form; completeness is checked by verify_cptp."""

    name: str
    input_system: PartySystem
    output_system: PartySystem
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(a) for a in self.kraus)
        if not ops:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        shape = (self.output_system.total_dim, self.input_system.total_dim)
        for a in ops:
            if a.shape != shape:
                raise DimensionMismatch(f"Kraus operator shape {a.shape}, expected {shape}")
        self.kraus = ops

    @property
    def dim_in(self) -> int:
        return self.input_system.total_dim

    @property
    def dim_out(self) -> int:
        return self.output_system.total_dim


@dataclass(frozen=True)
class CptpReport:
    """Outcome of verify_cptp."""

    trace_preserving_defect: float
    choi_min_eigenvalue: float
    passed: bool
    reasons: tuple[str, ...]


def completeness_defect(ch: KrausChannel) -> float:
    """Frobenius norm of sum_k A_k^dagger A_k - identity."""
    acc = sum(a.conj().T @ a for a in ch.kraus)
    return float(np.linalg.norm(acc - linalg.identity(ch.dim_in)))


def _choi_matrix(ch: KrausChannel) -> np.ndarray:
    """Unit-trace Choi matrix with (reference, output) index order."""
    d = ch.dim_in
    e = np.zeros((d * ch.dim_out,) * 2, dtype=np.complex128)
    for a in ch.kraus:
        v = a.T.reshape(-1)  # v[(i, o)] = A[o, i]
        e += np.outer(v, v.conj())
    return e / d


def verify_cptp(
    ch: KrausChannel,
    defect_tol: float = COMPLETENESS_TOL,
    psd_threshold: float = linalg.PSD_THRESHOLD,
) -> CptpReport:
    """Report trace preservation and Choi positivity.

    Complete positivity is automatic for genuine Kraus lists; the Choi check
    guards data loaded through the codec.
    """
    defect = completeness_defect(ch)
    choi_min = float(np.linalg.eigvalsh(_choi_matrix(ch))[0])
    reasons = []
    if defect > defect_tol:
        reasons.append(f"completeness defect {defect:.3e} exceeds {defect_tol:.1e}")
    if choi_min < psd_threshold:
        reasons.append(f"Choi min eigenvalue {choi_min:.3e} below {psd_threshold:.1e}")
    return CptpReport(
        trace_preserving_defect=defect,
        choi_min_eigenvalue=choi_min,
        passed=not reasons,
        reasons=tuple(reasons),
    )


def apply_matrix(ch: KrausChannel, mat: np.ndarray) -> np.ndarray:
    """Action of the channel on a raw input-space matrix (no state validation)."""
    mat = linalg.as_matrix(mat)
    if mat.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"matrix shape {mat.shape}, channel input dim {ch.dim_in}")
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=np.complex128)
    for a in ch.kraus:
        out += a @ mat @ a.conj().T
    return out


def apply(ch: KrausChannel, rho: MultipartiteState) -> MultipartiteState:
    """Send a density operator through the channel."""
    if rho.system.total_dim != ch.dim_in:
        raise DimensionMismatch(
            f"state dimension {rho.system.total_dim} != channel input dim {ch.dim_in}"
        )
    return MultipartiteState(ch.output_system, apply_matrix(ch, rho.matrix))


def _default_reference(system: PartySystem) -> PartySystem:
    return PartySystem(tuple(f"{l}_ref" for l in system.labels), system.dims)


def choi(
    ch: KrausChannel,
    reference: PartySystem | None = None,
    order: Sequence[str] | None = None,
) -> MultipartiteState:
    """Choi state of the channel on (reference..., output...) parties.

    ``reference`` declares the party structure of the kept half of the
    maximally entangled input pair; its total dimension must equal the
    channel input dimension (default: one reference party per input party).
    ``order`` optionally permutes the parties of the result, e.g. to
    interleave reference and output parties.
    """
    reference = _default_reference(ch.input_system) if reference is None else reference
    if reference.total_dim != ch.dim_in:
        raise DimensionMismatch(
            f"reference dimension {reference.total_dim} != input dim {ch.dim_in}"
        )
    clash = set(reference.labels) & set(ch.output_system.labels)
    if clash:
        raise DimensionMismatch(f"reference labels collide with output labels: {sorted(clash)}")
    system = PartySystem(
        reference.labels + ch.output_system.labels, reference.dims + ch.output_system.dims
    )
    state = MultipartiteState(system, _choi_matrix(ch))
    if order is not None:
        state = permute_parties(state, tuple(order))
    return state


def choi_apply(choi_state: MultipartiteState, reference: Sequence[str], mat: np.ndarray) -> np.ndarray:
    """Channel action reconstructed from a Choi state: d * Tr_ref[(mat^T (x) 1) E].

    The Choi state must have its reference parties listed first, in the given
    order; used as the independent contraction oracle for `apply`.
    """
    sys = choi_state.system
    ref = list(reference)
    if list(sys.labels[: len(ref)]) != ref:
        raise DimensionMismatch("choi_apply expects reference parties first")
    d_ref = math.prod(sys.dim_of(l) for l in ref)
    d_out = sys.total_dim // d_ref
    big = np.kron(mat.T, linalg.identity(d_out)) @ choi_state.matrix
    reduced = trace_out_axes(big, (d_ref, d_out), [0])
    return d_ref * reduced


def mix(
    channels: Sequence[KrausChannel],
    weights: Sequence[float] | None = None,
    name: str | None = None,
) -> KrausChannel:
    """Classical mixture: concatenated Kraus lists scaled by sqrt(weight).

    The Choi state of the mixture is the weighted sum of the input Choi
    states; all channels must share input and output systems.
    """
    if not channels:
        raise BadWeights("mix needs at least one channel")
    first = channels[0]
    for ch in channels[1:]:
        if (
            ch.input_system != first.input_system
            or ch.output_system != first.output_system
        ):
            raise SystemMismatch(f"channel {ch.name!r} has a different input/output system")
    if weights is None:
        weights = [1.0 / len(channels)] * len(channels)
    if len(weights) != len(channels):
        raise BadWeights(f"{len(weights)} weights for {len(channels)} channels")
    w = [float(x) for x in weights]
    if any(x < 0 for x in w):
        raise BadWeights(f"negative weight in {w}")
    if abs(sum(w) - 1.0) > 1e-12:
        raise BadWeights(f"weights sum to {sum(w)!r}, expected 1")
    ops = []
    for ch, x in zip(channels, w):
        scale = math.sqrt(x)
        ops.extend(scale * a for a in ch.kraus)
    if name is None:
        name = "mix(" + "+".join(ch.name for ch in channels) + ")"
    return KrausChannel(name, first.input_system, first.output_system, tuple(ops))


def reduced_channel(ch: KrausChannel, traced_outputs: Sequence[str] | frozenset[str]) -> KrausChannel:
    """Compose the channel with a trace over some of its output parties."""
    traced = ch.output_system.require(traced_outputs)
    if traced == set(ch.output_system.labels):
        raise NothingLeft("cannot trace out the whole output")
    keep = [l for l in ch.output_system.labels if l not in traced]
    axes = [ch.output_system.axis(l) for l in traced]
    out_dims = ch.output_system.dims
    d_keep = math.prod(ch.output_system.dim_of(l) for l in keep)
    d_traced = ch.dim_out // d_keep
    ops = []
    for a in ch.kraus:
        t = a.reshape(out_dims + (ch.dim_in,))
        t = np.moveaxis(t, axes, range(len(axes)))
        t = t.reshape(d_traced, d_keep, ch.dim_in)
        ops.extend(np.ascontiguousarray(t[i]) for i in range(d_traced))
    return KrausChannel(
        f"{ch.name}/traced({','.join(sorted(traced))})",
        ch.input_system,
        ch.output_system.subsystem(keep),
        tuple(ops),
    )


def kraus_from_choi(
    choi_state: MultipartiteState,
    reference: Sequence[str],
    outputs: Sequence[str],
    name: str | None = None,
    input_system: PartySystem | None = None,
    rank_cutoff: float = CHOI_RANK_CUTOFF,
) -> KrausChannel:
    """Recover a Kraus representation from a Choi state.

    ``reference`` / ``outputs`` split the Choi parties; the reference
    marginal must be maximally mixed (trace-preserving case).  Kraus
    operators come from the scaled eigenvectors of the Choi matrix;
    eigenvalues below ``rank_cutoff`` are dropped.
    """
    sys = choi_state.system
    ref = tuple(reference)
    out = tuple(outputs)
    if sorted(ref + out) != sorted(sys.labels):
        raise DimensionMismatch(
            f"reference {ref} + outputs {out} must partition {sys.labels}"
        )
    ordered = permute_parties(choi_state, ref + out)
    d_ref = math.prod(sys.dim_of(l) for l in ref)
    d_out = math.prod(sys.dim_of(l) for l in out)
    vals, vecs = np.linalg.eigh(ordered.matrix)
    if vals[0] < linalg.PSD_THRESHOLD:
        raise NotPSD(f"Choi min eigenvalue {vals[0]:.3e}")
    marginal = trace_out_axes(ordered.matrix, (d_ref, d_out), [1])
    if np.linalg.norm(marginal - linalg.identity(d_ref) / d_ref) > REF_MARGINAL_TOL:
        raise NotTracePreserving("reference marginal of the Choi state is not maximally mixed")
    ops = []
    for val, vec in zip(vals, vecs.T):
        if val <= rank_cutoff:
            continue
        ops.append(math.sqrt(val * d_ref) * vec.reshape(d_ref, d_out).T)
    if input_system is None:
        input_system = PartySystem(ref, tuple(sys.dim_of(l) for l in ref))
    output_system = PartySystem(out, tuple(sys.dim_of(l) for l in out))
    return KrausChannel(name or "from_choi", input_system, output_system, tuple(ops))
