import numpy as np
import pytest

from choilab.entanglement import all_cut_indices
from choilab.states import MultipartiteState, PartySystem, ghz_basis_state


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m)


def random_state(rng: np.random.Generator, system: PartySystem) -> MultipartiteState:
    return MultipartiteState(system, random_density_matrix(rng, system.total_dim))


def random_pure_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_ghz_diagonal_state(rng: np.random.Generator, system: PartySystem) -> MultipartiteState:
    """Random state diagonal in the GHZ basis with symmetric pair weights."""
    n = system.num_parties
    indices = all_cut_indices(n)
    raw = rng.random(2 + len(indices))
    total = raw[0] + raw[1] + 2 * raw[2:].sum()
    weights = raw / total
    m = weights[0] * _proj(ghz_basis_state(system, "0" * (n - 1), 1).vector)
    m = m + weights[1] * _proj(ghz_basis_state(system, "0" * (n - 1), -1).vector)
    for w, j in zip(weights[2:], indices):
        m = m + w * (
            _proj(ghz_basis_state(system, j, 1).vector)
            + _proj(ghz_basis_state(system, j, -1).vector)
        )
    return MultipartiteState(system, m)


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


@pytest.fixture(scope="session")
def four_qubits() -> PartySystem:
    return PartySystem(("A1", "B", "A2", "C"), (2, 2, 2, 2))


@pytest.fixture(scope="session")
def scenario_states():
    from choilab.nonadditivity import binding_channel, choi_state, mixed_binding_channel

    states = {f"E{a}": choi_state(binding_channel(a)) for a in (1, 2, 3)}
    states["mix"] = choi_state(mixed_binding_channel())
    return states


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Bundled channel/state files, generated by the builders (never hand-edited)."""
    from choilab.codec import channel_to_dict, dumps, state_to_dict
    from choilab.nonadditivity import (
        binding_channel,
        choi_state,
        ghz3_state,
        mixed_binding_channel,
    )

    root = tmp_path_factory.mktemp("fixtures")
    for a in (1, 2, 3):
        ch = binding_channel(a)
        (root / f"e{a}.json").write_text(dumps(channel_to_dict(ch)))
        (root / f"e{a}_choi.json").write_text(dumps(state_to_dict(choi_state(ch))))
    (root / "ghz3.json").write_text(dumps(state_to_dict(ghz3_state().density())))
    (root / "emix_choi.json").write_text(
        dumps(state_to_dict(choi_state(mixed_binding_channel())))
    )
    return root
