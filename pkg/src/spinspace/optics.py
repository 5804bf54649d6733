"""Single-particle mode transformations and their action on Fock states."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .fock import (
    INPUT_PATHS,
    OUTPUT_PATHS,
    FockState,
    ModeLabel,
    ModeMismatchError,
    Spin,
    Statistics,
    basis_monomial,
    create_into,
)

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class BeamSplitter:
    """SU(2) beam splitter ``[[alpha, beta], [-conj(beta), conj(alpha)]]``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        weight = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(weight - 1.0) > UNITARITY_TOL:
            raise ValueError(
                f"|alpha|^2 + |beta|^2 must equal 1 (got {weight:.15g})")

    @classmethod
    def fifty_fifty(cls) -> "BeamSplitter":
        return cls(1 / math.sqrt(2), -1j / math.sqrt(2))

    @classmethod
    def from_angle(cls, theta: float) -> "BeamSplitter":
        """``alpha = cos(theta)``, ``beta = -i sin(theta)``."""
        return cls(math.cos(theta), -1j * math.sin(theta))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "BeamSplitter":
        # Haar-random SU(2) from a normalized complex Gaussian pair
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z /= np.linalg.norm(z)
        return cls(complex(z[0]), complex(z[1]))

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


@dataclass(frozen=True)
class ModeMap:
    """Linear substitution ``a†(in) -> sum_k c_k a†(out_k)``.

    Modes absent from ``rows`` are left untouched.
    """

    rows: Mapping[ModeLabel, tuple[tuple[ModeLabel, complex], ...]]

    def __post_init__(self):
        object.__setattr__(self, "rows", {
            m: tuple((o, complex(c)) for o, c in images) for m, images in self.rows.items()})

    @property
    def inputs(self) -> tuple[ModeLabel, ...]:
        return tuple(sorted(self.rows))

    @property
    def outputs(self) -> tuple[ModeLabel, ...]:
        return tuple(sorted({o for images in self.rows.values() for o, _ in images}))

    def matrix(self) -> np.ndarray:
        """Coefficient matrix, rows = inputs, columns = outputs (canonical order)."""
        outs = {m: j for j, m in enumerate(self.outputs)}
        mat = np.zeros((len(self.rows), len(outs)), dtype=complex)
        for i, m in enumerate(self.inputs):
            for o, c in self.rows[m]:
                mat[i, outs[o]] += c
        return mat

    def is_unitary(self, tol: float = UNITARITY_TOL) -> bool:
        mat = self.matrix()
        if mat.shape[0] != mat.shape[1]:
            return False
        return np.allclose(mat @ mat.conj().T, np.eye(len(mat)), atol=tol, rtol=0)


def beam_splitter_map(side: int, bs: BeamSplitter) -> ModeMap:
    """Path A feeds the first matrix row, path B the second; spin is untouched."""
    a, b = bs.alpha, bs.beta
    rows = {}
    for spin in Spin:
        pa, pb, c, d = (ModeLabel(side, p, spin) for p in (*INPUT_PATHS, *OUTPUT_PATHS))
        rows[pa] = ((c, a), (d, b))
        rows[pb] = ((c, -b.conjugate()), (d, a.conjugate()))
    return ModeMap(rows)


def spin_rotation_map(side: int, paths: Sequence[str] = OUTPUT_PATHS) -> ModeMap:
    """Rewrite z-spin creators in the x basis, ``x± = (up ± dn)/sqrt(2)``.

    In the image the ``up`` slot stands for ``x+`` and ``dn`` for ``x-``.
    The map is real and self-inverse, so the same map rotates back.
    """
    r = 1 / math.sqrt(2)
    rows = {}
    for p in paths:
        up, dn = ModeLabel(side, p, Spin.UP), ModeLabel(side, p, Spin.DOWN)
        rows[up] = ((up, r), (dn, r))
        rows[dn] = ((up, r), (dn, -r))
    return ModeMap(rows)


def identity_map(modes: Sequence[ModeLabel]) -> ModeMap:
    return ModeMap({m: ((m, 1.0),) for m in modes})


def apply_mode_map(state: FockState, mapping: ModeMap) -> FockState:
    """Substitute every creation operator by its image and re-expand.

    Mapped input modes leave the active set and the map's outputs join it.
    """
    missing = [m for m in mapping.inputs if m not in state.modes]
    if missing:
        raise ModeMismatchError(f"map inputs {missing} are not active in the state")
    modes = tuple(sorted((set(state.modes) - set(mapping.inputs)) | set(mapping.outputs)))
    where = {m: i for i, m in enumerate(modes)}
    images = {m: tuple((where[o], c) for o, c in mapping.rows.get(m, ((m, 1.0),)))
              for m in state.modes}
    fermion = state.statistics is Statistics.FERMION
    vacuum = {(0,) * len(modes): 1.0}
    result: dict = {}
    for cfg, amp in state.amplitudes.items():
        weight, ops = basis_monomial(state, cfg)
        branch = vacuum
        for m in reversed(ops):
            acc: dict = {}
            for k, c in images[m]:
                create_into(acc, branch, k, fermion, c)
            branch = acc
        for c, a in branch.items():
            result[c] = result.get(c, 0.0) + amp * weight * a
    return FockState._raw(state.statistics, modes, result)


def apply_beam_splitters(state: FockState, bs: BeamSplitter, sides=(1, 2)) -> FockState:
    """The same beam splitter on each listed side."""
    for side in sides:
        state = apply_mode_map(state, beam_splitter_map(side, bs))
    return state


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n x n`` unitary (QR of a complex Ginibre matrix)."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def unitary_map(modes: Sequence[ModeLabel], u: np.ndarray) -> ModeMap:
    """``a†(modes[i]) -> sum_j u[j, i] a†(modes[j])``, closed on ``modes``."""
    modes = list(modes)
    return ModeMap({m: tuple((modes[j], u[j, i]) for j in range(len(modes)))
                    for i, m in enumerate(modes)})
