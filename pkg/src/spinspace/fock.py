"""Occupation-number states with bosonic or fermionic creation operators.

Modes are ``(side, path, spin)`` triples with a fixed canonical order.  A
:class:`FockState` is a sparse map from occupation vectors (one entry per
active mode, canonical order) to complex amplitudes.  Basis vectors are the
normalized occupation states, so a bosonic monomial ``a†a†|0>`` lands on
``sqrt(2)|2>``.  Fermionic signs follow a Jordan-Wigner string over the
canonical order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Sequence

import numpy as np

# amplitudes below this are dropped after every linear operation
PRUNE_TOL = 1e-12
# norms below this mark an impossible branch
ZERO_NORM_TOL = 1e-9


class Statistics(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"


class Spin(IntEnum):
    UP = 0
    DOWN = 1

    @property
    def symbol(self) -> str:
        return "up" if self is Spin.UP else "dn"


PATHS = ("A", "B", "C", "D")
INPUT_PATHS = ("A", "B")
OUTPUT_PATHS = ("C", "D")
SIDES = (1, 2)


class ModeMismatchError(ValueError):
    """A mode or mode set does not match the state it is used with."""


class ZeroStateError(ValueError):
    """Normalization was requested for a (numerically) zero state."""


@dataclass(frozen=True, order=True)
class ModeLabel:
    """One single-particle mode.  Field order gives the canonical ordering."""

    side: int
    path: str
    spin: Spin

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be 1 or 2, got {self.side!r}")
        if self.path not in PATHS:
            raise ValueError(f"path must be one of {PATHS}, got {self.path!r}")
        object.__setattr__(self, "spin", Spin(self.spin))

    def __str__(self) -> str:
        return f"{self.path}{self.side}{self.spin.symbol}"

    def __repr__(self) -> str:
        return f"ModeLabel({self})"

    @classmethod
    def parse(cls, text: str) -> "ModeLabel":
        """Inverse of ``str``: ``'C1up'`` -> ``ModeLabel(1, 'C', Spin.UP)``."""
        text = text.strip()
        try:
            path, side, spin = text[0], int(text[1]), text[2:]
            spin = {"up": Spin.UP, "dn": Spin.DOWN}[spin]
        except (IndexError, ValueError, KeyError):
            raise ValueError(f"cannot parse mode label {text!r}") from None
        return cls(side, path, spin)


def mode(label: str) -> ModeLabel:
    """Shorthand for :meth:`ModeLabel.parse`."""
    return ModeLabel.parse(label)


def mode_set(sides: Iterable[int], paths: Iterable[str]) -> tuple[ModeLabel, ...]:
    """All modes over the given sides and paths, both spins, canonically sorted."""
    return tuple(sorted(ModeLabel(s, p, sp) for s in sides for p in paths for sp in Spin))


Config = tuple  # occupation vector over a state's active modes


@dataclass(frozen=True)
class FockState:
    statistics: Statistics
    modes: tuple[ModeLabel, ...]
    amplitudes: Mapping[Config, complex] = field(default_factory=dict)

    def __post_init__(self):
        modes = tuple(self.modes)
        if list(modes) != sorted(set(modes)):
            raise ModeMismatchError("active modes must be unique and canonically sorted")
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        object.__setattr__(self, "modes", modes)
        amps = {}
        for cfg, amp in self.amplitudes.items():
            cfg = tuple(int(n) for n in cfg)
            if len(cfg) != len(modes):
                raise ModeMismatchError(
                    f"configuration of length {len(cfg)} over {len(modes)} modes")
            if self.statistics is Statistics.FERMION and any(n > 1 for n in cfg):
                raise ValueError(f"fermionic occupancy above 1 in {cfg}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                amps[cfg] = amp
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _raw(cls, statistics: Statistics, modes: tuple, amps: dict) -> "FockState":
        """Unchecked constructor for internal use; prunes but does not validate."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "statistics", statistics)
        object.__setattr__(obj, "modes", modes)
        object.__setattr__(obj, "amplitudes", _pruned(amps))
        return obj

    @classmethod
    def vacuum(cls, statistics, modes: Sequence[ModeLabel]) -> "FockState":
        modes = tuple(sorted(set(modes)))
        return cls(statistics, modes, {(0,) * len(modes): 1.0})

    @classmethod
    def zero(cls, statistics, modes: Sequence[ModeLabel]) -> "FockState":
        return cls(statistics, tuple(sorted(set(modes))), {})

    def index(self, m: ModeLabel) -> int:
        try:
            return self.modes.index(m)
        except ValueError:
            raise ModeMismatchError(f"mode {m} is not in the active mode set") from None

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __iter__(self):
        return iter(sorted(self.amplitudes.items()))

    def is_zero(self) -> bool:
        return not self.amplitudes

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def scaled(self, factor: complex) -> "FockState":
        return FockState._raw(self.statistics, self.modes,
                              {c: a * factor for c, a in self.amplitudes.items()})

    def __add__(self, other: "FockState") -> "FockState":
        _check_compatible(self, other)
        amps = dict(self.amplitudes)
        for c, a in other.amplitudes.items():
            amps[c] = amps.get(c, 0.0) + a
        return FockState._raw(self.statistics, self.modes, amps)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scaled(-1.0)

    def filter(self, keep) -> "FockState":
        """Keep only configurations for which ``keep(occupations_by_mode)`` is true."""
        return FockState._raw(self.statistics, self.modes, {
            c: a for c, a in self.amplitudes.items() if keep(dict(zip(self.modes, c)))})

    def with_modes(self, modes: Sequence[ModeLabel]) -> "FockState":
        """Re-embed into a different active mode set.

        Modes that are dropped must be unoccupied in every configuration.
        """
        modes = tuple(sorted(set(modes)))
        out = {}
        for cfg, amp in self.amplitudes.items():
            occ = dict(zip(self.modes, cfg))
            missing = [m for m, n in occ.items() if n and m not in modes]
            if missing:
                raise ModeMismatchError(f"occupied modes {missing} not in target mode set")
            out[tuple(occ.get(m, 0) for m in modes)] = amp
        return FockState(self.statistics, modes, out)

    def occupied(self, cfg: Config) -> list[tuple[ModeLabel, int]]:
        return [(m, n) for m, n in zip(self.modes, cfg) if n]

    def config_label(self, cfg: Config) -> list[str]:
        """``['C1up:1', 'D1dn:1', ...]`` for the occupied modes, canonical order."""
        return [f"{m}:{n}" for m, n in self.occupied(cfg)]

    def to_vector(self, basis: Sequence[Config]) -> np.ndarray:
        lookup = {c: i for i, c in enumerate(basis)}
        vec = np.zeros(len(basis), dtype=complex)
        for c, a in self.amplitudes.items():
            vec[lookup[c]] = a
        return vec

    def __str__(self) -> str:
        if not self.amplitudes:
            return "0"
        return " + ".join(
            f"({a.real:+.6f}{a.imag:+.6f}j)|{' '.join(self.config_label(c)) or 'vac'}>"
            for c, a in self)


def _pruned(amps: dict) -> dict:
    return {c: complex(a) for c, a in amps.items() if abs(a) >= PRUNE_TOL}


def _check_compatible(a: FockState, b: FockState) -> None:
    if a.statistics is not b.statistics:
        raise ModeMismatchError("states have different statistics")
    if a.modes != b.modes:
        raise ModeMismatchError("states have different active mode sets")


def create_into(out: dict, amps: Mapping[Config, complex], k: int, fermion: bool,
                coeff: complex = 1.0) -> dict:
    """Accumulate ``coeff * a†(k) amps`` into ``out`` (raw occupation-vector maps)."""
    for cfg, amp in amps.items():
        n = cfg[k]
        if fermion:
            if n:
                continue
            amp = -amp if sum(cfg[:k]) % 2 else amp
        else:
            amp = amp * math.sqrt(n + 1)
        new = cfg[:k] + (n + 1,) + cfg[k + 1:]
        out[new] = out.get(new, 0.0) + coeff * amp
    return out


def apply_creation(state: FockState, m: ModeLabel) -> FockState:
    """Apply ``a†(m)`` to every configuration of ``state``."""
    k = state.index(m)
    fermion = state.statistics is Statistics.FERMION
    return FockState._raw(state.statistics, state.modes,
                          create_into({}, state.amplitudes, k, fermion))


def apply_monomial(state: FockState, ops: Sequence[ModeLabel]) -> FockState:
    """``a†(ops[0]) ... a†(ops[-1]) |state>``, rightmost operator first."""
    for m in reversed(ops):
        state = apply_creation(state, m)
    return state


def build_from_monomials(terms, statistics, modes: Sequence[ModeLabel] | None = None) -> FockState:
    """Sum of ``coefficient * a†(m1)...a†(mk)|0>`` over ``terms``, not renormalized.

    ``terms`` is an iterable of ``(coefficient, [ModeLabel, ...])``.  The active
    mode set defaults to the modes mentioned in the terms.
    """
    terms = [(complex(c), tuple(ops)) for c, ops in terms]
    if modes is None:
        modes = {m for _, ops in terms for m in ops}
    vac = FockState.vacuum(statistics, modes)
    total = FockState.zero(statistics, vac.modes)
    for coeff, ops in terms:
        total = total + apply_monomial(vac, ops).scaled(coeff)
    return total


def basis_monomial(state: FockState, cfg: Config) -> tuple[float, list[ModeLabel]]:
    """Write a basis configuration as ``weight * a†(m1)...a†(mk)|0>``.

    Operators are listed in canonical order, which carries sign +1 for
    fermions; bosonic weight is ``1/sqrt(prod n!)``.
    """
    ops = []
    weight = 1.0
    for m, n in state.occupied(cfg):
        ops.extend([m] * n)
        weight /= math.sqrt(math.factorial(n))
    return weight, ops


def inner_product(a: FockState, b: FockState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_compatible(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for c in small.amplitudes:
        if c in large.amplitudes:
            total += a.amplitudes[c].conjugate() * b.amplitudes[c]
    return total


def occupation_overlap(a: FockState, b: FockState) -> complex:
    """Overlap of two states read as vectors in the shared occupation-number basis.

    Unlike :func:`inner_product` this accepts different statistics tags:
    every fermionic configuration is also a valid bosonic occupation vector,
    so states of either kind can be compared configuration by configuration,
    as a detector resolving path and spin occupations would.
    """
    if a.modes != b.modes:
        raise ModeMismatchError("states have different active mode sets")
    return sum((a.amplitudes[c].conjugate() * b.amplitudes[c]
                for c in a.amplitudes.keys() & b.amplitudes.keys()), 0j)


def normalize(state: FockState) -> tuple[FockState, float]:
    norm = state.norm
    if norm < ZERO_NORM_TOL:
        raise ZeroStateError(f"cannot normalize: norm {norm:.3g} is below {ZERO_NORM_TOL}")
    return state.scaled(1.0 / norm), norm


def particles_per_side(state: FockState) -> set[tuple[int, ...]]:
    """Distinct per-side particle counts found across configurations."""
    counts = set()
    for cfg in state.amplitudes:
        per = dict.fromkeys(SIDES, 0)
        for m, n in state.occupied(cfg):
            per[m.side] += n
        counts.add(tuple(per[s] for s in SIDES))
    return counts
