"""Post-selection on per-side spin sectors and path patterns."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .fock import (
    SIDES,
    ZERO_NORM_TOL,
    FockState,
    ModeLabel,
    Spin,
    normalize,
)
from .optics import apply_mode_map, spin_rotation_map


class PathPattern(str, Enum):
    ANTIBUNCH = "antibunch"
    BUNCH = "bunch"
    BUNCH_C = "bunch_C"
    BUNCH_D = "bunch_D"

    def matches(self, n_c: int, n_d: int) -> bool:
        if self is PathPattern.ANTIBUNCH:
            return n_c == 1 and n_d == 1
        if self is PathPattern.BUNCH:
            return (n_c, n_d) in ((2, 0), (0, 2))
        if self is PathPattern.BUNCH_C:
            return (n_c, n_d) == (2, 0)
        return (n_c, n_d) == (0, 2)


# complete, disjoint patterns for two particles on a side
FINE_PATTERNS = (PathPattern.ANTIBUNCH, PathPattern.BUNCH_C, PathPattern.BUNCH_D)
COARSE_PATTERNS = (PathPattern.ANTIBUNCH, PathPattern.BUNCH)
SZ_VALUES = (0, 1)
SX_VALUES = (-1, 0, 1)


@dataclass(frozen=True)
class MeasurementOutcome:
    probability: float
    state: Optional[FockState]

    @property
    def possible(self) -> bool:
        return self.state is not None


def _per_side(value, kind=None) -> tuple:
    if isinstance(value, (tuple, list)):
        if len(value) != len(SIDES):
            raise ValueError(f"expected one value per side, got {value!r}")
        return tuple(kind(v) if kind else v for v in value)
    return (kind(value) if kind else value,) * len(SIDES)


def _side_counts(occ: dict[ModeLabel, int], side: int, key: Callable[[ModeLabel], object]) -> dict:
    counts: dict = {}
    for m, n in occ.items():
        if n and m.side == side:
            counts[key(m)] = counts.get(key(m), 0) + n
    return counts


def _outcome(original: FockState, projected: FockState) -> MeasurementOutcome:
    total = original.norm ** 2
    prob = projected.norm ** 2 / total
    if projected.norm < ZERO_NORM_TOL:
        return MeasurementOutcome(0.0, None)
    return MeasurementOutcome(prob, normalize(projected)[0])


def sz_projected(state: FockState, value) -> FockState:
    """Unnormalized projection onto per-side ``|S_z|`` values (0 or 1)."""
    targets = _per_side(value, int)
    if any(v not in SZ_VALUES for v in targets):
        raise ValueError(f"|S_z| per side must be 0 or 1, got {value!r}")

    def keep(occ):
        for side, v in zip(SIDES, targets):
            c = _side_counts(occ, side, lambda m: m.spin)
            up, dn = c.get(Spin.UP, 0), c.get(Spin.DOWN, 0)
            if up + dn != 2 or abs(up - dn) != 2 * v:
                return False
        return True

    return state.filter(keep)


def project_sz_component(state: FockState, value) -> MeasurementOutcome:
    """Keep the ``|S_z| = value`` component on each side.

    ``value`` is one integer for both sides or a ``(side1, side2)`` pair.
    """
    return _outcome(state, sz_projected(state, value))


def _rotation_paths(state: FockState, side: int) -> list[str]:
    return sorted({m.path for m in state.modes if m.side == side})


def _to_x_basis(state: FockState, sides: Sequence[int]) -> FockState:
    # the rotation is self-inverse, so this also rotates back
    for side in sides:
        state = apply_mode_map(state, spin_rotation_map(side, _rotation_paths(state, side)))
    return state


def _sx_filter(rotated: FockState, targets: dict) -> FockState:
    def keep(occ):
        for side, v in targets.items():
            c = _side_counts(occ, side, lambda m: m.spin)
            if c.get(Spin.UP, 0) - c.get(Spin.DOWN, 0) != 2 * v:
                return False
        return True

    return rotated.filter(keep)


def _sx_targets(value, sides) -> dict:
    if isinstance(value, (tuple, list)):
        if len(value) != len(sides):
            raise ValueError(f"expected one S_x value per side, got {value!r}")
        return dict(zip(sides, (int(v) for v in value)))
    return dict.fromkeys(sides, int(value))


def sx_projected(state: FockState, value=0, sides: Sequence[int] = SIDES) -> FockState:
    """Unnormalized projection onto total ``S_x`` per side.

    Spins on the listed sides are rotated to the x basis, configurations
    with the wrong ``(n_x+ - n_x-)/2`` are dropped, and the result is
    rotated back.  Sides not listed are left alone.
    """
    sides = tuple(sides)
    kept = _sx_filter(_to_x_basis(state, sides), _sx_targets(value, sides))
    return _to_x_basis(kept, sides).with_modes(state.modes)


def sx_outcomes(state: FockState, sectors, sides: Sequence[int] = SIDES) -> list[MeasurementOutcome]:
    """:func:`project_sx` for several sectors, rotating to the x basis only once."""
    sides = tuple(sides)
    rotated = _to_x_basis(state, sides)
    out = []
    for sector in sectors:
        kept = _sx_filter(rotated, _sx_targets(sector, sides))
        out.append(_outcome(state, _to_x_basis(kept, sides).with_modes(state.modes)))
    return out


def project_sx(state: FockState, value, sides: Sequence[int] = SIDES) -> MeasurementOutcome:
    return _outcome(state, sx_projected(state, value, sides))


def project_sx_zero(state: FockState, sides: Sequence[int] = SIDES) -> MeasurementOutcome:
    """Select total ``S_x = 0`` on every listed side."""
    return project_sx(state, 0, sides)


def path_projected(state: FockState, pattern) -> FockState:
    patterns = _per_side(pattern, PathPattern)

    def keep(occ):
        for side, pat in zip(SIDES, patterns):
            c = _side_counts(occ, side, lambda m: m.path)
            if sum(c.values()) != c.get("C", 0) + c.get("D", 0):
                return False
            if not pat.matches(c.get("C", 0), c.get("D", 0)):
                return False
        return True

    return state.filter(keep)


def project_path(state: FockState, pattern) -> MeasurementOutcome:
    """Keep configurations matching a path pattern on both sides.

    ``pattern`` is one :class:`PathPattern` for both sides or a
    ``(side1, side2)`` pair, which covers the mixed branches.
    """
    return _outcome(state, path_projected(state, pattern))


def path_pattern_of(state: FockState, cfg, side: int) -> Optional[PathPattern]:
    """Fine pattern (antibunch / bunch_C / bunch_D) of one configuration on one side."""
    c = _side_counts(dict(zip(state.modes, cfg)), side, lambda m: m.path)
    for pat in FINE_PATTERNS:
        if pat.matches(c.get("C", 0), c.get("D", 0)) and sum(c.values()) == 2:
            return pat
    return None

