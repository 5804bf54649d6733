"""Two entangled pairs feeding two beam splitters: initial states and setup."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .fock import (
    INPUT_PATHS,
    FockState,
    ModeLabel,
    Spin,
    Statistics,
    build_from_monomials,
    mode_set,
)
from .optics import BeamSplitter, apply_beam_splitters

SIGN_CHOICES = ("++", "+-", "-+", "--")

INPUT_MODES = mode_set((1, 2), INPUT_PATHS)


def _sign(s: str) -> int:
    if s not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {s!r}")
    return 1 if s == "+" else -1


@dataclass(frozen=True)
class ScenarioSpec:
    statistics: Statistics
    sign_a: str = "+"
    sign_b: str = "+"
    bs: BeamSplitter = field(default_factory=BeamSplitter.fifty_fifty)

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        _sign(self.sign_a)
        _sign(self.sign_b)

    @classmethod
    def from_signs(cls, statistics, signs: str, bs: BeamSplitter | None = None) -> "ScenarioSpec":
        if signs not in SIGN_CHOICES:
            raise ValueError(f"signs must be one of {SIGN_CHOICES}, got {signs!r}")
        return cls(statistics, signs[0], signs[1], bs or BeamSplitter.fifty_fifty())

    @property
    def signs(self) -> str:
        return self.sign_a + self.sign_b


def _pair(path: str, sign: str):
    """Terms of ``(a†(path1,up) a†(path2,dn) ± a†(path1,dn) a†(path2,up)) / sqrt(2)``."""
    up1, dn1 = ModeLabel(1, path, Spin.UP), ModeLabel(1, path, Spin.DOWN)
    up2, dn2 = ModeLabel(2, path, Spin.UP), ModeLabel(2, path, Spin.DOWN)
    r = 1 / math.sqrt(2)
    return [(r, [up1, dn2]), (_sign(sign) * r, [dn1, up2])]


def initial_state(spec: ScenarioSpec) -> FockState:
    """Pair A times pair B acting on the vacuum, operators in the written order."""
    terms = [(ca * cb, ops_a + ops_b)
             for ca, ops_a in _pair("A", spec.sign_a)
             for cb, ops_b in _pair("B", spec.sign_b)]
    return build_from_monomials(terms, spec.statistics, INPUT_MODES)


def output_state(spec: ScenarioSpec) -> FockState:
    """Initial state after the beam splitter on both sides."""
    return apply_beam_splitters(initial_state(spec), spec.bs)


def _mutual_information(joint: dict) -> float:
    px, py = defaultdict(float), defaultdict(float)
    for (x, y), p in joint.items():
        px[x] += p
        py[y] += p
    return sum(p * math.log2(p / (px[x] * py[y])) for (x, y), p in joint.items() if p > 0)


def spin_space_correlation_check(state: FockState, side: int = 1) -> float:
    """Mutual information (bits) between path occupancy and spin content on one side.

    Both variables are read off the configuration probabilities: the path
    variable is the per-path particle count, the spin variable the
    ``(n_up, n_dn)`` count.
    """
    total = sum(abs(a) ** 2 for a in state.amplitudes.values())
    joint: dict = defaultdict(float)
    for cfg, amp in state.amplitudes.items():
        paths: dict[str, int] = defaultdict(int)
        spins = [0, 0]
        for m, n in state.occupied(cfg):
            if m.side == side:
                paths[m.path] += n
                spins[m.spin] += n
        joint[tuple(sorted(paths.items())), tuple(spins)] += abs(amp) ** 2 / total
    return max(0.0, _mutual_information(joint))
