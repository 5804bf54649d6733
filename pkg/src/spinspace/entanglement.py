"""Side-1 / side-2 Schmidt decomposition and von Neumann entropy in e-bits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import SIDES, FockState, ModeLabel, ZeroStateError

# singular values below this count as zero for rank and entropy
SCHMIDT_TOL = 1e-9
NORM_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtResult:
    coefficients: np.ndarray
    left_vectors: tuple[FockState, ...]
    right_vectors: tuple[FockState, ...]

    @property
    def rank(self) -> int:
        return len(self.coefficients)


def _require_normalized(state: FockState) -> None:
    if abs(state.norm - 1.0) > NORM_TOL:
        raise ZeroStateError(f"expected a normalized state, norm is {state.norm:.12g}")


def _split_modes(modes: Sequence[ModeLabel]) -> tuple[tuple[ModeLabel, ...], tuple[ModeLabel, ...]]:
    left = tuple(m for m in modes if m.side == SIDES[0])
    right = tuple(m for m in modes if m.side == SIDES[1])
    return left, right


def coefficient_matrix(state: FockState):
    """Amplitude matrix indexed by (side-1 configuration, side-2 configuration).

    Side-1 modes precede side-2 modes canonically, so a basis configuration is
    literally the side-1 monomial times the side-2 monomial: no reordering sign.
    """
    k = sum(1 for m in state.modes if m.side == SIDES[0])
    rows = sorted({cfg[:k] for cfg in state.amplitudes})
    cols = sorted({cfg[k:] for cfg in state.amplitudes})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for cfg, amp in state.amplitudes.items():
        mat[ri[cfg[:k]], ci[cfg[k:]]] = amp
    return mat, rows, cols


def schmidt(state: FockState) -> SchmidtResult:
    _require_normalized(state)
    left_modes, right_modes = _split_modes(state.modes)
    mat, rows, cols = coefficient_matrix(state)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = s > SCHMIDT_TOL
    lefts, rights = [], []
    for i in np.flatnonzero(keep):
        lefts.append(FockState(state.statistics, left_modes, dict(zip(rows, u[:, i]))))
        rights.append(FockState(state.statistics, right_modes, dict(zip(cols, vh[i]))))
    return SchmidtResult(s[keep], tuple(lefts), tuple(rights))


def tensor(left: FockState, right: FockState) -> FockState:
    """Side-1 state times side-2 state, concatenating occupation vectors."""
    modes = left.modes + right.modes
    amps = {lc + rc: la * ra for lc, la in left.amplitudes.items()
            for rc, ra in right.amplitudes.items()}
    return FockState(left.statistics, modes, amps)


def reconstruct(result: SchmidtResult) -> FockState:
    total = None
    for lam, left, right in zip(result.coefficients, result.left_vectors, result.right_vectors):
        term = tensor(left, right).scaled(lam)
        total = term if total is None else total + term
    return total


def entropy_ebits(result: SchmidtResult) -> float:
    probs = np.asarray(result.coefficients) ** 2
    probs = probs[probs > 0]
    if len(probs) <= 1:
        return 0.0
    return float(max(0.0, -np.sum(probs * np.log2(probs))))


def entanglement_entropy(state: FockState) -> float:
    return entropy_ebits(schmidt(state))


def _path_key(state: FockState, cfg, side: int) -> tuple:
    counts: dict[str, int] = {}
    for m, n in state.occupied(cfg):
        if m.side == side:
            counts[m.path] = counts.get(m.path, 0) + n
    return tuple(sorted(counts.items()))


def _spin_signature(state: FockState, cfg, side: int) -> tuple:
    """Spin content of one side with path names stripped: ``(n_up, n_dn)`` per occupied path."""
    per_path: dict[str, list[int]] = {}
    for m, n in state.occupied(cfg):
        if m.side == side:
            per_path.setdefault(m.path, [0, 0])[m.spin] += n
    return tuple(tuple(v) for _, v in sorted(per_path.items()))


def _blocks(state: FockState) -> dict[tuple, dict]:
    blocks: dict[tuple, dict] = {}
    for cfg, amp in state.amplitudes.items():
        key = (_path_key(state, cfg, SIDES[0]), _path_key(state, cfg, SIDES[1]))
        blocks.setdefault(key, {})[cfg] = amp
    return blocks


def _common_factor_weights(state: FockState, blocks: dict):
    """Path weights when every block carries the same (path-stripped) spin vector."""
    ref = None
    weights = {}
    for key, amps in sorted(blocks.items()):
        vec = {(_spin_signature(state, c, SIDES[0]), _spin_signature(state, c, SIDES[1])): a
               for c, a in amps.items()}
        if ref is None:
            ref = vec
            scale = math.sqrt(sum(abs(a) ** 2 for a in ref.values()))
            ref = {k: a / scale for k, a in ref.items()}
        if set(vec) != set(ref):
            return None
        w = sum(ref[k].conjugate() * a for k, a in vec.items())
        if any(abs(a - w * ref[k]) > SCHMIDT_TOL for k, a in vec.items()):
            return None
        weights[key] = w
    return weights


def _local_label_weights(state: FockState, blocks: dict):
    """Path weights when each block is a product of per-side spin vectors.

    The spin vector attached to a path pattern is a label local to that side
    and pattern; it must be the same (up to a scalar) in every block where the
    pattern occurs.
    """
    refs: tuple[dict, dict] = ({}, {})
    weights = {}
    for (p1, p2), amps in sorted(blocks.items()):
        sub = FockState(state.statistics, state.modes, amps)
        mat, rows, cols = coefficient_matrix(sub)
        u, s, vh = np.linalg.svd(mat)
        if len(s) > 1 and s[1] > SCHMIDT_TOL:
            return None
        w = complex(s[0])
        for side_refs, pattern, vec in ((refs[0], p1, dict(zip(rows, u[:, 0]))),
                                        (refs[1], p2, dict(zip(cols, vh[0])))):
            if pattern not in side_refs:
                side_refs[pattern] = vec
                continue
            ref = side_refs[pattern]
            overlap = sum(ref[c].conjugate() * vec.get(c, 0.0) for c in ref)
            if abs(abs(overlap) - 1.0) > 1e-7:
                return None
            w *= overlap
        weights[p1, p2] = w
    return weights


def path_amplitudes(state: FockState):
    """Amplitude matrix over (side-1 path pattern, side-2 path pattern).

    A path pattern is the per-path particle count on one side, e.g.
    ``(('C', 2),)`` for both particles in C.  The spin content has to factor
    out, either as one spin vector shared by every pattern pair or as
    per-side spin labels attached to each pattern; otherwise ``ValueError``.
    Overall phases of the pattern states are conventional.
    """
    blocks = _blocks(state)
    weights = _common_factor_weights(state, blocks)
    if weights is None:
        weights = _local_label_weights(state, blocks)
    if weights is None:
        raise ValueError("spin and path are not disentangled; no path-only description")
    pats1 = sorted({p1 for p1, _ in weights})
    pats2 = sorted({p2 for _, p2 in weights})
    mat = np.zeros((len(pats1), len(pats2)), dtype=complex)
    for (p1, p2), w in weights.items():
        mat[pats1.index(p1), pats2.index(p2)] = w
    return mat, pats1, pats2


def spatial_entropy_ebits(state: FockState) -> float:
    """Side-1 / side-2 entanglement of the path-pattern description of ``state``."""
    _require_normalized(state)
    mat, _, _ = path_amplitudes(state)
    s = np.linalg.svd(mat, compute_uv=False)
    probs = s[s > SCHMIDT_TOL] ** 2
    if len(probs) <= 1:
        return 0.0
    probs = probs / probs.sum()
    return float(max(0.0, -np.sum(probs * np.log2(probs))))
