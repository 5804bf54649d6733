"""Dense brute-force cross-check of the sparse simulator.

Shares only mode labels and configuration ordering with the main code.
Everything else is done independently with dense matrices:

* initial state from dense creation-operator matrices,
* the two beam splitters as one many-body matrix whose entries are
  permanents (bosons) or determinants (fermions) of one-body submatrices,
* ``S_x`` projectors from an eigendecomposition of the one-body ``S_x``
  operator built out of creation/annihilation matrices,
* entropies from eigenvalues of reduced density matrices.

The 4-particle sector is taken over 8 modes: the input modes (paths A, B)
before the beam splitters and the output modes (C, D) after.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product

import numpy as np

from .fock import INPUT_PATHS, OUTPUT_PATHS, ModeLabel, Spin, Statistics, mode_set
from .scenarios import ScenarioSpec, _sign

N_PARTICLES = 4
EIG_TOL = 1e-6
ZERO_TOL = 1e-9
RANK_TOL = 1e-9


# instances come from the dense_basis cache, so identity equality is enough
@dataclass(frozen=True, eq=False)
class DenseBasis:
    statistics: Statistics
    modes: tuple[ModeLabel, ...]
    configs: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.configs)

    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.configs)}


@dataclass(frozen=True)
class DenseState:
    basis: DenseBasis
    vector: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.dimension


@lru_cache(maxsize=None)
def dense_basis(statistics: Statistics, modes: tuple[ModeLabel, ...], n: int) -> DenseBasis:
    """All ``n``-particle occupation vectors over ``modes``, sorted like fock-core."""
    k = len(modes)
    if statistics is Statistics.FERMION:
        picks = combinations(range(k), n)
    else:
        picks = combinations_with_replacement(range(k), n)
    configs = set()
    for pick in picks:
        occ = [0] * k
        for i in pick:
            occ[i] += 1
        configs.add(tuple(occ))
    return DenseBasis(statistics, modes, tuple(sorted(configs)))


@lru_cache(maxsize=None)
def creation_matrix(statistics: Statistics, modes: tuple[ModeLabel, ...], n: int, k: int) -> np.ndarray:
    """Matrix of ``a†(modes[k])`` from the ``n``- to the ``n+1``-particle sector."""
    src = dense_basis(statistics, modes, n)
    dst = dense_basis(statistics, modes, n + 1)
    where = dst.index()
    mat = np.zeros((dst.dimension, src.dimension))
    for j, occ in enumerate(src.configs):
        if statistics is Statistics.FERMION:
            if occ[k]:
                continue
            value = (-1.0) ** sum(occ[:k])
        else:
            value = math.sqrt(occ[k] + 1)
        new = list(occ)
        new[k] += 1
        mat[where[tuple(new)], j] = value
    return mat


def dense_initial_state(spec: ScenarioSpec) -> DenseState:
    modes = mode_set((1, 2), INPUT_PATHS)
    st = spec.statistics

    def a(n, label):
        return creation_matrix(st, modes, n, modes.index(label))

    vec = np.zeros(1)
    vec[0] = 1.0
    # pair B first (it acts on the vacuum), then pair A; within a pair the
    # side-2 operator acts before the side-1 operator
    for n_before, path, sign in ((0, "B", spec.sign_b), (2, "A", spec.sign_a)):
        up1, dn1 = ModeLabel(1, path, Spin.UP), ModeLabel(1, path, Spin.DOWN)
        up2, dn2 = ModeLabel(2, path, Spin.UP), ModeLabel(2, path, Spin.DOWN)
        first = a(n_before + 1, up1) @ a(n_before, dn2)
        second = a(n_before + 1, dn1) @ a(n_before, up2)
        vec = (first + _sign(sign) * second) @ vec / math.sqrt(2)
    return DenseState(dense_basis(st, modes, N_PARTICLES), vec)


def one_body_matrix(bs) -> tuple[np.ndarray, tuple, tuple]:
    """``W[j, i]`` = coefficient of output mode ``j`` in the image of input mode ``i``."""
    ins = mode_set((1, 2), INPUT_PATHS)
    outs = mode_set((1, 2), OUTPUT_PATHS)
    u = np.array([[bs.alpha, bs.beta], [-np.conj(bs.beta), np.conj(bs.alpha)]])
    w = np.zeros((len(outs), len(ins)), dtype=complex)
    for i, m in enumerate(ins):
        row = INPUT_PATHS.index(m.path)
        for col, p in enumerate(OUTPUT_PATHS):
            w[outs.index(ModeLabel(m.side, p, m.spin)), i] = u[row, col]
    return w, ins, outs


def _permanents(mats: np.ndarray) -> np.ndarray:
    """Permanents of a stack of ``n x n`` matrices (Ryser's formula)."""
    n = mats.shape[-1]
    subsets = np.array([[mask >> j & 1 for mask in range(1, 1 << n)] for j in range(n)])
    signs = (-1.0) ** subsets.sum(axis=0)
    rowsums = mats @ subsets  # (..., n rows, subsets)
    return (-1) ** n * (np.prod(rowsums, axis=-2) @ signs)


def _expand(configs) -> np.ndarray:
    """Occupation vectors -> sorted lists of occupied mode indices, with repeats."""
    return np.array([[i for i, n in enumerate(c) for _ in range(n)] for c in configs])


@lru_cache(maxsize=64)
def many_body_matrix(statistics: Statistics, bs):
    """Matrix of the two beam splitters on the 4-particle sector.

    Rows are output-mode configurations, columns input-mode configurations.
    """
    w, ins, outs = one_body_matrix(bs)
    b_in = dense_basis(statistics, ins, N_PARTICLES)
    b_out = dense_basis(statistics, outs, N_PARTICLES)
    r = _expand(b_out.configs)
    c = _expand(b_in.configs)
    sub = w[r[:, None, :, None], c[None, :, None, :]]
    if statistics is Statistics.FERMION:
        mat = np.linalg.det(sub)
    else:
        norm_out = np.array([math.prod(math.factorial(n) for n in cfg) for cfg in b_out.configs])
        norm_in = np.array([math.prod(math.factorial(n) for n in cfg) for cfg in b_in.configs])
        mat = _permanents(sub) / np.sqrt(np.outer(norm_out, norm_in))
    return mat, b_in, b_out


def _one_body_operator(statistics: Statistics, modes: tuple, terms) -> np.ndarray:
    """``sum c * a†(i) a(j)`` on the 4-particle sector, from dense creation matrices."""
    dim = dense_basis(statistics, modes, N_PARTICLES).dimension
    op = np.zeros((dim, dim), dtype=complex)
    for coeff, i, j in terms:
        ai = creation_matrix(statistics, modes, N_PARTICLES - 1, modes.index(i))
        aj = creation_matrix(statistics, modes, N_PARTICLES - 1, modes.index(j))
        op += coeff * ai @ aj.T
    return op


def sx_operator(statistics: Statistics, side: int) -> np.ndarray:
    modes = mode_set((1, 2), OUTPUT_PATHS)
    terms = []
    for p in OUTPUT_PATHS:
        up, dn = ModeLabel(side, p, Spin.UP), ModeLabel(side, p, Spin.DOWN)
        terms += [(0.5, up, dn), (0.5, dn, up)]
    return _one_body_operator(statistics, modes, terms)


@lru_cache(maxsize=None)
def _sx_eigen(statistics: Statistics, side: int):
    return np.linalg.eigh(sx_operator(statistics, side))


def sx_projector(statistics: Statistics, side: int, value: float) -> np.ndarray:
    """Projector onto ``S_x(side) = value`` by eigendecomposition."""
    vals, vecs = _sx_eigen(statistics, side)
    sel = vecs[:, np.abs(vals - value) < EIG_TOL]
    return sel @ sel.conj().T


@lru_cache(maxsize=None)
def _sx_joint_projector(statistics: Statistics, values: tuple) -> np.ndarray:
    return sx_projector(statistics, 1, values[0]) @ sx_projector(statistics, 2, values[1])


def _side_counts(modes, cfg, side, key):
    counts = {}
    for m, n in zip(modes, cfg):
        if n and m.side == side:
            counts[key(m)] = counts.get(key(m), 0) + n
    return counts


@lru_cache(maxsize=None)
def sz_mask(basis: DenseBasis, values) -> np.ndarray:
    keep = []
    for cfg in basis.configs:
        ok = True
        for side, v in zip((1, 2), values):
            c = _side_counts(basis.modes, cfg, side, lambda m: m.spin)
            up, dn = c.get(Spin.UP, 0), c.get(Spin.DOWN, 0)
            ok &= up + dn == 2 and abs(up - dn) == 2 * v
        keep.append(ok)
    return np.array(keep)


_PATTERN_COUNTS = {
    "antibunch": {(1, 1)},
    "bunch": {(2, 0), (0, 2)},
    "bunch_C": {(2, 0)},
    "bunch_D": {(0, 2)},
}


@lru_cache(maxsize=None)
def path_mask(basis: DenseBasis, patterns) -> np.ndarray:
    keep = []
    for cfg in basis.configs:
        ok = True
        for side, pat in zip((1, 2), patterns):
            c = _side_counts(basis.modes, cfg, side, lambda m: m.path)
            ok &= (c.get("C", 0), c.get("D", 0)) in _PATTERN_COUNTS[str(getattr(pat, "value", pat))]
        keep.append(ok)
    return np.array(keep)


def _side_split(basis: DenseBasis, vec: np.ndarray):
    k = sum(1 for m in basis.modes if m.side == 1)
    rows = sorted({c[:k] for c in basis.configs})
    cols = sorted({c[k:] for c in basis.configs})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for cfg, amp in zip(basis.configs, vec):
        mat[ri[cfg[:k]], ci[cfg[k:]]] = amp
    return mat, rows, cols


def _entropy_from_density(rho: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > RANK_TOL ** 2]
    vals = vals / vals.sum()
    return float(max(0.0, -np.sum(vals * np.log2(vals))))


def dense_entropy(basis: DenseBasis, vec: np.ndarray) -> float:
    """Side-1 / side-2 entropy from the eigenvalues of the side-1 reduced density matrix."""
    mat, _, _ = _side_split(basis, vec)
    return _entropy_from_density(mat @ mat.conj().T)


def _path_of(modes, part, side):
    c = _side_counts(modes, part, side, lambda m: m.path)
    return tuple(sorted(c.items()))


def _spin_of(modes, part, side):
    per = {}
    for m, n in zip(modes, part):
        if n and m.side == side:
            per.setdefault(m.path, [0, 0])[m.spin] += n
    return tuple(tuple(v) for _, v in sorted(per.items()))


@lru_cache(maxsize=None)
def _labels(basis: DenseBasis):
    """Per configuration: (path pattern pair, spin signature pair)."""
    k = sum(1 for m in basis.modes if m.side == 1)
    left, right = basis.modes[:k], basis.modes[k:]
    paths = [(_path_of(left, c[:k], 1), _path_of(right, c[k:], 2)) for c in basis.configs]
    spins = [(_spin_of(left, c[:k], 1), _spin_of(right, c[k:], 2)) for c in basis.configs]
    return paths, spins


def dense_spatial_entropy(basis: DenseBasis, vec: np.ndarray):
    """Path-pattern entanglement, or ``None`` when spin does not factor out."""
    paths, spins = _labels(basis)
    support = np.flatnonzero(np.abs(vec) > 1e-12)

    # route 1: one joint spin vector shared by all path-pattern pairs
    pkeys = sorted({paths[i] for i in support})
    skeys = sorted({spins[i] for i in support})
    t = np.zeros((len(pkeys), len(skeys)), dtype=complex)
    for i in support:
        t[pkeys.index(paths[i]), skeys.index(spins[i])] = vec[i]
    sv = np.linalg.svd(t, compute_uv=False)
    if len(sv) == 1 or sv[1] <= RANK_TOL:
        u, s, _ = np.linalg.svd(t)
        p1s = sorted({p for p, _ in pkeys})
        p2s = sorted({q for _, q in pkeys})
        c = np.zeros((len(p1s), len(p2s)), dtype=complex)
        for (p, q), wgt in zip(pkeys, u[:, 0] * s[0]):
            c[p1s.index(p), p2s.index(q)] = wgt
        return _entropy_from_density(c @ c.conj().T)

    # route 2: each side-local path pattern carries a single spin vector;
    # then the full entropy is entirely path entanglement
    k = sum(1 for m in basis.modes if m.side == 1)
    mat, rows, cols = _side_split(basis, vec)
    for axis, parts, side, modes in ((0, rows, 1, basis.modes[:k]), (1, cols, 2, basis.modes[k:])):
        groups = {}
        for i, part in enumerate(parts):
            groups.setdefault(_path_of(modes, part, side), []).append(i)
        for idx in groups.values():
            block = mat[idx, :] if axis == 0 else mat[:, idx]
            sv = np.linalg.svd(block, compute_uv=False)
            if len(sv) > 1 and sv[1] > RANK_TOL:
                return None
    return dense_entropy(basis, vec)


def _branch(basis, out_vec, projected, total):
    nrm = np.linalg.norm(projected)
    if nrm < ZERO_TOL:
        return 0.0, None, None
    post = projected / nrm
    return (float(nrm ** 2 / total), dense_entropy(basis, post),
            dense_spatial_entropy(basis, post))


def dense_evaluate(spec: ScenarioSpec) -> dict:
    """Branch table in the same layout as :func:`spinspace.report.build_report`."""
    from .report import OBSERVABLES, scenario_echo, sector_name

    psi = dense_initial_state(spec)
    u, b_in, b_out = many_body_matrix(spec.statistics, spec.bs)
    out = u @ psi.vector
    total = float(np.vdot(out, out).real)
    branches = []
    for observable, sectors in OBSERVABLES.items():
        for sector in sectors:
            if observable == "sz_abs":
                projected = np.where(sz_mask(b_out, sector), out, 0)
            elif observable == "sx_total":
                projected = _sx_joint_projector(spec.statistics, sector) @ out
            else:
                projected = np.where(path_mask(b_out, sector), out, 0)
            prob, ent, spatial = _branch(b_out, out, projected, total)
            branches.append({
                "observable": observable,
                "sector": sector_name(sector),
                "probability": prob,
                "post_state_entropy_ebits": ent,
                "spatial_entropy_ebits": spatial,
            })
    return {
        "scenario": scenario_echo(spec),
        "total_entropy_ebits": dense_entropy(b_out, out / math.sqrt(total)),
        "branches": branches,
    }


def compare(sparse_report: dict, dense_report: dict, tol: float = 1e-9) -> list[str]:
    """Discrepancies between two reports; empty when all numbers agree within ``tol``."""
    issues = []

    def check(name, a, b):
        if a is None or b is None:
            if a is not b:
                issues.append(f"{name}: {a!r} vs {b!r}")
        elif abs(a - b) > tol:
            issues.append(f"{name}: {a!r} vs {b!r} (diff {abs(a - b):.3g})")

    check("total_entropy_ebits", sparse_report.get("total_entropy_ebits"),
          dense_report.get("total_entropy_ebits"))
    sb = {(b["observable"], b["sector"]): b for b in sparse_report.get("branches", [])}
    db = {(b["observable"], b["sector"]): b for b in dense_report.get("branches", [])}
    for key in sorted(set(sb) | set(db)):
        name = ":".join(key)
        if key not in sb or key not in db:
            issues.append(f"{name}: branch missing from {'sparse' if key not in sb else 'dense'} report")
            continue
        for field in ("probability", "post_state_entropy_ebits", "spatial_entropy_ebits"):
            check(f"{name}:{field}", sb[key][field], db[key][field])
    return issues


def dense_from_sparse(state, basis: DenseBasis) -> np.ndarray:
    """Dense vector of a sparse :class:`~spinspace.fock.FockState` in ``basis``."""
    return state.with_modes(basis.modes).to_vector(basis.configs)


def random_scenarios(rng: np.random.Generator, count: int):
    """``count`` random beam splitters crossed with every statistics and sign choice."""
    from .optics import BeamSplitter
    from .scenarios import SIGN_CHOICES

    for _ in range(count):
        bs = BeamSplitter.random(rng)
        for st, signs in product(Statistics, SIGN_CHOICES):
            yield ScenarioSpec.from_signs(st, signs, bs)
