"""Window-truncated realizations of Virasoro weight modules.

A realization lives on the weight lattice ``offset + Z``.  Weight index ``k``
stands for the weight ``offset + k``.  Every construction carries an interior
window ``[kmin, kmax]`` and a margin; action matrices are stored for every
weight in the extended window ``[kmin - margin, kmax + margin]``.  Weights
where the stored data is known to be incomplete (for instance Verma levels
deeper than the requested depth) are listed in ``truncated``.

Only generator indices with ``|i| <= max_index`` are realized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .algebra import _insert
from .linalg import Matrix, Subspace, block_diag
from .scalars import GaussianRational, ONE, ZERO, gr, gr_format

__all__ = [
    "WeightWindow",
    "VectorInModule",
    "ModuleRealization",
    "SubspaceFamily",
    "normalize_offset",
    "partitions",
    "build_intermediate",
    "build_verma",
    "act",
    "direct_sum",
    "dual",
    "submodule_generated",
    "quotient",
    "restrict",
    "dimensions",
    "SPANNING_GENERATORS",
]

DEFAULT_MAX_INDEX = 6
SPANNING_GENERATORS = (-2, -1, 0, 1, 2)


def normalize_offset(a) -> Tuple[GaussianRational, int]:
    """Split ``a`` as ``offset + shift`` with ``0 <= Re(offset) < 1`` and integer ``shift``."""
    a = gr(a)
    shift = math.floor(a.re)
    return a - shift, shift


@dataclass(frozen=True)
class WeightWindow:
    offset: GaussianRational
    kmin: int
    kmax: int
    margin: int = 5

    def __post_init__(self):
        off = gr(self.offset)
        object.__setattr__(self, "offset", off)
        if not (0 <= off.re < 1):
            raise ValueError(f"window offset must satisfy 0 <= Re < 1, got {off}")
        if self.kmin > self.kmax:
            raise ValueError(f"empty window {self.kmin}..{self.kmax}")
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")

    @property
    def ext_min(self) -> int:
        return self.kmin - self.margin

    @property
    def ext_max(self) -> int:
        return self.kmax + self.margin

    def interior(self) -> range:
        return range(self.kmin, self.kmax + 1)

    def extended(self) -> range:
        return range(self.ext_min, self.ext_max + 1)

    def in_interior(self, k: int) -> bool:
        return self.kmin <= k <= self.kmax

    def in_extended(self, k: int) -> bool:
        return self.ext_min <= k <= self.ext_max

    def compatible(self, other: "WeightWindow") -> bool:
        return self == other


@dataclass(frozen=True)
class VectorInModule:
    """A weight vector: weight index ``k`` and coordinates in the weight-space basis."""

    k: int
    coords: Tuple[GaussianRational, ...]
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(gr(c) for c in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True, eq=False)
class ModuleRealization:
    window: WeightWindow
    dims: Dict[int, int]
    actions: Dict[Tuple[int, int], Matrix]
    central: GaussianRational = ZERO
    truncated: FrozenSet[int] = frozenset()
    labels: Optional[Dict[int, Tuple[str, ...]]] = None
    max_index: int = DEFAULT_MAX_INDEX
    name: str = ""
    n_parts: int = 1
    ambient: Optional[Dict[int, Matrix]] = field(default=None, repr=False)

    @property
    def offset(self) -> GaussianRational:
        return self.window.offset

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def weight(self, k: int) -> GaussianRational:
        return self.offset + k

    def reliable(self, k: int) -> bool:
        return self.window.in_extended(k) and k not in self.truncated

    def action(self, i: int, k: int) -> Matrix:
        """Matrix of ``L_i`` from weight index ``k`` to ``k + i``."""
        if abs(i) > self.max_index:
            raise ValueError(f"L_{i} is beyond the realized generator range |i| <= {self.max_index}")
        w = self.window
        if not (w.in_extended(k) and w.in_extended(k + i)):
            raise ValueError(f"L_{i} at weight index {k} leaves the extended window {w.ext_min}..{w.ext_max}")
        m = self.actions.get((i, k))
        if m is None:
            return Matrix.zeros(self.dim(k + i), self.dim(k))
        return m

    def label(self, k: int, j: int) -> str:
        if self.labels and k in self.labels:
            return self.labels[k][j]
        return f"e{j}@{k}"

    def basis_vector(self, k: int, j: int = 0) -> VectorInModule:
        n = self.dim(k)
        if not 0 <= j < n:
            raise IndexError(f"no basis vector {j} at weight index {k} (dim {n})")
        return VectorInModule(k, tuple(ONE if t == j else ZERO for t in range(n)))

    def with_action(self, i: int, k: int, m: Matrix) -> "ModuleRealization":
        """Copy with one action matrix replaced (used for fault injection)."""
        if m.shape != (self.dim(k + i), self.dim(k)):
            raise ValueError("replacement matrix has the wrong shape")
        actions = dict(self.actions)
        actions[(i, k)] = m
        return replace(self, actions=actions)

    def to_dict(self) -> dict:
        w = self.window
        out = {
            "name": self.name,
            "window": {"offset": gr_format(w.offset), "kmin": w.kmin, "kmax": w.kmax, "margin": w.margin},
            "central": gr_format(self.central),
            "max_index": self.max_index,
            "dims": {str(k): self.dim(k) for k in w.extended()},
            "truncated": sorted(self.truncated),
            "actions": [
                {"i": i, "k": k, "rows": [[gr_format(x) for x in r] for r in m.rows]}
                for (i, k), m in sorted(self.actions.items())
                if m.nrows and m.ncols
            ],
        }
        if self.labels:
            out["labels"] = {str(k): list(v) for k, v in sorted(self.labels.items()) if v}
        return out


@dataclass(frozen=True)
class SubspaceFamily:
    """Per-weight subspaces; ``spaces[k]`` holds a basis as matrix columns."""

    spaces: Dict[int, Matrix]
    truncated: bool = False

    def dim(self, k: int) -> int:
        m = self.spaces.get(k)
        return m.ncols if m is not None else 0

    def dims(self) -> Dict[int, int]:
        return {k: m.ncols for k, m in sorted(self.spaces.items())}

    def subspace(self, k: int, n: int) -> Subspace:
        m = self.spaces.get(k)
        return Subspace(n, m.columns() if m is not None else ())


# ---------------------------------------------------------------------------
# constructions


def _fill_actions(window: WeightWindow, dims: Dict[int, int], max_index: int, entry) -> Dict:
    actions = {}
    for k in window.extended():
        if not dims.get(k):
            continue
        for i in range(-max_index, max_index + 1):
            t = k + i
            if window.in_extended(t) and dims.get(t):
                actions[(i, k)] = entry(i, k)
    return actions


def build_intermediate(kind: str, a, b=None, window: Optional[WeightWindow] = None,
                       max_index: int = DEFAULT_MAX_INDEX) -> ModuleRealization:
    """Intermediate-series module ``A_{a,b}`` (``kind="Aab"``), ``A(a)`` (``"Aa"``) or ``B(a)`` (``"Ba"``).

    All weight spaces are one-dimensional with basis ``x_k`` and ``C`` acts by zero:

    * ``A_{a,b}``: ``L_i x_k = (a + k + b i) x_{i+k}``
    * ``A(a)``: ``L_i x_k = (i + k) x_{i+k}`` for ``k != 0``, ``L_i x_0 = i (i + a) x_i``
    * ``B(a)``: ``L_i x_k = k x_{i+k}`` for ``k != -i``, ``L_i x_{-i} = -i (i + a) x_0``

    For ``A_{a,b}`` the window offset must agree with ``a`` modulo integers;
    weight index ``k`` then holds ``x_{k - shift}`` where ``a = offset + shift``.
    """
    a = gr(a)
    if kind == "Aab":
        if b is None:
            raise ValueError("A_{a,b} needs b")
        b = gr(b)
        offset, shift = normalize_offset(a)
        name = f"A({gr_format(a)},{gr_format(b)})"
    elif kind in ("Aa", "Ba"):
        offset, shift = ZERO, 0
        name = f"{'A' if kind == 'Aa' else 'B'}exc({gr_format(a)})"
    else:
        raise ValueError(f"unknown intermediate-series kind {kind!r}")
    if window is None:
        window = WeightWindow(offset, -10, 10, 5)
    elif window.offset != offset:
        raise ValueError(f"window offset {window.offset} is inconsistent with {name} (needs {offset})")

    def coeff(i: int, k: int) -> GaussianRational:
        if kind == "Aab":
            return offset + k + b * i
        if kind == "Aa":
            return i * (i + a) if k == 0 else gr(i + k)
        return -i * (i + a) if k == -i else gr(k)

    dims = {k: 1 for k in window.extended()}
    actions = _fill_actions(window, dims, max_index, lambda i, k: Matrix._raw(((coeff(i, k),),), 1, 1))
    labels = {k: (f"x{k - shift}",) for k in window.extended()}
    return ModuleRealization(window, dims, actions, ZERO, frozenset(), labels, max_index, name)


def partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of ``n`` in lexicographically decreasing order."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first,) + rest for rest in partitions(n - first, first))
    return out


@lru_cache(maxsize=None)
def _partition_index(n: int) -> Dict[Tuple[int, ...], int]:
    return {p: j for j, p in enumerate(partitions(n))}


def _verma_action(lam: GaussianRational, h: GaussianRational, i: int, n: int) -> Matrix:
    """``L_i`` from level ``n`` to level ``n - i`` of the highest-weight Verma module ``M(lam, h)``."""
    src = partitions(n)
    target_level = n - i
    tgt = _partition_index(target_level)
    cols = []
    for p in src:
        col = [ZERO] * len(tgt)
        word = tuple(-x for x in p)
        for (w, cpow), coeff in _insert(i, word):
            if w and w[-1] > 0:
                continue  # a positive generator reaches the highest-weight vector first
            zeros = sum(1 for x in w if x == 0)
            s = gr(coeff)
            if zeros:
                s = s * _power(lam, zeros)
            if cpow:
                s = s * _power(h, cpow)
            if s:
                j = tgt[tuple(-x for x in w if x < 0)]
                col[j] = col[j] + s
        cols.append(col)
    return Matrix.from_columns(cols, len(tgt))


def _power(x: GaussianRational, e: int) -> GaussianRational:
    out = ONE
    for _ in range(e):
        out = out * x
    return out


def _sign_diag(n: int) -> Tuple[int, ...]:
    return tuple(-1 if len(p) % 2 else 1 for p in partitions(n))


def build_verma(lam, h=0, depth: int = 8, sign: str = "highest", window: Optional[WeightWindow] = None,
                max_index: int = DEFAULT_MAX_INDEX) -> ModuleRealization:
    """Verma module ``M(lam)`` (``sign="highest"``) or anti-Verma ``M_*(lam)`` (``sign="lowest"``).

    Level ``n`` has the PBW basis ``L_{-p_1} ... L_{-p_r} v`` indexed by the
    partitions ``p`` of ``n`` in lexicographically decreasing order.  Levels past
    ``depth`` are cut off and their weights flagged as truncated.

    The lowest-weight module is the twist of ``M(-lam, -h)`` by the automorphism
    ``L_i -> -L_{-i}, C -> -C``, with basis ``L_{p_1} ... L_{p_r} w``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if sign not in ("highest", "lowest"):
        raise ValueError("sign must be 'highest' or 'lowest'")
    lam, h = gr(lam), gr(h)
    offset, extreme = normalize_offset(lam)
    highest = sign == "highest"
    if window is None:
        window = WeightWindow(offset, extreme - depth, extreme, 5) if highest else WeightWindow(offset, extreme, extreme + depth, 5)
    elif window.offset != offset:
        raise ValueError(f"window offset {window.offset} is inconsistent with highest weight {lam}")

    def level(k: int) -> int:
        return extreme - k if highest else k - extreme

    dims, truncated, labels = {}, set(), {}
    for k in window.extended():
        n = level(k)
        if n < 0:
            continue
        if n > depth:
            truncated.add(k)
            continue
        ps = partitions(n)
        dims[k] = len(ps)
        if highest:
            labels[k] = tuple(" ".join([f"L{-x}" for x in p] + ["v"]) for p in ps)
        else:
            labels[k] = tuple(" ".join([f"L{x}" for x in p] + ["w"]) for p in ps)

    src_lam, src_h = (lam, h) if highest else (-lam, -h)

    def entry(i: int, k: int) -> Matrix:
        n = level(k)
        if highest:
            return _verma_action(src_lam, src_h, i, n)
        # twisted: L_i acts as -L_{-i} of M(-lam, -h), in the basis rescaled by (-1)^{#parts}
        m = _verma_action(src_lam, src_h, -i, n)
        s_src, s_tgt = _sign_diag(n), _sign_diag(n + i)
        return Matrix._raw(
            tuple(tuple(-x * (s_tgt[r] * s_src[c]) if x else x for c, x in enumerate(row)) for r, row in enumerate(m.rows)),
            m.nrows, m.ncols,
        )

    actions = _fill_actions(window, dims, max_index, entry)
    name = f"{'verma' if highest else 'antiverma'}({gr_format(lam)},h={gr_format(h)},depth={depth})"
    return ModuleRealization(window, dims, actions, h, frozenset(truncated), labels, max_index, name)


def act(M: ModuleRealization, i: int, v: VectorInModule) -> VectorInModule:
    """Apply ``L_i`` to ``v``.  Leaving the extended window gives an empty, truncated vector."""
    if len(v.coords) != M.dim(v.k):
        raise ValueError(f"vector has {len(v.coords)} coordinates, weight space {v.k} has dimension {M.dim(v.k)}")
    t = v.k + i
    if not M.window.in_extended(t):
        return VectorInModule(t, (), truncated=True)
    coords = M.action(i, v.k) @ v.coords
    return VectorInModule(t, coords, truncated=v.truncated or t in M.truncated or v.k in M.truncated)


def direct_sum(parts: Sequence[ModuleRealization], tags: Optional[Sequence[str]] = None) -> ModuleRealization:
    if not parts:
        raise ValueError("direct sum of nothing")
    window = parts[0].window
    for p in parts[1:]:
        if p.window.offset != window.offset:
            raise ValueError(f"incompatible offsets {window.offset} and {p.window.offset}")
        if not p.window.compatible(window):
            raise ValueError("direct summands must share the same window and margin")
        if p.central != parts[0].central:
            raise ValueError("direct summands must share the central charge")
    tags = list(tags) if tags is not None else [f"p{j}" for j in range(len(parts))]
    max_index = min(p.max_index for p in parts)
    dims = {k: sum(p.dim(k) for p in parts) for k in window.extended()}
    dims = {k: d for k, d in dims.items() if d}

    def entry(i: int, k: int) -> Matrix:
        return block_diag([p.action(i, k) for p in parts])

    actions = _fill_actions(window, dims, max_index, entry)
    labels = {
        k: tuple(f"{tag}:{p.label(k, j)}" for tag, p in zip(tags, parts) for j in range(p.dim(k)))
        for k in dims
    }
    truncated = frozenset().union(*(p.truncated for p in parts))
    name = "sum(" + ";".join(p.name for p in parts) + ")"
    return ModuleRealization(window, dims, actions, parts[0].central, truncated, labels, max_index, name,
                             sum(p.n_parts for p in parts))


def dual(M: ModuleRealization) -> ModuleRealization:
    """Graded dual: ``L_i`` at weight ``k`` is the transpose of ``L_{-i}`` at weight ``k + i``."""
    dims = dict(M.dims)
    actions = _fill_actions(M.window, dims, M.max_index, lambda i, k: M.action(-i, k + i).T())
    labels = {k: tuple(f"{s}*" for s in v) for k, v in (M.labels or {}).items()}
    return ModuleRealization(M.window, dims, actions, M.central, M.truncated, labels, M.max_index,
                             f"dual({M.name})", M.n_parts)


def submodule_generated(M: ModuleRealization, seeds: Iterable[VectorInModule],
                        generators: Sequence[int] = SPANNING_GENERATORS) -> SubspaceFamily:
    """Smallest family of weight subspaces containing ``seeds`` and closed under ``generators``.

    ``L_{-2}, L_{-1}, L_1, L_2`` generate the whole algebra, so closure under them
    (inside the extended window) is closure under the module action.
    """
    spaces: Dict[int, Subspace] = {}
    queue: List[Tuple[int, tuple]] = []
    truncated = False

    def push(k: int, coords) -> None:
        sp = spaces.get(k)
        if sp is None:
            sp = spaces[k] = Subspace(M.dim(k))
        if sp.add(coords):
            queue.append((k, tuple(coords)))

    for v in seeds:
        if len(v.coords) != M.dim(v.k):
            raise ValueError("seed does not match the weight-space dimension")
        if not M.window.in_extended(v.k):
            raise ValueError(f"seed weight {v.k} is outside the extended window")
        if v.k in M.truncated:
            truncated = True
        push(v.k, v.coords)

    while queue:
        k, coords = queue.pop()
        for i in generators:
            t = k + i
            if not M.window.in_extended(t):
                truncated = True
                continue
            if t in M.truncated:
                truncated = True
            if not M.dim(t):
                continue
            image = M.action(i, k) @ coords
            if any(image):
                push(t, image)

    family = {k: sp.as_matrix() for k, sp in sorted(spaces.items()) if sp.dim}
    return SubspaceFamily(family, truncated)


def _check_invariant(M: ModuleRealization, S: SubspaceFamily) -> None:
    w = M.window
    for k in w.interior():
        basis = S.spaces.get(k)
        if basis is None or not basis.ncols:
            continue
        for i in (-2, -1, 1, 2):
            t = k + i
            if not w.in_extended(t) or t in M.truncated:
                continue
            target = S.subspace(t, M.dim(t))
            for col in basis.columns():
                if not target.contains(M.action(i, k) @ col):
                    raise ValueError(f"subspace family is not invariant: L_{i} at weight index {k} leaves it")


def _margin_band(w: WeightWindow) -> FrozenSet[int]:
    return frozenset(k for k in w.extended() if not w.in_interior(k))


def quotient(M: ModuleRealization, S: SubspaceFamily) -> ModuleRealization:
    """Quotient by an invariant family, in the basis of non-pivot coordinate vectors."""
    _check_invariant(M, S)
    subs = {k: S.subspace(k, M.dim(k)) for k in M.window.extended()}
    keep = {k: subs[k].complement_columns() for k in subs}
    dims = {k: len(v) for k, v in keep.items() if v}

    def entry(i: int, k: int) -> Matrix:
        A = M.action(i, k)
        cols = [subs[k + i].complement_coordinates(A.column(j)) for j in keep[k]]
        return Matrix.from_columns(cols, len(keep[k + i]))

    actions = _fill_actions(M.window, dims, M.max_index, entry)
    labels = {k: tuple(M.label(k, j) for j in keep[k]) for k in dims}
    truncated = M.truncated | (_margin_band(M.window) if S.truncated else frozenset())
    return ModuleRealization(M.window, dims, actions, M.central, truncated, labels, M.max_index,
                             f"{M.name}/S", M.n_parts)


def _combo_label(M: ModuleRealization, k: int, col) -> str:
    terms = []
    for j, c in enumerate(col):
        if c:
            cs = gr_format(c)
            lab = M.label(k, j)
            terms.append(lab if c == 1 else f"({cs})*{lab}")
    return " + ".join(terms) if terms else "0"


def restrict(M: ModuleRealization, S: SubspaceFamily) -> ModuleRealization:
    """The sub-realization on an invariant family, with its basis columns as basis.

    Where the family is not closed (weights past the window where spanning was
    cut off) the image is projected onto the family and the target weight is
    flagged as truncated.
    """
    _check_invariant(M, S)
    subs = {k: S.subspace(k, M.dim(k)) for k in S.spaces}
    bases = {k: sp.basis() for k, sp in subs.items()}
    dims = {k: len(b) for k, b in bases.items() if b}
    leaks = set()

    def entry(i: int, k: int) -> Matrix:
        A = M.action(i, k)
        target = subs[k + i]
        piv = target.pivots()
        cols = []
        for b in bases[k]:
            image = A @ b
            if not target.contains(image):
                leaks.add(k + i)
            cols.append(tuple(image[p] for p in piv))
        return Matrix.from_columns(cols, len(piv))

    actions = _fill_actions(M.window, dims, M.max_index, entry)
    labels = {k: tuple(_combo_label(M, k, b) for b in bases[k]) for k in dims}
    ambient = {k: Matrix.from_columns(bases[k], M.dim(k)) for k in dims}
    truncated = M.truncated | frozenset(leaks) | (_margin_band(M.window) if S.truncated else frozenset())
    return ModuleRealization(M.window, dims, actions, M.central, truncated, labels, M.max_index,
                             f"sub({M.name})", M.n_parts, ambient)


def dimensions(M: ModuleRealization) -> Dict[int, int]:
    return {k: M.dim(k) for k in M.window.interior()}
