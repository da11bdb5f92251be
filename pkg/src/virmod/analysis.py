"""Exact diagnostics on window realizations: module axioms, primitive vectors,
simplicity of intermediate-series modules, intertwiners, trivial composition
factors and the four-way classification of indecomposable modules.

Every answer is about the interior window only.  Anything that depended on
weights outside the extended window, or on truncated weights, is reported as
window-limited rather than as a global fact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Matrix, Subspace, nullspace, rank, vstack
from .modules import (
    ModuleRealization,
    SubspaceFamily,
    VectorInModule,
    WeightWindow,
    act,
    build_intermediate,
    build_verma,
    direct_sum,
    restrict,
    submodule_generated,
)
from .scalars import GaussianRational, ONE, ZERO, gr, gr_format

__all__ = [
    "Violation",
    "PrimitivityVerdict",
    "ClassificationReport",
    "IntertwinerMap",
    "check_axioms",
    "primitivity",
    "strongly_primitive_space",
    "injectivity_diagnostic",
    "is_simple_window",
    "find_intertwiner",
    "detect_trivial_factor",
    "classify",
    "build_paper_example",
    "vector_to_dict",
]


def vector_to_dict(v: VectorInModule) -> dict:
    return {"k": v.k, "coords": [gr_format(c) for c in v.coords]}


# ---------------------------------------------------------------------------
# module axioms


@dataclass(frozen=True)
class Violation:
    """The commutator identity failed for ``(L_i, L_j)`` at weight index ``k``."""

    i: int
    j: int
    k: int
    detail: str = ""

    def matrices(self) -> frozenset:
        """The ``(generator, weight index)`` action matrices the identity reads."""
        return _identity_matrices(self.i, self.j, self.k)

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "k": self.k, "detail": self.detail}


def _identity_matrices(i: int, j: int, k: int) -> frozenset:
    if i == j == 0:
        return frozenset({(0, k)})
    return frozenset({(j, k), (i, k + j), (i, k), (j, k + i), (i + j, k)})


def check_axioms(M: ModuleRealization, gen_range: int = 3, weights: Optional[Sequence[int]] = None,
                 involving: Optional[Tuple[int, int]] = None) -> List[Violation]:
    """Check ``[L_i, L_j] = (j-i) L_{i+j} + (i^3-i)/12 delta_{i,-j} h`` on the interior window.

    Pairs with ``|i|, |j| <= gen_range`` are checked at every interior weight
    ``k`` for which ``k, k+i, k+j, k+i+j`` are all reliable.  ``L_0`` is also
    checked to act by the weight.  ``weights`` restricts the checked ``k``;
    ``involving=(x, w)`` keeps only identities that use the matrix of ``L_x``
    at weight index ``w`` (a cheap re-check after editing that one matrix).
    """
    if gen_range < 2:
        raise ValueError("gen_range must be at least 2")
    if 2 * gen_range > M.max_index:
        raise ValueError(f"gen_range {gen_range} needs generators up to {2 * gen_range}, realized up to {M.max_index}")
    ks = list(M.window.interior()) if weights is None else [k for k in weights if M.window.in_interior(k)]
    out: List[Violation] = []
    for k in ks:
        if not M.reliable(k) or not M.dim(k) or (involving is not None and involving != (0, k)):
            continue
        if M.action(0, k) != Matrix.scalar(M.dim(k), M.weight(k)):
            out.append(Violation(0, 0, k, "L_0 does not act by the weight"))
    for k in ks:
        if not M.reliable(k):
            continue
        for i in range(-gen_range, gen_range + 1):
            for j in range(i + 1, gen_range + 1):
                if not all(M.reliable(t) for t in (k + i, k + j, k + i + j)):
                    continue
                if involving is not None and involving not in _identity_matrices(i, j, k):
                    continue
                n_src, n_tgt = M.dim(k), M.dim(k + i + j)
                if not n_src or not n_tgt:
                    continue
                lhs = M.action(i, k + j) @ M.action(j, k) - M.action(j, k + i) @ M.action(i, k)
                rhs = M.action(i + j, k).scale(j - i)
                if i == -j:
                    cc = Fraction(i ** 3 - i, 12)
                    if cc and M.central:
                        rhs = rhs + Matrix.scalar(n_src, M.central * cc)
                if lhs != rhs:
                    bad = (lhs - rhs).nonzero_entries()
                    out.append(Violation(i, j, k, f"{len(bad)} mismatched entries, first at {bad[0]}"))
    return out


# ---------------------------------------------------------------------------
# primitive vectors


@dataclass(frozen=True)
class PrimitivityVerdict:
    strongly_primitive: bool
    primitive: bool
    strongly_anti_primitive: bool
    anti_primitive: bool
    window_limited: bool

    def to_dict(self) -> dict:
        return {
            "stronglyPrimitive": self.strongly_primitive,
            "primitive": self.primitive,
            "stronglyAntiPrimitive": self.strongly_anti_primitive,
            "antiPrimitive": self.anti_primitive,
            "windowLimited": self.window_limited,
        }


def _one_side(M: ModuleRealization, v: VectorInModule, sign: int) -> Tuple[bool, bool, bool]:
    images = [act(M, sign * i, v) for i in (1, 2)]
    limited = any(im.truncated for im in images)
    strongly = all(im.is_zero() for im in images) and not limited
    seeds = [im for im in images if im.coords and not im.is_zero()]
    if not seeds:
        return strongly, not limited, limited
    S = submodule_generated(M, seeds)
    inside = S.subspace(v.k, M.dim(v.k)).contains(v.coords)
    # a negative answer may be an artifact of the window; a positive one is exact
    return strongly, not inside, limited or (S.truncated and not inside)


def primitivity(M: ModuleRealization, v: VectorInModule) -> PrimitivityVerdict:
    """Strong primitivity uses ``L_1, L_2`` (they generate the positive part); primitivity
    asks whether ``v`` lies in the submodule generated by ``L_1 v, L_2 v``.  The anti
    versions use ``L_{-1}, L_{-2}``."""
    if v.is_zero():
        raise ValueError("primitivity is defined for nonzero vectors")
    sp, p, lim_p = _one_side(M, v, 1)
    sap, ap, lim_a = _one_side(M, v, -1)
    return PrimitivityVerdict(sp, p, sap, ap, lim_p or lim_a or v.k in M.truncated)


def strongly_primitive_space(M: ModuleRealization, k: int) -> Matrix:
    """Basis (as columns) of the common kernel of ``L_1`` and ``L_2`` on weight space ``k``."""
    if not M.window.in_interior(k):
        raise ValueError(f"weight index {k} is outside the interior window")
    n = M.dim(k)
    blocks = [M.action(i, k) for i in (1, 2) if M.window.in_extended(k + i)]
    stacked = vstack(blocks, n) if blocks else Matrix.zeros(0, n)
    return Matrix.from_columns(nullspace(stacked), n)


def injectivity_diagnostic(M: ModuleRealization, lambda_index: int, k: int) -> bool:
    """True iff ``ker L_k`` and ``ker L_{k+1}`` meet trivially on weight space ``lambda_index - k``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    src = lambda_index - k
    for t in (src, lambda_index, lambda_index + 1):
        if not M.window.in_extended(t):
            raise ValueError(f"weight index {t} is outside the extended window")
    n = M.dim(src)
    stacked = vstack([M.action(k, src), M.action(k + 1, src)], n)
    return rank(stacked) == n


# ---------------------------------------------------------------------------
# simplicity and intertwiners


def is_simple_window(M: ModuleRealization) -> bool:
    """Every nonzero weight vector regenerates the whole interior dims profile.

    Only meaningful for multiplicity-free realizations; higher multiplicities are rejected.
    """
    interior = list(M.window.interior())
    if any(M.dim(k) > 1 for k in interior):
        raise ValueError("simplicity test needs all interior weight spaces of dimension <= 1")
    for k in interior:
        if not M.dim(k):
            continue
        S = submodule_generated(M, [M.basis_vector(k)])
        if any(S.dim(t) != M.dim(t) for t in interior):
            return False
    return True


@dataclass(frozen=True)
class IntertwinerMap:
    per_weight: Dict[int, Matrix]
    invertible: bool
    solution_dim: int = 1

    def to_dict(self) -> dict:
        return {
            "invertible": self.invertible,
            "solutionDim": self.solution_dim,
            "perWeight": {str(k): [[gr_format(x) for x in r] for r in m.rows] for k, m in sorted(self.per_weight.items())},
        }


def find_intertwiner(M: ModuleRealization, N: ModuleRealization) -> Optional[IntertwinerMap]:
    """Solve ``T L_i = L_i T`` (``i = +-1, +-2``) for ``T: M -> N`` on the interior window.

    Returns a solution of maximal rank (normalized so its first nonzero entry is 1),
    or None when only the zero map exists.
    """
    if M.window != N.window:
        raise ValueError("intertwiner search needs identical windows")
    ks = [k for k in M.window.interior() if M.dim(k) and N.dim(k)]
    index: Dict[Tuple[int, int, int], int] = {}
    for k in ks:
        for r in range(N.dim(k)):
            for c in range(M.dim(k)):
                index[(k, r, c)] = len(index)
    nvar = len(index)
    if not nvar:
        return None
    equations = []
    interior = M.window
    for k in interior.interior():
        for i in (1, 2, -1, -2):
            t = k + i
            if not interior.in_interior(t):
                continue
            A_M, A_N = M.action(i, k), N.action(i, k)
            # (A_N T_k - T_t A_M)[r, c] = 0 for r in N_t, c in M_k
            for r in range(N.dim(t)):
                for c in range(M.dim(k)):
                    row: Dict[int, GaussianRational] = {}
                    for s in range(N.dim(k)):
                        x = A_N[r, s]
                        if x and (k, s, c) in index:
                            j = index[(k, s, c)]
                            row[j] = row.get(j, ZERO) + x
                    for s in range(M.dim(t)):
                        x = A_M[s, c]
                        if x and (t, r, s) in index:
                            j = index[(t, r, s)]
                            row[j] = row.get(j, ZERO) - x
                    if any(row.values()):
                        equations.append(tuple(row.get(j, ZERO) for j in range(nvar)))
    system = Matrix._raw(tuple(equations), len(equations), nvar)
    basis = nullspace(system)
    if not basis:
        return None

    def assemble(vec) -> Dict[int, Matrix]:
        out = {}
        for k in M.window.interior():
            out[k] = Matrix._raw(
                tuple(tuple(vec[index[(k, r, c)]] if (k, r, c) in index else ZERO for c in range(M.dim(k)))
                      for r in range(N.dim(k))),
                N.dim(k), M.dim(k),
            )
        return out

    def ranks(maps):
        return {k: rank(m) for k, m in maps.items()}

    # the rank of a combination is maximal for all but finitely many parameters t;
    # sum_k min(dims) * (dim - 1) + 1 trials are enough to hit a good one
    caps = {k: min(M.dim(k), N.dim(k)) for k in M.window.interior()}
    trials = sum(caps.values()) * (len(basis) - 1) + 1
    best, best_score = None, -1
    for t in range(1, trials + 1):
        vec = [ZERO] * nvar
        for e, b in enumerate(basis):
            w = t ** e
            for j, x in enumerate(b):
                if x:
                    vec[j] = vec[j] + x * w
        maps = assemble(vec)
        rk = ranks(maps)
        score = sum(rk.values())
        if score > best_score:
            best, best_score = vec, score
        if all(rk[k] == caps[k] for k in rk):
            break
    pivot = next(x for x in best if x)
    inv = pivot.inverse()
    best = [x * inv for x in best]
    maps = assemble(best)
    invertible = all(
        m.nrows == m.ncols and rank(m) == m.nrows for m in maps.values()
    )
    return IntertwinerMap(maps, invertible, len(basis))


# ---------------------------------------------------------------------------
# trivial composition factor and classification


def _seeds_around(M: ModuleRealization, v: VectorInModule) -> List[VectorInModule]:
    seeds = []
    for i in (-2, -1, 1, 2):
        im = act(M, i, v)
        if im.coords and not im.is_zero():
            seeds.append(im)
    return seeds


def detect_trivial_factor(M: ModuleRealization) -> Optional[VectorInModule]:
    """A weight-0 vector ``v`` outside the submodule generated by ``L_{+-1} v, L_{+-2} v``.

    Such a ``v`` spans a one-dimensional subquotient on which everything acts by
    zero, i.e. a trivial composition factor.  Basis vectors are tried first; then
    any vector outside the submodule generated from all weight-0 basis vectors.
    """
    if M.offset != 0 or not M.window.in_interior(0) or not M.dim(0):
        return None
    n = M.dim(0)
    for j in range(n):
        v = M.basis_vector(0, j)
        S = submodule_generated(M, _seeds_around(M, v))
        if not S.subspace(0, n).contains(v.coords):
            return v
    seeds = [s for j in range(n) for s in _seeds_around(M, M.basis_vector(0, j))]
    span = submodule_generated(M, seeds).subspace(0, n)
    free = span.complement_columns()
    if free:
        return M.basis_vector(0, free[0])
    return None


VERDICTS = ("UniformlyBounded", "CategoryO", "CategoryOMinus", "ContainsTrivialFactor", "Undetermined")


@dataclass
class ClassificationReport:
    verdict: str
    dim_profile: Dict[int, int]
    witnesses: List[VectorInModule] = field(default_factory=list)
    window_limited: bool = True
    bound: Optional[int] = None
    top_index: Optional[int] = None
    bottom_index: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "bound": self.bound,
            "topIndex": self.top_index,
            "bottomIndex": self.bottom_index,
            "dimProfile": {str(k): d for k, d in sorted(self.dim_profile.items())},
            "witnesses": [vector_to_dict(v) for v in self.witnesses],
            "windowLimited": self.window_limited,
            "notes": list(self.notes),
        }


def classify(M: ModuleRealization, bound_threshold: Optional[int] = None) -> ClassificationReport:
    """Window diagnostic for the four alternatives for an indecomposable module.

    Precedence: trivial composition factor, then Category O / O^-, then uniformly
    bounded.  Weights are ordered by their integer index on ``offset + Z``.
    Truncated weights count as occupied, since their true content is unknown.
    """
    if bound_threshold is None:
        bound_threshold = 4 * M.n_parts
    w = M.window
    interior = list(w.interior())
    profile = {k: M.dim(k) for k in interior}
    occupied = [k for k in interior if profile[k] or k in M.truncated]
    notes = ["weights compared by integer index on the lattice offset + Z"]
    report = ClassificationReport("Undetermined", profile, notes=notes)
    if not occupied:
        notes.append("zero module on the interior window")
        return report

    top, bottom = max(occupied), min(occupied)
    shape = None
    if top < w.kmax and bottom > w.kmin:
        shape = "finite"
    elif top < w.kmax:
        shape = "O"
    elif bottom > w.kmin:
        shape = "O-"

    witness = detect_trivial_factor(M)
    if witness is not None:
        report.verdict = "ContainsTrivialFactor"
        report.witnesses = [witness]
        if shape in ("O", "finite"):
            report.top_index = top
            notes.append(f"also in Category O on the window (top index {top})")
        if shape in ("O-", "finite"):
            report.bottom_index = bottom
            notes.append(f"also in Category O- on the window (bottom index {bottom})")
        return report
    if shape in ("O", "finite"):
        report.verdict = "CategoryO"
        report.top_index = top
        if shape == "finite":
            report.bottom_index = bottom
            notes.append("support is finite on the window, so also Category O-")
        return report
    if shape == "O-":
        report.verdict = "CategoryOMinus"
        report.bottom_index = bottom
        return report
    reliable = [k for k in interior if k not in M.truncated]
    peak = max(profile[k] for k in reliable) if reliable else 0
    if peak <= bound_threshold and all(profile[k] for k in reliable):
        report.verdict = "UniformlyBounded"
        report.bound = peak
        return report
    notes.append(f"max interior dimension {peak} exceeds bound threshold {bound_threshold}" if peak > bound_threshold
                 else "support has gaps inside the window")
    return report


# ---------------------------------------------------------------------------
# the mixed example: submodule of M(0) + M_*(0) + A(a) generated by v'_0 + v''_0 + x_0


def build_paper_example(a, window: Optional[WeightWindow] = None, depth: int = 6) -> ModuleRealization:
    a = gr(a)
    if window is None:
        window = WeightWindow(ZERO, -6, 6, 5)
    if window.offset != 0:
        raise ValueError("the example lives on integral weights: window offset must be 0")
    verma = build_verma(0, 0, depth, "highest", window)
    anti = build_verma(0, 0, depth, "lowest", window)
    inter = build_intermediate("Aa", a, window=window)
    total = direct_sum([verma, anti, inter], tags=["M(0)", "M*(0)", f"A({gr_format(a)})"])
    if total.dim(0) != 3:
        raise AssertionError("expected a three-dimensional weight-0 space in the direct sum")
    seed = VectorInModule(0, (ONE, ONE, ONE))
    S = submodule_generated(total, [seed])
    V = restrict(total, S)
    return replace(V, name=f"V(a={gr_format(a)},depth={depth})")
