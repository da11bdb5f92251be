import functools

import pytest

from virmod import WeightWindow, act, build_intermediate, build_verma, dual
from virmod.scalars import ZERO, gr_parse

GRID_A = ("0", "1/2", "1/3", "1/2i")
GRID_B = (-1, 0, 1, 2)

ACCEPTANCE_LINES = []


def window_for(a, kmin=-10, kmax=10, margin=5):
    return WeightWindow(gr_parse(a) if isinstance(a, str) else a, kmin, kmax, margin)


@functools.lru_cache(maxsize=None)
def aab(a: str, b: int):
    return build_intermediate("Aab", gr_parse(a), b, window=window_for(a))


@functools.lru_cache(maxsize=None)
def grid_realizations():
    """The criterion-3 family: (name, realization) pairs."""
    out = []
    for a in GRID_A:
        for b in GRID_B:
            out.append((f"A({a},{b})", aab(a, b)))
    out.append(("A(3)", build_intermediate("Aa", 3, window=window_for("0"))))
    out.append(("B(1)", build_intermediate("Ba", 1, window=window_for("0"))))
    out.append(("M(0)", verma_on_grid(0)))
    out.append(("M(1)", verma_on_grid(1)))
    out.append(("M*(0)", verma_on_grid(0, "lowest")))
    for a in GRID_A:
        for b in GRID_B:
            out.append((f"dual A({a},{b})", dual(aab(a, b))))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def verma_on_grid(lam, sign="highest", depth=8):
    return build_verma(lam, 0, depth, sign, window=window_for("0"))


def apply_word(M, word, v):
    """Act factor by factor, rightmost generator first; None once a weight is unreliable."""
    for i in reversed(word):
        if not M.reliable(v.k + i):
            return None
        v = act(M, i, v)
    return v


def apply_uea(M, x, v):
    """Act with a PBW element term by term, the central element acting by ``M.central``."""
    degrees = {m.degree() for m in x.terms}
    assert len(degrees) <= 1
    total = [ZERO] * M.dim(v.k + (degrees.pop() if degrees else 0))
    for mono, coeff in x.terms.items():
        w = apply_word(M, mono.word, v)
        scale = coeff
        for _ in range(mono.central_power):
            scale = scale * M.central
        total = [t + scale * c for t, c in zip(total, w.coords)]
    return tuple(total)


def record_acceptance(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def m0():
    return verma_on_grid(0)
