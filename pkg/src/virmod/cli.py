"""Command-line front end.

Exit status: 0 on success, 1 on misuse or malformed input, 2 when a
mathematical check fails (axiom violations, a module that is not simple, no
invertible intertwiner).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from . import analysis as an
from .algebra import bracket, parse_lie, parse_uea
from .modules import (
    ModuleRealization,
    VectorInModule,
    WeightWindow,
    act,
    build_intermediate,
    build_verma,
    dimensions,
    direct_sum,
    dual,
    normalize_offset,
)
from .scalars import ZERO, gr_format, gr_parse

GRAMMAR = """\
module specs:
  A:a=<scalar>,b=<scalar>          intermediate series A_{a,b}
  Aexc:a=<scalar>                  A(a)
  Bexc:a=<scalar>                  B(a)
  verma:lambda=<scalar>,h=<scalar>[,depth=<n>]
  antiverma:lambda=<scalar>,h=<scalar>[,depth=<n>]
  dual(<spec>)
  sum(<spec>;<spec>;...)
scalars: <rational>[(+|-)<rational>i], e.g. 1/2, -3, 1/2-3/4i, 2i
elements: terms "[coeff*] L<k> L<k> ... C" joined by + or -, e.g. "L1 L-1 - 2*L0";
  complex coefficients go in parentheses: "(1/2+1i)*L2"
environment: VIRMOD_MAX_WORD caps generators per word (default 8),
  VIRMOD_MAX_TERMS caps terms during normal ordering (default 200000)"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{GRAMMAR}\n")
        sys.exit(1)


@dataclass
class CommandConfig:
    subcommand: str
    module_specs: List[str] = field(default_factory=list)
    window: tuple = (-10, 10)
    margin: int = 5
    gen_range: int = 3
    depth: int = 8
    output_format: str = "text"
    out: Optional[str] = None


# ---------------------------------------------------------------------------
# module spec mini-language


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _params(body: str, allowed, required) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq or key not in allowed:
            raise ValueError(f"bad parameter {item!r}; allowed: {', '.join(allowed)}")
        out[key] = val.strip()
    missing = [k for k in required if k not in out]
    if missing:
        raise ValueError(f"missing parameter(s) {', '.join(missing)}")
    return out


def spec_offset(spec: str):
    """The lattice offset a module spec lives on, without building it."""
    spec = spec.strip()
    m = re.fullmatch(r"(dual|sum)\((.*)\)", spec, re.S)
    if m:
        return spec_offset(_split_top(m.group(2), ";")[0])
    kind, _, body = spec.partition(":")
    if kind == "A":
        return normalize_offset(gr_parse(_params(body, ("a", "b"), ("a", "b"))["a"]))[0]
    if kind in ("verma", "antiverma"):
        return normalize_offset(gr_parse(_params(body, ("lambda", "h", "depth"), ("lambda",))["lambda"]))[0]
    if kind in ("Aexc", "Bexc"):
        return ZERO
    raise ValueError(f"unknown module spec {spec!r}")


def build_module(spec: str, window: WeightWindow, depth: int) -> ModuleRealization:
    spec = spec.strip()
    m = re.fullmatch(r"(dual|sum)\((.*)\)", spec, re.S)
    if m:
        inner = [s for s in _split_top(m.group(2), ";")]
        if m.group(1) == "dual":
            if len(inner) != 1:
                raise ValueError("dual(...) takes exactly one spec")
            return dual(build_module(inner[0], window, depth))
        return direct_sum([build_module(s, window, depth) for s in inner])
    kind, _, body = spec.partition(":")
    if kind == "A":
        p = _params(body, ("a", "b"), ("a", "b"))
        return build_intermediate("Aab", gr_parse(p["a"]), gr_parse(p["b"]), window=window)
    if kind in ("Aexc", "Bexc"):
        p = _params(body, ("a",), ("a",))
        return build_intermediate("Aa" if kind == "Aexc" else "Ba", gr_parse(p["a"]), window=window)
    if kind in ("verma", "antiverma"):
        p = _params(body, ("lambda", "h", "depth"), ("lambda",))
        d = int(p.get("depth", depth))
        return build_verma(gr_parse(p["lambda"]), gr_parse(p.get("h", "0")), d,
                           "highest" if kind == "verma" else "lowest", window=window)
    raise ValueError(f"unknown module spec {spec!r}")


def _window(text: str):
    m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", text)
    if m is None:
        raise argparse.ArgumentTypeError(f"window must look like -10..10, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return (lo, hi)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _coords(text: str):
    return tuple(gr_parse(s) for s in text.split(",")) if text.strip() else ()


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, text, exit status)


def _modules(cfg: CommandConfig, count: int) -> List[ModuleRealization]:
    if len(cfg.module_specs) != count:
        raise UsageError(f"{cfg.subcommand} needs exactly {count} --module option(s)")
    out = []
    for spec in cfg.module_specs:
        window = WeightWindow(spec_offset(spec), cfg.window[0], cfg.window[1], cfg.margin)
        out.append(build_module(spec, window, cfg.depth))
    return out


def _vector(M: ModuleRealization, k: Optional[int], coords: Optional[str]) -> VectorInModule:
    if k is None:
        raise UsageError("--k is required")
    if not M.window.in_extended(k):
        raise ValueError(f"weight index {k} is outside the extended window")
    if coords is None:
        return M.basis_vector(k, 0)
    v = VectorInModule(k, _coords(coords))
    if len(v.coords) != M.dim(k):
        raise ValueError(f"--coords has {len(v.coords)} entries, weight space {k} has dimension {M.dim(k)}")
    return v


def _vec_text(v: VectorInModule) -> str:
    return f"k={v.k}: [" + ", ".join(gr_format(c) for c in v.coords) + "]" + (" (truncated)" if v.truncated else "")


def cmd_bracket(cfg, args):
    x, y = parse_lie(args.x), parse_lie(args.y)
    z = bracket(x, y)
    return {"bracket": str(z)}, str(z), 0


def cmd_normal_order(cfg, args):
    result = parse_uea(args.factors[0])
    for f in args.factors[1:]:
        result = result * parse_uea(f)
    return {"normalForm": str(result)}, str(result), 0


def cmd_act(cfg, args):
    (M,) = _modules(cfg, 1)
    v = _vector(M, args.k, args.coords)
    w = act(M, args.gen, v)
    return {"input": an.vector_to_dict(v), "result": an.vector_to_dict(w), "truncated": w.truncated}, _vec_text(w), 0


def cmd_dims(cfg, args):
    (M,) = _modules(cfg, 1)
    dims = dimensions(M)
    known = [k for k in sorted(dims, reverse=True) if k not in M.truncated]
    support = [k for k in known if dims[k]]
    shown = [k for k in known if support and support[-1] <= k <= support[0]]
    text = " ".join(str(dims[k]) for k in shown)
    trunc = sorted(k for k in dims if k in M.truncated)
    if trunc:
        sys.stderr.write(f"note: weight indices {trunc[0]}..{trunc[-1]} are truncated\n")
    payload = {
        "module": M.name,
        "dims": {str(k): d for k, d in sorted(dims.items())},
        "truncated": trunc,
        "listed": [[k, dims[k]] for k in shown],
    }
    return payload, text, 0


def cmd_check_axioms(cfg, args):
    (M,) = _modules(cfg, 1)
    violations = an.check_axioms(M, cfg.gen_range)
    payload = {"module": M.name, "violations": [v.to_dict() for v in violations], "ok": not violations}
    if violations:
        text = "\n".join(f"violation: i={v.i} j={v.j} k={v.k} {v.detail}" for v in violations)
    else:
        text = f"ok: no violations (gen range {cfg.gen_range})"
    return payload, text, 2 if violations else 0


def cmd_primitive(cfg, args):
    (M,) = _modules(cfg, 1)
    v = _vector(M, args.k, args.coords)
    verdict = an.primitivity(M, v)
    d = verdict.to_dict()
    return {"vector": an.vector_to_dict(v), **d}, "\n".join(f"{k}: {str(x).lower()}" for k, x in d.items()), 0


def cmd_simple(cfg, args):
    (M,) = _modules(cfg, 1)
    simple = an.is_simple_window(M)
    return {"module": M.name, "simple": simple, "windowLimited": True}, f"simple: {str(simple).lower()}", 0 if simple else 2


def cmd_intertwiner(cfg, args):
    M, N = _modules(cfg, 2)
    T = an.find_intertwiner(M, N)
    if T is None:
        return {"intertwiner": None, "invertible": False}, "no nonzero intertwiner", 2
    diag = {k: m for k, m in T.per_weight.items() if m.nrows == m.ncols == 1}
    lines = [f"invertible: {str(T.invertible).lower()}", f"solution space dimension: {T.solution_dim}"]
    if len(diag) == len(T.per_weight):
        lines.append("components: " + " ".join(f"{k}:{gr_format(m[0, 0])}" for k, m in sorted(diag.items())))
    return {"intertwiner": T.to_dict(), "invertible": T.invertible}, "\n".join(lines), 0 if T.invertible else 2


def _report_text(r: an.ClassificationReport) -> str:
    lines = [f"verdict: {r.verdict}"]
    if r.bound is not None:
        lines.append(f"N = {r.bound}")
    if r.top_index is not None:
        lines.append(f"top index: {r.top_index}")
    if r.bottom_index is not None:
        lines.append(f"bottom index: {r.bottom_index}")
    for w in r.witnesses:
        lines.append(f"witness: {_vec_text(w)}")
    lines.append("window-limited: " + str(r.window_limited).lower())
    lines.extend(f"note: {n}" for n in r.notes)
    return "\n".join(lines)


def cmd_classify(cfg, args):
    (M,) = _modules(cfg, 1)
    r = an.classify(M, args.bound)
    return {"module": M.name, **r.to_dict()}, _report_text(r), 0


def paper_example_command(a, window: WeightWindow, depth: int) -> dict:
    """Build the mixed example module and collect every diagnostic on it."""
    if a.is_integer():
        raise ValueError(f"the example uses A(a) with non-integral a; got a = {gr_format(a)}")
    V = an.build_paper_example(a, window, depth)
    v0 = V.basis_vector(0, 0)
    verdict = an.primitivity(V, v0)
    witness = an.detect_trivial_factor(V)
    report = an.classify(V)
    dims = dimensions(V)
    summary = (
        f"V is the submodule of M(0) + M*(0) + A({gr_format(a)}) generated by v0 = {V.labels[0][0]}. "
        f"On weights {window.kmin}..{window.kmax} its dimensions are "
        + " ".join(str(dims[k]) for k in sorted(dims))
        + f". v0 is {'' if verdict.primitive else 'not '}primitive and {'' if verdict.anti_primitive else 'not '}anti-primitive, "
        f"{'' if verdict.strongly_primitive else 'not '}strongly primitive and "
        f"{'' if verdict.strongly_anti_primitive else 'not '}strongly anti-primitive. "
        + (f"The trivial module V(0) appears as a composition factor, witnessed at weight {witness.k} by v0; "
           "it is the top factor." if witness is not None else "No trivial composition factor was found on the window. ")
        + f" Verdict: {report.verdict} (window-limited)."
    )
    return {
        "a": gr_format(a),
        "window": {"kmin": window.kmin, "kmax": window.kmax, "margin": window.margin},
        "depth": depth,
        "v0": {"k": 0, "ambient": [gr_format(x) for x in V.ambient[0].column(0)], "label": V.labels[0][0]},
        "dims": {str(k): d for k, d in sorted(dims.items())},
        "truncated": sorted(V.truncated),
        "primitivity": verdict.to_dict(),
        "trivialFactor": None if witness is None else an.vector_to_dict(witness),
        "classification": report.to_dict(),
        "summary": summary,
    }


def cmd_paper_example(cfg, args):
    a = gr_parse(args.a)
    window = WeightWindow(ZERO, cfg.window[0], cfg.window[1], cfg.margin)
    bundle = paper_example_command(a, window, cfg.depth)
    return bundle, bundle["summary"], 0


COMMANDS = {
    "bracket": cmd_bracket,
    "normal-order": cmd_normal_order,
    "act": cmd_act,
    "dims": cmd_dims,
    "check-axioms": cmd_check_axioms,
    "primitive": cmd_primitive,
    "simple": cmd_simple,
    "intertwiner": cmd_intertwiner,
    "classify": cmd_classify,
    "paper-example": cmd_paper_example,
}


def make_parser() -> argparse.ArgumentParser:
    defaults = CommandConfig("")

    def common_options() -> argparse.ArgumentParser:
        # a fresh parent per subcommand: set_defaults on one subparser would
        # otherwise rewrite the defaults of the shared option objects
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--module", action="append", default=[], dest="module_specs", metavar="SPEC",
                            help="module spec (see grammar below); repeat for two-module commands")
        common.add_argument("--window", type=_window, default=defaults.window, metavar="KMIN..KMAX",
                            help="interior window of weight indices (default: -10..10)")
        common.add_argument("--margin", type=_nonneg, default=defaults.margin, help="extra weights on each side (default: 5)")
        common.add_argument("--gen-range", type=int, default=defaults.gen_range, help="|i|,|j| bound for axiom checks (default: 3)")
        common.add_argument("--depth", type=_positive, default=defaults.depth, help="Verma depth when a module spec omits it (default: 8)")
        common.add_argument("--format", choices=("text", "json"), default=defaults.output_format, dest="output_format",
                            help="output format (default: text)")
        common.add_argument("--out", default=None, help="write output to this file instead of stdout")
        return common

    parser = _Parser(prog="virmod", description="Exact computations with Virasoro weight modules.",
                     epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common_options()], help=help_, epilog=GRAMMAR,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("bracket", "Lie bracket of two elements")
    p.add_argument("x")
    p.add_argument("y")
    p = add("normal-order", "PBW normal form of a product of elements")
    p.add_argument("factors", nargs="+")
    p = add("act", "apply L_i to a weight vector")
    p.add_argument("--gen", type=int, required=True, help="generator index i")
    p.add_argument("--k", type=int, help="weight index of the vector")
    p.add_argument("--coords", help="comma-separated coordinates (default: first basis vector)")
    add("dims", "weight-space dimensions, listed from the highest weight down")
    add("check-axioms", "verify the commutator identities exactly")
    p = add("primitive", "primitivity verdict for a weight vector")
    p.add_argument("--k", type=int)
    p.add_argument("--coords")
    add("simple", "simplicity test for multiplicity-free realizations")
    add("intertwiner", "search for a module map between two realizations")
    p = add("classify", "four-way classification diagnostic")
    p.add_argument("--bound", type=_positive, default=None, help="uniform-bound threshold (default: 4 per summand)")
    p = add("paper-example", "build and analyse the example module containing every kind of composition factor (defaults: --window -6..6 --depth 6)")
    p.add_argument("--a", default="1/2", help="parameter of A(a), non-integral (default: 1/2)")
    for name in ("paper-example",):
        sub.choices[name].set_defaults(window=(-6, 6), depth=6)
    return parser


def _glue_negative_values(argv: List[str]) -> List[str]:
    # "--window -10..10" would otherwise read -10..10 as an option
    out, t = [], 0
    while t < len(argv):
        a = argv[t]
        if a in ("--window", "--coords", "--a", "--k", "--gen") and t + 1 < len(argv) and argv[t + 1].startswith("-"):
            out.append(f"{a}={argv[t + 1]}")
            t += 2
            continue
        out.append(a)
        t += 1
    return out


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = make_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)
    cfg = CommandConfig(args.subcommand, args.module_specs, args.window, args.margin, args.gen_range,
                        args.depth, args.output_format, args.out)
    try:
        payload, text, status = COMMANDS[cfg.subcommand](cfg, args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, ZeroDivisionError, IndexError, MemoryError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if cfg.output_format == "json":
        rendered = json.dumps({"command": cfg.subcommand, "status": status, **payload}, indent=2) + "\n"
    else:
        rendered = text + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(rendered)
    else:
        stdout.write(rendered)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
