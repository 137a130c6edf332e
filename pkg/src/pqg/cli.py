"""Command line front end: ``pqg <verb> [inputs] [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import corep as cr
from . import partial_hopf as ph
from . import presentations as pr
from . import tannaka as tk
from . import walks as wk
from .report import VerificationReport, jsonable
from .scalars import ScalarError, as_scalar

VERBS = ("verify", "build-tannaka", "walk", "present", "corep-report", "characters")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# input

def _reject_float(text):
    raise ph.SchemaError("", f"decimal float literal {text} is not exact; write it as a quoted p/q string")


def load_json(path) -> dict:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(raw, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ph.SchemaError("", f"invalid JSON: {exc}") from None


def parse_document(doc):
    """Typed object for a JSON document, dispatched on its ``kind`` field."""
    if not isinstance(doc, dict):
        raise ph.SchemaError("", "top level must be an object")
    kind = doc.get("kind")
    if kind == "report" and "result" in doc:
        try:
            return parse_document(doc["result"])
        except ph.SchemaError as exc:
            raise ph.SchemaError("/result" + exc.path, exc.message) from None
    if kind == "partial_hopf":
        return ph.from_json(doc)
    if kind == "fiber":
        return tk.fiber_from_json(doc)
    if kind == "walk" or (kind is None and "edges" in doc and "t" in doc):
        return wk.walk_from_json(doc)
    if kind == "presentation":
        return pr.presentation_from_json(doc)
    raise ph.SchemaError("/kind", f"unknown schema {kind!r}")


def parse_spec(path):
    return parse_document(load_json(path))


def to_document(obj) -> dict:
    if isinstance(obj, ph.PartialHopfData):
        return ph.to_json(obj)
    if isinstance(obj, tk.FiberData):
        return tk.fiber_to_json(obj)
    if isinstance(obj, wk.ReciprocalWalk):
        return wk.walk_to_json(obj)
    if isinstance(obj, pr.Presentation):
        return obj.to_json()
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# reports

@dataclass
class Report:
    verb: str
    inputs: list
    options: dict
    sections: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    result: dict | None = None
    elapsed: float = 0.0

    def add(self, rep: VerificationReport):
        self.sections.append(rep)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.sections)

    def to_json(self) -> dict:
        out = {"kind": "report", "tool": "pqg", "version": __version__,
               "command": {"verb": self.verb, "inputs": list(self.inputs), "options": self.options},
               "ok": self.failures == 0, "failures": self.failures,
               "reports": [r.to_json() for r in self.sections]}
        if self.tables:
            out["tables"] = jsonable(self.tables)
        if self.result is not None:
            out["result"] = self.result
        return out


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return dumps(report.to_json()).encode("utf-8")
    lines = [f"pqg {__version__} {report.verb} {' '.join(report.inputs)}".rstrip()]
    for rep in report.sections:
        lines.append(f"== {rep.name} ({rep.failures} failures)")
        for axiom in rep.axioms:
            res = rep.result(axiom)
            counts = ", ".join(f"{k}={v}" for k, v in sorted(res.counts.items()))
            lines.append(f"  {res.status.upper():<18} {axiom}  [{counts}]")
            for w in res.witnesses[:3] if res.failed else ():
                lines.append(f"      witness: {json.dumps(jsonable(w), ensure_ascii=False)}")
    for name, table in report.tables.items():
        lines.append(f"-- {name}")
        lines.append("  " + json.dumps(jsonable(table), ensure_ascii=False))
    lines.append(f"result: {'PASS' if report.failures == 0 else 'FAIL'} ({report.failures} failures)")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# argument parsing

def _window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("window must look like LO:HI")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("window bounds must be integers") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("empty window")
    return lo, hi


def _scalar(text: str):
    try:
        return as_scalar(text)
    except (ScalarError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _zlist(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("--z takes comma-separated integers") from None


def _degree(text: str):
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("degree must be an integer") from None
    if d < 0:
        raise argparse.ArgumentTypeError("degree must be nonnegative")
    return d


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pqg", description="Exact checks for partial compact quantum groups.")
    parser.add_argument("--version", action="version", version=f"pqg {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def common(p):
        p.add_argument("-o", "--output", help="write the main JSON document here")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("verify", help="run every applicable verifier on an input file")
    p.add_argument("input")
    p.add_argument("--degree", type=_degree, help="degree bound (required for presentations)")
    common(p)

    p = sub.add_parser("build-tannaka", help="reconstruct partial Hopf data from fiber data")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("walk", help="build or validate a reciprocal random walk")
    p.add_argument("source", help="'podles', 'one-vertex' or a walk JSON file")
    p.add_argument("--q", type=_scalar)
    p.add_argument("--x", type=_scalar)
    p.add_argument("--window", type=_window)
    common(p)

    p = sub.add_parser("present", help="build the presentation of a walk algebra")
    p.add_argument("input", nargs="?", help="walk or presentation JSON")
    p.add_argument("--check-hopf", action="store_true", help="check that Δ, ε, S and * respect the relations")
    p.add_argument("--dynamical", action="store_true", help="dynamical SU(2) relations on a Podleś window")
    p.add_argument("--degree", type=_degree)
    p.add_argument("--q", type=_scalar)
    p.add_argument("--x", type=_scalar)
    p.add_argument("--window", type=_window)
    common(p)

    p = sub.add_parser("corep-report", help="irreducibles, orthogonality and Peter-Weyl checks")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("characters", help="the Woronowicz characters f_z")
    p.add_argument("input")
    p.add_argument("--z", type=_zlist, default=[-1, 0, 1])
    common(p)
    return parser


# --------------------------------------------------------------------------
# dispatch

def _hopf_for(obj, report: Report):
    """Partial Hopf data for a data or fiber input, recording fiber checks on the way."""
    if isinstance(obj, ph.PartialHopfData):
        return obj, None
    if isinstance(obj, tk.FiberData):
        rep = tk.validate_fiber_data(obj)
        report.add(rep)
        if not rep.ok:
            return None, None
        out = tk.reconstruct(obj, check=False)
        return out.data, out
    raise UsageError("this verb needs partial Hopf data or fiber data")


def _irreps(data, out):
    if out is not None:
        return list(tk.canonical_coreps(out).values())
    return cr.find_irreducibles(data)


def _matrix(m):
    return [[str(x) for x in row] for row in m]


def run_verify(args, report: Report):
    obj = parse_spec(args.input)
    if isinstance(obj, pr.Presentation):
        if args.degree is None:
            raise UsageError("--degree is required for presentations")
        report.add(pr.check_hopf_wellposed(obj, args.degree))
        return
    if isinstance(obj, wk.ReciprocalWalk):
        report.add(wk.validate_walk(obj))
        report.add(wk.verify_conjugate_equations(obj, wk.build_r_map(obj)))
        return
    data, out = _hopf_for(obj, report)
    if data is None:
        return
    report.add(ph.verify_all(data))
    if out is not None:
        dim = VerificationReport("dimension")
        brute = tk.brute_force_dimension(obj)
        dim.record("brute-force-count", brute == data.dim, {"reconstructed": data.dim, "brute-force": brute})
        report.add(dim)
        report.add(tk.roundtrip_check(out))


def run_build_tannaka(args, report: Report):
    obj = parse_spec(args.input)
    if not isinstance(obj, tk.FiberData):
        raise UsageError("build-tannaka needs fiber data")
    data, out = _hopf_for(obj, report)
    if data is None:
        return
    report.add(ph.verify_all(data))
    dim = VerificationReport("dimension")
    brute = tk.brute_force_dimension(obj)
    dim.record("brute-force-count", brute == data.dim, {"reconstructed": data.dim, "brute-force": brute})
    report.add(dim)
    report.add(tk.roundtrip_check(out))
    report.tables["dimension"] = data.dim
    report.result = ph.to_json(data)


def run_walk(args, report: Report):
    src = args.source
    if src == "podles":
        missing = [f for f in ("q", "x", "window") if getattr(args, f) is None]
        if missing:
            raise UsageError("the Podleś template needs " + ", ".join("--" + m for m in missing))
        walk = wk.podles_walk(args.q, args.x, args.window)
    elif src == "one-vertex":
        if args.q is None:
            raise UsageError("the one-vertex template needs --q")
        walk = wk.one_vertex_walk(args.q)
    else:
        obj = parse_spec(src)
        if not isinstance(obj, wk.ReciprocalWalk):
            raise UsageError("walk needs 'podles', 'one-vertex' or a walk JSON file")
        walk = obj
    report.add(wk.validate_walk(walk))
    report.add(wk.verify_conjugate_equations(walk, wk.build_r_map(walk)))
    if all(e.color is not None for e in walk.edges.values()):
        try:
            report.add(wk.color_walk(walk).report)
        except wk.ColoringError as exc:
            bad = VerificationReport("coloring")
            bad.record("coloring", False, {"error": str(exc)})
            report.add(bad)
    report.result = wk.walk_to_json(walk)


def run_present(args, report: Report):
    if args.dynamical:
        missing = [f for f in ("q", "x", "window", "degree") if getattr(args, f) is None]
        if missing:
            raise UsageError("--dynamical needs " + ", ".join("--" + m for m in missing))
        report.add(pr.dynamical_su2_report(args.q, args.x, args.window, args.degree))
        return
    if args.input is None:
        raise UsageError("present needs a walk or presentation file")
    obj = parse_spec(args.input)
    if isinstance(obj, wk.ReciprocalWalk):
        p = pr.build_presentation(obj)
    elif isinstance(obj, pr.Presentation):
        p = obj
    else:
        raise UsageError("present needs a walk or presentation file")
    if args.check_hopf:
        if args.degree is None:
            raise UsageError("--check-hopf needs --degree")
        report.add(pr.check_hopf_wellposed(p, args.degree))
    report.tables["presentation"] = {
        "generators": len(p.generators),
        "relations": len(p.relations),
        "assertable": sum(1 for r in p.relations if r.assertable)}
    report.result = p.to_json()


def run_corep_report(args, report: Report):
    obj = parse_spec(args.input)
    data, out = _hopf_for(obj, report)
    if data is None:
        return
    irreps = _irreps(data, out)
    tables = {}
    for X in irreps:
        report.add(cr.verify_corep(X))
        gi = cr.generalized_inverse_report(X)
        gi.name = f"generalized inverse {X.name}"
        report.add(gi)
        du = cr.dual_report(X)
        du.name = f"dual {X.name}"
        report.add(du)
        md = cr.modular_data(X)
        tables[X.name] = {
            "dims": {f"{k},{l}": d for (k, l), d in X.space.dims.items() if d},
            "F": {f"{k},{l}": _matrix(md["F"].block(k, l)) for (k, l) in X.space.blocks()},
            "G": {f"{k},{l}": _matrix(md["G"].block(k, l)) for (k, l) in X.space.blocks()},
            "d_F": md["dF"], "d_G": md["dG"]}
    for i, X in enumerate(irreps):
        for Y in irreps[i:]:
            report.add(cr.schur_report(X, Y))
    report.add(cr.peter_weyl_report(data, irreps))
    report.tables["irreducibles"] = tables


def run_characters(args, report: Report):
    obj = parse_spec(args.input)
    data, out = _hopf_for(obj, report)
    if data is None:
        return
    irreps = _irreps(data, out)
    table = cr.woronowicz_characters(data, irreps, args.z)
    report.add(table.report)
    report.tables["characters"] = {k: v for k, v in table.to_json().items() if k != "report"}


_RUNNERS = {
    "verify": run_verify,
    "build-tannaka": run_build_tannaka,
    "walk": run_walk,
    "present": run_present,
    "corep-report": run_corep_report,
    "characters": run_characters,
}


def _options(args) -> dict:
    skip = {"verb", "input", "source", "output", "format"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None or v is False:
            continue
        if isinstance(v, tuple):
            v = f"{v[0]}:{v[1]}"
        out[k.replace("_", "-")] = jsonable(v)
    return out


def run(args) -> Report:
    inputs = [x for x in (getattr(args, "input", None), getattr(args, "source", None)) if x]
    report = Report(args.verb, inputs, _options(args))
    start = time.perf_counter()
    _RUNNERS[args.verb](args, report)
    report.elapsed = time.perf_counter() - start
    return report


_VALUE_FLAGS = {"--window", "--z", "--q", "--x", "--degree"}


def _join_negative_values(argv: list) -> list:
    """``--window -8:8`` → ``--window=-8:8`` so argparse does not read the value as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        report = run(args)
    except (UsageError, ph.SchemaError, ScalarError, wk.WalkError, tk.FiberError, pr.PresentationError) as exc:
        where = f" at {exc.path}" if isinstance(exc, ph.SchemaError) and exc.path else ""
        msg = exc.message if isinstance(exc, ph.SchemaError) else str(exc)
        print(f"pqg: error{where}: {msg}", file=sys.stderr)
        return 2
    body = emit(report, args.format)
    if args.output and report.result is not None:
        Path(args.output).write_text(dumps(report.result), encoding="utf-8")
    elif args.output:
        Path(args.output).write_bytes(body)
    sys.stdout.buffer.write(body)
    sys.stdout.flush()
    print(f"pqg: {args.verb} finished in {report.elapsed:.2f}s", file=sys.stderr)
    return 0 if report.failures == 0 else 1
