"""Command line front end.

Every subcommand reads JSON spectrum/operator files, runs one analysis and
writes a JSON (or CSV/text) artifact. Exit status is 0 on success, 2 when
the analysis runs but a checked condition fails (a JSON diagnostic names
it) and 1 for usage errors and unreadable input.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .calculus import ContourSpec, verify_lemma21
from .exceptions import (ContourError, DecompositionError, GapError, InfeasibleError,
                         RieszError, SpanError, SpectrumError)
from .functions import Constant, Polynomial, Resolvent, StripFunction
from .gaps import decompose, uniform_gap, verify_hypotheses
from .halfplane import BlaschkeProduct, separation
from .interpolation import GroupedInterpolator, PickInterpolator, sample_sup
from .riesz import (chain_groups, counterexample_study, pipeline_theorem_1_1,
                    pipeline_theorem_1_6, spectral_projection)
from .spectrum import (emit_operator, emit_spectrum, example_counterexample, example_jordan,
                       example_perturbed_skew, load_operator, load_spectrum)

CONDITIONS = [
    (GapError, "uniform gap: eigenvalues must be pairwise separated"),
    (DecompositionError, "ball decomposition: at most K points per ball and separated balls"),
    (InfeasibleError, "Pick matrix positivity for the requested bound"),
    (ContourError, "contour admissibility: max|Re lambda| < omega1 < alpha < omega"),
    (SpanError, "completeness: the chains must span the space"),
    (SpectrumError, "spectrum hypotheses"),
]


class UsageError(Exception):
    pass


class AnalysisFailure(Exception):
    def __init__(self, condition, detail, payload=None):
        super().__init__(detail)
        self.condition = condition
        self.detail = detail
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------ helpers

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _dumps(obj):
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_spectrum(path):
    try:
        return load_spectrum(_read(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_operator(path):
    try:
        return load_operator(_read(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write(args, text):
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(["" if v is None else (f"{v:.17g}" if isinstance(v, float) else v)
                         for v in row])
    return buf.getvalue()


def _emit(args, payload, rows=None):
    if args.format == "csv":
        if rows is None:
            raise UsageError(f"{args.command} has no CSV output")
        _write(args, _csv(rows))
    elif args.format == "text":
        flat = _clean(payload)
        _write(args, "".join(f"{k}: {json.dumps(flat[k], sort_keys=True)}\n" for k in sorted(flat)))
    else:
        _write(args, _dumps(payload))


def _ints(text):
    if text is None or text.strip() == "":
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma separated integers, got {text!r}") from exc


def _function(spec, alpha):
    name, _, arg = spec.partition(":")
    try:
        if name == "square":
            return Polynomial([0, 0, 1])
        if name == "resolvent":
            return Resolvent(complex(arg.replace(" ", "")))
        if name == "constant":
            return Constant(complex(arg.replace(" ", "")))
        if name == "blaschke":
            return StripFunction(BlaschkeProduct([complex(arg.replace(" ", ""))]), alpha)
    except ValueError as exc:
        raise UsageError(f"bad function argument in {spec!r}: {exc}") from exc
    raise UsageError(f"unknown function {spec!r}; use square, resolvent:Z, constant:C "
                     "or blaschke:Z")


def _operator_and_spectrum(args):
    if not args.operator or not args.spectrum:
        raise UsageError(f"{args.command} needs --operator and --spectrum")
    op = _load_operator(args.operator)
    s = _load_spectrum(args.spectrum)
    if args.alpha is not None:
        s = type(s)(s.dim, args.alpha, s.omega0, s.chains)
    return op.entries, s


def _input_spectrum(args):
    if not args.input:
        raise UsageError(f"{args.command} needs --input")
    s = _load_spectrum(args.input)
    if args.alpha is not None:
        s = type(s)(s.dim, args.alpha, s.omega0, s.chains)
    return s


# ------------------------------------------------------------ subcommands

def cmd_gap(args):
    s = _input_spectrum(args)
    values = s.multiset()[0]
    gap, pair = uniform_gap(values, return_pair=True)
    euclid, rho = separation(values + s.alpha)
    payload = {"uniform_gap": gap, "pair": list(pair),
               "pair_values": [values[pair[0]], values[pair[1]]],
               "separation_euclidean": euclid, "separation_pseudo_hyperbolic": rho}
    if not gap > 0:
        raise AnalysisFailure(CONDITIONS[0][1],
                              f"uniform gap = 0 at pair {pair} ({values[pair[0]]:.6g})", payload)
    _emit(args, payload)


def cmd_group(args):
    s = _input_spectrum(args)
    d = decompose(s.multiset()[0], args.k, args.merge_dist)
    rep = verify_hypotheses(d)
    payload = {"decomposition": d.to_dict(), "hypotheses": rep.to_dict()}
    if not rep.passed:
        raise AnalysisFailure(CONDITIONS[1][1], "ball hypotheses fail", payload)
    rows = [["group", "center_re", "center_im", "radius", "members"]]
    rows += [[n, g.center.real, g.center.imag, g.radius, " ".join(map(str, g.members))]
             for n, g in enumerate(d.groups)]
    _emit(args, payload, rows)


def cmd_interpolate(args):
    if not args.input:
        raise UsageError("interpolate needs --input")
    try:
        data = json.loads(_read(args.input))
        nodes = np.array([complex(*p) for p in data["nodes"]])
        targets = np.array([complex(*p) for p in data["targets"]])
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.input}: expected {{\"nodes\": [[re, im], ...], "
                         f"\"targets\": [[re, im], ...]}} ({exc})") from exc
    if args.grouped:
        est = GroupedInterpolator(args.merge_dist, args.c_factor).fit(nodes, targets)
        g = est.interpolant_
        payload = {"mode": "grouped", "stage_c_star": list(est.result_.stage_c_star),
                   "groups": est.decomposition_.to_dict()["groups"]}
        payload["max_derivative"] = float(np.abs(g.derivative(nodes, 1)).max())
    else:
        est = PickInterpolator(args.c_factor, args.tol).fit(nodes, targets)
        g = est.interpolant_
        payload = {"mode": "pick", "c_star": est.c_star_, "c": est.c_}
    payload["max_value_error"] = float(np.abs(g(nodes) - targets).max())
    payload["sampled_sup"] = sample_sup(g, nodes)
    if payload["max_value_error"] > args.tol or payload.get("max_derivative", 0.0) > args.tol:
        raise AnalysisFailure("interpolation conditions at the nodes",
                              "interpolant misses a node condition", payload)
    _emit(args, payload)


def _calculus_spec(args, s, a):
    default = ContourSpec.default(s, a)
    return ContourSpec(args.omega1 if args.omega1 is not None else default.omega1,
                       args.omega if args.omega is not None else default.omega,
                       args.height, args.density, args.tail)


def cmd_calculus_check(args):
    a, s = _operator_and_spectrum(args)
    f = _function(args.function, s.alpha)
    spec = _calculus_spec(args, s, a)
    rep = verify_lemma21(a, s, f, spec, tol=args.tol)
    payload = {"max_residual": rep.max_residual, "worst_chain": rep.worst_chain,
               "tol": rep.tol, "passed": rep.passed,
               "contour": {"omega1": spec.omega1, "omega": spec.omega, "R": spec.R,
                           "density": spec.nodes_per_unit, "tail": spec.tail}}
    if not rep.passed:
        raise AnalysisFailure("Taylor action of f(A) on every Jordan chain",
                              f"residual {rep.max_residual:.3g} > {args.tol:.3g}", payload)
    rows = [["chain", "vector", "residual"]] + [list(r) for r in rep.residuals]
    _emit(args, payload, rows)


def _decomposition(args, s):
    if args.k is None:
        return None
    return decompose(s.multiset()[0], args.k, args.merge_dist)


def cmd_project(args):
    a, s = _operator_and_spectrum(args)
    d = _decomposition(args, s)
    n_groups = len(chain_groups(s, d))
    subset = _ints(args.subset) if args.subset is not None else list(range(n_groups))
    mats = {}
    for method in ("exact", "contour", "interpolant"):
        try:
            mats[method] = spectral_projection(a, s, subset, d, method, height=None,
                                               density=args.density)
        except ValueError as exc:
            if method != "interpolant":
                raise
            mats[method] = None
            skipped = str(exc)
    names = [m for m in mats if mats[m] is not None]
    agreement = {f"{p}-{q}": float(np.abs(mats[p] - mats[q]).max())
                 for i, p in enumerate(names) for q in names[i + 1:]}
    payload = {"subset": subset, "n_groups": n_groups, "agreement": agreement,
               "rank": int(round(np.trace(mats["exact"]).real))}
    if mats["interpolant"] is None:
        payload["interpolant_skipped"] = skipped
    worst = max(agreement.values(), default=0.0)
    if worst > args.tol:
        raise AnalysisFailure("agreement of the three spectral projection constructions",
                              f"max disagreement {worst:.3g} > {args.tol:.3g}", payload)
    rows = [["pair", "max_abs_difference"]] + [[k, v] for k, v in sorted(agreement.items())]
    _emit(args, payload, rows)


def cmd_riesz_report(args):
    a, s = _operator_and_spectrum(args)
    if args.k is None:
        rep = pipeline_theorem_1_1(a, s, tol=args.tol, budget=args.budget, seed=args.seed,
                                   density=args.density)
        payload = {"pipeline": "simple spectrum with uniform gap"}
    else:
        rep = pipeline_theorem_1_6(a, s, args.k, args.merge_dist, tol=args.tol,
                                   budget=args.budget, seed=args.seed, density=args.density)
        payload = {"pipeline": "grouped spectrum"}
    payload.update(rep.to_dict())
    if args.csv:
        rows = [["subset", "norm", "calculus_error"]]
        rows += [[" ".join(map(str, sub)), nrm, err] for sub, nrm, err in rep.subset_rows()]
        try:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(_csv(rows))
        except OSError as exc:
            raise UsageError(f"cannot write {args.csv}: {exc.strerror}") from exc
    if not rep.passed:
        raise AnalysisFailure("agreement of calculus and exact spectral projections",
                              "projection check failed", payload)
    _emit(args, payload)


def cmd_counterexample(args):
    study = counterexample_study(args.kmax)
    payload = {"k_max": args.kmax, "final_frame_lower": study.rows[-1][2],
               "full_frame_lower": study.full_frame_lower,
               "full_frame_upper": study.full_frame_upper,
               "family_lower": study.family_lower, "family_upper": study.family_upper,
               "identity_defect": study.identity_defect, "monotone": study.monotone,
               "rows": [list(r) for r in study.rows]}
    _emit(args, payload, study.to_csv_rows())


def _jordan_blocks(text):
    blocks = []
    for part in (text or "").split(","):
        if not part.strip():
            continue
        lam, _, size = part.partition(":")
        try:
            blocks.append((complex(lam.strip().replace(" ", "")), int(size or 1)))
        except ValueError as exc:
            raise UsageError(f"bad Jordan block {part!r}; use LAMBDA:SIZE") from exc
    if not blocks:
        raise UsageError("gen jordan needs --blocks LAMBDA:SIZE,...")
    return blocks


def cmd_gen(args):
    alpha = 1.0 if args.alpha is None else args.alpha
    if args.kind == "counterexample":
        op, s = example_counterexample(args.kmax, alpha)
    elif args.kind == "perturbed-skew":
        op, s = example_perturbed_skew(args.n, args.gap, args.eps, args.seed, alpha)
    else:
        op, s = example_jordan(_jordan_blocks(args.blocks), alpha)
    if not args.out:
        raise UsageError("gen needs --out PREFIX")
    for suffix, text in ((".operator.json", emit_operator(op)),
                         (".spectrum.json", emit_spectrum(s))):
        try:
            with open(args.out + suffix, "wb") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out + suffix}: {exc.strerror}") from exc


COMMANDS = {
    "gap": cmd_gap,
    "group": cmd_group,
    "interpolate": cmd_interpolate,
    "calculus-check": cmd_calculus_check,
    "project": cmd_project,
    "riesz-report": cmd_riesz_report,
    "counterexample": cmd_counterexample,
    "gen": cmd_gen,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="spectrum JSON (interpolate: nodes/targets JSON)")
    common.add_argument("--operator", help="operator JSON")
    common.add_argument("--spectrum", help="spectrum JSON")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--k", type=int, default=None, help="max points per ball")
    common.add_argument("--merge-dist", type=float, default=0.5)
    common.add_argument("--alpha", type=float, default=None, help="override the strip half-width")
    common.add_argument("--omega1", type=float, default=None)
    common.add_argument("--omega", type=float, default=None)
    common.add_argument("--height", type=float, default=200.0, help="contour truncation R")
    common.add_argument("--density", type=int, default=20, help="nodes per unit panel")
    common.add_argument("--budget", type=int, default=4096, help="subsets in the Wermer scan")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-6)

    parser = _Parser(prog="rieszcalc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True
    sub.add_parser("gap", parents=[common], help="uniform gap and separation")
    sub.add_parser("group", parents=[common], help="ball decomposition")
    p = sub.add_parser("interpolate", parents=[common], help="Pick or grouped interpolation")
    p.add_argument("--grouped", action="store_true")
    p.add_argument("--c-factor", type=float, default=1.2)
    p = sub.add_parser("calculus-check", parents=[common], help="contour calculus on chains")
    p.add_argument("--function", default="square",
                   help="square, resolvent:Z, constant:C or blaschke:Z")
    p.add_argument("--tail", choices=("truncate", "map", "close"), default="close",
                   help="how the contour lines are completed beyond the height R")
    p = sub.add_parser("project", parents=[common], help="spectral projections, all methods")
    p.add_argument("--subset", default=None, help="comma separated group indices")
    p = sub.add_parser("riesz-report", parents=[common], help="Riesz basis / family report")
    p.add_argument("--csv", default=None, help="write per-subset norms here")
    p = sub.add_parser("counterexample", parents=[common], help="frame collapse study")
    p.add_argument("--kmax", type=int, default=200)
    p = sub.add_parser("gen", parents=[common], help="write corpus files PREFIX.*.json")
    p.add_argument("kind", choices=("counterexample", "perturbed-skew", "jordan"))
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--gap", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--blocks", default=None, help="LAMBDA:SIZE,... for jordan")
    return parser


def _validate(args):
    for name in ("tol", "merge_dist", "height"):
        if not getattr(args, name) > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if args.density < 2:
        raise UsageError("--density must be at least 2")
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    if args.k is not None and args.k < 1:
        raise UsageError("--k must be at least 1")
    if args.command == "group" and args.k is None:
        args.k = 2
    if args.command == "counterexample" and args.kmax < 1:
        raise UsageError("--kmax must be at least 1")


def run(args):
    """Dispatch parsed arguments; returns the exit status."""
    try:
        _validate(args)
        COMMANDS[args.command](args)
        return 0
    except UsageError as exc:
        sys.stderr.write(f"rieszcalc {args.command}: {exc}\n")
        return 1
    except AnalysisFailure as exc:
        diag = {"status": "failed", "condition": exc.condition, "detail": exc.detail}
        if exc.payload is not None:
            diag["result"] = exc.payload
        _write(args, _dumps(diag))
        sys.stderr.write(f"rieszcalc {args.command}: {exc.condition}: {exc.detail}\n")
        return 2
    except RieszError as exc:
        condition = next((c for cls, c in CONDITIONS if isinstance(exc, cls)),
                         "numerical analysis")
        diag = {"status": "failed", "condition": condition, "detail": str(exc)}
        pair = getattr(exc, "pair", None)
        if pair is not None:
            diag["pair"] = list(pair)
        _write(args, _dumps(diag))
        sys.stderr.write(f"rieszcalc {args.command}: {condition}: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"rieszcalc {args.command}: {exc}\n")
        return 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
