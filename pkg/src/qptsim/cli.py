"""Command-line front end.

Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure.
Every failure prints one line ``ERROR <module>:<code>: <message>`` on stderr.
"""
import argparse
import dataclasses
import json
import math
import sys
import warnings

from . import circuit, effective as eff, scan, verify
from .errors import NumericalError, QptsimError, ValidationError
from .models import FrameSpec, ModelParams


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message, module="cli", code="usage")


def _read_config(path, cls, extra=()):
    """Load a JSON object whose keys must be fields of ``cls`` (or in ``extra``)."""
    if not path:
        raise ValidationError("config path is empty", module="cli", code="bad_config")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", module="cli",
                              code="bad_config") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}", module="cli",
                              code="bad_config") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path} must hold a JSON object", module="cli", code="bad_config")
    allowed = {f.name for f in dataclasses.fields(cls)} | set(extra)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValidationError(f"unknown config keys {unknown}; allowed: {sorted(allowed)}",
                              module="cli", code="unknown_key")
    return data


def _construct(cls, data):
    try:
        return cls(**data)
    except TypeError as exc:
        raise ValidationError(str(exc), module="cli", code="bad_config") from None


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    if not out:
        raise ValidationError("output path is empty", module="cli", code="bad_output")
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {out}: {exc.strerror}", module="cli",
                              code="bad_output") from None


def _json(obj):
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v
    return json.dumps({k: clean(v) for k, v in obj.items()}, indent=2) + "\n"


def _sig6(x):
    return None if x is None else float(f"{x:.6g}")


# --- subcommands ----------------------------------------------------------------

def cmd_effective(args):
    c = eff.Couplings(args.lambda_x, args.lambda_y, args.ratio, args.omega_r)
    out = {"lambda_x": c.lambda_x, "lambda_y": c.lambda_y, "ratio": c.ratio,
           "omega_r": c.omega_r}
    if args.model == "one_qubit":
        gs = eff.ground_state(c)
        out.update(phase=str(gs.phase), epsilon_G=_sig6(gs.epsilon_G), n_G=_sig6(gs.n_G),
                   gap=_sig6(eff.analytic_gap(c)))
        if gs.phase in (eff.PhaseLabel.SUPERRADIANT_X, eff.PhaseLabel.SUPERRADIANT_Y,
                        eff.PhaseLabel.U1_LINE):
            fr = eff.superradiant_frame(c)
            out.update(alpha_re=_sig6(fr.alpha.real), alpha_im=_sig6(fr.alpha.imag),
                       squeezing_r=_sig6(fr.r_tilde))
        elif gs.phase is eff.PhaseLabel.NORMAL:
            b = eff.bogoliubov(eff.normal_effective(c), c)
            out.update(squeezing_r=_sig6(b.r))
    elif args.model == "two_qubit":
        lv = eff.two_qubit_levels(c.lambda_x, c.lambda_y, c.omega_q)
        gap = eff.two_qubit_gap(c.lambda_x, c.lambda_y, c.omega_r)
        out.update(regime=lv.regime, Lambda_1=_sig6(lv.Lambda_1), Lambda_2=_sig6(lv.Lambda_2),
                   gap=_sig6(gap.value), stable=gap.stable, boundary=gap.boundary)
    else:
        if abs(c.lambda_x - c.lambda_y) > 1e-12:
            raise ValidationError("the N-qubit gap needs lambda_x = lambda_y",
                                  module="cli", code="bad_couplings")
        gap = eff.n_qubit_gap(c.lambda_x, args.n_qubits, c.omega_r)
        out.update(n_qubits=args.n_qubits, branch=gap.formula_branch, gap=_sig6(gap.value),
                   stable=gap.stable, boundary=gap.boundary)
    _emit(_json(out), args.out)


def cmd_spectrum(args):
    if args.config:
        params = _construct(ModelParams, _read_config(args.config, ModelParams))
    elif args.lambda_x is not None and args.ratio is not None:
        ly = args.lambda_x if args.lambda_y is None else args.lambda_y
        if args.n_qubits == 1:
            params = ModelParams.one_qubit(args.lambda_x, ly, args.ratio)
        else:
            params = ModelParams.qubit_qubit(args.lambda_x, ly, args.ratio, n_qubits=args.n_qubits)
    else:
        raise ValidationError("give --config or --lambda-x and --ratio", module="cli",
                              code="usage")
    frame = FrameSpec(complex(args.alpha_re, args.alpha_im))
    res = scan.spectrum(params, args.n_cut, frame, j=args.j, model=args.model)
    out = {"ground_energy": res.ground_energy, "gap": res.gap, "n_G": res.n_G,
           "parity": res.parity, "excitation": res.excitation,
           "cutoff_used": res.cutoff_used, "converged": res.converged, "block_j": res.block_j}
    levels = res.eigenvalues[:args.levels]
    out.update({f"E{i}": float(e) for i, e in enumerate(levels)})
    _emit(_json(out), args.out)


def cmd_scan(args):
    data = _read_config(args.config, scan.GridSpec)
    for key in ("lambda_x", "lambda_y", "gx", "gy"):
        if data.get(key) is not None:
            data[key] = tuple(data[key])
    spec = _construct(scan.GridSpec, data)
    rows = scan.scan_grid(spec, threads=scan.resolve_threads(args.threads))
    for i, r in enumerate(rows):
        if r.error:
            print(f"WARNING row {i}: {r.error}", file=sys.stderr)
    _emit(scan.rows_to_csv(rows), args.out)


def cmd_circuit(args):
    extra = ("two_qubit", "hbar", "mode_velocity_scale", "fluxonium_basis")
    data = _read_config(args.config, circuit.CircuitElements, extra)
    opts = {k: data.pop(k) for k in extra if k in data}
    el = _construct(circuit.CircuitElements, data)
    two = opts.get("two_qubit", args.two_qubit)
    derive = circuit.derive_two_qubit if two else circuit.derive_one_qubit
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", circuit.TwoLevelWarning)
        p = derive(el, fluxonium_basis=opts.get("fluxonium_basis", args.basis),
                   hbar=opts.get("hbar", circuit.HBAR_SI),
                   mode_velocity_scale=opts.get("mode_velocity_scale", 1.0))
    for w in caught:
        print(f"WARNING circuit:two_level: {w.message}", file=sys.stderr)
    _emit(_json(p.as_dict()), args.out)


def cmd_verify(args):
    results = verify.run_all(seed=args.seed)
    lines = [verify.format_result(r) for r in results]
    n_ok = sum(r.passed for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    if n_ok != len(results):
        failed = ", ".join(r.name for r in results if not r.passed)
        raise NumericalError(f"failed checks: {failed}", module="verify", code="check_failed")


def build_parser():
    p = _Parser(prog="qptsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=0,
                        help="worker threads, 0 = QPTSIM_THREADS or CPU count")
    common.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("effective", parents=[common], help="closed-form predictions")
    e.add_argument("--lambda-x", type=float, required=True)
    e.add_argument("--lambda-y", type=float, required=True)
    e.add_argument("--ratio", type=float, required=True, help="omega_q / omega_r")
    e.add_argument("--omega-r", type=float, default=1.0)
    e.add_argument("--model", choices=("one_qubit", "two_qubit", "n_qubit"), default="one_qubit")
    e.add_argument("--n-qubits", type=int, default=3)
    e.set_defaults(func=cmd_effective)

    s = sub.add_parser("spectrum", parents=[common], help="exact diagonalisation of one model")
    s.add_argument("--config", help="JSON with ModelParams fields")
    s.add_argument("--lambda-x", type=float)
    s.add_argument("--lambda-y", type=float)
    s.add_argument("--ratio", type=float)
    s.add_argument("--n-qubits", type=int, default=1)
    s.add_argument("--model", choices=scan.MODELS)
    s.add_argument("--j", type=float)
    s.add_argument("--n-cut", type=int, default=16)
    s.add_argument("--alpha-re", type=float, default=0.0)
    s.add_argument("--alpha-im", type=float, default=0.0)
    s.add_argument("--levels", type=int, default=6)
    s.set_defaults(func=cmd_spectrum)

    g = sub.add_parser("scan", parents=[common], help="phase-diagram grid to CSV")
    g.add_argument("--config", required=True, help="JSON with GridSpec fields")
    g.set_defaults(func=cmd_scan)

    c = sub.add_parser("circuit", parents=[common], help="circuit elements to model parameters")
    c.add_argument("--config", required=True, help="JSON with CircuitElements fields")
    c.add_argument("--two-qubit", action="store_true")
    c.add_argument("--basis", type=int, default=32)
    c.set_defaults(func=cmd_circuit)

    v = sub.add_parser("verify", parents=[common], help="run the built-in check suite")
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except QptsimError as exc:
        print(f"ERROR {exc.tag()}: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, NumericalError) else 1
    return 0


def main():
    sys.exit(run())
