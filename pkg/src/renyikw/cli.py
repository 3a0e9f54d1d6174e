"""Command-line frontend: one subcommand per computed quantity.

Every run emits a report carrying a manifest (command, flags, seed,
version, input digests, duration) next to the result, so any number in
an output file can be traced back to the exact invocation that made it.
Exit codes: 0 success, 2 input validation, 3 numerical failure, 64 usage.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .correlations import c_alpha, eof_alpha, kw_verify, mutual_information
from .entropy import qjsd, renyi_quantum
from .errors import InvalidState, NumericalError, ValidationError
from .optimize import OptimizerConfig
from .robustness import check_half_lemma, check_psuc_bound, p_success, robustness_pure
from .serialize import (
    dumps_report,
    ensemble_from_json,
    povm_to_json,
    state_from_json,
    state_to_json,
)
from .states import DensityMatrix, PureState, random_state

ENV_SEED = "RENYIKW_SEED"
USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        sys.stderr.write(f"\nerror: {message}\n")
        sys.exit(USAGE_EXIT)


def _read_json(path: str):
    try:
        with open(path, "rb") as fh:
            return json.loads(fh.read().decode("utf-8"))
    except OSError as exc:
        raise InvalidState(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidState(f"{path} is not valid JSON: {exc}") from exc


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _parse_dims(text: str | None):
    if text is None:
        return None
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise InvalidState(f"bad --dims value {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise InvalidState(f"bad --dims value {text!r}")
    return dims


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidState(f"{ENV_SEED} must be an integer, got {env!r}") from exc
    return 0


def _config_of(args) -> OptimizerConfig:
    kwargs = {"master_seed": _seed_of(args)}
    if getattr(args, "restarts", None) is not None:
        kwargs["restarts"] = args.restarts
    if getattr(args, "max_iters", None) is not None:
        kwargs["max_iters"] = args.max_iters
    if getattr(args, "tol", None) is not None:
        kwargs["objective_tol"] = args.tol
    if getattr(args, "parallel", False):
        kwargs["parallel"] = True
    return OptimizerConfig(**kwargs)


def _load_state(args):
    state = state_from_json(_read_json(args.state), _parse_dims(args.dims))
    return state


def _as_density(state) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def _as_pure(state) -> PureState:
    if not isinstance(state, PureState):
        raise InvalidState("this command needs a pure state (vector JSON)")
    return state


def _opt_flags(parser):
    parser.add_argument("--outcomes", type=int, default=None)
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--parallel", action="store_true")


def _cmd_entropy(args):
    rho = _as_density(_load_state(args))
    return {"alpha": args.alpha, "value": renyi_quantum(rho, args.alpha)}


def _cmd_qjsd(args):
    xi = ensemble_from_json(_read_json(args.ensemble))
    return {"alpha": args.alpha, "value": qjsd(xi, args.alpha)}


def _cmd_calpha(args):
    rho = _as_density(_load_state(args))
    res = c_alpha(rho, args.measure_side, args.alpha, _config_of(args), args.outcomes)
    return {
        "alpha": args.alpha,
        "measured_side": args.measure_side,
        "value": res.value,
        "evaluations": res.opt_report.evaluations,
        "converged": res.opt_report.converged,
    }


def _cmd_eof(args):
    rho = _as_density(_load_state(args))
    res = eof_alpha(rho, args.alpha, _config_of(args), args.outcomes)
    return {
        "alpha": args.alpha,
        "value": res.value,
        "members": len(res.witness),
        "evaluations": res.opt_report.evaluations,
        "converged": res.opt_report.converged,
    }


def _cmd_discord(args):
    rho = _as_density(_load_state(args))
    j = c_alpha(rho, args.measure_side, 1.0, _config_of(args), args.outcomes)
    mi = mutual_information(rho)
    return {
        "measured_side": args.measure_side,
        "mutual_information": mi,
        "classical_part": j.value,
        "value": mi - j.value,
        "converged": j.opt_report.converged,
    }


def _cmd_kw_verify(args):
    psi = _as_pure(_load_state(args))
    rep = kw_verify(psi, args.alpha, _config_of(args), args.outcomes)
    return {
        "alpha": rep.alpha,
        "c_alpha_ae": rep.c_alpha_ae,
        "s_alpha_a": rep.s_alpha_a,
        "eof_alpha_ab": rep.eof_alpha_ab,
        "gap": rep.gap,
        "c_evaluations": rep.c_report.evaluations,
        "c_converged": rep.c_report.converged,
        "eof_evaluations": rep.eof_report.evaluations,
        "eof_converged": rep.eof_report.converged,
    }


def _cmd_discriminate(args):
    xi = ensemble_from_json(_read_json(args.ensemble))
    res = p_success(xi, _config_of(args))
    return {
        "p_success": res.p_success,
        "helstrom_value": res.helstrom_value,
        "evaluations": res.opt_report.evaluations,
        "converged": res.opt_report.converged,
        "povm": povm_to_json(res.optimal_povm),
    }


def _cmd_robustness(args):
    psi = _as_pure(_load_state(args))
    rv = robustness_pure(psi)
    s_half, lr_g, diff = check_half_lemma(psi)
    return {"r_g": rv.r_g, "lr_g": lr_g, "s_half": s_half, "diff": diff}


def _cmd_psuc_bound(args):
    xi = ensemble_from_json(_read_json(args.ensemble))
    s_half_avg, neg_log_psuc, slack = check_psuc_bound(xi, _config_of(args))
    return {
        "s_half_avg": s_half_avg,
        "neg_log_psuc": neg_log_psuc,
        "slack": slack,
    }


def _cmd_random(args):
    dims = _parse_dims(args.dims)
    if dims is None:
        raise InvalidState("random needs --dims")
    state = random_state(args.kind, dims, rank=args.rank, seed=_seed_of(args))
    text = dumps_report(state_to_json(state))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    return {
        "kind": args.kind,
        "dims": list(dims),
        "written": args.out,
        "sha256": hashlib.sha256((text + "\n").encode()).hexdigest(),
    }


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidState(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise InvalidState(f"grid must be numeric, got {text!r}") from exc
    if not (0.0 < start <= stop < 1.0):
        raise InvalidState(f"grid endpoints must satisfy 0 < start <= stop < 1, got {text!r}")
    if step <= 0:
        raise InvalidState(f"grid step must be positive, got {text!r}")
    alphas = []
    a = start
    while a <= stop + 1e-12:
        alphas.append(round(a, 12))
        a += step
    return alphas


def _cmd_sweep(args):
    alphas = _parse_grid(args.grid)
    state = _load_state(args)
    master = _seed_of(args)
    rows = []
    for idx, alpha in enumerate(alphas):
        row_seed = master + idx
        cfg_kwargs = {"master_seed": row_seed}
        if args.restarts is not None:
            cfg_kwargs["restarts"] = args.restarts
        if args.max_iters is not None:
            cfg_kwargs["max_iters"] = args.max_iters
        if args.tol is not None:
            cfg_kwargs["objective_tol"] = args.tol
        if args.parallel:
            cfg_kwargs["parallel"] = True
        cfg = OptimizerConfig(**cfg_kwargs)
        if args.quantity == "entropy":
            value = renyi_quantum(_as_density(state), alpha)
            gap, converged = "", True
        elif args.quantity == "calpha":
            res = c_alpha(_as_density(state), args.measure_side, alpha, cfg, args.outcomes)
            value, gap, converged = res.value, "", res.opt_report.converged
        elif args.quantity == "eof":
            res = eof_alpha(_as_density(state), alpha, cfg, args.outcomes)
            value, gap, converged = res.value, "", res.opt_report.converged
        else:
            rep = kw_verify(_as_pure(state), alpha, cfg, args.outcomes)
            value = rep.c_alpha_ae
            gap = f"{rep.gap:.17g}"
            converged = rep.c_report.converged and rep.eof_report.converged
        rows.append(
            f"{alpha:.17g},{row_seed},{args.quantity},{value:.17g},{gap},"
            + ("true" if converged else "false")
        )
    csv_text = "alpha,instance_seed,quantity,value,gap,converged\n" + "\n".join(rows) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    return {
        "rows": len(rows),
        "written": args.out,
        "sha256": hashlib.sha256(csv_text.encode()).hexdigest(),
    }


def build_parser() -> _Parser:
    parser = _Parser(prog="renyikw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="Renyi entropy of a state")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.set_defaults(handler=_cmd_entropy, inputs=("state",))

    p = sub.add_parser("qjsd", help="ensemble divergence")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--ensemble", required=True)
    p.set_defaults(handler=_cmd_qjsd, inputs=("ensemble",))

    p = sub.add_parser("calpha", help="measured correlation")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.add_argument("--measure-side", choices=["A", "B"], default="B", dest="measure_side")
    _opt_flags(p)
    p.set_defaults(handler=_cmd_calpha, inputs=("state",))

    p = sub.add_parser("eof", help="entanglement of formation")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    _opt_flags(p)
    p.set_defaults(handler=_cmd_eof, inputs=("state",))

    p = sub.add_parser("discord", help="discord at order 1")
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.add_argument("--measure-side", choices=["A", "B"], default="B", dest="measure_side")
    _opt_flags(p)
    p.set_defaults(handler=_cmd_discord, inputs=("state",))

    p = sub.add_parser("kw-verify", help="entropy balance on a tripartite pure state")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.add_argument("--measure-side", choices=["E"], default="E", dest="measure_side")
    _opt_flags(p)
    p.set_defaults(handler=_cmd_kw_verify, inputs=("state",))

    p = sub.add_parser("discriminate", help="ensemble discrimination")
    p.add_argument("--ensemble", required=True)
    _opt_flags(p)
    p.set_defaults(handler=_cmd_discriminate, inputs=("ensemble",))

    p = sub.add_parser("robustness", help="pure-state robustness and half-order entropy")
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.set_defaults(handler=_cmd_robustness, inputs=("state",))

    p = sub.add_parser("psuc-bound", help="discrimination entropy bound")
    p.add_argument("--ensemble", required=True)
    _opt_flags(p)
    p.set_defaults(handler=_cmd_psuc_bound, inputs=("ensemble",))

    p = sub.add_parser("sweep", help="grid of alphas to CSV")
    p.add_argument("--grid", required=True)
    p.add_argument(
        "--quantity",
        choices=["entropy", "calpha", "eof", "kw-verify"],
        required=True,
    )
    p.add_argument("--state", required=True)
    p.add_argument("--dims", default=None)
    p.add_argument("--measure-side", choices=["A", "B"], default="B", dest="measure_side")
    _opt_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_sweep, inputs=("state",))

    p = sub.add_parser("random", help="generate and persist a random state")
    p.add_argument("--kind", choices=["haar_pure", "ginibre_mixed"], default="ginibre_mixed")
    p.add_argument("--dims", required=True)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_random, inputs=())

    for name, sp in sub.choices.items():
        sp.add_argument("--seed", type=int, default=None)
        if name not in ("sweep", "random"):
            sp.add_argument("--out", default=None)
    return parser


def _flags_of(args) -> dict:
    skip = {"handler", "inputs", "command"}
    out = {}
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = getattr(args, key)
        if val is None:
            continue
        out[key.replace("_", "-")] = val
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        digests = {}
        for name in args.inputs:
            path = getattr(args, name)
            try:
                digests[path] = _digest(path)
            except OSError as exc:
                raise InvalidState(f"cannot read {path}: {exc}") from exc
        result = args.handler(args)
    except ValidationError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2
    except NumericalError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 3
    manifest = {
        "command": args.command,
        "flags": _flags_of(args),
        "master_seed": _seed_of(args),
        "version": __version__,
        "input_digests": digests,
        "duration_seconds": time.monotonic() - started,
    }
    text = dumps_report({"manifest": manifest, "result": result})
    out_path = getattr(args, "out", None)
    if out_path and args.command not in ("sweep", "random"):
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
