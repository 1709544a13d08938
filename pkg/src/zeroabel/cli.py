"""Command-line interface.

Every command prints one JSON document (``schema_version`` 1, sorted
keys) or, with ``--table``, a plain two-column rendering of it. Exit
status: 0 on a computed result (a negative verdict included), 1 on bad
input, 2 on numerical failure.

Cycles are weight lists in the labelling where the loop around infinity
is ``(1 2 ... m)``; label 1 is the principal branch at infinity.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import InputError, NumericalError, ZeroAbelError
from .parse import parse_cycle, parse_laurent, parse_poly

SCHEMA_VERSION = 1


class _UsageError(InputError):
    kind = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise _UsageError(message)


def to_plain(obj: Any) -> Any:
    """Convert results to JSON-ready builtins."""
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_plain(v) for v in items]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    return obj


def dumps(payload: dict) -> str:
    return json.dumps(to_plain(payload), sort_keys=True, indent=2)


def _table(payload: dict) -> str:
    lines = []

    def walk(prefix: str, v: Any) -> None:
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append((prefix, json.dumps(v)))

    walk("", to_plain(payload))
    width = max((len(k) for k, _ in lines), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in lines)


# commands --------------------------------------------------------------------


def _need(args, name: str):
    v = getattr(args, name, None)
    if v is None:
        raise _UsageError(f"--{name} is required for this command")
    return v


def _poly(args, name: str):
    return parse_poly(_need(args, name))


def _cycle(args):
    from .cycles import ZeroCycle

    return ZeroCycle(parse_cycle(_need(args, "cycle")))


def cmd_roots(args) -> dict:
    from .poly import roots_of

    f = _poly(args, "f")
    rs = roots_of(f)
    return {"f": str(f), "roots": list(rs.roots), "residual_bound": rs.residual_bound}


def cmd_monodromy(args) -> dict:
    from .monodromy import monodromy_data

    return {"monodromy": monodromy_data(_poly(args, "f"))}


def cmd_blocks(args) -> dict:
    from .monodromy import block_systems, block_to_decomposition, monodromy_data

    f = _poly(args, "f")
    data = monodromy_data(f)
    out = []
    for bs in block_systems(data):
        dec = block_to_decomposition(f, bs, data)
        out.append({"blocks": bs, "decomposition": dec})
    return {"f": str(f), "block_systems": out}


def cmd_classify(args) -> dict:
    from .cycles import is_totally_unbalanced

    f = _poly(args, "f")
    res = is_totally_unbalanced(f, _cycle(args), cap=args.cap)
    return {"f": str(f), **res.to_json()}


def cmd_solve(args) -> dict:
    from .abelian import solve_tangential

    f, g = _poly(args, "f"), _poly(args, "g")
    cert = solve_tangential(f, _cycle(args), g, cap=args.cap, tol=args.tol, order=args.order)
    return {"certificate": cert}


def cmd_zm(args) -> dict:
    from .applications import zm_solutions

    C = _cycle(args)
    m = args.m if args.m is not None else C.m
    allowed = zm_solutions(m, C)
    return {"m": m, "cycle": C, "allowed_residues": sorted(allowed),
            "forbidden_residues": sorted(set(range(m)) - allowed)}


def cmd_moment(args) -> dict:
    from .abelian import is_identically_zero
    from .applications import moment_cycle, moment_oracle

    f, q = _poly(args, "f"), _poly(args, "q")
    K = args.K if args.K is not None else 12
    moments = moment_oracle(f, q, K)
    rep = moment_cycle(f, cap=args.cap)
    g = q.antiderivative()
    ev = is_identically_zero(f, g, rep.cycle, tol=args.tol, order=args.order)
    return {
        "f": str(f), "q": str(q), "K": K,
        "moments": moments,
        "moments_vanish": all(x == 0 for x in moments),
        "moment_cycle": rep,
        "cycle_test": ev,
        "verdict": "Vanishes" if ev.passed else "Does-Not-Vanish",
    }


def cmd_laurent_moment(args) -> dict:
    from .applications import laurent_branches, laurent_is_identically_zero, laurent_moment_oracle

    f = parse_laurent(_need(args, "f"))
    g = parse_laurent(_need(args, "g"))
    K = args.K if args.K is not None else 12
    res = laurent_moment_oracle(f, g, K)
    lb = laurent_branches(f)
    ev = laurent_is_identically_zero(f, g, tol=args.tol)
    return {
        "f": f.to_str(), "g": g.to_str(), "K": K,
        "moment_residues": res,
        "moment_factor": "2*pi*i",
        "moments_vanish": all(x == 0 for x in res),
        "cycle": lb.cycle,
        "n": lb.n, "m": lb.m,
        "cycle_test": ev,
        "verdict": "Vanishes" if ev.passed else "Does-Not-Vanish",
    }


def cmd_hyperelliptic(args) -> dict:
    from .applications import hyperelliptic_phi_inverse, hyperelliptic_samples, hyperelliptic_xm_condition

    C = _cycle(args)
    m = args.m if args.m is not None else C.m
    kappa = parse_poly(_need(args, "kappa"))
    cond = hyperelliptic_xm_condition(m, C, kappa)
    samples = hyperelliptic_samples(m, C, kappa)
    worst = max((abs(v) / s if s else 0.0) for v, s in samples)
    return {
        "m": m, "cycle": C, "kappa": str(kappa),
        "one_cycle": hyperelliptic_phi_inverse(C),
        "vanishes": cond,
        "oracle_residual": worst,
        "oracle_agrees": (worst < args.tol) == cond,
    }


def cmd_slowfast(args) -> dict:
    from .applications import _default_slow_fast_t, slow_fast_I, slow_fast_gbar

    f = _poly(args, "f")
    g0 = parse_poly(_need(args, "g0"))
    h = parse_poly(args.h) if args.h else None
    gbar = slow_fast_gbar(f, g0, h)
    tmax = 0.5 * _default_slow_fast_t(f)
    ts = [tmax * k / 10 for k in range(1, 11)]
    vals = slow_fast_I(f, gbar, ts)
    return {"f": str(f), "g0": str(g0), "gbar": gbar, "t": ts, "I": vals,
            "max_abs_I": max(abs(v) for v in vals)}


COMMANDS = {
    "roots": cmd_roots,
    "monodromy": cmd_monodromy,
    "blocks": cmd_blocks,
    "classify": cmd_classify,
    "solve": cmd_solve,
    "zm": cmd_zm,
    "moment": cmd_moment,
    "laurent-moment": cmd_laurent_moment,
    "hyperelliptic": cmd_hyperelliptic,
    "slowfast": cmd_slowfast,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zeroabel", description="Vanishing of zero-dimensional Abelian integrals.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--f", help="polynomial (Laurent for laurent-moment)")
    p.add_argument("--g", help="integrand polynomial")
    p.add_argument("--q", help="moment weight polynomial")
    p.add_argument("--h", help="right composition factor (slowfast)")
    p.add_argument("--g0", help="outer integrand factor (slowfast)")
    p.add_argument("--kappa", help="one-form coefficient (hyperelliptic)")
    p.add_argument("--m", type=int, help="degree for z^m families")
    p.add_argument("--cycle", help="comma-separated weights or @file.json")
    p.add_argument("--K", type=int, help="number of moments")
    p.add_argument("--order", type=int, help="Puiseux truncation order")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--cap", type=int, default=10**6)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    p.set_defaults(fmt="json")
    return p


def _error_payload(exc: BaseException) -> dict:
    if isinstance(exc, ZeroAbelError):
        err = exc.to_json()
    else:
        err = {"type": type(exc).__name__, "message": str(exc)}
    return {"schema_version": SCHEMA_VERSION, "error": err}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.fmt
        payload = {"schema_version": SCHEMA_VERSION, "command": args.command}
        payload.update(COMMANDS[args.command](args))
        code = 0
    except InputError as exc:
        payload, code = _error_payload(exc), 1
    except NumericalError as exc:
        payload, code = _error_payload(exc), 2
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        payload, code = _error_payload(exc), 1
    except Exception as exc:  # keep the JSON contract even on unexpected failures
        payload, code = _error_payload(exc), 2
    text = _table(payload) if fmt == "table" else dumps(payload)
    out.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
