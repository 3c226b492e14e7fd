"""Batch command-line front end.

Subcommands: ``simulate``, ``sweep``, ``optimize``, ``capacity``,
``classical``, ``chain``.  Parameters come from flags and/or a JSON
configuration document (``--config PATH``, same keys as the flags; flags
override; unknown keys are rejected).  Results are emitted as JSON or CSV
with fixed 12-significant-digit decimal formatting, so identical runs
produce byte-identical documents; wall time goes to stderr only.

Exit status: 0 on success, 2 with a diagnostic on any validation or domain
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Dict, List, Optional, Tuple

from . import __version__
from .analysis import (
    InputPrior,
    balanced_theta2,
    capacity,
    channel_from_protocol,
    mutual_information,
    optimize_angles,
    success_probabilities,
)
from .classical import carrier_span_audit, decode_billiard, run_billiard, run_pulse_relay
from .errors import CfOpticsError
from .protocols import (
    LEG_NAMES,
    ChainConfig,
    NestedConfig,
    run_chain,
    run_protocol,
)

__all__ = ["build_parser", "main"]


class CliUsageError(CfOpticsError):
    """Invalid flags, configuration keys, or parameter combinations."""


# ---------------------------------------------------------------------------
# deterministic rendering


def _fmt_number(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if value == 0.0:
        return "0"  # normalize -0.0
    return format(float(value), ".12g")


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(key))}: {_render_json(item, indent + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{_render_json(item, indent + 1)}" for item in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    return _fmt_number(value)


def _flatten(value, prefix: str, out: List[Tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(item, f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            _flatten(item, f"{prefix}[{index}]", out)
    elif isinstance(value, str):
        out.append((prefix, value))
    elif value is None:
        out.append((prefix, ""))
    else:
        out.append((prefix, _fmt_number(value)))


def _render_csv(document: dict) -> str:
    results = document["results"]
    if isinstance(results, dict) and "columns" in results and "rows" in results:
        lines = [",".join(results["columns"])]
        for row in results["rows"]:
            lines.append(",".join(_fmt_number(cell) if not isinstance(cell, str) else cell for cell in row))
        return "\n".join(lines) + "\n"
    pairs: List[Tuple[str, str]] = []
    _flatten(document, "", pairs)
    lines = ["key,value"] + [f"{key},{value}" for key, value in pairs]
    return "\n".join(lines) + "\n"


def _render(document: dict, fmt: str) -> str:
    if fmt == "csv":
        return _render_csv(document)
    return _render_json(document) + "\n"


# ---------------------------------------------------------------------------
# parameter resolution


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    except OSError as exc:
        raise CliUsageError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise CliUsageError(f"config file is not valid JSON: {exc}")
    if not isinstance(config, dict):
        raise CliUsageError("config document must be a JSON object")
    return config


def _resolve(args: argparse.Namespace, allowed: Tuple[str, ...]) -> Dict[str, object]:
    """Merge config-file values and flags (flags win); reject unknown keys."""
    config = _load_config(args.config)
    unknown = sorted(set(config) - set(allowed))
    if unknown:
        raise CliUsageError(f"unknown config keys: {', '.join(unknown)}")
    merged: Dict[str, object] = {}
    for key in allowed:
        flag_value = getattr(args, key, None)
        merged[key] = flag_value if flag_value is not None else config.get(key)
    return merged


# Per-command parameter keys; every command also accepts the io keys.
_IO_KEYS = ("format", "out")
_COMMAND_KEYS = {
    "simulate": ("theta1", "theta2", "balanced", "bit"),
    "sweep": ("theta1", "theta2", "balanced", "steps"),
    "optimize": ("objective", "grid", "refine"),
    "capacity": ("theta1", "theta2", "balanced", "tol"),
    "classical": ("bits",),
    "chain": ("outer", "inner"),
}


def _require(spec: Dict[str, object], key: str):
    if spec.get(key) is None:
        raise CliUsageError(f"missing required parameter --{key}")
    return spec[key]


def _as_float(value, name: str) -> float:
    try:
        result = float(value)
    except (TypeError, ValueError):
        raise CliUsageError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(result):
        raise CliUsageError(f"{name} must be finite, got {value!r}")
    return result


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise CliUsageError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            pass
    raise CliUsageError(f"{name} must be an integer, got {value!r}")


def _as_bit(value, name: str = "bit") -> int:
    bit = _as_int(value, name)
    if bit not in (0, 1):
        raise CliUsageError(f"{name} must be 0 or 1, got {value!r}")
    return bit


def _parse_range(value) -> Tuple[float, float]:
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 2:
            raise CliUsageError(f"theta1 range must look like START:STOP, got {value!r}")
        lo, hi = (_as_float(part, "theta1 range endpoint") for part in parts)
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        lo, hi = (_as_float(part, "theta1 range endpoint") for part in value)
    else:
        raise CliUsageError(f"theta1 range must be START:STOP or a 2-element list, got {value!r}")
    if not lo < hi:
        raise CliUsageError(f"theta1 range is empty: {lo!r} >= {hi!r}")
    return lo, hi


def _parse_int_list(value, name: str) -> List[int]:
    if isinstance(value, str):
        parts = [part for part in value.split(",") if part != ""]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise CliUsageError(f"{name} must be a comma-separated list of integers")
    if not parts:
        raise CliUsageError(f"{name} must be non-empty")
    return [_as_int(part, name) for part in parts]


def _resolve_theta2(spec: Dict[str, object], theta1: float) -> Tuple[float, bool]:
    balanced = bool(spec.get("balanced"))
    theta2 = spec.get("theta2")
    if balanced and theta2 is not None:
        raise CliUsageError("--balanced and --theta2 are mutually exclusive")
    if balanced:
        return balanced_theta2(theta1), True
    if theta2 is None:
        raise CliUsageError("either --theta2 or --balanced is required")
    return _as_float(theta2, "theta2"), False


# ---------------------------------------------------------------------------
# command implementations


def _cmd_simulate(spec: Dict[str, object]) -> dict:
    theta1 = _as_float(_require(spec, "theta1"), "theta1")
    theta2, balanced = _resolve_theta2(spec, theta1)
    bit = _as_bit(_require(spec, "bit"))
    outcome = run_protocol(NestedConfig(theta1, theta2), bit)
    p_none = max(0.0, 1.0 - outcome.p_d1 - outcome.p_d2)
    results = {
        "p_d1": outcome.p_d1,
        "p_d2": outcome.p_d2,
        "p_none": p_none,
        "absorbed": {label: outcome.absorbed[label] for label in ("bob", "discard")},
        "leg_probabilities": {
            name: abs(outcome.legs[name]) ** 2 for name in LEG_NAMES
        },
        "total_probability": outcome.p_d1
        + outcome.p_d2
        + outcome.absorbed["bob"]
        + outcome.absorbed["discard"],
    }
    echo = {"theta1": theta1, "theta2": theta2, "balanced": balanced, "bit": bit}
    return {"command": "simulate", "spec": echo, "version": __version__, "results": results}


def _cmd_sweep(spec: Dict[str, object]) -> dict:
    lo, hi = _parse_range(_require(spec, "theta1"))
    steps = _as_int(spec.get("steps") if spec.get("steps") is not None else 20, "steps")
    if steps < 2:
        raise CliUsageError(f"steps must be >= 2, got {steps}")
    balanced = bool(spec.get("balanced"))
    fixed_theta2 = spec.get("theta2")
    if balanced and fixed_theta2 is not None:
        raise CliUsageError("--balanced and --theta2 are mutually exclusive")
    if not balanced and fixed_theta2 is None:
        raise CliUsageError("either --theta2 (fixed rule) or --balanced is required")
    if fixed_theta2 is not None:
        fixed_theta2 = _as_float(fixed_theta2, "theta2")
    columns = ("theta1", "theta2", "p00", "p11", "loss", "mi_uniform")
    rows = []
    for index in range(steps):
        theta1 = lo + index * (hi - lo) / (steps - 1)
        theta2 = balanced_theta2(theta1) if balanced else fixed_theta2
        channel = channel_from_protocol(NestedConfig(theta1, theta2))
        p00, p11 = success_probabilities(channel)
        loss = 0.5 * (channel.p_given_b[0, 2] + channel.p_given_b[1, 2])
        info = mutual_information(channel, InputPrior(0.5))
        rows.append([theta1, theta2, p00, p11, loss, info])
    echo = {
        "theta1_range": [lo, hi],
        "theta2_rule": "balanced" if balanced else "fixed",
        "theta2": fixed_theta2,
        "steps": steps,
    }
    return {
        "command": "sweep",
        "spec": echo,
        "version": __version__,
        "results": {"columns": list(columns), "rows": rows},
    }


def _cmd_optimize(spec: Dict[str, object]) -> dict:
    objective = str(_require(spec, "objective"))
    grid = _as_int(spec.get("grid") if spec.get("grid") is not None else 32, "grid")
    refine = _as_int(spec.get("refine") if spec.get("refine") is not None else 200, "refine")
    result = optimize_angles(objective, grid_points=grid, refine_iters=refine)
    echo = {"objective": objective, "grid": grid, "refine": refine}
    results = {
        "theta1": result.theta1,
        "theta2": result.theta2,
        "objective_value": result.objective_value,
        "objective_name": result.objective_name,
        "evaluations": result.evaluations,
    }
    return {"command": "optimize", "spec": echo, "version": __version__, "results": results}


def _cmd_capacity(spec: Dict[str, object]) -> dict:
    theta1 = _as_float(_require(spec, "theta1"), "theta1")
    theta2, balanced = _resolve_theta2(spec, theta1)
    tol = _as_float(spec.get("tol") if spec.get("tol") is not None else 1e-10, "tol")
    channel = channel_from_protocol(NestedConfig(theta1, theta2))
    capacity_bits, prior = capacity(channel, tol)
    results = {
        "capacity_bits": capacity_bits,
        "optimal_p0": prior.p0,
        "mi_uniform": mutual_information(channel, InputPrior(0.5)),
        "channel": {
            "b0": list(channel.p_given_b[0]),
            "b1": list(channel.p_given_b[1]),
        },
    }
    echo = {"theta1": theta1, "theta2": theta2, "balanced": balanced, "tol": tol}
    return {"command": "capacity", "spec": echo, "version": __version__, "results": results}


def _cmd_classical(spec: Dict[str, object]) -> dict:
    raw = str(_require(spec, "bits"))
    if not raw or any(ch not in "01" for ch in raw):
        raise CliUsageError(f"bits must be a non-empty string of 0s and 1s, got {raw!r}")
    bits = [int(ch) for ch in raw]
    billiard_decoded = []
    billiard_audits = []
    for bit in bits:
        run = run_billiard(bit)
        billiard_decoded.append(decode_billiard(run.observation))
        billiard_audits.append(carrier_span_audit(run.log))
    relay = run_pulse_relay(bits)
    results = {
        "billiard": {
            "decoded": "".join(str(bit) for bit in billiard_decoded),
            "audit": all(billiard_audits),
        },
        "pulse_relay": {
            "decoded": "".join(str(bit) for bit in relay.decoded),
            "audit": carrier_span_audit(relay.log),
        },
    }
    echo = {"bits": raw}
    return {"command": "classical", "spec": echo, "version": __version__, "results": results}


def _cmd_chain(spec: Dict[str, object]) -> dict:
    outer = _parse_int_list(_require(spec, "outer"), "outer")
    inner = _parse_int_list(_require(spec, "inner"), "inner")
    columns = (
        "outer_cycles",
        "inner_cycles",
        "bit",
        "p_d1",
        "p_d2",
        "p_correct",
        "loss",
        "bob_to_charlie_peak",
        "charlie_to_alice_peak",
    )
    rows = []
    for cycles_outer in outer:
        for cycles_inner in inner:
            config = ChainConfig(cycles_outer, cycles_inner)
            for bit in (0, 1):
                outcome = run_chain(config, bit)
                loss = outcome.absorbed["bob"] + outcome.absorbed["discard"]
                rows.append(
                    [
                        cycles_outer,
                        cycles_inner,
                        bit,
                        outcome.p_d1,
                        outcome.p_d2,
                        outcome.p_correct,
                        loss,
                        outcome.leg_peaks["bob_to_charlie"],
                        outcome.leg_peaks["charlie_to_alice"],
                    ]
                )
    echo = {"outer": outer, "inner": inner}
    return {
        "command": "chain",
        "spec": echo,
        "version": __version__,
        "results": {"columns": list(columns), "rows": rows},
    }


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "optimize": _cmd_optimize,
    "capacity": _cmd_capacity,
    "classical": _cmd_classical,
    "chain": _cmd_chain,
}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfoptics",
        description=(
            "Simulate nested-interferometer bit transmission, analyze the induced "
            "classical channel, and run the carrier-audited classical relays."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format (default json)")
    common.add_argument("--out", default=None, metavar="PATH", help="write the document to PATH instead of stdout")
    common.add_argument("--config", default=None, metavar="PATH", help="JSON document with the same keys as the flags; flags override")

    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="one protocol run at fixed angles and sender bit")
    simulate.add_argument("--theta1", type=float, default=None, help="opening outer-coupler angle (radians)")
    simulate.add_argument("--theta2", type=float, default=None, help="closing outer-coupler angle (radians)")
    simulate.add_argument("--balanced", action="store_const", const=True, default=None, help="derive theta2 from theta1 via the balance condition")
    simulate.add_argument("--bit", type=int, default=None, help="sender bit (0 blocks the emitter arm, 1 leaves it open)")

    sweep = sub.add_parser("sweep", parents=[common], help="tabulate the channel over a theta1 range")
    sweep.add_argument("--theta1", type=str, default=None, metavar="START:STOP", help="theta1 range")
    sweep.add_argument("--theta2", type=float, default=None, help="fixed theta2 rule")
    sweep.add_argument("--balanced", action="store_const", const=True, default=None, help="balanced theta2 rule")
    sweep.add_argument("--steps", type=int, default=None, help="number of rows (default 20)")

    optimize = sub.add_parser("optimize", parents=[common], help="search for optimal coupling angles")
    optimize.add_argument("--objective", choices=("min-success", "mutual-info-uniform"), default=None)
    optimize.add_argument("--grid", type=int, default=None, help="grid points per axis (default 32)")
    optimize.add_argument("--refine", type=int, default=None, help="refinement iterations (default 200)")

    cap = sub.add_parser("capacity", parents=[common], help="capacity of the induced channel at fixed angles")
    cap.add_argument("--theta1", type=float, default=None)
    cap.add_argument("--theta2", type=float, default=None)
    cap.add_argument("--balanced", action="store_const", const=True, default=None)

    classical = sub.add_parser("classical", parents=[common], help="run both classical relays over a bit string")
    classical.add_argument("--bits", type=str, default=None, help="bit string, e.g. 0110")

    chain = sub.add_parser("chain", parents=[common], help="chained-network grid over cycle counts")
    chain.add_argument("--outer", type=str, default=None, metavar="N1,N2,...", help="outer cycle counts")
    chain.add_argument("--inner", type=str, default=None, metavar="M1,M2,...", help="inner cycle counts")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        spec = _resolve(args, _COMMAND_KEYS[args.command] + _IO_KEYS)
        fmt = spec.get("format") or "json"
        if fmt not in ("json", "csv"):
            raise CliUsageError(f"format must be json or csv, got {fmt!r}")
        out = spec.get("out")
        document = _COMMANDS[args.command](spec)
        rendered = _render(document, fmt)
        if out is not None:
            with open(str(out), "w", encoding="utf-8", newline="\n") as handle:
                handle.write(rendered)
        else:
            sys.stdout.write(rendered)
    except CfOpticsError as exc:
        print(f"cfoptics {args.command}: error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    destination = str(out) if out is not None else "stdout"
    print(f"cfoptics {args.command}: wrote {destination} in {elapsed:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
