"""Run configuration: command-line flags merged over a flat ``key = value`` file.

Range syntax is ``start:stop:step`` (both ends inclusive, the stop within
half a step) or ``start:stop`` for integer lists with unit step. Lists may
also be written comma-separated.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
from dataclasses import dataclass, field

COMMANDS = ("spectrum", "fidelity-sweep", "nrev-fit", "thermalize", "peaks")


class UsageError(ValueError):
    """Malformed or contradictory run configuration."""


def parse_float_range(text: str) -> tuple[float, ...]:
    text = str(text).strip()
    if not text:
        raise UsageError("empty value")
    if "," in text:
        return tuple(_float(p) for p in text.split(","))
    if ":" not in text:
        return (_float(text),)
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must be start:stop:step")
    start, stop, step = (_float(p) for p in parts)
    if not step > 0:
        raise UsageError(f"range {text!r} needs a positive step")
    if stop < start:
        raise UsageError(f"range {text!r} has stop < start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    # round away accumulated binary noise so 0:16:0.1 yields 1.1, not 1.1000000000000001
    return tuple(round(start + k * step, 12) for k in range(count))


def parse_int_range(text: str) -> tuple[int, ...]:
    text = str(text).strip()
    if not text:
        raise UsageError("empty value")
    if "," in text:
        return tuple(_int(p) for p in text.split(","))
    if ":" not in text:
        return (_int(text),)
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"range {text!r} must be start:stop[:step]")
    start, stop = _int(parts[0]), _int(parts[1])
    step = _int(parts[2]) if len(parts) == 3 else 1
    if step <= 0 or stop < start:
        raise UsageError(f"malformed integer range {text!r}")
    return tuple(range(start, stop + 1, step))


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"not a finite number: {text!r}")
    return value


def _int(text: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None


def _bool(text: str) -> bool:
    key = str(text).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    L: int
    state: str = "neel"
    omega_d: tuple[float, ...] = ()
    h: tuple[float, ...] = ()
    n: tuple[int, ...] = ()
    n_max: int | None = None
    steps: int = 512
    eta: float = 0.2
    fit_h_min: float = 1.0
    fit_ratio_max: float = 2.2048
    min_height: float = 0.1
    min_separation: int = 2
    output: str = "."
    workers: int = 1
    plot_script: bool = False
    input: str | None = field(default=None)


# key -> (parser, renderer)
_FIELDS = {
    "command": (str, str),
    "L": (_int, str),
    "state": (str, str),
    "omega_d": (parse_float_range, lambda v: ",".join(repr(x) for x in v)),
    "h": (parse_float_range, lambda v: ",".join(repr(x) for x in v)),
    "n": (parse_int_range, lambda v: ",".join(str(x) for x in v)),
    "n_max": (_int, str),
    "steps": (_int, str),
    "eta": (_float, repr),
    "fit_h_min": (_float, repr),
    "fit_ratio_max": (_float, repr),
    "min_height": (_float, repr),
    "min_separation": (_int, str),
    "output": (str, str),
    "workers": (_int, str),
    "plot_script": (_bool, lambda v: "true" if v else "false"),
    "input": (str, str),
}


def parse_config_text(text: str) -> dict:
    """Raw ``key -> string`` pairs from the flat config format."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def render(config: RunConfig) -> str:
    """Serialize ``config`` to the flat format; :func:`parse_config` reads it back unchanged."""
    lines = []
    for f in dataclasses.fields(config):
        value = getattr(config, f.name)
        if value is None or value == ():
            continue
        lines.append(f"{f.name} = {_FIELDS[f.name][1](value)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="floquet-pxp",
        description="Driven PXP chain: Floquet spectra, fidelity sweeps, revival fits, thermalization.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("command", nargs="?", help=" | ".join(COMMANDS))
    p.add_argument("--config", help="flat 'key = value' file; flags override its values")
    p.add_argument("--L", dest="L", help="number of sites")
    p.add_argument("--state", help="polarized | neel | theta:<radians>")
    p.add_argument("--omega-d", dest="omega_d", help="drive frequency, scalar or range")
    p.add_argument("--h", dest="h", help="drive amplitude, scalar or range")
    p.add_argument("--n", dest="n", help="stroboscopic indices, e.g. 1:15 or 1,5,9")
    p.add_argument("--n-max", dest="n_max", help="record n = 0..n_max")
    p.add_argument("--steps", help="split-step substeps per period (default 512)")
    p.add_argument("--eta", help="dominant-state threshold (default 0.2)")
    p.add_argument("--fit-h-min", dest="fit_h_min", help="lower end of the fit window (default 1)")
    p.add_argument("--fit-ratio-max", dest="fit_ratio_max",
                   help="upper end of the fit window as a multiple of omega_d (default 2.2048)")
    p.add_argument("--min-height", dest="min_height", help="peak height threshold (default 0.1)")
    p.add_argument("--min-separation", dest="min_separation",
                   help="minimum peak separation in grid points (default 2)")
    p.add_argument("--output", "-o", help="output directory (default .)")
    p.add_argument("--workers", help="parallel workers (default 1)")
    p.add_argument("--plot-script", dest="plot_script", action="store_const", const="true",
                   help="also write a gnuplot script for the CSV output")
    p.add_argument("--input", help="peaks: read fidelities from an existing sweep CSV")
    return p


def parse_config(argv=None, config_text: str | None = None) -> RunConfig:
    """Resolve a :class:`RunConfig` from flags, a config file, and defaults.

    Raises:
        UsageError: unknown keys, malformed ranges, contradictory or missing options.
    """
    parser = build_parser()
    try:
        ns = vars(parser.parse_args([] if argv is None else list(argv)))
    except SystemExit as exc:
        raise UsageError("invalid command line") from exc
    raw = {}
    if "config" in ns:
        path = ns.pop("config")
        try:
            with open(path) as fh:
                raw.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    if config_text is not None:
        raw.update(parse_config_text(config_text))
    raw.update({k: v for k, v in ns.items() if v is not None})

    values = {key: _FIELDS[key][0](value) for key, value in raw.items()}
    if "command" not in values:
        raise UsageError(f"a command is required: one of {', '.join(COMMANDS)}")
    if values["command"] not in COMMANDS:
        raise UsageError(f"unknown command {values['command']!r}")
    if "L" not in values:
        raise UsageError("--L is required")
    config = RunConfig(**values)
    _check(config)
    return config


def _check(c: RunConfig) -> None:
    if c.L < 1:
        raise UsageError("L must be >= 1")
    if c.workers < 1:
        raise UsageError("workers must be >= 1")
    if c.steps < 16:
        raise UsageError("steps must be >= 16")
    if not 0 < c.eta < 1:
        raise UsageError("eta must lie in (0, 1)")
    if any(w <= 0 for w in c.omega_d):
        raise UsageError("omega_d must be positive")
    if any(h < 0 for h in c.h):
        raise UsageError("h must be non-negative")
    if c.n and c.n_max is not None:
        raise UsageError("--n and --n-max are mutually exclusive")
    if c.n_max is not None and c.n_max < 0:
        raise UsageError("n_max must be non-negative")
    if not c.omega_d:
        raise UsageError("--omega-d is required")
    cmd = c.command
    if cmd in ("spectrum", "fidelity-sweep") and not c.h:
        raise UsageError(f"{cmd} needs --h")
    if cmd == "peaks" and not c.h and c.input is None:
        raise UsageError("peaks needs --h or --input")
    if cmd in ("fidelity-sweep", "peaks") and not c.n and c.n_max is None and c.input is None:
        raise UsageError(f"{cmd} needs --n or --n-max")
    if cmd == "thermalize":
        if len(c.h) != 1 or len(c.omega_d) != 1:
            raise UsageError("thermalize takes a single --h and --omega-d")
        if c.n_max is None:
            raise UsageError("thermalize needs --n-max")
    out_parent = os.path.abspath(c.output)
    while not os.path.exists(out_parent):
        out_parent = os.path.dirname(out_parent)
    if not os.access(out_parent, os.W_OK):
        raise UsageError(f"output path {c.output!r} is not writable")


def n_values(c: RunConfig) -> tuple[int, ...]:
    if c.n:
        return c.n
    return tuple(range(0, (c.n_max or 0) + 1))
