"""Experiment configuration: one INI-style file per run.

A config has a [run] section naming the subcommand plus the blocks the
subcommand needs.  Validation is strict: unknown sections or keys are
rejected, values are type-checked, and the fully-resolved config (defaults
materialized, keys sorted) is written beside every run's outputs so a
manifest can reproduce the run without the original file.  No environment
variable is consulted except WICKNS_OUT, which overrides the output
directory.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .dynamics import INTEGRATORS, SolverConfig
from .fields import SpectralField, field_from_csv, make_field, mode_field, zero_field
from .noise import NoiseOperator, bessel_operator, identity_operator, philox_stream, sample_white_noise_field
from .norms import XsbParams

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "parse_config_text", "COMMANDS"]

COMMANDS = (
    "sample-noise",
    "solve",
    "picard",
    "norms",
    "wick-check",
    "gauge-check",
    "tail-mc",
    "variance-test",
    "trilinear",
    "multiplier",
    "sums",
    "divisors",
    "criticality",
)

# section -> key -> (type tag, default or None if required-when-used)
SCHEMA: dict[str, dict[str, tuple[str, str | None]]] = {
    "run": {
        "command": ("command", None),
        "seed": ("int", "0"),
        "out": ("str", "out"),
        "workers": ("int", "1"),
    },
    "solver": {
        "cutoff": ("int", "16"),
        "dt": ("float", "0.015625"),
        "horizon": ("float", "0.5"),
        "integrator": ("choice:" + ",".join(INTEGRATORS), "exponential-euler"),
        "picard_max_iters": ("int", "25"),
        "picard_tolerance": ("float", "1e-10"),
        "ensemble_size": ("int", "1"),
        "u0": ("str", "zero"),
    },
    "noise": {
        "kind": ("choice:bessel,identity,matrix,none", "bessel"),
        "alpha": ("float", "0.5"),
        "matrix_file": ("str", ""),
    },
    "norms": {
        "s": ("float", "0.0"),
        "b": ("float", "0.3"),
        "bprime": ("float", "-0.3"),
        "p": ("float", "2.0"),
        "q": ("float", "2.0"),
        "t": ("float", "0.5"),
        "window_steps": ("int", "64"),
    },
    "lab": {
        "lambdas": ("floats", "1.0,1.1,1.2,1.3,1.4"),
        "samples": ("int", "2000"),
        "steps": ("int", "64"),
        "cutoffs": ("ints", "16,32,64"),
        "alphas": ("floats", "0.0,0.5,1.0"),
        "substeps": ("int", "2"),
        "ensemble_size": ("int", "100"),
        "data_alpha": ("float", "0.75"),
        "d": ("int", "1"),
        "p": ("str", "2"),
        "delta": ("float", "0.5"),
        "limit": ("int", "100000"),
        "beta": ("float", "2.0"),
        "gamma": ("float", "0.6"),
        "k1_values": ("ints", "64,128,256,512,1024,2048,4096,8192"),
        "k2": ("int", "0"),
        "sum_cutoff": ("int", "131072"),
        "fields": ("int", "100"),
        "dt_halvings": ("int", "4"),
    },
    "sweep": {
        "axis": ("str", ""),
        "values": ("str", ""),
    },
}


class ConfigError(ValueError):
    """Invalid configuration; message carries section/field diagnostics."""


def _coerce(section: str, key: str, spec: str, raw: str):
    try:
        if spec == "int":
            return int(raw)
        if spec == "float":
            return float(raw)
        if spec == "floats":
            return tuple(float(v) for v in raw.split(",") if v.strip() != "")
        if spec == "ints":
            return tuple(int(v) for v in raw.split(",") if v.strip() != "")
        if spec == "str":
            return raw
        if spec == "command":
            if raw not in COMMANDS:
                raise ValueError(f"unknown command {raw!r}")
            return raw
        if spec.startswith("choice:"):
            allowed = spec.split(":", 1)[1].split(",")
            if raw not in allowed:
                raise ValueError(f"must be one of {allowed}")
            return raw
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None
    raise AssertionError(f"bad schema entry {spec}")


def _canonical_text(values: dict) -> str:
    """Deterministic INI dump: every schema key materialized, sorted."""
    out = io.StringIO()
    for section in sorted(SCHEMA):
        out.write(f"[{section}]\n")
        for key in sorted(SCHEMA[section]):
            v = values[(section, key)]
            if isinstance(v, tuple):
                v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            out.write(f"{key} = {v}\n")
        out.write("\n")
    return out.getvalue()


def _from_values(values: dict) -> "ExperimentConfig":
    return ExperimentConfig(
        command=values[("run", "command")],
        seed=values[("run", "seed")],
        out=values[("run", "out")],
        workers=values[("run", "workers")],
        values=values,
        resolved=_canonical_text(values),
    )


@dataclass
class ExperimentConfig:
    command: str
    seed: int
    out: str
    workers: int
    values: dict = dc_field(default_factory=dict)  # (section, key) -> typed value
    resolved: str = ""  # canonical INI text with defaults materialized

    def get(self, section: str, key: str):
        return self.values[(section, key)]

    def with_overrides(
        self,
        command: str | None = None,
        seed: int | None = None,
        out: str | None = None,
        workers: int | None = None,
    ) -> "ExperimentConfig":
        """Copy with CLI-level overrides applied and the resolved text rebuilt."""
        values = dict(self.values)
        if command is not None:
            values[("run", "command")] = _coerce("run", "command", "command", command)
        if seed is not None:
            if not 0 <= seed < 2**64:
                raise ConfigError(f"[run] seed: must be an unsigned 64-bit value, got {seed}")
            values[("run", "seed")] = int(seed)
        if out is not None:
            values[("run", "out")] = str(out)
        if workers is not None:
            if workers < 1:
                raise ConfigError(f"[run] workers: must be >= 1, got {workers}")
            values[("run", "workers")] = int(workers)
        return _from_values(values)

    def with_value(self, section: str, key: str, raw: str) -> "ExperimentConfig":
        """Copy with one schema key replaced from its raw string form."""
        if section not in SCHEMA or key not in SCHEMA[section]:
            raise ConfigError(f"[{section}] {key}: unknown key")
        spec = SCHEMA[section][key][0]
        if spec in ("floats", "ints"):
            raise ConfigError(f"[{section}] {key}: not a scalar key, cannot sweep")
        values = dict(self.values)
        values[(section, key)] = _coerce(section, key, spec, raw)
        return _from_values(values)

    # -- builders ---------------------------------------------------------

    def solver_config(self) -> SolverConfig:
        g = lambda k: self.get("solver", k)
        return SolverConfig(
            cutoff=g("cutoff"),
            dt=g("dt"),
            horizon=g("horizon"),
            integrator=g("integrator"),
            picard_max_iters=g("picard_max_iters"),
            picard_tolerance=g("picard_tolerance"),
            seed=self.seed,
            ensemble_size=g("ensemble_size"),
        )

    def noise_operator(self, cutoff: int | None = None) -> NoiseOperator | None:
        kind = self.get("noise", "kind")
        N = cutoff if cutoff is not None else self.get("solver", "cutoff")
        if kind == "none":
            return None
        if kind == "identity":
            return identity_operator(N)
        if kind == "bessel":
            return bessel_operator(N, self.get("noise", "alpha"))
        path = self.get("noise", "matrix_file")
        if not path:
            raise ConfigError("[noise] matrix_file: required for kind = matrix")
        from .noise import NoiseOperator as _Op

        rows = open(path).read().strip().splitlines()
        if rows[0].strip() != "n,k,re,im":
            raise ConfigError("[noise] matrix_file: expected header 'n,k,re,im'")
        recs = [r.split(",") for r in rows[1:]]
        ns = sorted({int(r[0]) for r in recs})
        NN = (len(ns) - 1) // 2
        mat = np.zeros((len(ns), len(ns)), dtype=np.complex128)
        for r in recs:
            mat[int(r[0]) + NN, int(r[1]) + NN] = complex(float(r[2]), float(r[3]))
        return _Op(NN, matrix=mat)

    def xsb_params(self) -> XsbParams:
        g = lambda k: self.get("norms", k)
        return XsbParams(s=g("s"), b=g("b"), bprime=g("bprime"), p=g("p"), q=g("q"), T=g("t"))

    def initial_field(self, cutoff: int) -> SpectralField:
        spec = self.get("solver", "u0")
        parts = spec.split(":")
        try:
            if parts[0] == "zero":
                return zero_field(cutoff)
            if parts[0] == "white":
                variance = float(parts[1]) if len(parts) > 1 else 1.0
                return sample_white_noise_field(cutoff, variance, philox_stream(self.seed, 999))
            if parts[0] == "mode":
                n = int(parts[1])
                re = float(parts[2]) if len(parts) > 2 else 1.0
                im = float(parts[3]) if len(parts) > 3 else 0.0
                return mode_field(cutoff, n, complex(re, im))
            if parts[0] == "csv":
                return field_from_csv(open(parts[1]).read())
        except (IndexError, ValueError, OSError) as exc:
            raise ConfigError(f"[solver] u0: {exc}") from None
        raise ConfigError(f"[solver] u0: unknown kind {parts[0]!r}")

    def lab_p(self) -> float:
        raw = self.get("lab", "p")
        if raw in ("inf", "infinity"):
            return math.inf
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[lab] p: not a number or 'inf': {raw!r}") from None


def parse_config_text(text: str, origin: str = "<string>") -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if "run" not in cp or "command" not in cp["run"]:
        raise ConfigError("[run] command: missing")
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"[{section}]: unknown section")
        for key in cp[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(f"[{section}] {key}: unknown key")
    values: dict = {}
    for section, keys in SCHEMA.items():
        for key, (spec, default) in keys.items():
            if section in cp and key in cp[section]:
                raw = cp[section][key]
            elif default is not None:
                raw = default
            else:
                raise ConfigError(f"[{section}] {key}: missing")
            values[(section, key)] = _coerce(section, key, spec, raw)
    return _from_values(values)


def parse_config(path: str) -> ExperimentConfig:
    try:
        text = open(path).read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config_text(text, origin=path)
