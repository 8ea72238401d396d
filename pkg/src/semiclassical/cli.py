"""Command-line entry point.

    semiclassical {solve,sweep,classical,diagnose,flea,accept} [--config FILE] [--out DIR]

Config files are flat INI-style text: ``[section]`` headers, ``key = value`` lines and
``#`` comments.  Exit codes: 0 success, 1 acceptance failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, classical, experiments, models, quantize, tensor
from .errors import ConfigError, LabError, NumericalError, ParseError, TypeMismatch, UnknownKey

CSV_COLUMNS = ("model", "param_name", "param_value", "observable", "quantum", "classical", "abs_error")
MODEL_KINDS = ("curie_weiss", "bose_hubbard", "double_well")
PERTURBATION_KINDS = ("none", "cw_field", "schrodinger_flea")

# section -> key -> (type, default)
SCHEMA: dict[str, dict[str, tuple[str, object]]] = {
    "model": {
        "kind": ("model_kind", "curie_weiss"),
        "N": ("int", 100),
        "hbar": ("float", 0.1),
        "B": ("float", 0.5),
        "J": ("float", 1.0),
        "convention": ("convention", "spin"),
        "half_width": ("float", 3.0),
        "grid_points": ("int", 2048),
    },
    "sweep": {
        "N": ("int_list", (50, 100, 200, 500, 1000)),
        "hbar": ("float_list", (0.5, 0.2, 0.1, 0.05, 0.02)),
        "observables": ("str_list", ()),
        "window": ("float", 2.0),
        "workers": ("int", 1),
        "diagnose_N": ("int_list", (8, 16, 32, 64)),
        "flea_N": ("int_list", (100, 2000)),
    },
    "perturbation": {
        "kind": ("perturbation_kind", "none"),
        "epsilon": ("float_list", (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)),
        "amplitude": ("float", 0.1),
        "center": ("float", 1.0),
        "width": ("float", 0.2),
    },
    "output": {
        "csv": ("str", "records.csv"),
        "json": ("str", "report.json"),
        "stamp": ("bool", False),
    },
}


def _convert(kind: str, raw: str, line: int):
    def fail(what):
        return TypeMismatch(f"expected {what}, got {raw!r}", line)

    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError
        if kind == "int_list":
            return tuple(int(v) for v in _split(raw))
        if kind == "float_list":
            return tuple(float(v) for v in _split(raw))
        if kind == "str_list":
            return tuple(_split(raw))
    except ValueError:
        raise fail(kind.replace("_", " ")) from None
    choices = {"model_kind": MODEL_KINDS, "perturbation_kind": PERTURBATION_KINDS, "convention": ("spin", "printed")}
    if kind in choices:
        if raw not in choices[kind]:
            raise fail("one of " + ", ".join(choices[kind]))
        return raw
    return raw


def _split(raw: str) -> list[str]:
    return [v.strip() for v in raw.split(",") if v.strip()]


@dataclass(frozen=True)
class RunConfig:
    model: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    perturbation: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def canonical(self) -> str:
        lines = []
        for sec in SCHEMA:
            lines.append(f"[{sec}]")
            values = getattr(self, sec)
            for key in sorted(SCHEMA[sec]):
                v = values[key]
                if isinstance(v, tuple):
                    v = ", ".join(_fmt(x) for x in v)
                else:
                    v = _fmt(v)
                lines.append(f"{key} = {v}")
        return "\n".join(lines) + "\n"

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_config(text: str) -> RunConfig:
    values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}
    seen: set[tuple[str, str]] = set()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise UnknownKey(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if section is None:
            raise ParseError("key outside of any [section]", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA[section]:
            raise UnknownKey(f"unknown key {key!r} in [{section}]", lineno)
        if (section, key) in seen:
            raise ParseError(f"duplicate key {key!r} in [{section}]", lineno)
        seen.add((section, key))
        values[section][key] = _convert(SCHEMA[section][key][0], val, lineno)
    return RunConfig(**values)


# output


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _g17(v) -> str:
    return format(float(v), ".17g")


def records_to_csv(records, config_hash: str) -> str:
    buf = io.StringIO()
    buf.write(f"# config_sha256={config_hash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in experiments.sort_records(records):
        w.writerow([r.model, r.param_name, _g17(r.param_value), r.observable, _g17(r.quantum), _g17(r.classical), _g17(r.abs_error)])
    return buf.getvalue()


def _plain(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def make_report(config: RunConfig, command: str, body: dict, stamp: bool = False) -> dict:
    return _plain(
        {
            "metadata": {
                "version": __version__,
                "command": command,
                "config_sha256": config.sha256,
                "timestamp": datetime.now(timezone.utc).isoformat() if stamp else None,
            },
            **body,
        }
    )


def emit_report(obj, fmt: str, path, config: RunConfig | None = None) -> Path:
    """Write records (csv) or a report dict (json) atomically; returns the path."""
    path = Path(path)
    if fmt == "csv":
        if config is None:
            raise ValueError("csv output needs the config for its hash line")
        _atomic_write(path, records_to_csv(obj, config.sha256))
    elif fmt == "json":
        _atomic_write(path, json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


# commands


def _sweep_spec(cfg: RunConfig) -> experiments.SweepSpec:
    m, s = cfg.model, cfg.sweep
    params = s["hbar"] if m["kind"] == "double_well" else s["N"]
    try:
        return experiments.SweepSpec(
            m["kind"], tuple(params), tuple(s["observables"]), J=m["J"], B=m["B"], convention=m["convention"],
            half_width=m["half_width"], grid_points=m["grid_points"], window=s["window"], workers=s["workers"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _classical_model(cfg: RunConfig) -> classical.ClassicalModel:
    m = cfg.model
    if m["kind"] == "curie_weiss":
        return classical.curie_weiss(m["J"], m["B"])
    if m["kind"] == "bose_hubbard":
        return classical.bose_hubbard()
    return classical.double_well()


def _perturbation(cfg: RunConfig) -> models.Perturbation | None:
    p = cfg.perturbation
    if p["kind"] == "none":
        return None
    eps = p["epsilon"][0] if p["epsilon"] else 0.0
    return models.Perturbation(p["kind"], epsilon=eps, amplitude=p["amplitude"], center=p["center"], width=p["width"])


def cmd_solve(cfg: RunConfig) -> tuple[dict, list]:
    m = cfg.model
    pert = _perturbation(cfg)
    if m["kind"] == "curie_weiss":
        mcfg = models.CurieWeissConfig(N=m["N"], B=m["B"], J=m["J"])
        H = models.build_cw_dicke(mcfg)
    elif m["kind"] == "bose_hubbard":
        mcfg = models.BoseHubbardConfig(N=m["N"], convention=m["convention"])
        H = models.build_bh(mcfg)
    else:
        mcfg = models.DoubleWellConfig(hbar=m["hbar"], half_width=m["half_width"], grid_points=m["grid_points"])
        H, _ = models.build_double_well(mcfg)
    if pert is not None:
        try:
            H = models.apply_perturbation(H, pert, mcfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    gp = experiments.ground_state(H)
    body = {
        "model": m["kind"],
        "parameters": dataclasses.asdict(mcfg),
        "perturbation": dataclasses.asdict(pert) if pert else None,
        "ground_energy": gp.value,
        "residual": gp.residual,
        "dimension": H.n,
    }
    if m["kind"] == "curie_weiss":
        body["m3"] = float(np.sum((2.0 * np.arange(H.n) - mcfg.N) / mcfg.N * gp.vector**2))
    if m["kind"] == "double_well":
        body["q_mean"] = float(np.sum(mcfg.grid * gp.vector**2))
    return body, []


def cmd_sweep(cfg: RunConfig) -> tuple[dict, list]:
    spec = _sweep_spec(cfg)
    recs = experiments.run_limit_sweep(spec)
    limits = {}
    for obs in spec.observables:
        est = experiments.extrapolate(experiments.select(recs, obs))
        limits[obs] = dataclasses.asdict(est)
    return {"model": spec.model, "param_name": spec.param_name, "limits": limits}, recs


def cmd_classical(cfg: RunConfig) -> tuple[dict, list]:
    return {"ssb": classical.ssb_verdict(_classical_model(cfg))}, []


def cmd_diagnose(cfg: RunConfig) -> tuple[dict, list]:
    Ns = cfg.sweep["diagnose_N"]
    pairs = {"cos_theta,sin_theta_cos_phi": (tensor.Z, tensor.X), "cos_theta,cos_theta": (tensor.Z, tensor.Z)}
    diag = quantize.quantization_diagnostics(Ns, pairs)
    qnh = {str(N): tensor.verify_qnh(N, J=cfg.model["J"], B=cfg.model["B"]) for N in range(2, 11)}
    tconv = tensor.measure_dgr_convention(tensor.quantize_poly, tensor.X, tensor.Z, tensor.ball_bracket(tensor.X, tensor.Z), (4,))
    return {
        "conventions": {"sphere": diag["convention"], "tensor": {"s": tconv[0], "c": tconv[1]}},
        "tables": {"diagnostics": [dataclasses.asdict(r) for r in diag["rows"]], "verify_qnh": qnh},
    }, []


def cmd_flea(cfg: RunConfig) -> tuple[dict, list]:
    p, m, s = cfg.perturbation, cfg.model, cfg.sweep
    try:
        scan = experiments.flea_scan_cw(m["B"], m["J"], p["epsilon"], s["flea_N"])
        flea = models.Perturbation("schrodinger_flea", amplitude=p["amplitude"], center=p["center"], width=p["width"])
        dw = experiments.flea_schrodinger(s["hbar"], flea, m["half_width"], m["grid_points"])
    except (ValueError, TypeError) as exc:
        if isinstance(exc, LabError):
            raise
        raise ConfigError(str(exc)) from exc
    return {"tables": {"curie_weiss": scan, "double_well": dw}}, []


def cmd_accept(cfg: RunConfig) -> tuple[dict, list]:
    rep = experiments.acceptance_suite({"workers": cfg.sweep["workers"]})
    return {"criteria": rep["checks"], "conventions": rep["conventions"], "all_required_passed": rep["all_required_passed"]}, []


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "classical": cmd_classical,
    "diagnose": cmd_diagnose,
    "flea": cmd_flea,
    "accept": cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semiclassical", description="classical limits and symmetry breaking lab")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", type=Path, default=None, help="config file (defaults apply when omitted)")
    ap.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    ap.add_argument("--stamp", action="store_true", help="record a wall-clock timestamp in the JSON report")
    return ap


def run_command(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text)
        body, records = COMMANDS[args.command](cfg)
        out = args.out.resolve()
        stamp = args.stamp or cfg.output["stamp"]
        report = make_report(cfg, args.command, body, stamp)
        emit_report(report, "json", out / cfg.output["json"])
        if records:
            emit_report(records, "csv", out / cfg.output["csv"], cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    except (LabError, ValueError) as exc:
        print(f"invalid request ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    if args.command == "accept":
        for c in body["criteria"]:
            status = "PASS" if c["passed"] else ("FAIL" if c["required"] else "DATA")
            print(f"{status:4s} {c['id']:<22s} measured={c['measured']!r} target={c['target']!r} tol={c['tolerance']!r}")
        return 0 if body["all_required_passed"] else 1
    return 0


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
