"""Command-line front end: calibration, design arithmetic, simulation, and
the design-number reproduction table.

Subcommands: ``calibrate``, ``design``, ``simulate``, ``compile``,
``reproduce-paper``.  Configuration is a flat text file of ``key = value``
lines with units spelled out in the key names (``L_pH``, ``C_fF``, ...);
output comes as an aligned text report or line-delimited JSON records
(``--format records``).  Exit codes: 0 ok, 2 config error, 3 numerical
failure, 4 reproduction-table failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bus as busmod
from . import squid as squidmod
from .bus import BusParams, WeakCouplingWarning
from .compiler import (
    CircuitParseError,
    ControlParams,
    LogicalRegister,
    compile_circuit,
    encode,
    ideal_circuit_unitary,
    parse_circuit,
)
from .evolve import reduced_density_matrix, run_schedule, trace_distance
from .squid import FluxGrid, NoDoubleWellError, SquidParams

__all__ = [
    "ConfigError",
    "DesignReport",
    "parse_config",
    "cmd_calibrate",
    "cmd_design",
    "cmd_simulate",
    "cmd_compile",
    "cmd_reproduce_paper",
    "main",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4

_NUMERICAL_ERRORS = (
    squidmod.WindowTooSmallError,
    squidmod.BracketError,
    squidmod.ConvergenceError,
    busmod.SingularSystemError,
    np.linalg.LinAlgError,
)


class ConfigError(ValueError):
    """Configuration file missing, unparsable, or inconsistent."""


def parse_config(path: str | Path) -> dict:
    """Read a flat `key = value` config file (# starts a comment)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        cfg[key] = _parse_value(value)
    return cfg


def _parse_value(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise ConfigError(f"missing config key(s): {', '.join(missing)}")


def _number(cfg: dict, key: str, default=None):
    if key not in cfg:
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key} must be a number, got {value!r}")
    return value


@dataclass
class DesignReport:
    """One command's inputs, derived quantities, and pass/warn flags."""

    kind: str
    inputs: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"fluxbus {self.kind} report", "=" * (len(self.kind) + 16)]
        for title, mapping in (("inputs", self.inputs), ("derived", self.derived), ("flags", self.flags)):
            if not mapping:
                continue
            lines.append(title)
            for key, value in mapping.items():
                lines.append(f"  {key:<28} {_format_value(value)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"

    def to_records(self) -> str:
        rows = []
        for section, mapping in (("input", self.inputs), ("derived", self.derived), ("flag", self.flags)):
            for key, value in mapping.items():
                rows.append({"kind": self.kind, "section": section, "key": key, "value": value})
        for note in self.notes:
            rows.append({"kind": self.kind, "section": "note", "key": "note", "value": note})
        return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _grid_from_config(cfg: dict) -> FluxGrid | None:
    if "grid_points" not in cfg and "phi_window_lo" not in cfg:
        return None
    return FluxGrid(
        phi_min=_number(cfg, "phi_window_lo", -0.25),
        phi_max=_number(cfg, "phi_window_hi", 1.25),
        n_points=int(_number(cfg, "grid_points", 4097)),
    )


def _squid_from_config(cfg: dict, renorm: float = 1.0) -> SquidParams:
    _require(cfg, "L_pH", "C_fF", "Ic_uA")
    try:
        return SquidParams(
            l_ph=_number(cfg, "L_pH"),
            c_ff=_number(cfg, "C_fF"),
            ic_ua=_number(cfg, "Ic_uA"),
            phi_x=_number(cfg, "phi_x_Phi0", 0.5),
            l_renorm_factor=renorm,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_calibrate(cfg: dict) -> DesignReport:
    """Two-level parameters at the configured bias; optional inverse
    calibration of Ic against a target tunneling splitting and Ic sweep."""
    params = _squid_from_config(cfg)
    grid = _grid_from_config(cfg)
    report = DesignReport(kind="calibrate")
    report.inputs = {
        "L_pH": params.l_ph,
        "C_fF": params.c_ff,
        "Ic_uA": params.ic_ua,
        "phi_x_Phi0": params.phi_x,
    }
    beta = squidmod.beta_l(params)
    report.derived["beta_L"] = beta
    report.flags["double_well"] = beta > 1.0

    if beta <= 1.0:
        harmonic = 1.0 / (2.0 * math.pi * math.sqrt(params.l_ph * 1e-12 * params.c_ff * 1e-15)) / 1e9
        sol = squidmod.solve_levels(params, grid=grid, k=2)
        report.derived["harmonic_spacing_GHz"] = harmonic
        report.derived["level_gap_GHz"] = sol.gap
        report.notes.append("no double well (beta_L <= 1): harmonic-limit report")
    else:
        tlp = squidmod.extract_two_level(params, grid=grid)
        report.derived["delta_GHz"] = tlp.delta_ghz
        report.derived["epsilon_GHz"] = tlp.epsilon_ghz
        report.derived["i_p_uA"] = tlp.i_p_ua
        report.derived["pi_pulse_ns"] = 1.0 / (2.0 * tlp.delta_ghz)
        report.flags["delta_at_solver_floor"] = tlp.at_solver_floor

    target = _number(cfg, "target_delta_GHz")
    if target is not None:
        bracket = (_number(cfg, "bracket_lo_uA", 1.5), _number(cfg, "bracket_hi_uA", 3.0))
        ic = squidmod.calibrate_critical_current(params, target, bracket=bracket, grid=grid)
        report.derived["target_delta_GHz"] = target
        report.derived["calibrated_Ic_uA"] = ic

    if "sweep_Ic_lo_uA" in cfg:
        _require(cfg, "sweep_Ic_hi_uA", "sweep_points")
        lo, hi = _number(cfg, "sweep_Ic_lo_uA"), _number(cfg, "sweep_Ic_hi_uA")
        points = int(_number(cfg, "sweep_points"))
        for idx, ic in enumerate(np.linspace(lo, hi, points)):
            sol = squidmod.solve_levels(replace(params, ic_ua=float(ic), phi_x=0.5), grid=grid, k=2)
            report.derived[f"sweep[{idx}].Ic_uA"] = float(ic)
            report.derived[f"sweep[{idx}].delta_GHz"] = sol.gap
    return report


def cmd_design(cfg: dict) -> DesignReport:
    """Bus design arithmetic: effective mutual, coupling strength, weak
    coupling ratio, geometric qubit bound, residual decay time."""
    _require(cfg, "M_pH", "L_b_nH", "N")
    try:
        bus = BusParams(
            l_b_nh=_number(cfg, "L_b_nH"),
            m_ph=_number(cfg, "M_pH"),
            n_qubits=int(_number(cfg, "N")),
            k_geom=_number(cfg, "k_geom", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    l_ph = _number(cfg, "L_pH", 0.0) or 0.0
    renorm = 1.0 + bus.m_ph**2 / (l_ph * bus.l_b_ph) if l_ph else 1.0
    squid = _squid_from_config(cfg, renorm=renorm)

    report = DesignReport(kind="design")
    report.inputs = {
        "L_pH": squid.l_ph,
        "C_fF": squid.c_ff,
        "Ic_uA": squid.ic_ua,
        "M_pH": bus.m_ph,
        "L_b_nH": bus.l_b_nh,
        "N": bus.n_qubits,
        "k_geom": bus.k_geom,
    }

    m_eff = busmod.effective_mutual(bus)
    report.derived["M_eff_fH"] = m_eff
    report.derived["L_renorm_factor"] = renorm

    if bus.m_ph == 0.0:
        report.derived["J_MHz"] = 0.0
    else:
        tlp = squidmod.extract_two_level(squid)
        j_mhz = busmod.coupling_strength(tlp, bus)
        report.derived["i_p_uA"] = tlp.i_p_ua
        report.derived["J_MHz"] = j_mhz
        report.derived["cphase_wait_ns"] = 1.0 / (32.0 * j_mhz * 1e-3)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakCouplingWarning)
        ratio = busmod.weak_coupling_ratio(squid, bus)
    report.derived["weak_coupling_ratio"] = ratio
    report.flags["weak_coupling_warn"] = ratio >= busmod.WEAK_COUPLING_WARN_AT
    if bus.m_ph > 0.0:
        n_max = busmod.max_qubits(bus)
        report.derived["N_max"] = n_max
        report.flags["N_exceeds_max"] = bus.n_qubits > n_max

    r_uohm = _number(cfg, "R_uOhm")
    if r_uohm is not None:
        report.derived["residual_decay_ms"] = busmod.residual_decay_time(bus.l_b_nh, r_uohm)
    return report


def _control_from_config(cfg: dict, mode: str | None) -> ControlParams:
    try:
        return ControlParams(
            delta_ghz=_number(cfg, "delta_GHz", 2.6),
            epsilon_ghz=_number(cfg, "epsilon_GHz", 2.7),
            j_mhz=_number(cfg, "J_MHz", 25.0),
            mode=mode or cfg.get("mode", "ideal"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(cfg: dict, circuit_text: str, mode: str | None = None) -> dict:
    """Compile and run a logical circuit; report fidelity against the exact
    logical unitary, code-space leakage, and spectator disturbance."""
    _require(cfg, "n_logical")
    n_logical = int(_number(cfg, "n_logical"))
    if n_logical < 0:
        raise ConfigError("n_logical must be non-negative")
    params = _control_from_config(cfg, mode)
    circuit = parse_circuit(circuit_text)
    reg = LogicalRegister.default(n_logical)
    if circuit.max_qubit() >= n_logical:
        raise ConfigError("circuit addresses a logical qubit outside the register")

    # bitstrings of 0/1 digits survive the int round trip except for leading
    # zeros, which zfill restores
    initial_bits = str(cfg.get("initial_bits", "0" * n_logical)).zfill(n_logical)
    if len(initial_bits) != n_logical or (initial_bits and set(initial_bits) - {"0", "1"}):
        raise ConfigError(f"initial_bits must be a {n_logical}-bit string of 0s and 1s")
    schedule = compile_circuit(circuit, reg, params)
    state0 = encode(initial_bits, reg)
    final = run_schedule(state0, schedule)

    iso = reg.isometry()
    u = ideal_circuit_unitary(circuit, n_logical)
    logical0 = np.zeros(2**n_logical, dtype=complex)
    logical0[int(initial_bits, 2) if initial_bits else 0] = 1.0
    ideal_final = iso @ (u @ logical0)
    fidelity_value = float(abs(np.vdot(ideal_final, final.amplitudes)) ** 2)
    code_amp = iso.conj().T @ final.amplitudes
    leakage = max(0.0, 1.0 - float(np.linalg.norm(code_amp) ** 2))

    touched = {q for gate in circuit.gates for q in gate.qubits}
    spectators = {}
    for ell in range(n_logical):
        if ell in touched:
            continue
        rho0 = reduced_density_matrix(state0, list(reg.pairs[ell]))
        rho1 = reduced_density_matrix(final, list(reg.pairs[ell]))
        spectators[str(ell)] = trace_distance(rho0, rho1)

    probabilities = {
        format(ell, f"0{n_logical}b") if n_logical else "": float(abs(code_amp[ell]) ** 2)
        for ell in range(2**n_logical)
    }
    record = {
        "command": "simulate",
        "mode": params.mode,
        "n_logical": n_logical,
        "initial_bits": initial_bits,
        "gates": len(circuit.gates),
        "segments": len(schedule.segments),
        "duration_ns": schedule.duration_ns,
        "fidelity": fidelity_value,
        "leakage": leakage,
        "spectator_trace_distance": spectators,
        "logical_probabilities": probabilities,
    }
    if "seed" in cfg:
        record["seed"] = cfg["seed"]
    return record


def cmd_compile(cfg: dict, circuit_text: str, mode: str | None = None) -> dict:
    """Compile a circuit to its pulse schedule without running it."""
    _require(cfg, "n_logical")
    n_logical = int(_number(cfg, "n_logical"))
    params = _control_from_config(cfg, mode)
    circuit = parse_circuit(circuit_text)
    reg = LogicalRegister.default(n_logical)
    schedule = compile_circuit(circuit, reg, params)

    segments = []
    for seg in schedule.segments:
        if seg.mode == "ideal":
            op = seg.ideal_op
            segments.append(
                {"kind": "ideal", "op": op[0], "qubit": op[1], "angle": op[2] if len(op) > 2 else None}
            )
        else:
            driven_x = [] if seg.delta_ghz is None else [int(q) for q in np.nonzero(seg.delta_ghz)[0]]
            driven_z = [] if seg.epsilon_ghz is None else [int(q) for q in np.nonzero(seg.epsilon_ghz)[0]]
            kind = "wait" if not driven_x and not driven_z else "drive"
            segments.append(
                {"kind": kind, "duration_ns": seg.duration_ns, "x_drive": driven_x, "z_drive": driven_z}
            )
    return {
        "command": "compile",
        "mode": params.mode,
        "n_logical": n_logical,
        "gates": len(circuit.gates),
        "segments": segments,
        "duration_ns": schedule.duration_ns,
    }


# Quoted design values of the reproduced parameter study, with tolerances.
_DESIGN_SQUID = {"L_pH": 150.0, "C_fF": 80.0, "Ic_uA": 3.0}
_IC_SUPPRESSED = 2.375
_BIAS_OFFSET = 0.15e-3
_QUOTED = {
    "tunneling_unsuppressed_Hz": 30.0,
    "tunneling_suppressed_GHz": 2.6,
    "bias_splitting_GHz": 2.7,
    "effective_mutual_fH": 2.0,
    "coupling_J_MHz": 25.0,
    "N_max": 1000,
    "pi_pulse_ns": 0.4,
}


def cmd_reproduce_paper() -> tuple[list, bool]:
    """Recompute the quoted design numbers and compare at their tolerances.

    Returns the rows and the overall verdict.  The pi-pulse row compares
    2 x (1/(2 delta)) against the quoted 0.4 ns: the quoted time corresponds
    to 1/delta, a factor-2 convention gap that is flagged, not hidden.
    """
    squid = SquidParams(**{
        "l_ph": _DESIGN_SQUID["L_pH"],
        "c_ff": _DESIGN_SQUID["C_fF"],
        "ic_ua": _DESIGN_SQUID["Ic_uA"],
    })
    bus = BusParams(l_b_nh=2.0, m_ph=2.0, n_qubits=1000, k_geom=1.0)

    tlp_unsuppressed = squidmod.extract_two_level(squid)
    suppressed = replace(squid, ic_ua=_IC_SUPPRESSED)
    tlp_suppressed = squidmod.extract_two_level(suppressed)
    biased = replace(squid, phi_x=0.5 + _BIAS_OFFSET)
    tlp_biased = squidmod.extract_two_level(biased)

    m_eff = busmod.effective_mutual(bus)
    j_mhz = busmod.coupling_strength(tlp_unsuppressed, bus)
    n_max = busmod.max_qubits(bus)
    pi_pulse = 1.0 / (2.0 * tlp_suppressed.delta_ghz)

    def ratio_within(computed, quoted, factor):
        return computed > 0 and 1.0 / factor <= computed / quoted <= factor

    rows = [
        {
            "name": "tunneling_unsuppressed_Hz",
            "computed": tlp_unsuppressed.delta_ghz * 1e9,
            "quoted": _QUOTED["tunneling_unsuppressed_Hz"],
            "tolerance": "x/3 to x3",
            "ok": ratio_within(tlp_unsuppressed.delta_ghz * 1e9, 30.0, 3.0),
            "note": "at solver floor" if tlp_unsuppressed.at_solver_floor else "",
        },
        {
            "name": "tunneling_suppressed_GHz",
            "computed": tlp_suppressed.delta_ghz,
            "quoted": _QUOTED["tunneling_suppressed_GHz"],
            "tolerance": "+-20%",
            "ok": abs(tlp_suppressed.delta_ghz - 2.6) <= 0.2 * 2.6,
            "note": f"Ic = {_IC_SUPPRESSED} uA",
        },
        {
            "name": "bias_splitting_GHz",
            "computed": tlp_biased.epsilon_ghz,
            "quoted": _QUOTED["bias_splitting_GHz"],
            "tolerance": "x/2 to x2",
            "ok": ratio_within(tlp_biased.epsilon_ghz, 2.7, 2.0),
            "note": "0.15 mPhi0 offset, barrier up",
        },
        {
            "name": "effective_mutual_fH",
            "computed": m_eff,
            "quoted": _QUOTED["effective_mutual_fH"],
            "tolerance": "exact",
            "ok": abs(m_eff - 2.0) <= 1e-9,
            "note": "",
        },
        {
            "name": "coupling_J_MHz",
            "computed": j_mhz,
            "quoted": _QUOTED["coupling_J_MHz"],
            "tolerance": "x/2 to x2",
            "ok": ratio_within(j_mhz, 25.0, 2.0),
            "note": f"i_p = {tlp_unsuppressed.i_p_ua:.4g} uA",
        },
        {
            "name": "N_max",
            "computed": n_max,
            "quoted": _QUOTED["N_max"],
            "tolerance": "exact",
            "ok": n_max == 1000,
            "note": "",
        },
        {
            "name": "pi_pulse_ns",
            "computed": pi_pulse,
            "quoted": _QUOTED["pi_pulse_ns"],
            "tolerance": "+-25% after x2",
            "ok": abs(2.0 * pi_pulse - 0.4) <= 0.25 * 0.4,
            "note": "convention factor <= 2",
        },
    ]
    return rows, all(row["ok"] for row in rows)


def _reproduce_text(rows: list, overall: bool) -> str:
    lines = ["design-number reproduction", "-" * 78]
    header = f"{'name':<28} {'computed':>14} {'quoted':>10} {'tolerance':>14} {'status':>7}"
    lines.append(header)
    for row in rows:
        status = "PASS" if row["ok"] else "FAIL"
        computed = f"{row['computed']:.6g}" if isinstance(row["computed"], float) else str(row["computed"])
        lines.append(
            f"{row['name']:<28} {computed:>14} {row['quoted']:>10} {row['tolerance']:>14} {status:>7}"
            + (f"  [{row['note']}]" if row["note"] else "")
        )
    lines.append("-" * 78)
    lines.append(f"rows: {len(rows)}  overall: {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _reproduce_records(rows: list, overall: bool) -> str:
    out = [json.dumps(row, sort_keys=True) for row in rows]
    out.append(json.dumps({"overall": overall, "rows": len(rows)}, sort_keys=True))
    return "\n".join(out) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if out_path:
        Path(out_path).write_text(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fluxbus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True, needs_circuit=False):
        if needs_config:
            p.add_argument("--config", required=True, help="key = value config file")
        if needs_circuit:
            p.add_argument("--circuit", required=True, help="circuit file (GATE q[,q2][,angle])")
            p.add_argument("--mode", choices=("ideal", "physical"), default=None)
        p.add_argument("--out", default=None, help="also write the output to this path")
        p.add_argument("--format", choices=("text", "records"), default="text")

    add_common(sub.add_parser("calibrate", help="two-level parameters and Ic calibration"))
    add_common(sub.add_parser("design", help="bus design arithmetic"))
    add_common(sub.add_parser("simulate", help="compile and run a circuit"), needs_circuit=True)
    add_common(sub.add_parser("compile", help="compile a circuit to a pulse schedule"), needs_circuit=True)
    add_common(sub.add_parser("reproduce-paper", help="reproduce the quoted design numbers"), needs_config=False)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "calibrate":
            report = cmd_calibrate(parse_config(args.config))
            _emit(report.to_text() if args.format == "text" else report.to_records(), args.out)
        elif args.command == "design":
            report = cmd_design(parse_config(args.config))
            _emit(report.to_text() if args.format == "text" else report.to_records(), args.out)
        elif args.command in ("simulate", "compile"):
            cfg = parse_config(args.config)
            try:
                circuit_text = Path(args.circuit).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read circuit {args.circuit}: {exc}") from exc
            handler = cmd_simulate if args.command == "simulate" else cmd_compile
            record = handler(cfg, circuit_text, mode=args.mode)
            if args.format == "records":
                _emit(json.dumps(record, sort_keys=True) + "\n", args.out)
            else:
                _emit(_record_text(record), args.out)
        elif args.command == "reproduce-paper":
            rows, overall = cmd_reproduce_paper()
            text = _reproduce_text(rows, overall) if args.format == "text" else _reproduce_records(rows, overall)
            _emit(text, args.out)
            if not overall:
                sys.stderr.write("error[acceptance]: reproduction table has failing rows\n")
                return EXIT_ACCEPTANCE
    except (ConfigError, CircuitParseError) as exc:
        sys.stderr.write(f"error[config]: {exc}\n")
        return EXIT_CONFIG
    except NoDoubleWellError as exc:
        sys.stderr.write(f"error[numerical]: {exc}\n")
        return EXIT_NUMERICAL
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"error[numerical]: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        sys.stderr.write(f"error[config]: {exc}\n")
        return EXIT_CONFIG
    return EXIT_OK


def _record_text(record: dict) -> str:
    lines = [f"fluxbus {record['command']} record", "=" * 24]

    def walk(prefix: str, value):
        if isinstance(value, dict):
            for key, sub in value.items():
                walk(f"{prefix}.{key}" if prefix else str(key), sub)
        elif isinstance(value, list):
            for idx, sub in enumerate(value):
                walk(f"{prefix}[{idx}]", sub)
        else:
            lines.append(f"  {prefix:<34} {_format_value(value)}")

    for key, value in record.items():
        walk(key, value)
    return "\n".join(lines) + "\n"


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
