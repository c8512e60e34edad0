"""Command-line entry point: ``zcwell design|analyze|susy|asym|verify``."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import kinetic_expectation, momentum_moments, momentum_wavefunction
from .asymwell import AsymmetricWell, solve_levels, solve_zc_chi, tuned_well, zc_wave
from .core import UnitSystem
from .designer import triangle_design, twin_designs
from .errors import ZcDomainError, ZcNumericalError, ZcWellError
from .io import (csv_text, design_to_dict, dumps, partner_to_dict, read_design,
                 units_override, write_text)
from .oracle import verify_design
from .susy import partner_potential


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    units: Optional[UnitSystem] = None
    width: Optional[float] = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        ins = {os.path.abspath(p) for p in self.inputs}
        for out in self.outputs:
            if os.path.abspath(out) in ins:
                raise ZcDomainError(f"output path {out} would overwrite an input")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ZcDomainError(f"{name} must be positive, got {tol}")


def _pgrid(spec: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ZcDomainError(f"--pgrid must look like start:stop:count, got {spec!r}") from None
    if count < 2 or not stop > start:
        raise ZcDomainError("--pgrid needs stop > start and count >= 2")
    return np.linspace(start, stop, count)


def _ladder(spec: str) -> list[int]:
    try:
        return [int(s) for s in spec.split(",") if s.strip()]
    except ValueError:
        raise ZcDomainError(f"--ladder must be comma-separated integers, got {spec!r}") from None


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        write_text(path, text)
    else:
        out.write(text)


def _with_meta(data: dict) -> dict:
    return {**data, "_meta": {"zcwell_version": __version__}}


def _stem(path: str) -> str:
    return path[:-4] if path.endswith(".csv") else path


def cmd_design(args, cfg: RunConfig, out) -> None:
    width = cfg.width if cfg.width is not None else 1.0
    if args.input:
        design = read_design(args.input, cfg.units)
    elif args.shape == "triangle":
        design = triangle_design(args.c, width, cfg.units)
    elif args.shape in ("twin-symmetric", "twin-antisymmetric"):
        sym, anti = twin_designs(width, cfg.units)
        design = sym if args.shape == "twin-symmetric" else anti
    else:
        raise ZcDomainError("design needs --input or --shape")
    _emit(dumps(_with_meta(design_to_dict(design))), args.output, out)


def cmd_analyze(args, cfg: RunConfig, out) -> None:
    design = read_design(args.input, cfg.units)
    wave = design.wave
    ps = _pgrid(args.pgrid)
    xs = np.union1d(np.linspace(0.0, wave.width, args.nx), wave.x)
    phi2 = momentum_wavefunction(design, ps).density
    energies = kinetic_expectation(design)
    summary = {"energy": energies}
    mom = None
    if wave.psi[0] == 0.0 and wave.psi[-1] == 0.0:
        mom = momentum_moments(design, tail_tolerance=cfg.tolerances["tail_tol"], quadrature=True)
        summary["momentum"] = mom
    if args.out_csv:
        stem = _stem(args.out_csv)
        write_text(stem + "_x.csv", csv_text(["x", "psi"], zip(xs, wave(xs))))
        write_text(stem + "_p.csv", csv_text(["p", "phi2"], zip(ps, phi2)))
    else:
        summary["x"] = {"x": xs, "psi": wave(xs)}
        summary["p"] = {"p": ps, "phi2": phi2}
    out.write(dumps(summary))
    if mom is not None:
        out.write(f"parseval: integral |phi|^2 dp = {mom.norm_quadrature!r} "
                  f"(deviation {abs(mom.norm_quadrature - 1.0):.3e})\n")


def cmd_susy(args, cfg: RunConfig, out) -> None:
    design = read_design(args.input, cfg.units)
    _emit(dumps(partner_to_dict(partner_potential(design))), args.out, out)


def cmd_asym(args, cfg: RunConfig, out) -> None:
    units = cfg.units or UnitSystem()
    if args.action == "tune":
        well = tuned_well(args.a, args.b, args.branch, units)
        wave = zc_wave(well)
        xs = np.union1d(np.linspace(0.0, well.width, args.nx), [well.a])
        out.write(f"V0 = {well.V0!r}\nchi = {solve_zc_chi(args.a, args.b, args.branch)!r}\n")
        _emit(csv_text(["x", "psi"], zip(xs, wave(xs))), args.out_csv, out)
        return
    if args.v0 is None:
        raise ZcDomainError("asym needs --v0 (or use 'asym tune')")
    levels = solve_levels(AsymmetricWell(args.a, args.b, args.v0, units), args.levels)
    rows = [(lv.index, lv.energy, lv.regime.value) for lv in levels]
    _emit(csv_text(["n", "E", "regime"], rows), args.out_csv, out)


def cmd_verify(args, cfg: RunConfig, out) -> None:
    design = read_design(args.input, cfg.units)
    report = verify_design(design, _ladder(args.ladder), args.k)
    _emit(dumps(report), args.out, out)
    if args.out:
        out.write(f"verify: {'passed' if report.passed else 'FAILED'}; "
                  f"|E0| at finest rung = {abs(report.zero_mode[-1]):.3e}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zcwell", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="compute critical spike strengths for a wave")
    d.add_argument("--input")
    d.add_argument("--output")
    d.add_argument("--shape", choices=["triangle", "twin-symmetric", "twin-antisymmetric"])
    d.add_argument("--c", type=float, default=0.5, help="kink position for --shape triangle")

    a = sub.add_parser("analyze", help="energies, momentum density and figure data")
    a.add_argument("--input", required=True)
    a.add_argument("--pgrid", default="-40:40:801", help="start:stop:count")
    a.add_argument("--nx", type=int, default=201)
    a.add_argument("--out-csv", help="stem for <stem>_x.csv and <stem>_p.csv")
    a.add_argument("--tail-tol", type=float, default=1e-6)

    s = sub.add_parser("susy", help="supersymmetric partner potential")
    s.add_argument("--input", required=True)
    s.add_argument("--out")

    w = sub.add_parser("asym", help="asymmetric well levels, or 'asym tune' for the zero-curvature step")
    w.add_argument("action", nargs="?", choices=["tune"])
    w.add_argument("--a", type=float, default=1.0)
    w.add_argument("--b", type=float, default=1.0)
    w.add_argument("--v0", type=float)
    w.add_argument("--levels", type=int, default=5)
    w.add_argument("--branch", type=int, default=0)
    w.add_argument("--nx", type=int, default=201)
    w.add_argument("--out-csv")

    v = sub.add_parser("verify", help="finite-difference check of a design's zero mode")
    v.add_argument("--input", required=True)
    v.add_argument("--ladder", default="599,1199,2399")
    v.add_argument("--k", type=int, default=3)
    v.add_argument("--out")
    return p


_COMMANDS = {
    "design": cmd_design,
    "analyze": cmd_analyze,
    "susy": cmd_susy,
    "asym": cmd_asym,
    "verify": cmd_verify,
}


def _config(args) -> RunConfig:
    override = units_override()
    units = width = None
    if override is not None:
        units = UnitSystem(override[0], override[1])
        width = override[2]
    ins = [args.input] if getattr(args, "input", None) else []
    outs = [getattr(args, n, None) for n in ("output", "out", "out_csv")]
    outs = [o for o in outs if o]
    if args.command == "analyze" and args.out_csv:
        outs = [_stem(args.out_csv) + "_x.csv", _stem(args.out_csv) + "_p.csv"]
    tols = {"tail_tol": args.tail_tol} if args.command == "analyze" else {}
    return RunConfig(args.command, ins, outs, units, width, tols)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    # a negative grid start such as "-40:40:801" would otherwise parse as an option
    fixed = []
    it = iter(argv)
    for tok in it:
        fixed.append(f"--pgrid={next(it, '')}" if tok == "--pgrid" else tok)
    args = build_parser().parse_args(fixed)
    try:
        cfg = _config(args)
        _COMMANDS[args.command](args, cfg, out)
    except ZcDomainError as exc:
        err.write(f"zcwell: error [{exc.code}]: {exc}\n")
        return 1
    except ZcNumericalError as exc:
        err.write(f"zcwell: error [{exc.code}]: {exc}\n")
        return 2
    except ZcWellError as exc:
        err.write(f"zcwell: error [{exc.code}]: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"zcwell: error [IOError]: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
