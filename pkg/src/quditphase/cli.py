"""Command line front end for grids, classification, counting, and reports.

Subcommands: wigner, classify, count, enumerate, harness, counterexample,
galois, clifford (synth | recognize).  Global flags --d --n --seed --format
--out --budget apply before the subcommand; a JSON or TOML config file can
set the same values, with command line flags taking precedence.  Outputs
are deterministic for a fixed input and seed.

Exit codes: 0 success (classify: stabilizer verdict), 1 negative or
non-Clifford verdict, 2 any error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .clifford import clifford_from_affine, metaplectic, recognize_clifford
from .cyclotomic import CycArray
from .errors import NotClifford, ParseError, QuditError
from .galois import field_vs_module_stabilizer_gap, verify_factorization
from .hudson import (
    classify,
    classify_density,
    counterexample_density_exact,
    stabilizer_decomposition_feasible,
    verify_hudson,
)
from .phasespace import DEFAULT_BUDGET
from .stabilizer import (
    enumerate_stabilizer_states,
    isotropic_count,
    maximal_isotropic_count,
    stabilizer_code_count,
    stabilizer_state_count,
)
from .wigner import (
    grid_from_csv,
    grid_to_csv,
    grid_to_pgm,
    grid_to_svg,
    phase_point_operator_cyc,
    wigner_exact,
    wigner_of_operator,
    wigner_pure,
)
from .zmod import System, points

__all__ = ["RunConfig", "build_parser", "load_config", "main"]

OUT_ENV = "QUDITPHASE_OUT"


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by all subcommands."""

    d: int = 3
    n: int = 1
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    format: str = "csv"
    out: Optional[str] = None
    samples: int = 100
    negative_threshold: float = -1e-9
    support_tol: float = 1e-7


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}
_FORMATS = ("csv", "pgm", "svg", "json")


def load_config(path: str) -> dict:
    """Read a JSON or TOML config file holding RunConfig fields."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read config file: {exc}") from None
    try:
        if p.suffix == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        else:
            data = json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed config file: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("config file must hold a table of settings")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    return data


def _resolve_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = replace(cfg, **load_config(args.config))
    overrides = {}
    for name in ("d", "n", "seed", "budget", "format", "out", "samples"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    cfg = replace(cfg, **overrides)
    if cfg.format not in _FORMATS:
        raise ParseError(f"unknown format {cfg.format!r}")
    if cfg.d < 3 or cfg.d % 2 == 0:
        raise ParseError(f"unsupported modulus d={cfg.d}: need an odd d >= 3")
    if cfg.n < 1:
        raise ParseError("particle count n must be positive")
    return cfg


def _out_dir(cfg: RunConfig) -> Path:
    root = cfg.out or os.environ.get(OUT_ENV) or "."
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _complex_entry(value):
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(x, (int, float)) for x in value)
    ):
        return complex(value[0], value[1])
    raise ParseError(f"bad amplitude entry {value!r}: use a number or [re, im]")


def load_state_file(path: str):
    """Read a state or density JSON file; returns (system, kind, array)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read state file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed state JSON: {exc}") from None
    if not isinstance(data, dict) or "d" not in data:
        raise ParseError("state file must be an object with a 'd' entry")
    try:
        system = System(int(data["d"]), int(data.get("n", 1)))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"unsupported modulus: {exc}") from None
    if "state" in data:
        amps = data["state"]
        if not isinstance(amps, list) or len(amps) != system.dim:
            raise ParseError(f"state must list {system.dim} amplitudes")
        psi = np.array([_complex_entry(x) for x in amps], dtype=np.complex128)
        return system, "state", psi
    if "density" in data:
        rows = data["density"]
        if not isinstance(rows, list) or len(rows) != system.dim:
            raise ParseError(f"density must be a {system.dim}x{system.dim} matrix")
        mat = []
        for row in rows:
            if not isinstance(row, list) or len(row) != system.dim:
                raise ParseError(f"density must be a {system.dim}x{system.dim} matrix")
            mat.append([_complex_entry(x) for x in row])
        return system, "density", np.array(mat, dtype=np.complex128)
    raise ParseError("state file needs a 'state' or 'density' entry")


def _load_matrix_file(path: str, key: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"file must be an object with a {key!r} entry")
    try:
        system = System(int(data["d"]), int(data.get("n", 1)))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"unsupported modulus: {exc}") from None
    return system, data


def _grid_basename(stem: str) -> str:
    return f"{stem}_wigner"


def _write_grid(grid, cfg: RunConfig, stem: str) -> list:
    out = _out_dir(cfg)
    written = []
    name = _grid_basename(stem)
    if cfg.format == "csv":
        path = out / f"{name}.csv"
        with open(path, "w", encoding="utf-8") as fh:
            grid_to_csv(grid, fh)
        written.append(path.name)
    elif cfg.format == "pgm":
        path = out / f"{name}.pgm"
        with open(path, "w", encoding="utf-8") as fh:
            grid_to_pgm(grid, fh)
        written.append(path.name)
    elif cfg.format == "svg":
        path = out / f"{name}.svg"
        with open(path, "w", encoding="utf-8") as fh:
            grid_to_svg(grid, fh)
        written.append(path.name)
    else:
        path = out / f"{name}.json"
        payload = {
            "d": grid.system.d,
            "n": grid.system.n,
            "values": [float(x) for x in grid.real_values()],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
        written.append(path.name)
    return written


def cmd_wigner(cfg: RunConfig, args) -> int:
    if args.from_grid:
        with open(args.from_grid, "r", encoding="utf-8") as fh:
            grid = grid_from_csv(fh)
        m, v = grid.minimum()
        total = grid.total()
        print(
            f"min={_fmt(m)}, at={':'.join(str(c) for c in v)}, sum={_fmt(total)}"
        )
        return 0
    system, kind, payload = load_state_file(args.state_file)
    if kind == "state":
        grid = wigner_pure(system, payload)
    else:
        grid = wigner_of_operator(system, payload)
    stem = Path(args.state_file).stem
    for name in _write_grid(grid, cfg, stem):
        print(f"wrote {name}")
    return 0


def cmd_classify(cfg: RunConfig, args) -> int:
    system, kind, payload = load_state_file(args.state_file)
    if kind == "state":
        norm = np.linalg.norm(payload)
        if norm > 0 and abs(norm - 1) > 1e-10 and args.normalize:
            payload = payload / norm
        result = classify(
            system,
            payload,
            negative_threshold=cfg.negative_threshold,
            support_tol=cfg.support_tol,
        )
    else:
        result = classify_density(system, payload)
    report = {"verdict": result.verdict, "minimum": result.minimum}
    if result.verdict == "stabilizer":
        report["module"] = [list(v) for v in result.module.elements]
        report["character"] = list(result.character.rep)
        report["overlap"] = result.overlap
    elif result.verdict == "negative":
        report["witness"] = list(result.witness)
    else:
        report["gram_defect"] = result.gram_defect
    print(json.dumps(report, sort_keys=True))
    return 0 if result.verdict == "stabilizer" else 1


def cmd_count(cfg: RunConfig, args) -> int:
    system = System(args.count_d, args.count_n)
    k = args.count_m
    if k < 0 or k > system.n:
        raise ParseError("isotropic rank m must satisfy 0 <= m <= n")
    if k == system.n:
        iso = maximal_isotropic_count(system)
        stabs = stabilizer_state_count(system)
    else:
        iso = isotropic_count(system, k)
        stabs = stabilizer_code_count(system, k)
    if cfg.format == "json":
        print(json.dumps({"iso": iso, "stabs": stabs}, sort_keys=True))
    else:
        print(f"iso={iso}, stabs={stabs}")
    return 0


def cmd_enumerate(cfg: RunConfig, args) -> int:
    d = args.enum_d if args.enum_d is not None else cfg.d
    n = args.enum_n if args.enum_n is not None else cfg.n
    system = System(d, n)
    states = enumerate_stabilizer_states(system, cfg.budget)
    modules = sorted({M for M, _, _ in states}, key=lambda M: M.elements)
    if cfg.format == "json":
        payload = {
            "modules": len(modules),
            "states": len(states),
            "descriptors": [
                {
                    "character": list(ch.rep),
                    "module": [list(v) for v in M.elements],
                }
                for M, ch, _ in states
            ],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print("index,character,module")
        for i, (M, ch, _) in enumerate(states):
            char = ":".join(str(c) for c in ch.rep)
            mod = ";".join(":".join(str(c) for c in v) for v in M.elements)
            print(f"{i},{char},{mod}")
        print(f"modules={len(modules)}, states={len(states)}")
    return 0


def cmd_harness(cfg: RunConfig, args) -> int:
    d = args.harness_d if args.harness_d is not None else cfg.d
    n = args.harness_n if args.harness_n is not None else cfg.n
    samples = args.harness_samples if args.harness_samples is not None else cfg.samples
    system = System(d, n)
    rng = np.random.default_rng(cfg.seed)
    report = verify_hudson(system, samples=samples, rng=rng, budget=cfg.budget)
    payload = {
        "d": d,
        "n": n,
        "enumerated": report.enumerated,
        "forward_pass": report.forward_pass,
        "samples": report.samples,
        "negative": report.negative,
        "stabilizer_hits": report.stabilizer_hits,
        "violations": 0,
    }
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(
            f"violations=0, forward={report.forward_pass}/{report.enumerated}, "
            f"negative={report.negative}, stabilizer_hits={report.stabilizer_hits}"
        )
    return 0


def _overlay_svg(grid, line_supports, fh, cell: int = 48) -> None:
    """Grayscale heatmap with each surviving line outlined in color."""
    dim = grid.system.dim
    vals = grid.real_values().reshape(dim, dim)
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo
    size = dim * cell
    colors = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")
    fh.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
    )
    fh.write("<!-- rows=p cols=q; outlined cells mark surviving line supports -->\n")
    for i in range(dim):
        for j in range(dim):
            g = 0 if span <= 0 else int(round(255 * (vals[i, j] - lo) / span))
            fh.write(
                f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({g},{g},{g})"/>\n'
            )
    for k, support in enumerate(line_supports):
        color = colors[k % len(colors)]
        inset = 3 + 5 * k
        for (p, q) in support:
            fh.write(
                f'<rect x="{q * cell + inset}" y="{p * cell + inset}" '
                f'width="{cell - 2 * inset}" height="{cell - 2 * inset}" '
                f'fill="none" stroke="{color}" stroke-width="3"/>\n'
            )
    fh.write("</svg>\n")


def cmd_counterexample(cfg: RunConfig, args) -> int:
    system, rho = counterexample_density_exact()
    out = _out_dir(cfg)
    eye = CycArray.identity(3, 3)
    parity = phase_point_operator_cyc(system, (0, 0))
    pminus = (eye - parity).scale(Fraction(1, 2))
    parity_grid = wigner_exact(system, pminus)
    with open(out / "parity_state_wigner.csv", "w", encoding="utf-8") as fh:
        grid_to_csv(parity_grid, fh)
    grid = wigner_exact(system, rho)
    with open(out / "mixture_wigner.csv", "w", encoding="utf-8") as fh:
        grid_to_csv(grid, fh)
    with open(out / "mixture_wigner.pgm", "w", encoding="utf-8") as fh:
        grid_to_pgm(grid, fh)
    report = stabilizer_decomposition_feasible(grid)
    states = enumerate_stabilizer_states(system)
    pts = points(system)
    supports = []
    for i in report.surviving:
        g = wigner_exact(system, _state_projector(system, states[i]))
        rats = g.rational_values()
        supports.append(tuple(v for v, val in zip(pts, rats) if val))
    with open(out / "surviving_lines.svg", "w", encoding="utf-8") as fh:
        _overlay_svg(grid, supports, fh)
    zeros = ";".join(":".join(str(c) for c in v) for v in report.zero_set)
    print("wrote parity_state_wigner.csv")
    print("wrote mixture_wigner.csv")
    print("wrote mixture_wigner.pgm")
    print("wrote surviving_lines.svg")
    print(
        f"feasible={report.feasible}, surviving={len(report.surviving)}, zeros={zeros}"
    )
    return 0


def _state_projector(system, descriptor):
    from .stabilizer import stabilizer_projector_cyc

    M, ch, _ = descriptor
    return stabilizer_projector_cyc(system, M, ch)


def cmd_galois(cfg: RunConfig, args) -> int:
    p, n = args.galois_p, args.galois_n
    rep = verify_factorization(p, n)
    parts = {
        "labels": rep.labels,
        "weyl_exact": rep.weyl_exact,
        "phase_point_exact": rep.phase_point_exact,
        "factorization": "exact" if rep.complete else "mismatch",
    }
    gap = None
    if p**n <= 9:
        gap = field_vs_module_stabilizer_gap(p, n)
        parts.update(
            {
                "field_states": gap.field_state_count,
                "module_states": gap.module_state_count,
                "gap_ratio": str(gap.ratio),
            }
        )
    if cfg.format == "json":
        print(json.dumps(parts, sort_keys=True))
    else:
        line = f"factorization={parts['factorization']}"
        if gap is not None:
            line += f", gap_ratio={gap.ratio}"
        print(line)
    return 0 if rep.complete else 1


def _unitary_to_json(system, U):
    return {
        "d": system.d,
        "n": system.n,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in U],
    }


def cmd_clifford_synth(cfg: RunConfig, args) -> int:
    system, data = _load_matrix_file(args.input_file, "S")
    S = data["S"]
    if not isinstance(S, list) or len(S) != 2 * system.n:
        raise ParseError(f"S must be a {2 * system.n}x{2 * system.n} integer matrix")
    S = tuple(tuple(int(x) % system.d for x in row) for row in S)
    a = tuple(int(x) % system.d for x in data.get("a", (0,) * (2 * system.n)))
    rng = np.random.default_rng(cfg.seed)
    U = clifford_from_affine(system, S, a, rng=rng)
    S_back, a_back = recognize_clifford(system, U)
    verified = S_back == S and a_back == a
    out = _out_dir(cfg)
    name = f"{Path(args.input_file).stem}_unitary.json"
    with open(out / name, "w", encoding="utf-8") as fh:
        json.dump(_unitary_to_json(system, U), fh, sort_keys=True)
        fh.write("\n")
    print(f"wrote {name}")
    print(f"verified={verified}")
    return 0 if verified else 2


def cmd_clifford_recognize(cfg: RunConfig, args) -> int:
    system, data = _load_matrix_file(args.input_file, "matrix")
    rows = data["matrix"]
    U = np.array(
        [[_complex_entry(z) for z in row] for row in rows], dtype=np.complex128
    )
    try:
        S, a = recognize_clifford(system, U)
    except NotClifford as exc:
        payload = {"verdict": "not_clifford", "witness": list(exc.witness or ())}
        print(json.dumps(payload, sort_keys=True))
        return 1
    payload = {
        "verdict": "clifford",
        "S": [list(row) for row in S],
        "a": list(a),
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditphase",
        description="Exact phase-space toolkit for odd-dimensional qudits.",
    )
    parser.add_argument("--d", type=int, default=None, help="qudit dimension (odd)")
    parser.add_argument("--n", type=int, default=None, help="number of qudits")
    parser.add_argument("--seed", type=int, default=None, help="random seed")
    parser.add_argument("--format", choices=_FORMATS, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--budget", type=int, default=None, help="enumeration budget")
    parser.add_argument("--config", default=None, help="JSON or TOML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_wigner = sub.add_parser("wigner", help="render a state's Wigner grid")
    p_wigner.add_argument("state_file", nargs="?", default=None)
    p_wigner.add_argument(
        "--from-grid", default=None, help="re-ingest a grid CSV and print statistics"
    )

    p_classify = sub.add_parser("classify", help="stabilizer or negative verdict")
    p_classify.add_argument("state_file")
    p_classify.add_argument(
        "--normalize", action="store_true", help="normalize the input state first"
    )

    p_count = sub.add_parser("count", help="isotropic and stabilizer counts")
    p_count.add_argument("count_n", type=int, help="number of qudits")
    p_count.add_argument("count_m", type=int, help="isotropic rank")
    p_count.add_argument("count_d", type=int, help="qudit dimension")

    p_enum = sub.add_parser("enumerate", help="list stabilizer state descriptors")
    p_enum.add_argument("enum_d", type=int, nargs="?", default=None)
    p_enum.add_argument("enum_n", type=int, nargs="?", default=None)

    p_harness = sub.add_parser("harness", help="run the classification harness")
    p_harness.add_argument("harness_d", type=int, nargs="?", default=None)
    p_harness.add_argument("harness_n", type=int, nargs="?", default=None)
    p_harness.add_argument("harness_samples", type=int, nargs="?", default=None)

    sub.add_parser("counterexample", help="write the mixed-state counterexample set")

    p_galois = sub.add_parser("galois", help="field relabeling reports")
    p_galois.add_argument("galois_p", type=int)
    p_galois.add_argument("galois_n", type=int)

    p_clifford = sub.add_parser("clifford", help="synthesize or recognize Cliffords")
    cliff_sub = p_clifford.add_subparsers(dest="clifford_command", required=True)
    p_synth = cliff_sub.add_parser("synth", help="unitary from a symplectic label")
    p_synth.add_argument("input_file")
    p_rec = cliff_sub.add_parser("recognize", help="labels from a unitary")
    p_rec.add_argument("input_file")
    return parser


_HANDLERS = {
    "wigner": cmd_wigner,
    "classify": cmd_classify,
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "harness": cmd_harness,
    "counterexample": cmd_counterexample,
    "galois": cmd_galois,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "wigner" and not args.from_grid and not args.state_file:
            raise ParseError("wigner needs a state file or --from-grid")
        if args.command == "clifford":
            if args.clifford_command == "synth":
                return cmd_clifford_synth(cfg, args)
            return cmd_clifford_recognize(cfg, args)
        return _HANDLERS[args.command](cfg, args)
    except QuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
