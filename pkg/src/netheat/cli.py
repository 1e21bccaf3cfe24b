"""Command-line interface.

Usage::

    netheat components graph.json
    netheat check-theorem graph.json --tol 1e-9
    netheat simulate graph.json --edge e0 --n 32 --dt 1e-3 --T 0.1
    netheat fixtures --out fixtures/

Exit status: 0 on success, 1 when an analysis reports FAIL, 2 on usage,
parse or I/O errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .connectivity import count_invariant_ideals, delta_components, is_irreducible
from .fixtures import gallery
from .graph import GraphError
from .heat import assemble, build_mesh, trajectory_rows, verify_strong_max_principle
from .io import csv_text, json_text, read_graph, write_atomic
from .operators import incidence_suite
from .spectral import (
    SpectralMismatchError,
    check_component_theorem,
    combinatorial_laplacian,
    network_spectrum,
    spectrum_rows,
    zero_multiplicity,
)

log = logging.getLogger("netheat")

COMMANDS = (
    "components", "irreducible", "ideals", "spectrum", "laplacian",
    "check-theorem", "simulate", "verify-incidence", "fixtures",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    n: int = 32
    dt: float = 1e-3
    T: float = 0.1
    edge: str | None = None
    tol: float = 1e-9
    theta: float | None = None
    seed: int = 0
    k: int = 4
    samples: int = 1000
    mass: str = "lumped"
    mode: str = "fin"
    out: str = "out"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("n", "dt", "T", "tol", "k", "samples"):
            if getattr(self, name) <= 0:
                raise ValueError(f"--{name} must be positive")
        if self.n < 2:
            raise ValueError("--n must be >= 2")
        if self.theta is not None and self.theta < 0:
            raise ValueError("--theta must be >= 0")
        if self.seed < 0:
            raise ValueError("--seed must be >= 0")
        if self.mass not in ("lumped", "consistent"):
            raise ValueError("--mass must be lumped or consistent")
        if self.mode not in ("fin", "full"):
            raise ValueError("--mode must be fin or full")
        if self.command != "fixtures" and not self.input:
            raise ValueError(f"{self.command} needs a graph file")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=32, help="segments per edge (default: 32)")
    common.add_argument("--dt", type=float, default=1e-3, help="time step (default: 1e-3)")
    common.add_argument("--T", type=float, default=0.1, help="final time (default: 0.1)")
    common.add_argument("--edge", default=None, help="starting edge for simulate (default: first edge)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="relative rank tolerance for kernel counts (default: 1e-9)")
    common.add_argument("--theta", type=float, default=None,
                        help="support threshold (default: 1e-10 * max|u0|)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    common.add_argument("--k", type=int, default=4, help="number of eigenvalues (default: 4)")
    common.add_argument("--samples", type=int, default=1000,
                        help="random vectors for verify-incidence (default: 1000)")
    common.add_argument("--mass", choices=("lumped", "consistent"), default="lumped",
                        help="mass matrix (default: lumped)")
    common.add_argument("--mode", choices=("fin", "full"), default="fin",
                        help="zero multiplicity of the finite block only, or with the zero block (default: fin)")
    common.add_argument("--out", default="out", help="output directory (default: ./out)")

    parser = argparse.ArgumentParser(prog="netheat", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "components": "span partition of the edge set (JSON)",
        "irreducible": "irreducibility verdict with certificate (JSON)",
        "ideals": "number of minimal invariant ideals (JSON)",
        "spectrum": "smallest eigenvalues of the FE operator (CSV)",
        "laplacian": "combinatorial Laplacian and its zero multiplicity (JSON)",
        "check-theorem": "span / component / kernel count comparison (JSON)",
        "simulate": "heat flow trajectory (CSV) and max-principle report (JSON)",
        "verify-incidence": "incidence operator checks (CSV)",
        "fixtures": "write the built-in fixture graphs",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name != "fixtures":
            p.add_argument("input", help="graph JSON file")
    return parser


def _emit(out: Path, name: str, text: str) -> Path:
    path = out / name
    write_atomic(path, text)
    return path


def execute(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    if cfg.command == "fixtures":
        for name, g in gallery().items():
            _emit(out, f"{name}.json", g.to_json())
        print(json_text({"written": sorted(gallery())}), end="")
        return 0

    g = read_graph(cfg.input)
    stem = Path(cfg.input).stem
    code = 0

    if cfg.command == "components":
        text = json_text(delta_components(g).to_dict())
        _emit(out, f"{stem}.partition.json", text)
    elif cfg.command == "irreducible":
        verdict = is_irreducible(g)
        doc = {"irreducible": verdict.irreducible, "blocks": verdict.blocks}
        if verdict.certificate:
            a, b, sep = verdict.certificate
            doc["certificate"] = {"edges": [a, b], "separating": list(sep)}
        text = json_text(doc)
        _emit(out, f"{stem}.irreducible.json", text)
    elif cfg.command == "ideals":
        text = json_text({"invariant_ideals": count_invariant_ideals(g)})
        _emit(out, f"{stem}.ideals.json", text)
    elif cfg.command == "laplacian":
        lap = combinatorial_laplacian(g)
        doc = lap.to_dict()
        doc["mode"] = cfg.mode
        doc["zero_multiplicity"] = zero_multiplicity(lap, cfg.mode, cfg.tol)
        text = json_text(doc)
        _emit(out, f"{stem}.laplacian.json", text)
    elif cfg.command == "spectrum":
        pair = assemble(build_mesh(g, cfg.n), cfg.mass)
        vals = network_spectrum(pair, min(cfg.k, pair.mesh.n_dof))
        text = csv_text(("index", "eigenvalue"), spectrum_rows(vals))
        _emit(out, f"{stem}.spectrum.csv", text)
    elif cfg.command == "check-theorem":
        report = check_component_theorem(g, cfg.tol)
        text = json_text(report.to_dict())
        _emit(out, f"{stem}.theorem.json", text)
        code = 0 if report.passed else 1
    elif cfg.command == "simulate":
        edge = cfg.edge or (g.edge_ids[0] if g.edge_ids else None)
        if edge is None:
            raise GraphError("graph has no edges to simulate on")
        report = verify_strong_max_principle(g, edge, cfg.n, cfg.dt, cfg.T, cfg.theta, cfg.mass)
        _emit(out, f"{stem}.trajectory.csv",
              csv_text(("t", "edge_id", "sample_index", "x", "value"), trajectory_rows(report.trajectory)))
        doc = report.to_dict()
        doc["parameters"]["mass"] = cfg.mass
        text = json_text(doc)
        _emit(out, f"{stem}.max_principle.json", text)
        code = 0 if report.passed else 1
    elif cfg.command == "verify-incidence":
        rows = incidence_suite(g, cfg.samples, cfg.seed)
        text = csv_text(("test", "parameter", "observed", "bound", "pass"), rows)
        _emit(out, f"{stem}.incidence.csv", text)
        code = 0 if all(r[4] for r in rows) else 1
    print(text, end="")
    return code


def run(args: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_mapping(vars(ns))
    except ValueError as exc:
        print(f"netheat: error: {exc}", file=sys.stderr)
        return 2
    try:
        return execute(cfg)
    except (GraphError, json.JSONDecodeError) as exc:
        print(f"netheat: invalid graph: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"netheat: I/O error: {exc}", file=sys.stderr)
        return 2
    except SpectralMismatchError as exc:
        print(f"netheat: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())
