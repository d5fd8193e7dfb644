"""Command line: reduce / verify / np-gadget.

Exit codes: 0 ok, 1 a bound with satisfied hypotheses failed, 2 bad input or
configuration, 3 a dimension cap was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bounds import BoundReport, certify_layout, format_table, hubbard_hypothesis_check, reports_to_json
from .chain import match_geometry
from .errors import CapExceeded, ESReduceError, ParseError, ValidationError
from .fockspace import DEFAULT_CAP, build_hubbard
from .heis2hubb import reduce_heisenberg_to_hubbard
from .instances import HeisenbergInstance, HubbardInstance, instance_from_dict, instance_to_dict, load_instance
from .integrals import DENSE_PRIMITIVE_CAP, assemble_primitive_tensors, compose_tensors
from .layout import load_layout, verify_layout
from .lowdin import orthonormalizer, transform_tensors
from .slater import independent_set_check
from .spectra import ground_energy, spectral_norm_diff
from .tensor_io import load_tensors_json, save_tensors_json, write_fcidump

EXIT_OK, EXIT_BOUND, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    instance: str | None = None
    alpha: float = 1.0
    beta: float | None = None  # reduce: 1; np-gadget: 16 n^4
    gamma: str | None = None
    omega: str | None = None
    Gamma: float | None = None
    u0: float = 100.0
    eta: int | None = None
    k: int | None = None
    p: float | None = None
    q: float | None = None
    out: str = "out"
    seed: int = 0
    cap: int = DEFAULT_CAP


def _edge_map(spec: str | None):
    """A float, a JSON object {"i-j": v} / list [[i, j, v]], or a path to such JSON."""
    if spec is None:
        return None
    try:
        return float(spec)
    except ValueError:
        pass
    path = Path(spec)
    text = path.read_text() if path.exists() else spec
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"cannot parse per-edge map {spec!r}: {exc}") from exc
    out = {}
    items = data.items() if isinstance(data, dict) else ((f"{i}-{j}", v) for i, j, v in data)
    for key, v in items:
        try:
            i, j = (int(x) for x in str(key).split("-"))
            out[(min(i, j), max(i, j))] = float(v)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad per-edge entry {key!r}: {v!r}") from exc
    return out


def _edge_key(e) -> str:
    return f"{e[0]}-{e[1]}"


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _finite(x):
    return x if math.isfinite(x) else None


def cmd_reduce(cfg: RunConfig) -> int:
    if cfg.instance is None:
        raise ParseError("--instance is required")
    src = Path(cfg.instance)
    inst = load_instance(src)
    if cfg.p is not None or cfg.q is not None:
        p = inst.p if cfg.p is None else cfg.p
        q = inst.q if cfg.q is None else cfg.q
        if isinstance(inst, HeisenbergInstance):
            inst = HeisenbergInstance(inst.graph, p, q)
        else:
            inst = HubbardInstance(inst.graph, inst.u0, inst.eta, p, q)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(inst, HeisenbergInstance):
        cert = reduce_heisenberg_to_hubbard(inst, cfg.u0, sign=-1)
        hub = cert.hubbard
        reduction = {"c_eff": cert.c_eff, "h_eff": {_edge_key(e): h for e, h in cert.h_eff.items()},
                     "u0_hypothesis": cert.hypothesis_holds, "hopping_sign": -1}
    else:
        hub = inst
        reduction = None
    beta = 1.0 if cfg.beta is None else cfg.beta
    m = match_geometry(hub, cfg.alpha, beta, cfg.Gamma, _edge_map(cfg.omega), _edge_map(cfg.gamma))
    layout = m.layout
    bad = verify_layout(layout)
    if bad:
        raise ValidationError("layout invariants violated: " + "; ".join(bad))
    prim = assemble_primitive_tensors(layout, min(DENSE_PRIMITIVE_CAP, cfg.cap))
    xf = orthonormalizer(layout, prim)
    comp = compose_tensors(transform_tensors(prim, xf), layout)
    eta = hub.n if cfg.eta is None else cfg.eta

    hub_doc = instance_to_dict(hub)
    hub_doc["reduction"] = reduction
    hub_doc["rho"] = m.rho
    _dump(out / "hubbard.json", hub_doc)
    (out / "layout.json").write_text(layout.to_json() + "\n")
    save_tensors_json(out / "tensors.json", primitive=prim, composite_orthonormal=comp)
    write_fcidump(out / "tensors.fcidump", comp, nelec=eta)

    hyp = []
    if hub.p is not None and hub.q is not None:
        hyp.append(hubbard_hypothesis_check(hub, hub.p, hub.q).to_dict())
    manifest = {
        "command": "reduce",
        "input_sha256": hashlib.sha256(src.read_bytes()).hexdigest(),
        "input": instance_to_dict(inst),
        "parameters": {k: v for k, v in asdict(cfg).items() if k not in ("command", "instance", "out")},
        "eta": eta,
        "alpha": layout.alpha,
        "beta": layout.beta,
        "Gamma": layout.Gamma,
        "rho": m.rho,
        "omega": {_edge_key(e): _finite(w) for e, w in m.omega.items()},
        "gamma": {_edge_key(e): g for e, g in m.gamma.items()},
        "dropped_edges": [_edge_key(e) for e in m.dropped],
        "matched": cfg.omega is None and cfg.gamma is None,
        "hypotheses": hyp,
        "versions": {"esreduce": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
        "files": ["hubbard.json", "layout.json", "tensors.json", "tensors.fcidump"],
    }
    _dump(out / "manifest.json", manifest)
    print(f"wrote {len(manifest['files']) + 1} files to {out}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    try:
        manifest = json.loads((out / "manifest.json").read_text())
        hub = instance_from_dict({k: v for k, v in json.loads((out / "hubbard.json").read_text()).items()
                                  if k in ("kind", "n", "d", "edges", "u0", "eta", "p", "q")})
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ParseError(f"missing or corrupt reduce output in {out}: {exc}") from exc
    layout = load_layout(out / "layout.json")
    tensors = load_tensors_json(out / "tensors.json")
    if "primitive" not in tensors:
        raise ParseError("tensors.json has no primitive tensors")
    prim = tensors["primitive"]
    if prim.N != layout.N:
        raise ParseError("tensor size does not match the layout")
    eta = int(manifest.get("eta", layout.n))
    cert = certify_layout(layout, prim, eta)
    reports = list(cert.reports)
    h = cert.hamiltonians
    rho = float(manifest["rho"])
    spectrum = {
        "eta": eta,
        "ES": ground_energy(h["es"], eta, seed=cfg.seed, cap=cfg.cap).to_dict(),
        "round": ground_energy(h["round"], eta, seed=cfg.seed, cap=cfg.cap).to_dict(),
        "main_plus_shift": ground_energy(h["main"] + eta * h["rc"].c_T, eta, seed=cfg.seed, cap=cfg.cap).to_dict(),
        "norms": cert.norms,
    }
    if manifest.get("matched") and eta == hub.n:
        hh = build_hubbard(hub)
        diff = spectral_norm_diff(h["main"], rho * hh, eta, seed=cfg.seed, cap=cfg.cap)
        scale = max(1.0, rho * hub.u0)
        reports.append(BoundReport("main = rho Hubbard", (("hoppings matched", True),), 1e-9 * scale, diff))
        spectrum["rho_hubbard"] = ground_energy(rho * hh, eta, seed=cfg.seed, cap=cfg.cap).to_dict()
        spectrum["norms"]["main-rho_hubbard"] = diff
    (out / "bounds.json").write_text(reports_to_json(reports) + "\n")
    _dump(out / "spectrum.json", spectrum)
    print(format_table(reports))
    failed = [r for r in reports if r.failed]
    print(f"{len(reports) - len(failed)}/{len(reports)} reports without failure")
    return EXIT_BOUND if failed else EXIT_OK


def cmd_np_gadget(cfg: RunConfig) -> int:
    if cfg.instance is None:
        raise ParseError("--instance is required")
    inst = load_instance(cfg.instance)
    k = cfg.k if cfg.k is not None else cfg.eta
    if k is None:
        raise ValidationError("np-gadget needs --k (or --eta)")
    gamma = _edge_map(cfg.gamma)
    if isinstance(gamma, dict):
        raise ValidationError("np-gadget needs a single uniform --gamma")
    res = independent_set_check(inst.graph, k, cfg.alpha, 1.0 if gamma is None else gamma, cfg.beta)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = res.to_dict()
    doc["k"] = k
    _dump(out / "np_gadget.json", doc)
    print(f"independent set of size {k}: {res.exists} (energy {res.energy:.6g}, u2 {res.u2:.6g})")
    return EXIT_OK


COMMANDS = {"reduce": cmd_reduce, "verify": cmd_verify, "np-gadget": cmd_np_gadget}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="esreduce", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--instance")
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--beta", type=float)
    grp = ap.add_mutually_exclusive_group()
    grp.add_argument("--gamma", help="float or per-edge JSON map")
    grp.add_argument("--omega", help="float or per-edge JSON map")
    ap.add_argument("--Gamma", type=float)
    ap.add_argument("--u0", type=float, default=100.0)
    ap.add_argument("--eta", type=int)
    ap.add_argument("--k", type=int)
    ap.add_argument("--p", type=float)
    ap.add_argument("--q", type=float)
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP)
    return ap


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**vars(ns))


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ESReduceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
