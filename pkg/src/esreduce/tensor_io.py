"""JSON and FCIDUMP-style serialization of coefficient tensors."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .integrals import CoefficientTensors


def _sparse4(U: np.ndarray) -> list:
    idx = np.argwhere(U != 0.0)
    return [[int(a), int(b), int(c), int(d), float(U[a, b, c, d])] for a, b, c, d in idx]


def tensors_to_dict(t: CoefficientTensors) -> dict:
    return {
        "level": t.level,
        "N": t.N,
        "index_order": "U[a,b,c,d]: electron 1 on (a,d), electron 2 on (b,c)",
        "S": t.S.tolist(),
        "T": t.T.tolist(),
        "V": t.V.tolist(),
        "U": _sparse4(t.U),
    }


def tensors_from_dict(d: dict) -> CoefficientTensors:
    try:
        N = int(d["N"])
        S = np.array(d["S"], dtype=float)
        T = np.array(d["T"], dtype=float)
        V = np.array(d.get("V", np.zeros((N, N))), dtype=float)
        U = np.zeros((N,) * 4)
        for a, b, c, e, v in d["U"]:
            U[int(a), int(b), int(c), int(e)] = float(v)
        return CoefficientTensors(S, T, U, d["level"], V)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed tensor record: {exc}") from exc


def save_tensors_json(path, **named: CoefficientTensors) -> None:
    Path(path).write_text(json.dumps({k: tensors_to_dict(v) for k, v in named.items()}) + "\n")


def load_tensors_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read tensors from {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("tensor file must hold a JSON object")
    return {k: tensors_from_dict(v) for k, v in data.items()}


def write_fcidump(path, t: CoefficientTensors, nelec: int, ms2: int = 0, constant: float = 0.0) -> None:
    """Chemists' (ij|kl) = U[i, k, l, j]; one-body lines carry k = l = 0; indices 1-based."""
    N = t.N
    lines = [
        f" &FCI NORB={N},NELEC={nelec},MS2={ms2},",
        "  ORBSYM=" + ",".join("1" for _ in range(N)) + ",",
        "  ISYM=1,",
        " &END",
        "! value i j k l with (ij|kl) = int phi_i(1) phi_j(1) r12^-1 phi_k(2) phi_l(2)",
    ]
    U = t.U
    for i in range(N):
        for j in range(i + 1):
            for k in range(N):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    v = U[i, k, l, j]
                    if v != 0.0:
                        lines.append(f"{float(v)!r} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i in range(N):
        for j in range(i + 1):
            v = t.T[i, j] + t.V[i, j]
            if v != 0.0:
                lines.append(f"{float(v)!r} {i + 1} {j + 1} 0 0")
    lines.append(f"{float(constant)!r} 0 0 0 0")
    Path(path).write_text("\n".join(lines) + "\n")


def read_fcidump(path):
    """Returns (one-body h, two-body U in physicists' pair order, constant, header dict)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    head, sep, body = text.partition("&END")
    if not sep:
        raise ParseError("missing &END in FCIDUMP header")
    header = {}
    for tok in head.replace("&FCI", "").replace("\n", " ").split(","):
        if "=" in tok:
            k, v = tok.split("=", 1)
            header[k.strip()] = v.strip()
    try:
        N = int(header["NORB"])
        h = np.zeros((N, N))
        U = np.zeros((N,) * 4)
        const = 0.0
        for line in body.splitlines():
            line = line.strip()
            if not line or line.startswith("!"):
                continue
            v, i, j, k, l = line.split()
            v, i, j, k, l = float(v), int(i) - 1, int(j) - 1, int(k) - 1, int(l) - 1
            if i < 0:
                const = v
            elif k < 0:
                h[i, j] = h[j, i] = v
            else:
                for (a, b), (c, d) in _chem_images(i, j, k, l):
                    U[a, c, d, b] = v
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed FCIDUMP: {exc}") from exc
    return h, U, const, header


def _chem_images(i, j, k, l):
    pairs = {(i, j), (j, i)}
    other = {(k, l), (l, k)}
    out = set()
    for p in pairs:
        for q in other:
            out.add((p, q))
            out.add((q, p))
    return out
