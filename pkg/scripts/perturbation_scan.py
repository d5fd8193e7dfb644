"""Low-spectrum distance between the Hubbard model and its second-order
Heisenberg limit, as a function of the onsite repulsion u0."""

import argparse
import json

import numpy as np

from esreduce.heis2hubb import hopping_norm, low_spectrum_distance, reduce_heisenberg_to_hubbard
from esreduce.instances import HeisenbergInstance, complete_graph, path_graph

GRAPHS = {
    "edge": lambda: path_graph(2),
    "P3": lambda: path_graph(3),
    "K3": lambda: complete_graph(3),
    "P4": lambda: path_graph(4),
}


def scan(name, u0s):
    inst = HeisenbergInstance(GRAPHS[name]())
    rows = []
    for u0 in u0s:
        cert = reduce_heisenberg_to_hubbard(inst, u0, sign=-1)
        dist = low_spectrum_distance(cert)
        cap = 10 * hopping_norm(cert.hubbard.graph) ** 3 / u0**2
        rows.append({"graph": name, "u0": u0, "distance": dist, "cap": cap, "c_eff": cert.c_eff})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", nargs="+", default=["edge", "P3", "K3"], choices=sorted(GRAPHS))
    ap.add_argument("--u0-min", type=float, default=1e2)
    ap.add_argument("--u0-max", type=float, default=1e5)
    ap.add_argument("--points", type=int, default=7)
    ap.add_argument("--out", help="write rows as JSON")
    args = ap.parse_args()
    u0s = np.geomspace(args.u0_min, args.u0_max, args.points).tolist()
    rows = [r for g in args.graphs for r in scan(g, u0s)]
    print(f"{'graph':6} {'u0':>10} {'distance':>12} {'10|T|^3/u0^2':>14} {'u0 * dist':>10}")
    for r in rows:
        print(f"{r['graph']:6} {r['u0']:10.4g} {r['distance']:12.4e} {r['cap']:14.4e} {r['u0'] * r['distance']:10.4f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
