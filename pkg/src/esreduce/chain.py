"""Hubbard -> electronic-structure geometry: pick rho and per-edge omega so that
the main Hamiltonian equals rho times the Hubbard Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import solve_omega
from .errors import ValidationError
from .instances import HubbardInstance, WeightedGraph
from .integrals import coulomb_pair
from .layout import OrbitalLayout, place_centers


@dataclass(frozen=True)
class MatchedGeometry:
    rho: float
    omega: dict  # (i, j) -> omega, inf for dropped edges
    gamma: dict  # (i, j) -> close-pair distance, finite edges only
    layout: OrbitalLayout

    @property
    def dropped(self) -> list:
        return [e for e, w in self.omega.items() if not math.isfinite(w)]


def onsite_scale(beta: float, u0: float) -> float:
    """rho with rho u0 = u_Coul_beta(0) / 4 = sqrt(beta) / (2 sqrt(pi))."""
    return 0.25 * float(coulomb_pair(beta, 0.0)) / u0


def default_Gamma(n: int, beta: float) -> float:
    return 640.0 * float(n) ** 18 * beta**3


def match_geometry(
    hub: HubbardInstance,
    alpha: float,
    beta: float,
    Gamma: float | None = None,
    omega: dict | float | None = None,
    gamma: dict | float | None = None,
) -> MatchedGeometry:
    """Solve (alpha/4d) sqrt f(omega_ij) = rho |t_ij| unless omega or gamma is given.

    Hoppings must be non-positive for rho H_Hubb = H_main to hold exactly;
    positive hoppings are still placed but only match in magnitude.
    """
    g = hub.graph
    rho = onsite_scale(beta, hub.u0)
    if omega is not None and gamma is not None:
        raise ValidationError("give either omega or gamma, not both")
    om = {}
    for i, j, t in g.edges:
        if omega is not None:
            w = omega if not isinstance(omega, dict) else omega.get((i, j), omega.get((j, i)))
            if w is None:
                raise ValidationError(f"no omega for edge ({i}, {j})")
            om[(i, j)] = float(w)
        elif gamma is not None:
            gm = gamma if not isinstance(gamma, dict) else gamma.get((i, j), gamma.get((j, i)))
            if gm is None:
                raise ValidationError(f"no gamma for edge ({i}, {j})")
            om[(i, j)] = alpha * float(gm) ** 2
        else:
            om[(i, j)] = solve_omega(t, alpha, g.d, rho)
    kept = tuple((i, j, w) for (i, j, w) in g.edges if math.isfinite(om[(i, j)]))
    es_graph = WeightedGraph(g.n, kept, g.d)
    gam = {(i, j): math.sqrt(om[(i, j)] / alpha) for i, j, _ in kept}
    Gamma = default_Gamma(g.n, beta) if Gamma is None else Gamma
    layout = place_centers(es_graph, gam, Gamma, alpha, beta)
    return MatchedGeometry(rho, om, gam, layout)
