"""Numeric predicates for every approximation bound, plus the parameter planner.

Logarithms in hypotheses are natural.  A bound counts as met when
``lower - atol <= measured <= bound * (1 + 1e-12) + atol``; the absolute
slack only absorbs float round-off (for instance a bound that underflows
to 0 while the measured matrix entry is ~1e-16).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import OutOfRange, ValidationError
from .integrals import _contract4, assemble_primitive_tensors, kinetic
from .lowdin import block_inv_sqrt, f_omega, layout_blocks, orthonormalizer, rounded_coefficients

REL_SLACK = 1e-12
ROUNDOFF = 1e-12
OMEGA_MAX = 1500.0
MAX_BISECT = 200


@dataclass(frozen=True)
class BoundReport:
    lemma: str
    hypotheses: tuple  # ((text, holds), ...)
    bound: float | None
    measured: float | None = None
    lower: float | None = None
    atol: float = ROUNDOFF
    satisfied: bool | None = field(init=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple((str(t), bool(h)) for t, h in self.hypotheses))
        sat = None
        if self.bound is None:
            sat = self.hypotheses_hold
        elif self.measured is not None and self.hypotheses_hold:
            sat = self.within_bound
        object.__setattr__(self, "satisfied", sat)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h for _, h in self.hypotheses)

    @property
    def within_bound(self) -> bool | None:
        if self.measured is None or self.bound is None:
            return None
        ok = self.measured <= self.bound * (1 + REL_SLACK) + self.atol
        if self.lower is not None:
            ok = ok and self.measured >= self.lower - abs(self.lower) * REL_SLACK - self.atol
        return bool(ok)

    @property
    def failed(self) -> bool:
        return self.satisfied is False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hypotheses"] = [{"condition": t, "holds": h} for t, h in self.hypotheses]
        return d


def _ge(x: float, y: float) -> bool:
    """x >= y up to a relative 1e-12 (boundary parameters are meant to pass)."""
    return x >= y - abs(y) * REL_SLACK


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1)


def format_table(reports) -> str:
    rows = [("lemma", "hyp", "lower", "measured", "bound", "status")]
    for r in reports:
        status = {True: "pass", False: "FAIL", None: "n/a"}[r.satisfied]
        rows.append(
            (
                r.lemma,
                "ok" if r.hypotheses_hold else "false",
                "" if r.lower is None else f"{r.lower:.4g}",
                "" if r.measured is None else f"{r.measured:.4g}",
                "" if r.bound is None else f"{r.bound:.4g}",
                status,
            )
        )
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows)


# --- parameter planning -----------------------------------------------------


@dataclass(frozen=True)
class ParameterPlan:
    """Exponents of n: alpha = n^a, beta = n^b, rho = n^r, sqrt f(omega_0) = n^-g."""

    p: Fraction
    q: Fraction
    a: Fraction
    b: Fraction
    r: Fraction
    g: Fraction

    def constraints(self) -> dict:
        """name -> (lhs, rhs, holds) as exact rationals."""
        p, q, a, b, r, g = self.p, self.q, self.a, self.b, self.r, self.g
        return {
            "b = 30 + 6p + 4q + 2r": (b, 30 + 6 * p + 4 * q + 2 * r, b == 30 + 6 * p + 4 * q + 2 * r),
            "g = -p/2 + a - b/4 - 3/2 - r/2": (g, -p / 2 + a - b / 4 - Fraction(3, 2) - r / 2, g == -p / 2 + a - b / 4 - Fraction(3, 2) - r / 2),
            "g >= 1": (g, Fraction(1), g >= 1),
            "4 + a/2 < r - q": (4 + a / 2, r - q, 4 + a / 2 < r - q),
            "p + q + 5 < a - b/2": (p + q + 5, a - b / 2, p + q + 5 < a - b / 2),
        }

    def feasible(self) -> bool:
        return all(h for _, _, h in self.constraints().values())

    def symbolic(self, n: int) -> dict:
        """Parameters as (base, exponent) pairs; Gamma = 640 n^18 beta^3."""
        return {
            "alpha": (n, self.a),
            "beta": (n, self.b),
            "rho": (n, self.r),
            "sqrt_f_omega0": (n, -self.g),
            "Gamma": (640, 1, n, 18 + 3 * self.b),
        }

    def realize(self, n: int) -> dict:
        """Floats where representable, inf on overflow."""

        def pw(e):
            try:
                return math.pow(n, float(e))
            except OverflowError:
                return math.inf

        beta = pw(self.b)
        gamma = 640.0 * pw(18 + 3 * self.b)
        return {"alpha": pw(self.a), "beta": beta, "rho": pw(self.r), "omega0": self.omega0(n), "Gamma": gamma}

    def omega0(self, n: int) -> float:
        """Solve log f(w) = -2 g ln n on the decreasing branch w >= 2."""
        target = -2.0 * float(self.g) * math.log(n)
        return _invert_log_f(target)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def plan_parameters(p, q) -> ParameterPlan:
    p, q = _frac(p), _frac(q)
    if not (p > q > 0):
        raise ValidationError(f"planner needs p > q > 0, got p={p}, q={q}")
    a = 18 * p + 12 * q + 90
    plan = ParameterPlan(p, q, a, Fraction(5, 3) * a, Fraction(2, 3) * a, a / 4 - p / 2 - Fraction(3, 2))
    assert plan.feasible(), plan.constraints()
    return plan


def _invert_log_f(target: float, lo: float = 2.0, hi: float = OMEGA_MAX) -> float:
    """w in [lo, hi] with 2 ln w - w = target (decreasing there)."""

    def h(w):
        return 2.0 * math.log(w) - w - target

    if h(lo) < 0 or h(hi) > 0:
        raise OutOfRange(f"log f target {target} outside [{lo}, {hi}]")
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def hopping_of_omega(omega, alpha: float, d: int):
    """(alpha / 4d) sqrt f(omega) = (alpha omega / 4d) exp(-omega / 2)."""
    return alpha / (4.0 * d) * np.sqrt(f_omega(omega))


def solve_omega(t_target: float, alpha: float, d: int, rho: float = 1.0, omega0: float | None = None) -> float:
    """omega >= max(2, omega0) with (alpha/4d) sqrt f(omega) = rho |t_target|.

    Returns +inf for a zero target (the edge carries no hopping).
    """
    y = rho * abs(t_target)
    if y == 0.0:
        return math.inf
    lo = max(2.0, omega0 or 2.0)
    hi = OMEGA_MAX
    c = math.log(alpha / (4.0 * d))

    def g(w):
        return c + math.log(w) - 0.5 * w - math.log(y)

    if g(lo) < 0:
        if g(lo) >= -REL_SLACK:  # the branch peak itself, up to rounding
            return lo
        raise OutOfRange(f"target {y} above the branch maximum {math.exp(c + math.log(lo) - lo / 2)}")
    if g(hi) > 0:
        raise OutOfRange(f"target {y} below the smallest representable hopping")
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    w = 0.5 * (lo + hi)
    for _ in range(3):  # Newton polish; g' = 1/w - 1/2 < 0 on the branch
        slope = 1.0 / w - 0.5
        if slope > -1e-3:
            break
        step = g(w) / slope
        w -= step
    return w


# --- lemma evaluators -------------------------------------------------------


def rounding_error_bound(n, alpha, beta, omega_min, Gamma, measured=None) -> BoundReport:
    hyps = (
        ("beta >= alpha >= 1", beta >= alpha >= 1),
        ("omega_min >= 4", _ge(omega_min, 4)),
        ("Gamma >= 640 n^18 beta^3", _ge(Gamma, 640.0 * n**18 * beta**3)),
        (
            "alpha Gamma^2 >= 12 ln beta + 80 ln n + 4 omega_min + 24",
            _ge(alpha * Gamma**2, 12 * math.log(beta) + 80 * math.log(n) + 4 * omega_min + 24),
        ),
    )
    bound = 3 * n**2 * alpha * f_omega(omega_min) + 1 / (20 * n**2) + 8 * n**4 * math.sqrt(alpha) * math.exp(-omega_min / 2)
    return BoundReport("ES-round", hyps, float(bound), measured)


def offsite_bound(n, alpha, measured=None) -> BoundReport:
    return BoundReport("round-main", (), 30.0 * n**2 * math.sqrt(alpha), measured)


def class_bound(n, alpha, gamma, measured=None) -> BoundReport:
    hyps = (("alpha >= 1", alpha >= 1), ("gamma >= 1", _ge(gamma, 1)))
    return BoundReport("round-class", hyps, 14.0 * alpha * n**2 * math.exp(-alpha * gamma**2 / 4), measured)


def hubbard_hypothesis_check(inst, p, q) -> BoundReport:
    n = inst.n
    cap = math.sqrt(n**p * inst.u0)
    tmax = max((abs(t) for _, _, t in inst.graph.edges), default=0.0)
    hyps = (
        ("u0 >= n^(14+3p+2q)", _ge(inst.u0, float(n) ** (14 + 3 * p + 2 * q))),
        ("|t| <= sqrt(n^p u0)", tmax <= cap * (1 + REL_SLACK)),
    )
    return BoundReport("hubbard-hypotheses", hyps, None)


def _block_labels(layout) -> np.ndarray:
    lab = np.arange(layout.N)
    for a, b in layout_blocks(layout).values():
        lab[b] = lab[a]
    return lab


def appendix_bounds(layout, prim, xf) -> list[BoundReport]:
    n, alpha, beta, Gamma = layout.n, layout.alpha, layout.beta, layout.Gamma
    wmin = layout.omega_min
    aG2 = alpha * Gamma**2
    out = []

    h_wmin = ("omega_min >= 4", _ge(wmin, 4))
    out.append(
        BoundReport(
            "r-bound",
            (("alpha Gamma^2 >= 4 ln n + 2 omega_min + 2", _ge(aG2, 4 * math.log(n) + 2 * wmin + 2)), h_wmin),
            float(n**2 * math.exp(-(aG2 - wmin) / 2)) if math.isfinite(wmin) else 0.0,
            float(np.max(np.abs(xf.R_neg))),
        )
    )
    out.append(BoundReport("r-aprx-max", (h_wmin,), 1.5, float(np.max(np.abs(xf.R_aprx)))))
    out.append(
        BoundReport(
            "r-max",
            (("alpha Gamma^2 >= 4 ln n + omega_min + 2", _ge(aG2, 4 * math.log(n) + wmin + 2)), h_wmin),
            2.0,
            float(np.max(np.abs(xf.R))),
        )
    )

    ta0 = float(kinetic(alpha, alpha, 0.0))
    for e, (a, b) in layout_blocks(layout).items():
        eps = xf.eps[e]
        w = layout.omega[e]
        sf = math.sqrt(float(f_omega(w)))
        blk = block_inv_sqrt(eps)
        idx = np.ix_((a, b), (a, b))
        Tb = prim.T[idx]
        RTR = blk @ Tb @ blk
        Ub = prim.U[np.ix_((a, b), (a, b), (a, b), (a, b))]
        dU = float(np.max(np.abs(_contract4(Ub, blk) - Ub)))
        tag = f"r-approx {e}"
        hyp = (("omega_min >= 4", _ge(wmin, 4)),)
        out += [
            BoundReport(tag + " On(R)", hyp, 1 + eps**2, float(blk[0, 0]), lower=1.0),
            BoundReport(tag + " Off(R)", hyp, -eps / 2, float(blk[0, 1]), lower=-eps / 2 - eps**3),
            BoundReport(tag + " On(RTR)", hyp, ta0 + alpha * w * eps**2, float(RTR[0, 0]), lower=ta0),
            BoundReport(tag + " Off(RTR)", hyp, -(alpha / 2) * sf, float(RTR[0, 1]), lower=-(alpha / 2) * sf * (1 + 4 * eps**2)),
            BoundReport(tag + " RRURR-U", hyp, 16 * math.sqrt(alpha) * eps, dU),
        ]

    lab = _block_labels(layout)
    Tneg = np.where(lab[:, None] == lab[None, :], 0.0, prim.T)
    in_block = (lab[:, None, None, None] == lab[None, None, :, None]) & (lab[None, :, None, None] == lab[None, None, None, :])
    Uneg = np.where(in_block, 0.0, prim.U)
    hyps = (("beta >= alpha >= 1", beta >= alpha >= 1), ("alpha Gamma^2 >= 64", _ge(aG2, 64)))
    out += [
        BoundReport("t-max", hyps, 1.5 * beta, float(np.max(np.abs(prim.T)))),
        BoundReport("t-neg", hyps, beta * math.exp(-aG2 / 4), float(np.max(np.abs(Tneg)))),
        BoundReport("u-max", hyps, 2 * beta**3, float(np.max(np.abs(prim.U)))),
        BoundReport("u-neg", hyps, 2 * beta**3 / Gamma, float(np.max(np.abs(Uneg)))),
    ]
    return out


@dataclass(frozen=True)
class Certification:
    reports: list
    norms: dict
    hamiltonians: dict = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return not any(r.failed for r in self.reports)


def certify_layout(layout, prim=None, eta: int | None = None) -> Certification:
    """Build H_ES, H_round, H_main for a layout and check every bound on the eta sector.

    ``prim`` are primitive-level tensors (assembled from the layout when omitted).
    """
    from .fockspace import build_es_hamiltonian, build_main, build_rounded
    from .spectra import spectral_norm_diff

    n = layout.n
    eta = n if eta is None else eta
    if prim is None:
        prim = assemble_primitive_tensors(layout)
    xf = orthonormalizer(layout, prim)
    rc = rounded_coefficients(layout)
    h_es = build_es_hamiltonian(prim, xf, layout)
    h_round = build_rounded(rc)
    h_main = build_main(rc)
    es_round = spectral_norm_diff(h_es, h_round, eta)
    round_main = spectral_norm_diff(h_round, h_main + eta * rc.c_T, eta)
    reports = [
        rounding_error_bound(n, layout.alpha, layout.beta, layout.omega_min, layout.Gamma, es_round),
        offsite_bound(n, layout.alpha, round_main),
    ]
    reports += appendix_bounds(layout, prim, xf)
    norms = {"ES-round": es_round, "round-main": round_main}
    gam = set(layout.gamma.values())
    if len(gam) == 1:
        from .fockspace import build_classical

        g = gam.pop()
        round_class = spectral_norm_diff(h_round, build_classical(layout, rc) + eta * rc.c_T, eta)
        reports.append(class_bound(n, layout.alpha, g, round_class))
        norms["round-class"] = round_class
    return Certification(reports, norms, {"es": h_es, "round": h_round, "main": h_main, "rc": rc})
