"""Direction parameters and the finite-n criticality calculus.

A direction assigns to each dimension k a base probability
    pbar_k = (alpha_k log n + beta_k(n)) (k-j)! / n^(k-j+gamma_k),
and the growth exponents lambda_k, the sub-logarithmic terms mu_k(n) and the
constants nu_k decide which obstruction counts survive near tau = 1.
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, factorial, fsum, log, log1p

from .errors import Infeasible, InvalidAtThisN, InvalidInput

TOL = 1e-9


@dataclass(frozen=True)
class BetaSpec:
    """beta(n) = const + loglog * log log n."""

    const: float = 0.0
    loglog: float = 0.0

    @classmethod
    def zero(cls) -> "BetaSpec":
        return cls()

    @classmethod
    def constant(cls, b: float) -> "BetaSpec":
        return cls(float(b), 0.0)

    @classmethod
    def scaled_loglog(cls, s: float, offset: float = 0.0) -> "BetaSpec":
        return cls(float(offset), float(s))

    @property
    def is_zero(self) -> bool:
        return self.const == 0.0 and self.loglog == 0.0

    @property
    def form(self) -> str:
        if self.is_zero:
            return "Zero"
        return "ScaledLogLog" if self.loglog else "Constant"

    def __call__(self, n: float) -> float:
        return self.const + (self.loglog * log(log(n)) if self.loglog else 0.0)

    def scaled(self, factor: float) -> "BetaSpec":
        return BetaSpec(self.const * factor, self.loglog * factor)


@dataclass(frozen=True)
class DimParams:
    alpha: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)
    beta: BetaSpec = field(default_factory=BetaSpec)

    @property
    def zero(self) -> bool:
        return self.alpha == 0 and self.beta.is_zero


@dataclass(frozen=True)
class DirectionParams:
    """Per-dimension (alpha, gamma, beta) for k = 1..d, relative to degree j."""

    d: int
    j: int
    dims: tuple[DimParams, ...]

    def __post_init__(self) -> None:
        d, j = self.d, self.j
        if len(self.dims) != d:
            raise InvalidInput(f"expected {d} dimension entries, got {len(self.dims)}")
        if not 1 <= j <= d - 1:
            raise InvalidInput(f"need 1 <= j <= d-1, got j={j}, d={d}")
        for k, p in enumerate(self.dims, start=1):
            if p.alpha < 0 or p.gamma < 0:
                raise InvalidInput(f"k={k}: alpha and gamma must be nonnegative")
            if p.alpha != 0 and p.gamma != 0:
                raise InvalidInput(f"k={k}: one of alpha, gamma must be zero")
            if p.alpha == 0 and not p.beta.is_zero:
                if p.beta.loglog < 0 or (p.beta.loglog == 0 and p.beta.const <= 0):
                    raise InvalidInput(f"k={k}: beta must be positive when alpha is zero")
            if k < j and not p.zero:
                raise InvalidInput(f"k={k} < j: only the zero direction is supported")
        if not any(self.dim(k).alpha > 0 for k in range(j + 1, d + 1)):
            raise InvalidInput("some k in [j+1, d] needs alpha_k > 0")

    def dim(self, k: int) -> DimParams:
        return self.dims[k - 1]

    @property
    def k0(self) -> int:
        return next(k for k in range(self.j + 1, self.d + 1) if self.dim(k).alpha > 0)

    def to_dict(self) -> dict:
        out = {"d": self.d, "j": self.j, "dims": {}}
        for k, p in enumerate(self.dims, start=1):
            out["dims"][str(k)] = {"alpha": str(p.alpha), "gamma": str(p.gamma),
                                  "beta_form": p.beta.form, "beta_scale": p.beta.loglog
                                  if p.beta.loglog else p.beta.const,
                                  "beta_offset": p.beta.const if p.beta.loglog else 0.0}
        return out

    def to_config(self) -> str:
        lines = ["[direction]", f"d = {self.d}", f"j = {self.j}", ""]
        for k, p in enumerate(self.dims, start=1):
            if p.zero:
                continue
            lines += [f"[k{k}]", f"alpha = {p.alpha}", f"gamma = {p.gamma}",
                      f"beta_form = {p.beta.form}"]
            if p.beta.loglog:
                lines += [f"beta_scale = {p.beta.loglog!r}", f"beta_offset = {p.beta.const!r}"]
            elif p.beta.const:
                lines += [f"beta_scale = {p.beta.const!r}"]
            lines.append("")
        return "\n".join(lines)


def _beta_from(form: str, scale: float, offset: float) -> BetaSpec:
    form = form.strip().lower()
    if form == "zero":
        return BetaSpec.zero()
    if form == "constant":
        return BetaSpec.constant(scale)
    if form == "scaledloglog":
        return BetaSpec.scaled_loglog(scale, offset)
    raise InvalidInput(f"unknown beta_form {form!r}")


def parse_direction(text: str) -> DirectionParams:
    """Read a direction from INI text with a [direction] section and [k<N>] sections."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
        d = cp.getint("direction", "d")
        j = cp.getint("direction", "j")
        dims = []
        for k in range(1, d + 1):
            sec = f"k{k}"
            if not cp.has_section(sec):
                dims.append(DimParams())
                continue
            s = cp[sec]
            dims.append(DimParams(Fraction(s.get("alpha", "0")), Fraction(s.get("gamma", "0")),
                                  _beta_from(s.get("beta_form", "Zero"),
                                             float(s.get("beta_scale", "0")),
                                             float(s.get("beta_offset", "0")))))
        extra = [s for s in cp.sections() if s != "direction" and s not in
                 {f"k{k}" for k in range(1, d + 1)}]
        if extra:
            raise InvalidInput(f"unknown sections {extra}")
    except (configparser.Error, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad direction file: {exc}") from exc
    return DirectionParams(d, j, tuple(dims))


def load_direction(path: str) -> DirectionParams:
    try:
        with open(path) as fh:
            return parse_direction(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


@dataclass(frozen=True)
class ProbabilityVector:
    """Clamped probabilities p_k (k = 1..d) and the unclamped values they came from."""

    n: int
    p: tuple[float, ...]
    raw: tuple[float, ...]

    def at(self, k: int) -> float:
        return self.p[k - 1]

    @property
    def d(self) -> int:
        return len(self.p)

    def scaled(self, tau: float) -> "ProbabilityVector":
        raw = tuple(tau * r for r in self.raw)
        return ProbabilityVector(self.n, tuple(min(r, 1.0) for r in raw), raw)

    @classmethod
    def from_probs(cls, n: int, probs) -> "ProbabilityVector":
        probs = tuple(float(x) for x in probs)
        if any(not 0.0 <= x <= 1.0 for x in probs):
            raise InvalidInput("probabilities must lie in [0, 1]")
        return cls(n, probs, probs)


def evaluate_pbar(dp: DirectionParams, n: int) -> ProbabilityVector:
    """pbar at tau = 1, clamped to [0, 1]; raw values kept alongside."""
    if n < dp.d + 2:
        raise InvalidInput(f"n must be at least d+2 = {dp.d + 2}")
    raw = []
    for k in range(1, dp.d + 1):
        p = dp.dim(k)
        if p.zero:
            raw.append(0.0)
            continue
        v = (float(p.alpha) * log(n) + p.beta(n)) * factorial(k - dp.j) \
            / n ** (k - dp.j + float(p.gamma))
        if v < 0:
            raise InvalidAtThisN(f"pbar_{k} = {v} < 0 at n = {n}")
        raw.append(v)
    return ProbabilityVector(n, tuple(min(v, 1.0) for v in raw), tuple(raw))


@dataclass(frozen=True)
class CriticalityReport:
    n: int
    j: int
    lam: dict
    mu: dict
    nu: dict
    critical_set: tuple[int, ...]
    k_bar: int | None
    c1: bool
    c2: bool

    @property
    def ks(self) -> list[int]:
        return sorted(self.lam)

    def exponent(self, k: int) -> float:
        """lambda_k log n + mu_k + nu_k."""
        return float(self.lam[k]) * log(self.n) + self.mu[k] + self.nu[k]

    def to_dict(self) -> dict:
        return {"n": self.n, "j": self.j,
                "lambda": {str(k): str(v) for k, v in self.lam.items()},
                "mu": {str(k): v for k, v in self.mu.items()},
                "nu": {str(k): v for k, v in self.nu.items()},
                "exponent": {str(k): self.exponent(k) for k in self.ks},
                "critical_set": list(self.critical_set), "k_bar": self.k_bar,
                "satisfies_C1": self.c1, "satisfies_C2": self.c2}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def lambda_exact(dp: DirectionParams, k: int) -> Fraction:
    j = dp.j
    total = sum((dp.dim(i).alpha for i in range(j + 1, dp.d + 1)), Fraction(0))
    return Fraction(j + 1) - dp.dim(k).gamma - (k - j + 1) * total


def _mu(dp: DirectionParams, k: int, n: int, pbar_raw: float) -> float:
    j = dp.j
    shared = fsum(dp.dim(i).beta(n) / n ** float(dp.dim(i).gamma)
                  for i in range(j + 1, dp.d + 1))
    p = dp.dim(k)
    if pbar_raw > 1:
        case = 0.0
    elif p.alpha != 0:
        case = log(log(n))
    else:
        b = p.beta(n)
        if b <= 0:
            raise InvalidInput(f"log of nonpositive beta_{k} = {b}")
        case = log(b)
    return -(k - j + 1) * shared + case


def _mu_bounded(dp: DirectionParams, k: int, pbar_raw: float) -> bool:
    """Whether mu_k stays O(1): its log log n coefficient cancels."""
    j = dp.j
    coef = -(k - j + 1) * sum(dp.dim(i).beta.loglog for i in range(j + 1, dp.d + 1)
                              if dp.dim(i).gamma == 0)
    p = dp.dim(k)
    if pbar_raw <= 1:
        if p.alpha != 0:
            coef += 1.0
        elif p.beta.loglog != 0:
            return False
    return abs(coef) <= 1e-12


def _nu(dp: DirectionParams, k: int) -> float:
    j = dp.j
    if k == j:
        return -log(factorial(j + 1))
    out = -log(factorial(j)) - log(k - j + 1)
    if dp.dim(k).alpha != 0:
        out += log(float(dp.dim(k).alpha))
    return out


def lambda_mu_nu(dp: DirectionParams, n: int, tol: float = TOL) -> CriticalityReport:
    pv = evaluate_pbar(dp, n)
    j = dp.j
    ks = [k for k in range(j, dp.d + 1) if pv.raw[k - 1] != 0]
    lam = {k: lambda_exact(dp, k) for k in ks}
    mu = {k: _mu(dp, k, n, pv.raw[k - 1]) for k in ks}
    nu = {k: _nu(dp, k) for k in ks}
    logn = log(n)
    expo = {k: float(lam[k]) * logn + mu[k] + nu[k] for k in ks}
    c1 = all(lam[k] <= 0 and expo[k] / logn <= tol for k in ks)
    hits = [k for k in ks if lam[k] == 0 and abs(expo[k]) / logn <= tol]
    k_bar = min(hits, key=lambda k: (abs(expo[k]), k)) if hits else None
    crit = tuple(k for k in ks if lam[k] == 0 and _mu_bounded(dp, k, pv.raw[k - 1]))
    return CriticalityReport(n, j, lam, mu, nu, crit, k_bar, c1, k_bar is not None)


def is_critical_direction(dp: DirectionParams, n: int) -> tuple[bool, CriticalityReport]:
    rep = lambda_mu_nu(dp, n)
    return rep.c1 and rep.c2, rep


def q_bar(pv: ProbabilityVector, j: int) -> float:
    """Probability that no higher generator contains a fixed j-set."""
    n = pv.n
    total = []
    for k in range(j + 1, pv.d + 1):
        p = pv.at(k)
        if p >= 1.0:
            return 0.0
        total.append(comb(n - j - 1, k - j) * log1p(-p))
    return math.exp(fsum(total))


def forbidden_counts(n: int, j: int, k: int, d: int) -> dict[int, int]:
    """For a pair (K, C) with |K| = k+1: number of (i+1)-sets holding a petal, not inside K."""
    petals = k - j + 1
    out = {}
    for i in range(j + 1, d + 1):
        total = 0
        for s in range(1, petals + 1):
            # s petals together span j+s vertices
            size = i + 1 - j - s
            if size < 0:
                continue
            term = comb(n - j - s, size) - comb(k + 1 - j - s, size)
            total += (-1) ** (s + 1) * comb(petals, s) * term
        out[i] = total
    return out


def log_expected_Xjk(pv: ProbabilityVector, j: int, k: int) -> float:
    """log E[number of plain obstruction copies of dimension k] at finite n."""
    n, d = pv.n, pv.d
    if not 1 <= j <= k <= d:
        raise InvalidInput(f"need 1 <= j <= k <= d, got j={j}, k={k}")
    pk = pv.at(k)
    if pk <= 0:
        return -math.inf
    if k == j:
        terms = [log(comb(n, j + 1)), log(pk)]
        counts = {i: comb(n - j - 1, i - j) for i in range(j + 1, d + 1)}
    else:
        terms = [log(comb(n, k + 1)), log(comb(k + 1, j)), log(pk)]
        counts = forbidden_counts(n, j, k, d)
    for i, N in counts.items():
        pi = pv.at(i)
        if N == 0 or pi == 0:
            continue
        if pi >= 1.0:
            return -math.inf
        terms.append(N * log1p(-pi))
    return fsum(terms)


def exact_expected_Xjk(pv: ProbabilityVector, j: int, k: int, n: int | None = None) -> float:
    if n is not None and n != pv.n:
        raise InvalidInput("n does not match the probability vector")
    return math.exp(log_expected_Xjk(pv, j, k))


def critical_window_expectation(dp: DirectionParams, n: int, c: float) -> dict[int, float]:
    """Limit of E[X_{j,k}] at tau = 1 + c/log n: nonzero only on critical dimensions."""
    rep = lambda_mu_nu(dp, n)
    j = dp.j
    out = {}
    for k in range(j, dp.d + 1):
        if k in rep.critical_set:
            out[k] = math.exp(rep.mu[k] + rep.nu[k] + c * (float(dp.dim(k).gamma) - j - 1))
        else:
            out[k] = 0.0
    return out


def E_constant(dp: DirectionParams, n: int, c: float) -> float:
    rep = lambda_mu_nu(dp, n)
    terms = [math.exp(rep.mu[k] + rep.nu[k] + c * float(dp.dim(k).gamma))
             for k in rep.critical_set]
    return math.exp(-c * (dp.j + 1)) * fsum(terms)


@dataclass(frozen=True)
class ScaledParams:
    alpha: Fraction
    beta: float
    gamma: Fraction
    lam: Fraction
    mu: float
    nu: float


def scale_parameters(dp: DirectionParams, n: int, xi: float) -> dict[int, ScaledParams]:
    """Parameters of tau * pbar with tau = 1 + xi, to leading order."""
    if not abs(xi) < 1:
        raise InvalidInput("need |xi| < 1")
    rep = lambda_mu_nu(dp, n)
    j = dp.j
    total_alpha = float(sum(dp.dim(i).alpha for i in range(j + 1, dp.d + 1)))
    out = {}
    for k in rep.ks:
        p = dp.dim(k)
        out[k] = ScaledParams(
            p.alpha, (1 + xi) * p.beta(n) + float(p.alpha) * xi * log(n), p.gamma, rep.lam[k],
            rep.mu[k] - (k - j + 1) * xi * total_alpha * log(n), rep.nu[k])
    return out


def _rescale_once(dp: DirectionParams) -> tuple[Fraction, DirectionParams]:
    j = dp.j
    if j < 2:
        raise InvalidInput("cannot rescale below degree 1")
    weight = sum((dp.dim(i).alpha / (i - j + 1) for i in range(j, dp.d + 1)), Fraction(0))
    if weight <= 0:
        raise Infeasible("no positive alpha at or above degree j")
    ks = [k for k in range(j - 1, dp.d + 1) if not dp.dim(k).zero]
    ratios = [(j - dp.dim(k).gamma) / ((k - j + 2) * weight) for k in ks]
    eta = max(ratios)
    if eta <= 0:
        raise Infeasible("no positive eta makes the largest exponent vanish")
    dims = []
    for k, p in enumerate(dp.dims, start=1):
        if p.zero:
            dims.append(p)
            continue
        dims.append(replace(p, alpha=eta * p.alpha / (k - j + 1),
                            beta=p.beta.scaled(float(eta) / (k - j + 1))))
    return eta, DirectionParams(dp.d, j - 1, tuple(dims))


def rescale_to_lower_critical(dp: DirectionParams, i: int) -> tuple[Fraction, DirectionParams]:
    """Constant eta with (eta / n^(j-i)) pbar critical for degree i (o(1) term omitted)."""
    if not 1 <= i < dp.j:
        raise InvalidInput(f"need 1 <= i < j = {dp.j}")
    eta_total = Fraction(1)
    while dp.j > i:
        eta, dp = _rescale_once(dp)
        eta_total *= eta
    return eta_total, dp


def rescaled_lambda(dp: DirectionParams, k: int, eta: Fraction) -> Fraction:
    """Exponent of dimension k for the direction (eta/n) pbar at degree j-1."""
    j = dp.j
    weight = sum((dp.dim(i).alpha / (i - j + 1) for i in range(j, dp.d + 1)), Fraction(0))
    return Fraction(j) - dp.dim(k).gamma - eta * (k - j + 2) * weight


def worked_direction() -> DirectionParams:
    """A 1-critical direction for d = 2: sparse edges plus triangles at the threshold.

    Edges arrive with pbar_1 = 1/n; triangles with pbar_2 = (log n + beta)/n where
    beta = (log log n - log 2)/2 makes the flower exponent vanish for every n.
    """
    return DirectionParams(2, 1, (
        DimParams(Fraction(0), Fraction(1), BetaSpec.constant(1.0)),
        DimParams(Fraction(1), Fraction(0), BetaSpec.scaled_loglog(0.5, -0.5 * log(2))),
    ))


def threshold_direction(d: int, j: int) -> DirectionParams:
    """A j-critical direction for any d > j, with worked_direction as the d=2, j=1 case.

    j-simplices arrive at rate n^(-(j+1)/2) and (j+1)-simplices sit at the threshold
    where both dimensions have vanishing exponent; higher dimensions are empty.
    """
    if not 1 <= j <= d - 1:
        raise InvalidInput(f"need 1 <= j <= d-1, got j={j}, d={d}")
    a = Fraction(j + 1, 2)
    offset = (log(float(a)) - log(2) - log(factorial(j))) / 2
    dims = [DimParams() for _ in range(d)]
    dims[j - 1] = DimParams(Fraction(0), a, BetaSpec.constant(1.0))
    dims[j] = DimParams(a, Fraction(0), BetaSpec.scaled_loglog(0.5, offset))
    return DirectionParams(d, j, tuple(dims))
