"""Fourier series on a circle of configurable circumference, graded norms,
multiplier operators, and mollifier families.

Everything downstream (mode solvers, deformation operators, the smoothed
Newton iteration) is built on the representation fixed here: a truncated
complex Fourier series u(t) = sum_{|l| <= N} u_l exp(2*pi*i*l*t/L) stored as
a dense coefficient vector in mode order -N..N.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# numpy renamed trapz -> trapezoid in 2.0
trapezoid = getattr(np, "trapezoid", None) or np.trapz


def sign_with_positive_zero(modes):
    # the transform below needs sgn(0) = +1, not numpy's 0
    s = np.sign(modes).astype(float)
    s[np.asarray(modes) == 0] = 1.0
    return s


@dataclass(frozen=True, eq=False)
class FourierSeries1D:
    """Truncated Fourier series; coeffs has length 2N+1 in mode order -N..N."""

    coeffs: np.ndarray
    circumference: float = TWO_PI

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coeffs must be a 1-d array of odd length (modes -N..N)")
        if not self.circumference > 0:
            raise ValueError("circumference must be positive")
        object.__setattr__(self, "coeffs", c)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(n_modes, circumference=TWO_PI):
        return FourierSeries1D(np.zeros(2 * n_modes + 1, dtype=complex), circumference)

    @staticmethod
    def from_modes(mode_dict, circumference=TWO_PI, n_modes=None):
        if n_modes is None:
            n_modes = max((abs(int(l)) for l in mode_dict), default=0)
        out = np.zeros(2 * n_modes + 1, dtype=complex)
        for l, a in mode_dict.items():
            if abs(int(l)) > n_modes:
                raise ValueError(f"mode {l} exceeds truncation {n_modes}")
            out[int(l) + n_modes] = a
        return FourierSeries1D(out, circumference)

    @staticmethod
    def single_mode(l, amplitude=1.0, circumference=TWO_PI, n_modes=None):
        return FourierSeries1D.from_modes({l: amplitude}, circumference, n_modes)

    # -- basic accessors ---------------------------------------------------

    @property
    def n_modes(self):
        return (self.coeffs.size - 1) // 2

    def modes(self):
        n = self.n_modes
        return np.arange(-n, n + 1)

    def coeff(self, l):
        n = self.n_modes
        if abs(l) > n:
            return 0.0 + 0.0j
        return complex(self.coeffs[l + n])

    def angular_frequencies(self):
        return TWO_PI * self.modes() / self.circumference

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        phase = np.exp(1j * np.multiply.outer(t, self.angular_frequencies()))
        return phase @ self.coeffs

    # -- structural ops ----------------------------------------------------

    def pad_to(self, n_modes):
        n = self.n_modes
        if n_modes < n:
            raise ValueError("pad_to cannot shrink; use truncate")
        out = np.zeros(2 * n_modes + 1, dtype=complex)
        out[n_modes - n : n_modes + n + 1] = self.coeffs
        return FourierSeries1D(out, self.circumference)

    def truncate(self, n_modes):
        n = self.n_modes
        if n_modes >= n:
            return self.pad_to(n_modes)
        return FourierSeries1D(
            self.coeffs[n - n_modes : n + n_modes + 1].copy(), self.circumference
        )

    def conjugate(self):
        # (conj u)_l = conj(u_{-l}); an antilinear involution on coefficients
        return FourierSeries1D(np.conj(self.coeffs[::-1]), self.circumference)

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other):
        if not math.isclose(self.circumference, other.circumference, rel_tol=1e-12):
            raise ValueError("circumference mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        n = max(self.n_modes, other.n_modes)
        return FourierSeries1D(
            self.pad_to(n).coeffs + other.pad_to(n).coeffs, self.circumference
        )

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        return FourierSeries1D(self.coeffs * complex(scalar), self.circumference)

    __rmul__ = __mul__

    # -- norms and quadrature ------------------------------------------------

    def sobolev_norm(self, m):
        w = (1.0 + self.modes().astype(float) ** 2) ** m
        return float(np.sqrt(np.sum(w * np.abs(self.coeffs) ** 2)))

    def l2_norm(self):
        return self.sobolev_norm(0.0)

    def quadrature_points(self, n_points=None):
        # >= 4N+1 uniform points makes the trapezoid rule exact for |u|^2
        if n_points is None:
            n_points = 4 * self.n_modes + 1
        return np.arange(n_points) * (self.circumference / n_points)

    def quadrature_mean_square(self, n_points=None):
        t = self.quadrature_points(n_points)
        vals = self.evaluate(t)
        return float(np.mean(np.abs(vals) ** 2))

    def parseval_defect(self, n_points=None):
        coeff_side = float(np.sum(np.abs(self.coeffs) ** 2))
        quad_side = self.quadrature_mean_square(n_points)
        scale = max(coeff_side, 1.0)
        return abs(coeff_side - quad_side) / scale

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self):
        return {
            "circumference": self.circumference,
            "N": self.n_modes,
            "coeffs": [
                {"l": int(l), "re": float(c.real), "im": float(c.imag)}
                for l, c in zip(self.modes(), self.coeffs)
            ],
        }

    @staticmethod
    def from_json_dict(d):
        n = int(d["N"])
        out = np.zeros(2 * n + 1, dtype=complex)
        for entry in d["coeffs"]:
            out[int(entry["l"]) + n] = float(entry["re"]) + 1j * float(entry["im"])
        return FourierSeries1D(out, float(d["circumference"]))

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(text):
        return FourierSeries1D.from_json_dict(json.loads(text))


def multiply(u, v, max_modes=None):
    """Exact product of two truncated series (full convolution), optionally
    re-truncated to max_modes afterwards."""
    u._check_compatible(v)
    coeffs = np.convolve(u.coeffs, v.coeffs)
    out = FourierSeries1D(coeffs, u.circumference)
    if max_modes is not None:
        out = out.truncate(max_modes)
    return out


# -- multiplier operators ------------------------------------------------------


def hilbert_transform(u):
    """Multiplier sgn(l) with sgn(0) = +1; an exact involution."""
    return FourierSeries1D(
        u.coeffs * sign_with_positive_zero(u.modes()), u.circumference
    )


def fractional_resolvent(u, s):
    """Multiplier (l^2+1)^{-s} on the integer mode index."""
    mult = (u.modes().astype(float) ** 2 + 1.0) ** (-s)
    return FourierSeries1D(u.coeffs * mult, u.circumference)


def second_derivative(u):
    """Multiplier -(2*pi*l/L)^2."""
    return FourierSeries1D(u.coeffs * -(u.angular_frequencies() ** 2), u.circumference)


def derivative(u):
    return FourierSeries1D(u.coeffs * (1j * u.angular_frequencies()), u.circumference)


# -- graded vectors -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedVector:
    """A series viewed through the full scale of weighted coefficient norms."""

    series: FourierSeries1D

    def norm(self, m):
        return self.series.sobolev_norm(m)

    def __add__(self, other):
        return GradedVector(self.series + other.series)

    def __sub__(self, other):
        return GradedVector(self.series - other.series)

    def __mul__(self, scalar):
        return GradedVector(self.series * scalar)

    __rmul__ = __mul__

    @staticmethod
    def zero(n_modes, circumference=TWO_PI):
        return GradedVector(FourierSeries1D.zero(n_modes, circumference))


def interpolation_ratio(vec, m, m1, m2):
    """norm(m) / (norm(m1)^a * norm(m2)^(1-a)) with a = (m2-m)/(m2-m1).

    Log-convexity of m -> norm(m)^2 makes the true constant exactly 1.
    """
    if not (m1 < m < m2):
        raise ValueError("need m1 < m < m2")
    a = (m2 - m) / (m2 - m1)
    lo, hi = vec.norm(m1), vec.norm(m2)
    if lo == 0.0 or hi == 0.0:
        return 0.0
    return vec.norm(m) / (lo**a * hi ** (1.0 - a))


# -- mollifier family ------------------------------------------------------------


def _bump_c2(x):
    """C^2 cutoff profile: 1 on [0,1], 0 on [2,inf), quintic step between.

    A sharp truncation would make the eps-derivative bound ill-defined, so the
    profile must be at least C^1 in eps*|l|; the quintic step has two vanishing
    derivatives at both junctions.
    """
    x = np.asarray(x, dtype=float)
    s = np.clip(x - 1.0, 0.0, 1.0)
    step = s**3 * (10.0 - 15.0 * s + 6.0 * s**2)
    return np.where(x <= 1.0, 1.0, np.where(x >= 2.0, 0.0, 1.0 - step))


def _bump_c2_prime(x):
    x = np.asarray(x, dtype=float)
    s = np.clip(x - 1.0, 0.0, 1.0)
    dstep = 30.0 * s**2 * (1.0 - s) ** 2
    return np.where((x <= 1.0) | (x >= 2.0), 0.0, -dstep)


def _bump_c2_second(x):
    x = np.asarray(x, dtype=float)
    s = np.clip(x - 1.0, 0.0, 1.0)
    d2step = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    return np.where((x <= 1.0) | (x >= 2.0), 0.0, -d2step)


@dataclass(frozen=True)
class SmoothingFamily:
    """Mode-cutoff mollifiers S_eps u = rho(eps*|l|) u_l.

    rho is smooth, nonincreasing, identically 1 on [0,1] and 0 on [2,inf).
    """

    rho: callable = _bump_c2
    rho_prime: callable = _bump_c2_prime

    def multiplier(self, modes, eps):
        return self.rho(eps * np.abs(np.asarray(modes, dtype=float)))

    def apply(self, u, eps):
        if not 0.0 < eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        return FourierSeries1D(
            u.coeffs * self.multiplier(u.modes(), eps), u.circumference
        )

    def apply_eps_derivative(self, u, eps):
        # d/deps S_eps u = |l| rho'(eps|l|) u_l, computed analytically
        if not 0.0 < eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        absl = np.abs(u.modes().astype(float))
        return FourierSeries1D(
            u.coeffs * absl * self.rho_prime(eps * absl), u.circumference
        )


def smooth(vec, eps, family=None):
    """Mollify a graded vector; eps outside (0,1] is rejected."""
    if family is None:
        family = SmoothingFamily()
    return GradedVector(family.apply(vec.series, eps))


@dataclass
class SmoothingAxiomRow:
    axiom: str
    m: float
    n: float
    max_ratio: float
    eps_spread: float  # max over eps grid divided by min over eps grid


@dataclass
class SmoothingAxiomReport:
    rows: list
    ceiling: float
    passed: bool

    def worst(self):
        return max(r.max_ratio for r in self.rows)


def verify_smoothing_axioms(family, m_max, eps_grid, n_probe_modes=600, ceiling=100.0):
    """Measure the three mollifier constants over a grid of (m, n) pairs.

    The family is a diagonal multiplier, so the operator constant for each eps
    equals the max over single modes of the per-mode ratio; n_probe_modes must
    exceed 2/min(eps) for the active band to be visible.

      (a) norm(n) of S_eps u against eps^{m-n} norm(m) for n >= m, and the
          plain contraction norm(n) <= norm(m) for n <= m;
      (b) norm(m) of S_eps u - u against eps^{n-m} norm(n) for n >= m;
      (c) norm(n) of d/deps S_eps u against eps^{m-n-1} norm(m).
    """
    eps_grid = [float(e) for e in eps_grid]
    levels = [v / 2.0 for v in range(0, int(2 * m_max) + 1)]
    l = np.arange(0, n_probe_modes + 1, dtype=float)
    base = 1.0 + l**2
    rows = []
    for m in levels:
        for n in levels:
            per_eps = {"smoothing": [], "approximation": [], "eps_derivative": []}
            for eps in eps_grid:
                rho = family.rho(eps * l)
                drho = family.rho_prime(eps * l)
                gain = base ** ((n - m) / 2.0)
                per_eps["smoothing"].append(
                    float(np.max(rho * gain)) * eps ** max(n - m, 0.0)
                )
                if n >= m:
                    per_eps["approximation"].append(
                        float(np.max(np.abs(rho - 1.0) * base ** ((m - n) / 2.0)))
                        * eps ** (m - n)
                    )
                per_eps["eps_derivative"].append(
                    float(np.max(np.abs(l * drho) * gain)) * eps ** (n - m + 1.0)
                )
            for axiom, vals in per_eps.items():
                if not vals:
                    continue
                lo = min(v for v in vals if v > 0.0) if any(v > 0 for v in vals) else 1.0
                rows.append(
                    SmoothingAxiomRow(
                        axiom=axiom,
                        m=m,
                        n=n,
                        max_ratio=max(vals),
                        eps_spread=max(vals) / lo,
                    )
                )
    passed = all(np.isfinite(r.max_ratio) and r.max_ratio <= ceiling for r in rows)
    return SmoothingAxiomReport(rows=rows, ceiling=ceiling, passed=passed)


# -- pointwise bound on radial profiles -------------------------------------------


@dataclass
class DyadicBoundReport:
    sup_abs: float
    b_norm: float
    ratio: float
    chain_bound: float
    shell_norms: list
    integrable: bool
    passed: bool


def dyadic_pointwise_bound(r, values, alpha, ratio_ceiling=None):
    """sup |phi| against the b-norm (int (|phi|^2/r^2 + |phi'|^2) r dr)^{1/2}.

    The grid must be strictly positive and increasing. alpha > 1 declares the
    weight class of the profile; profiles whose per-dyadic-shell b-norm
    contributions fail to decay toward the axis (e.g. phi = const, whose
    |phi|^2/r^2 * r dr integral is log-divergent) are flagged non-integrable.
    The chain bound |phi(x)| <= |phi(R)| + sqrt(log 2) * sum of shell norms is
    evaluated alongside as a certificate for the sup.
    """
    r = np.asarray(r, dtype=float)
    values = np.asarray(values, dtype=float)
    if r.ndim != 1 or np.any(r <= 0.0) or np.any(np.diff(r) <= 0.0):
        raise ValueError("r must be strictly positive and increasing")
    if not alpha > 1.0:
        raise ValueError("alpha must exceed 1")

    dphi = np.gradient(values, r)
    density = (values**2 / r**2 + dphi**2) * r

    n_shells = max(int(np.floor(np.log2(r[-1] / r[0]))), 1)
    edges = r[-1] * 2.0 ** (-np.arange(n_shells + 1, dtype=float))
    shell_norms = []
    for j in range(n_shells):
        hi, lo = edges[j], edges[j + 1]
        mask = (r >= lo) & (r <= hi)
        if np.count_nonzero(mask) < 2:
            shell_norms.append(0.0)
            continue
        shell_norms.append(float(np.sqrt(trapezoid(density[mask], r[mask]))))

    b_norm = float(np.sqrt(trapezoid(density, r)))
    sup_abs = float(np.max(np.abs(values)))
    ratio = sup_abs / b_norm if b_norm > 0 else math.inf

    # decay scan over the innermost shells: contributions that fail to decay
    # geometrically toward the axis signal a divergent |phi|^2/r dr integral
    # (phi ~ r^p contributes ~ 2^{-jp} per shell norm, so p = 0 sits at ratio 1)
    tail = [s for s in shell_norms[-6:] if s > 0.0]
    integrable = True
    if len(tail) >= 3:
        mean_ratio = (tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1))
        integrable = mean_ratio <= 0.95

    chain_bound = float(abs(values[-1])) + math.sqrt(math.log(2.0)) * float(
        np.sum(shell_norms)
    )
    passed = integrable and (ratio_ceiling is None or ratio <= ratio_ceiling)
    return DyadicBoundReport(
        sup_abs=sup_abs,
        b_norm=b_norm,
        ratio=ratio,
        chain_bound=chain_bound,
        shell_norms=shell_norms,
        integrable=integrable,
        passed=passed,
    )
