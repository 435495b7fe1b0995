"""Numerical and exact certification of the local symplectic models.

A disk bundle of degree -m over a genus-g surface carries the model
symplectic form omega = r1 dr1 dtheta1 + r2 dr2 dtheta2 in each chart,
with Liouville fields

    W_i chart (around a marked point x_i, i >= 1):
        V = 1/2 (r1 + A_i/(n_i r1)) dr1 + 1/2 (r2 + A/(m r2)) dr2
    W_0 chart (annulus around the deleted point x_0):
        V0 = 1/2 r1 dr1 + 1/2 (r2 + A/(m r2)) dr2
    Z1 chart (the bundle piece over x_0):
        V1 = 1/2 r1 dr1 + 1/2 (r2 + A/(m r2)) dr2

singular along the zero section (r2 = 0) and, when A_i > 0, along the
fiber over x_i (r1 = 0).  The two bundle pieces are glued over the wedge
T = {0 < r1^2 < m delta, 0 <= r2^2 < r1^2/m} in Z1 by

    phi(r1, theta1, r2, theta2)
        = (sqrt(A - r1^2 + m r2^2), -theta1, r2, m theta1 + theta2),

a symplectomorphism intertwining V1 with V0.  On top of this sits the
fibration over the disk given near x_i by (mu(r1/sd) mu(r2/sd),
theta1 + theta2) with sd = sqrt(delta), over the annulus by
(mu(r2/sd), m theta1 + theta2) and on Z1 by (mu(r2/sd), theta2), where mu
is a fixed smooth monotone profile.

The checks in this module certify these statements the way they can be
certified mechanically: the gluing identity exactly (in action-angle
coordinates the pullback computation is rational), the Liouville identity
d(iota_V omega) = omega by second-order finite differences, intertwining
by exact differentiation of the coordinate formulas, and regularity /
fiber positivity / boundary transversality of the fibration by sampling.

Area bookkeeping is exact throughout: prescribed areas enter as rational
multiples of pi and the linear system for the bundle constants is solved
over the rationals.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla, sampling
from .graph import build_intersection_matrix, validate, HypothesisError


class DomainError(ValueError):
    """A point lies outside its chart or on a singular locus."""


class ConsistencyError(RuntimeError):
    """An internally guaranteed property failed; indicates a bug."""


# ---------------------------------------------------------------------------
# model constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskBundleModel:
    """Constants of one disk-bundle local model.

    `a` is the total radial constant A, `ai`/`ni` the per-marked-point
    constants (A_i >= 0, n_i >= 1), `delta` the shared chart radius
    parameter.  Construction enforces A > sum A_i/n_i and
    m delta < (A - sum A_i/n_i) / 2.
    """
    genus: int
    m: int
    a: Fraction
    ai: tuple
    ni: tuple
    delta: Fraction

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if len(self.ai) != self.m or len(self.ni) != self.m:
            raise ValueError("need exactly m constants A_i and n_i")
        if any(x < 0 for x in self.ai):
            raise ValueError("A_i must be >= 0")
        if any(n < 1 for n in self.ni):
            raise ValueError("n_i must be >= 1")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        reduced = sum(Fraction(x) / n for x, n in zip(self.ai, self.ni))
        if not Fraction(self.a) > reduced:
            raise ValueError("need A > sum A_i/n_i")
        if not self.m * Fraction(self.delta) < (Fraction(self.a) - reduced) / 2:
            raise ValueError("need m*delta < (A - sum A_i/n_i)/2")

    @property
    def slack(self):
        """A - sum A_i/n_i, the zero-section area divided by pi."""
        return Fraction(self.a) - sum(Fraction(x) / n
                                      for x, n in zip(self.ai, self.ni))

    @classmethod
    def from_dict(cls, doc):
        """Read {"A": .., "Ai": [..], "ni": [..], "delta": .., "m": .., "genus": ..}.

        Numeric fields accept integers, floats, or strings like "3/4";
        strings keep the arithmetic exact.
        """
        def rat(x, name):
            try:
                return Fraction(str(x)) if isinstance(x, str) else Fraction(x)
            except (ValueError, ZeroDivisionError):
                raise ValueError("field %r: not a number: %r" % (name, x)) from None
        try:
            m = int(doc["m"])
            genus = int(doc.get("genus", 0))
            a = rat(doc["A"], "A")
            ai = tuple(rat(x, "Ai") for x in doc["Ai"])
            ni = tuple(int(n) for n in doc["ni"])
            delta = rat(doc["delta"], "delta")
        except KeyError as exc:
            raise ValueError("missing constants field %s" % exc) from None
        return cls(genus=genus, m=m, a=a, ai=ai, ni=ni, delta=delta)

    def to_dict(self):
        return {"genus": self.genus, "m": self.m, "A": str(self.a),
                "Ai": [str(x) for x in self.ai], "ni": list(self.ni),
                "delta": str(self.delta)}


CHARTS = ("Wi", "W0", "Z1")


@dataclass(frozen=True)
class ChartPoint:
    """A point of one chart, in polar coordinates (r1, theta1, r2, theta2)."""
    chart: str
    r1: float
    theta1: float
    r2: float
    theta2: float
    i: int = 1  # marked-point index, for Wi charts

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise DomainError("unknown chart %r" % self.chart)


def _chart_bounds(model, chart):
    """(r1_lo, r1_hi), (r2_lo, r2_hi) for a chart, as exact Fractions of r^2."""
    d = Fraction(model.delta)
    if chart == "Wi":
        return (Fraction(0), d), (Fraction(0), d)
    if chart == "Z1":
        return (Fraction(0), model.m * d), (Fraction(0), d)
    a = Fraction(model.a)
    return (a - model.m * d, a), (Fraction(0), d)


def in_chart(model, point):
    (r1lo, r1hi), (r2lo, r2hi) = _chart_bounds(model, point.chart)
    r1sq, r2sq = point.r1 ** 2, point.r2 ** 2
    return (r1lo <= r1sq < r1hi or math.isclose(float(r1lo), r1sq)) and \
           (r2lo <= r2sq < r2hi)


def in_gluing_wedge(model, point):
    """The wedge T where the gluing map is defined."""
    if point.chart != "Z1":
        return False
    r1sq, r2sq = point.r1 ** 2, point.r2 ** 2
    return 0 < r1sq < model.m * float(model.delta) and r2sq < r1sq / model.m


# ---------------------------------------------------------------------------
# Liouville fields
# ---------------------------------------------------------------------------

def _radial_components(model, chart, i=1):
    """The two radial component functions (f(r1), g(r2)) of V in a chart."""
    a = model.a
    m = model.m

    def g(r2):
        if r2 == 0:
            raise DomainError("singular along the zero section C (r2 = 0)")
        return (r2 + Fraction(a, m) / r2 if isinstance(r2, Fraction)
                else (r2 + float(a) / (m * r2))) / 2

    if chart == "Wi":
        if not 1 <= i <= m:
            raise DomainError("marked point index %d out of range" % i)
        ai, ni = model.ai[i - 1], model.ni[i - 1]

        def f(r1):
            if ai == 0:
                return r1 / 2
            if r1 == 0:
                raise DomainError(
                    "singular along the fiber F over x_%d (r1 = 0)" % i)
            return (r1 + Fraction(ai, ni) / r1 if isinstance(r1, Fraction)
                    else (r1 + float(ai) / (ni * r1))) / 2
        return f, g

    # W0 and Z1 share f = r1/2
    return (lambda r1: r1 / 2), g


def liouville_field(model, point):
    """Evaluate V at a chart point; returns (v_r1, v_theta1, v_r2, v_theta2).

    Accepts exact Fractions in the radial slots and stays exact for them.
    Raises DomainError on the singular loci, naming the locus.
    """
    if not in_chart(model, point):
        raise DomainError("point outside the %s chart domain" % point.chart)
    f, g = _radial_components(model, point.chart, point.i)
    return (f(point.r1), 0, g(point.r2), 0)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class NumericReport:
    """Outcome of one sampled check.

    `max_residual` is a violation magnitude (identity mismatch, or the
    amount by which a required margin is missed); the check fails exactly
    when it exceeds `tolerance`.  `order` is the empirical convergence
    order for finite-difference checks, None elsewhere.
    """
    name: str
    samples: int
    max_residual: float
    tolerance: float
    order: float | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def to_dict(self):
        return {
            "name": self.name,
            "samples": self.samples,
            "max_residual": (str(self.max_residual)
                             if isinstance(self.max_residual, Fraction)
                             else float(self.max_residual)),
            "tolerance": (str(self.tolerance)
                          if isinstance(self.tolerance, Fraction)
                          else float(self.tolerance)),
            "order": None if self.order is None else float(self.order),
            "passed": self.passed,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# Liouville identity, by finite differences in rectangular coordinates
# ---------------------------------------------------------------------------

def _lambda_rect(model, chart, i, scale):
    """iota_V omega as a function of rectangular coordinates.

    Component functions are genuinely non-polynomial (they contain the
    angular form (x dy - y dx)/r^2), so central differences see a real
    O(h^2) truncation term and the convergence order is measurable.
    """
    f, g = _radial_components(model, chart, i)

    def lam(q):
        x1, y1, x2, y2 = q
        r1 = math.hypot(x1, y1)
        r2 = math.hypot(x2, y2)
        c1 = scale * f(r1) / r1
        c2 = scale * g(r2) / r2
        return np.array([-c1 * y1, c1 * x1, -c2 * y2, c2 * x2])
    return lam


_OMEGA_RECT = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])


def _d_lambda_fd(lam, q, h):
    """Exterior derivative of a 1-form by central differences."""
    partials = np.empty((4, 4))
    for u in range(4):
        step = np.zeros(4)
        step[u] = h
        partials[u] = (lam(q + step) - lam(q - step)) / (2 * h)
    return partials - partials.T  # (d lambda)_{uv} = d_u lambda_v - d_v lambda_u


def _liouville_samples(model, chart, count, seed):
    """Polar radii boxes keeping samples well inside the chart and away
    from the singular loci (margins are fractions of the chart scale,
    far above the finite-difference step)."""
    sd = math.sqrt(float(model.delta))
    if chart == "Wi":
        b1 = (0.4 * sd, 0.9 * sd)
    elif chart == "Z1":
        s1 = math.sqrt(model.m * float(model.delta))
        b1 = (0.4 * s1, 0.9 * s1)
    else:
        lo = math.sqrt(float(model.a) - model.m * float(model.delta))
        hi = math.sqrt(float(model.a))
        b1 = (lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo))
    b2 = (0.4 * sd, 0.9 * sd)
    pts = sampling.halton(4, count, seed)
    boxes = [b1, (0.0, 2 * math.pi), b2, (0.0, 2 * math.pi)]
    out = []
    for p in pts:
        r1, t1, r2, t2 = [lo + (hi - lo) * float(x)
                          for x, (lo, hi) in zip(p, boxes)]
        out.append(np.array([r1 * math.cos(t1), r1 * math.sin(t1),
                             r2 * math.cos(t2), r2 * math.sin(t2)]))
    return out


def check_liouville(model, chart="Z1", i=1, samples=1000, h=1e-4,
                    tolerance=1e-6, seed=0, field_scale=1.0):
    """Residual of d(iota_V omega) - omega over a chart, with order estimate.

    `field_scale` rescales V (0 gives the negative control: the residual
    is then the norm of omega itself).
    """
    lam = _lambda_rect(model, chart, i, field_scale)
    points = _liouville_samples(model, chart, samples, seed)

    def max_residual(step):
        worst = 0.0
        for q in points:
            res = np.max(np.abs(_d_lambda_fd(lam, q, step) - _OMEGA_RECT))
            worst = max(worst, res)
        return worst

    res_h = max_residual(h)
    res_h2 = max_residual(h / 2)
    if res_h2 == 0:
        order = math.inf
    elif res_h == 0:
        order = 0.0
    else:
        order = math.log2(res_h / res_h2)
    name = "liouville[%s]" % (chart if chart != "Wi" else "Wi(%d)" % i)
    return NumericReport(name=name, samples=samples, max_residual=res_h,
                         tolerance=tolerance, order=order,
                         detail={"h": h, "residual_half_step": res_h2,
                                 "field_scale": field_scale})


# ---------------------------------------------------------------------------
# the gluing map and its certificates
# ---------------------------------------------------------------------------

def gluing_map(model, point):
    """phi: T -> W0 chart, in polar coordinates."""
    if not in_gluing_wedge(model, point):
        raise DomainError("point is not in the gluing wedge T")
    a, m = float(model.a), model.m
    r1p = math.sqrt(a - point.r1 ** 2 + m * point.r2 ** 2)
    image = ChartPoint(
        chart="W0",
        r1=r1p,
        theta1=(-point.theta1) % (2 * math.pi),
        r2=point.r2,
        theta2=(m * point.theta1 + point.theta2) % (2 * math.pi),
    )
    if not in_chart(model, image):
        raise ConsistencyError("gluing image left the W0 annulus")
    return image


def _gluing_u(model, u1, t1, u2, t2, angle_coefficient=None):
    """The gluing map in action-angle coordinates (u = r^2/2, angles in turns)."""
    m = model.m if angle_coefficient is None else angle_coefficient
    u1p = Fraction(model.a, 2) - u1 + model.m * u2
    t1p = (-t1) % 1
    u2p = u2
    t2p = (m * t1 + t2) % 1
    return u1p, t1p, u2p, t2p


def _gluing_jacobian_u(model, angle_coefficient=None):
    m_area = model.m
    m_angle = model.m if angle_coefficient is None else angle_coefficient
    return [
        [Fraction(-1), Fraction(0), Fraction(m_area), Fraction(0)],
        [Fraction(0), Fraction(-1), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(m_angle), Fraction(0), Fraction(1)],
    ]


_OMEGA_U = [
    [Fraction(0), Fraction(1), Fraction(0), Fraction(0)],
    [Fraction(-1), Fraction(0), Fraction(0), Fraction(0)],
    [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
    [Fraction(0), Fraction(0), Fraction(-1), Fraction(0)],
]


def _wedge_samples_u(model, count, seed):
    """Exact rational samples of T in (u1, t1, u2, t2); angles in turns."""
    md2 = model.m * Fraction(model.delta) / 2
    pts = sampling.halton(4, count, seed)
    out = []
    for x1, s1, x2, s2 in pts:
        u1 = md2 * x1
        u2 = (u1 / model.m) * x2  # 0 <= u2 < u1/m
        out.append((u1, s1, u2, s2))
    return out


def check_symplectomorphism(model, samples=1000, seed=0, angle_coefficient=None):
    """Exact pullback identity J^T Omega J = Omega for the gluing map.

    Runs in rational action-angle coordinates; the expected residual is
    exactly zero, and the tolerance is zero.  `angle_coefficient`
    perturbs the theta2 slot (negative control).
    """
    jac = _gluing_jacobian_u(model, angle_coefficient)
    pullback = exactla.mat_mul(exactla.mat_mul(exactla.transpose(jac), _OMEGA_U), jac)
    residual_matrix = [[pullback[i][j] - _OMEGA_U[i][j] for j in range(4)]
                       for i in range(4)]
    algebraic_residual = max(abs(x) for row in residual_matrix for x in row)

    worst = Fraction(0)
    lo = (Fraction(model.a) - model.m * Fraction(model.delta)) / 2
    hi = Fraction(model.a) / 2
    for u1, t1, u2, t2 in _wedge_samples_u(model, samples, seed):
        u1p, _, u2p, _ = _gluing_u(model, u1, t1, u2, t2, angle_coefficient)
        if not (lo < u1p < hi):
            raise ConsistencyError("gluing image left the W0 annulus")
        if u2p != u2:
            raise ConsistencyError("gluing must preserve u2")
        worst = max(worst, algebraic_residual)
    return NumericReport(
        name="gluing_symplectomorphism", samples=samples,
        max_residual=worst, tolerance=Fraction(0),
        detail={"arithmetic": "exact rational",
                "angle_coefficient": angle_coefficient})


def check_intertwine(model, samples=1000, seed=0, tolerance=1e-9,
                     field_scale=1.0):
    """Residual of Dphi(V1) - V0(phi(p)) over the wedge T.

    The Jacobian of phi is differentiated in closed form, so the residual
    is rounding noise when the identity holds; `field_scale` != 1 breaks
    it (negative control).
    """
    a, m = float(model.a), model.m
    pts = _wedge_samples_u(model, samples, seed)
    worst = 0.0
    for u1, t1, u2, _ in pts:
        r1 = math.sqrt(2 * float(u1))
        r2 = math.sqrt(2 * float(u2))
        if r2 < 1e-6 * math.sqrt(float(model.delta)):
            continue  # V is singular along r2 = 0; T touches it
        r1p = math.sqrt(a - r1 ** 2 + m * r2 ** 2)
        v1 = (field_scale * r1 / 2, 0.0,
              field_scale * (r2 + a / (m * r2)) / 2, 0.0)
        # rows of Dphi in polar coordinates
        push = (
            (-r1 / r1p) * v1[0] + (m * r2 / r1p) * v1[2],
            -v1[1],
            v1[2],
            m * v1[1] + v1[3],
        )
        v0 = (r1p / 2, 0.0, (r2 + a / (m * r2)) / 2, 0.0)
        worst = max(worst, max(abs(x - y) for x, y in zip(push, v0)))
    return NumericReport(name="gluing_intertwines_liouville", samples=samples,
                         max_residual=worst, tolerance=tolerance,
                         detail={"jacobian": "closed form",
                                 "field_scale": field_scale})


# ---------------------------------------------------------------------------
# the radial profile mu and the fibration maps
# ---------------------------------------------------------------------------

# On [1/3, 2/3] mu is the unique quintic matching value, first and second
# derivatives of the plateaus r and 1 at the junctions:
#   mu(r) = 1/3 + t/3 + (14/3) t^3 - (22/3) t^4 + 3 t^5,  t = 3r - 1,
# and mu'(r) = (t - 1)^2 (45 t^2 + 2 t + 1) >= 0, so mu is monotone and C^2.
_MU_COEFFS = (Fraction(1, 3), Fraction(1, 3), Fraction(0),
              Fraction(14, 3), Fraction(-22, 3), Fraction(3))


def mu(r):
    """The radial profile: identity below 1/3, one above 2/3, C^2 monotone."""
    if isinstance(r, Fraction):
        if r < 0 or r > 1:
            raise DomainError("mu is defined on [0, 1]")
        if r <= Fraction(1, 3):
            return r
        if r >= Fraction(2, 3):
            return Fraction(1)
        t = 3 * r - 1
        return sum(c * t ** k for k, c in enumerate(_MU_COEFFS))
    if r < 0 or r > 1:
        raise DomainError("mu is defined on [0, 1]")
    if r <= 1 / 3:
        return r
    if r >= 2 / 3:
        return 1.0
    t = 3 * r - 1
    return float(sum(float(c) * t ** k for k, c in enumerate(_MU_COEFFS)))


def mu_prime(r):
    """Derivative of mu; (t-1)^2 (45 t^2 + 2t + 1) on the blend interval."""
    if r < 0 or r > 1:
        raise DomainError("mu is defined on [0, 1]")
    if r <= 1 / 3:
        return 1.0
    if r >= 2 / 3:
        return 0.0
    t = 3 * float(r) - 1
    return (t - 1) ** 2 * (45 * t ** 2 + 2 * t + 1)


def lefschetz_map(model, point):
    """The fibration to the disk, chart by chart; returns (radius, angle)."""
    if not in_chart(model, point):
        raise DomainError("point outside the %s chart domain" % point.chart)
    sd = math.sqrt(float(model.delta))
    if point.chart == "Wi":
        radius = mu(point.r1 / sd) * mu(point.r2 / sd)
        angle = point.theta1 + point.theta2
    elif point.chart == "W0":
        radius = mu(point.r2 / sd)
        angle = model.m * point.theta1 + point.theta2
    else:
        radius = mu(point.r2 / sd)
        angle = point.theta2
    return radius, angle % (2 * math.pi)


def _fibration_jacobian(model, point):
    """2x4 Jacobian of the chart formula, to rectangular base coordinates,
    with respect to the polar chart frame (dr1, dtheta1, dr2, dtheta2)."""
    sd = math.sqrt(float(model.delta))
    rho, phi = lefschetz_map(model, point)
    if point.chart == "Wi":
        drho = (mu_prime(point.r1 / sd) * mu(point.r2 / sd) / sd,
                mu(point.r1 / sd) * mu_prime(point.r2 / sd) / sd)
        dphi = (1.0, 1.0)
    elif point.chart == "W0":
        drho = (0.0, mu_prime(point.r2 / sd) / sd)
        dphi = (float(model.m), 1.0)
    else:
        drho = (0.0, mu_prime(point.r2 / sd) / sd)
        dphi = (0.0, 1.0)
    c, s = math.cos(phi), math.sin(phi)
    return np.array([
        [drho[0] * c, -rho * s * dphi[0], drho[1] * c, -rho * s * dphi[1]],
        [drho[0] * s, rho * c * dphi[0], drho[1] * s, rho * c * dphi[1]],
    ])


def _omega_polar(point):
    r1, r2 = point.r1, point.r2
    return np.array([
        [0.0, r1, 0.0, 0.0],
        [-r1, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, r2],
        [0.0, 0.0, -r2, 0.0],
    ])


def _regular_samples(model, chart, count, seed, epsilon):
    """Chart points whose image lies in the punctured disk of radius 1/9."""
    sd = math.sqrt(float(model.delta))
    third = sd / 3
    pts = sampling.halton(4, count, seed)
    out = []
    for x1, s1, x2, s2 in pts:
        t1 = 2 * math.pi * float(s1)
        t2 = 2 * math.pi * float(s2)
        if chart == "Wi":
            # stay in the plateau: mu = r/sd on both factors, image radius
            # r1 r2 / delta < 1/9 automatically
            r1 = third * (0.05 + 0.9 * float(x1))
            r2 = third * (0.05 + 0.9 * float(x2))
            out.append(ChartPoint("Wi", r1, t1, r2, t2))
        else:
            r2 = third * (0.05 + 0.28 * float(x2))  # mu(r2/sd) < 1/9 region
            if chart == "Z1":
                s1max = math.sqrt(model.m * float(model.delta))
                r1 = s1max * (0.1 + 0.85 * float(x1))
                out.append(ChartPoint("Z1", r1, t1, r2, t2))
            else:
                lo = math.sqrt(float(model.a) - model.m * float(model.delta))
                hi = math.sqrt(float(model.a))
                r1 = lo + (hi - lo) * (0.1 + 0.8 * float(x1))
                out.append(ChartPoint("W0", r1, t1, r2, t2))
    return out


def check_fibration(model, samples=400, seed=0, epsilon=Fraction(1, 18),
                    rank_floor=1e-8, positivity_floor=1e-9):
    """Three sampled certificates for the fibration, over all charts.

    * regular rank: the 2x4 Jacobian has two singular values above
      `rank_floor` wherever the image is in the punctured small disk;
    * fiber positivity: omega on an oriented kernel basis is positive;
    * transversality: V differentiates the boundary functions (the
      squared fibration radius on the vertical boundary, r2^2 on the
      horizontal one) to a strictly positive value.

    Residuals are violation magnitudes: how far below its floor the worst
    sample fell (0 when every margin holds).
    """
    if not 0 < epsilon < Fraction(1, 9):
        raise DomainError("epsilon must lie in (0, 1/9)")
    rank_violation = 0.0
    min_sv = math.inf
    fiber_violation = 0.0
    min_fiber = math.inf
    checked = 0
    for chart in CHARTS:
        for p in _regular_samples(model, chart, samples, seed, epsilon):
            if p.chart == "Wi" and p.r1 == 0 and p.r2 == 0:
                continue  # the Lefschetz critical point itself
            jac = _fibration_jacobian(model, p)
            u, sv, vt = np.linalg.svd(jac)
            rank_violation = max(rank_violation, max(0.0, rank_floor - sv[1]))
            min_sv = min(min_sv, sv[1])
            kernel = vt[2:].T  # 4x2 basis of ker(Dpi)
            v, w = kernel[:, 0], kernel[:, 1]
            # orient (v, w) so that (v, w, u1, u2) is positive, u_i mapping
            # to the standard base frame
            pinv = np.linalg.pinv(jac)
            frame = np.column_stack([v, w, pinv[:, 0], pinv[:, 1]])
            if np.linalg.det(frame) < 0:
                v, w = w, v
            value = float(v @ _omega_polar(p) @ w)
            fiber_violation = max(fiber_violation,
                                  max(0.0, positivity_floor - value))
            min_fiber = min(min_fiber, value)
            checked += 1
    regular = NumericReport(
        name="fibration_regular_rank", samples=checked,
        max_residual=rank_violation, tolerance=0.0,
        detail={"min_singular_value": min_sv, "rank_floor": rank_floor})
    positive = NumericReport(
        name="fibration_fiber_positive", samples=checked,
        max_residual=fiber_violation, tolerance=0.0,
        detail={"min_omega_value": min_fiber,
                "positivity_floor": positivity_floor})

    trans_violation = 0.0
    min_trans = math.inf
    count = 0
    sd = math.sqrt(float(model.delta))
    eps = float(epsilon)
    for chart in CHARTS:
        for x1, s1, x2, _ in sampling.halton(4, samples, seed + 1):
            t1 = 2 * math.pi * float(s1)
            if chart == "Wi":
                # vertical stratum mu(r1/sd) mu(r2/sd) = eps inside the plateau
                lo, hi = 3 * eps * sd * 1.02, sd / 3 * 0.98
                if lo >= hi:
                    continue
                r1 = lo + (hi - lo) * float(x1)
                r2 = eps * sd * sd / r1  # r1 r2 = eps * delta
                p = ChartPoint("Wi", r1, t1, r2, 0.0)
                f, g = _radial_components(model, "Wi", p.i)
                drho_dv = (mu_prime(r1 / sd) * mu(r2 / sd) / sd * f(r1)
                           + mu(r1 / sd) * mu_prime(r2 / sd) / sd * g(r2))
                rho = mu(r1 / sd) * mu(r2 / sd)
                value = 2 * rho * drho_dv
            else:
                r2 = eps * sd  # mu(r2/sd) = eps in the linear plateau
                if chart == "Z1":
                    s1max = math.sqrt(model.m * float(model.delta))
                    r1 = s1max * (0.1 + 0.85 * float(x1))
                    p = ChartPoint("Z1", r1, t1, r2, 0.0)
                else:
                    lo = math.sqrt(float(model.a) - model.m * float(model.delta))
                    hi = math.sqrt(float(model.a))
                    r1 = lo + (hi - lo) * (0.1 + 0.8 * float(x1))
                    p = ChartPoint("W0", r1, t1, r2, 0.0)
                _, g = _radial_components(model, chart)
                value = 2 * (r2 / sd) * (g(r2) / sd)
            trans_violation = max(trans_violation,
                                  max(0.0, positivity_floor - value))
            min_trans = min(min_trans, value)
            count += 1
            # horizontal boundary r2^2 = const: d/dV(r2^2) = r2^2 + A/m
            r2h = 0.9 * sd
            _, g = _radial_components(model, chart)
            hval = 2 * r2h * g(r2h)
            trans_violation = max(trans_violation,
                                  max(0.0, positivity_floor - hval))
            min_trans = min(min_trans, hval)
            count += 1
    transversal = NumericReport(
        name="fibration_boundary_transversality", samples=count,
        max_residual=trans_violation, tolerance=0.0,
        detail={"min_derivative": min_trans, "epsilon": float(epsilon),
                "positivity_floor": positivity_floor})
    return [regular, positive, transversal]


def vertical_transversality_exact(model, r2):
    """d/dV (r2^2) on Z1 at an exact rational r2; equals r2^2 + A/m exactly."""
    r2 = Fraction(r2)
    if r2 <= 0:
        raise DomainError("need r2 > 0 off the zero section")
    if not r2 ** 2 < Fraction(model.delta):
        raise DomainError("r2 outside the Z1 chart")
    _, g = _radial_components(model, "Z1")
    derivative = 2 * r2 * g(r2)
    closed_form = r2 ** 2 + Fraction(model.a, model.m)
    return derivative, closed_form


# ---------------------------------------------------------------------------
# the area system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AreaAssignment:
    """Solved bundle constants for prescribed areas B_v = pi * prescribed_v.

    Satisfies -Q (A_j / m_j) = prescribed exactly, and the shared delta
    obeys 2 m_v delta < prescribed_v for every vertex.
    """
    ids: tuple
    prescribed: tuple   # B_v / pi, positive rationals
    coefficients: tuple  # the constants A_v, positive rationals
    delta: Fraction
    delta_bound: Fraction

    def to_dict(self):
        return {
            "ids": list(self.ids),
            "B_over_pi": [str(x) for x in self.prescribed],
            "A": [str(x) for x in self.coefficients],
            "delta": str(self.delta),
            "delta_bound": str(self.delta_bound),
        }


def solve_area_system(graph, b_over_pi):
    """Exact positive constants A_v with -Q (A/m) = B/pi.

    The graph must be accepted; positivity of the solution is then
    guaranteed, and its failure raises ConsistencyError.  Also returns
    the largest admissible shared delta (as `delta_bound`) and a concrete
    choice delta = delta_bound / 2.
    """
    report = validate(graph)
    if not report.accepted:
        raise HypothesisError("area system needs an accepted graph")
    b = [Fraction(x) for x in b_over_pi]
    if len(b) != graph.n:
        raise ValueError("need one area per vertex")
    if any(x <= 0 for x in b):
        raise ValueError("areas must be positive")
    q = build_intersection_matrix(graph)
    neg_q = [[-x for x in row] for row in q.entries]
    ratios = exactla.solve_exact(neg_q, b)  # A_j / m_j
    coefficients = [graph.vertices[j].weight * ratios[j] for j in range(graph.n)]
    if any(x <= 0 for x in coefficients):
        raise ConsistencyError(
            "positive solve failed on an accepted graph: %s" % coefficients)
    residual = [sum(neg_q[i][j] * ratios[j] for j in range(graph.n)) - b[i]
                for i in range(graph.n)]
    if any(x != 0 for x in residual):
        raise ConsistencyError("exact solve left a residual: %s" % residual)
    bound = min(bv / (2 * v.weight) for bv, v in zip(b, graph.vertices))
    return AreaAssignment(
        ids=graph.ids,
        prescribed=tuple(b),
        coefficients=tuple(coefficients),
        delta=bound / 2,
        delta_bound=bound,
    )


def vertex_models(graph, assignment):
    """One DiskBundleModel per vertex, from a solved area assignment.

    Sockets used by edges inherit (A_i, n_i) = (A_w, m_w) from the
    neighbor w; open sockets get A_i = 0.  The model inequalities hold
    automatically: A_v - sum A_w/m_w is the prescribed area over pi, and
    the shared delta obeys 2 m_v delta < B_v/pi.
    """
    amounts = dict(zip(graph.ids, assignment.coefficients))
    models = {}
    for v in graph.vertices:
        neighbors = []
        for a, b in graph.edges:
            if a == v.id:
                neighbors.append(b)
            elif b == v.id:
                neighbors.append(a)
        ai = [amounts[w] for w in neighbors]
        ni = [graph.vertex(w).weight for w in neighbors]
        ai += [Fraction(0)] * (v.weight - len(neighbors))
        ni += [1] * (v.weight - len(neighbors))
        models[v.id] = DiskBundleModel(
            genus=v.genus, m=v.weight, a=amounts[v.id],
            ai=tuple(ai), ni=tuple(ni), delta=assignment.delta)
    return models
