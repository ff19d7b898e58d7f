"""Registry of the algebraic claims behind the convergence argument.

Each claim is a function returning a :class:`Certificate`; ``run_claims``
executes a selection and ``CLAIMS`` maps the public ids to them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .bnb import (ETA, GAMMA, FunctionId, IntervalBox, Status, certify_negative)
from .field import ALPHA_EXACT, SQRT2, QEta, QSqrt2
from .field import ETA as ETA_EXACT
from .interval import SQRT2 as SQRT2_IV
from .interval import Interval
from .poly import Polynomial
from .sturm import isolate_root, sign, sturm_count

DEFAULT_DELTA = Fraction(1, 1000)

QUINTIC = Polynomial.from_high([8, 4, -39, -7, 51, -9])
SEXTIC = Polynomial.from_high([8, -4, -43, 32, 58, -60, 9])
QUARTIC = Polynomial.from_high([1, QSqrt2(0, -4), 6, QSqrt2(0, 4), -8])
EQ4_OCTIC = Polynomial.from_high([64, QSqrt2(0, -64), -64, QSqrt2(0, 80), 52,
                                  QSqrt2(0, -72), 12, QSqrt2(0, 16), -7])

QUINTIC_ROOT = 0.186012649543
XHAT = 0.131530805878
UPSILON_NEXT = 0.18124764381


@dataclass
class Certificate:
    claim_id: str
    status: Status
    statement: str
    witness: dict[str, Any] = field(default_factory=dict)
    boxes: int = 0
    depth: int = 0
    wall_time: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def proved(self) -> bool:
        return self.status.proved

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        d = {
            "claim": self.claim_id,
            "status": self.status.value,
            "statement": self.statement,
            "witness": self.witness,
            "boxes": self.boxes,
            "depth": self.depth,
            "notes": self.notes,
        }
        if timings:
            d["wall_time_s"] = round(self.wall_time, 6)
        return d


def _iv(x: Interval) -> list[float]:
    return list(x.as_pair())


def _frac_pair(lo, hi) -> list[float]:
    return [float(lo), float(hi)]


def _status(ok: bool) -> Status:
    return Status.PROVED if ok else Status.FAILED


def _alpha_bounds() -> tuple[Fraction, Fraction]:
    a = SQRT2_IV / 2
    return a.lower, a.upper


# -- polynomial claims ------------------------------------------------------

def quintic_root() -> Certificate:
    n = sturm_count(QUINTIC, Fraction(0), Fraction(1))
    lo, hi = isolate_root(QUINTIC, Fraction(0), Fraction(1), Fraction(1, 10**12))
    xhat = Interval.hull(lo, hi) * SQRT2_IV / 2
    near = lambda a, b, v: v - 1e-10 <= float(a) and float(b) <= v + 1e-10
    ok = n == 1 and near(lo, hi, QUINTIC_ROOT) and near(xhat.lower, xhat.upper, XHAT)
    return Certificate(
        "quintic-root", _status(ok),
        "8z^5+4z^4-39z^3-7z^2+51z-9 has exactly one root in (0,1), near 0.186012649543; "
        "x = z/sqrt2 is near 0.131530805878",
        witness={"roots_in_0_1": n, "root_interval": _frac_pair(lo, hi),
                 "root_interval_exact": [str(lo), str(hi)], "xhat_interval": _iv(xhat)},
    )


def verify_factorization(lhs: Polynomial, factors: list[Polynomial]) -> bool:
    prod = Polynomial([1])
    for f in factors:
        prod = prod * f
    return prod == lhs


def sextic_factorization() -> Certificate:
    ok = verify_factorization(SEXTIC, [Polynomial([-1, 1]), QUINTIC])
    return Certificate("sextic-factorization", _status(ok),
                       "8z^6-4z^5-43z^4+32z^3+58z^2-60z+9 = (z-1)(quintic)",
                       witness={"identity_exact": ok})


def quartic_factorization() -> Certificate:
    w_minus = Polynomial([-SQRT2, 1])
    other = w_minus ** 2 - 6  # (w - sqrt2 - sqrt6)(w - sqrt2 + sqrt6)
    printed = Polynomial.from_high([1, QSqrt2(0, -2), -4])
    ident = other == printed
    fact = verify_factorization(QUARTIC, [w_minus, w_minus, printed])
    # negative on [1, sqrt2): no root there and negative at w = 1
    roots = sturm_count(QUARTIC, Fraction(1), SQRT2, lo_open=False, hi_open=True)
    neg_at_1 = sign(QUARTIC(Fraction(1))) < 0
    open_count = sturm_count(w_minus ** 2 * printed, Fraction(1), SQRT2)
    ok = ident and fact and roots == 0 and neg_at_1 and open_count == 0
    return Certificate(
        "quartic-factorization", _status(ok),
        "w^4-4sqrt2 w^3+6w^2+4sqrt2 w-8 = (w-sqrt2)^2 (w-sqrt2-sqrt6)(w-sqrt2+sqrt6) over Q(sqrt2), "
        "negative on [1, sqrt2)",
        witness={"product_exact": fact, "sqrt6_pair_expansion": ident,
                 "roots_in_[1,sqrt2)": roots, "value_at_1": str(QUARTIC(Fraction(1))),
                 "distinct_roots_in_(1,sqrt2)": open_count},
    )


def eq4_octic() -> Certificate:
    w = Polynomial.X
    c2 = 1 - w * w
    lhs = Polynomial.from_high([16, QSqrt2(0, -8), -16, 0, 10])
    inner = Polynomial.from_high([QSqrt2(0, 2), 1, QSqrt2(0, -2)])
    # squaring "lhs = -4 sqrt(1-w^2) inner" and dividing by 4
    squared = (lhs * lhs - 16 * c2 * inner * inner)
    derived = squared == EQ4_OCTIC * 4
    root_alpha = EQ4_OCTIC(ALPHA_EXACT) == 0
    n = sturm_count(EQ4_OCTIC, Fraction(0), ALPHA_EXACT, lo_open=False, hi_open=True)
    ok = derived and root_alpha and n == 0
    return Certificate(
        "eq4-octic", _status(ok),
        "the squared discriminant octic vanishes at 1/sqrt2 and has no root in [0, 1/sqrt2)",
        witness={"octic_from_squaring": derived, "root_at_alpha": root_alpha,
                 "roots_in_[0,alpha)": n},
    )


# -- EQ3 / F_ETA ------------------------------------------------------------

def _eq3_coeffs_exact(w: QSqrt2, c: QSqrt2):
    """Printed EQ3 as ``A rho^2 + B rho + C`` at exact (w, cos) values."""
    a = 2 * w * w - 1
    b = -(4 * w * w - (w + c) * SQRT2)
    cc = 2 - 2 * SQRT2 * c
    return a, b, cc


def eq3_discriminant() -> Certificate:
    a, b, c = _eq3_coeffs_exact(QSqrt2(0), QSqrt2(1))
    disc = b * b - 4 * a * c
    w, cw = QSqrt2(0), QSqrt2(1)
    printed = (16 * w ** 4 - 8 * SQRT2 * w ** 3 + 8 * (SQRT2 * cw - 2) * w * w
               + 4 * w * cw - 8 * SQRT2 * cw + 10)
    target = QSqrt2(10, -8)
    ok = disc == target and printed == target and target.sign() < 0 and c.sign() < 0
    return Certificate(
        "eq3-discriminant", _status(ok),
        "at theta=0 the discriminant of EQ3 in rho is 10-8sqrt2 < 0, and EQ3(0,0) = 2-2sqrt2 < 0",
        witness={"discriminant": str(disc), "discriminant_printed_form": str(printed),
                 "eq3_at_origin": str(c)},
    )


def eq3_nonpositive(delta: Fraction = DEFAULT_DELTA) -> Certificate:
    _, a_hi = _alpha_bounds()
    box = IntervalBox((Fraction(0), Fraction(1)), (Fraction(0), a_hi - delta), FunctionId.EQ3)
    sc = certify_negative(box)
    face = _eq3_coeffs_exact(ALPHA_EXACT, ALPHA_EXACT)
    face_zero = all(v == 0 for v in face)
    origin = _eq3_coeffs_exact(QSqrt2(0), QSqrt2(1))[2]
    if sc.status is not Status.PROVED_NEGATIVE:
        status = sc.status
    else:
        status = Status.PROVED_NONPOSITIVE if face_zero and origin.sign() < 0 else Status.FAILED
    wit = {"box_rho": _frac_pair(*box.rho), "box_w": _frac_pair(*box.w),
           "delta": str(delta), "vanishes_on_theta_pi_4": face_zero,
           "eq3_at_origin": str(origin),
           "worst_upper_bound": float(sc.worst_upper) if sc.worst_upper is not None else None}
    if sc.offending is not None:
        wit["offending_box"] = {"rho": _frac_pair(*sc.offending.rho),
                                "w": _frac_pair(*sc.offending.w)}
    return Certificate(
        "eq3-nonpositive", status,
        "EQ3 < 0 on rho in [0,1], w in [0, 1/sqrt2 - delta]; EQ3 = 0 identically at theta = pi/4",
        witness=wit, boxes=sc.boxes, depth=sc.depth,
    )


def f_eta_negative(delta: Fraction = DEFAULT_DELTA) -> Certificate:
    a_lo, _ = _alpha_bounds()
    box = IntervalBox((delta, Fraction(1)), (a_lo + delta, 1 - delta), FunctionId.F_ETA)
    sc = certify_negative(box)
    wit = {"box_rho": _frac_pair(*box.rho), "box_w": _frac_pair(*box.w), "delta": str(delta),
           "eta_enclosure": _iv(ETA), "eta_width": float(ETA.width),
           "worst_upper_bound": float(sc.worst_upper) if sc.worst_upper is not None else None}
    if sc.offending is not None:
        wit["offending_box"] = {"rho": _frac_pair(*sc.offending.rho),
                                "w": _frac_pair(*sc.offending.w)}
    return Certificate(
        "f-eta-negative", sc.status,
        "F_ETA < 0 on rho in [delta,1], w in [1/sqrt2 + delta, 1 - delta]",
        witness=wit, boxes=sc.boxes, depth=sc.depth,
    )


def f_eta_printed(rho: Interval, w: Interval) -> Interval:
    """Interval evaluation of F_ETA in its printed coefficient form."""
    c = (1 - w.sq()).sqrt()
    w2 = w.sq()
    return ((ETA * w2 - 1) * rho.sq() - (2 * ETA * w2 - SQRT2_IV * (w + c)) * rho
            - (SQRT2_IV * c - Fraction(3, 2)) * ETA - 1)


def f_eta_sample() -> Certificate:
    # sin(3 pi / 8) = sqrt(2 + sqrt2) / 2
    w = (2 + SQRT2_IV).sqrt() / 2
    val = f_eta_printed(Interval.exact(1), w)
    return Certificate("f-eta-sample", _status(val.is_negative()),
                       "F_ETA(1, 3pi/8) < 0",
                       witness={"value": _iv(val), "w": _iv(w)})


# -- eta octic --------------------------------------------------------------

def eta_octic() -> Polynomial:
    e = ETA_EXACT
    return Polynomial.from_high([
        e ** 4,
        -4 * e ** 3,
        -2 * (e ** 4 + 2 * e ** 3 - 4 * e ** 2),
        4 * (3 * e ** 3 - 2 * e),
        e ** 4 + 8 * e ** 2 + 4,
        -8 * (5 * e ** 2 - e),
        -4 * (e ** 3 - 5 * e ** 2 + 2 * e + 2),
        32 * e,
        4 * e ** 2 - 24 * e + 4,
    ])


def _to_interval(v) -> Interval:
    if isinstance(v, QEta):
        return Interval.exact(v.p) + Interval.exact(v.q) * ETA
    return Interval.exact(v)


def _horner_iv(coeffs: list[Interval], x: Interval) -> Interval:
    acc = Interval(0, 0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _nonvanishing(coeffs: list[Interval], lo: Fraction, hi: Fraction,
                  min_width: Fraction = Fraction(1, 2**40)) -> tuple[bool, int]:
    """Bisect [lo, hi] until the interval polynomial excludes 0 everywhere."""
    stack = [(lo, hi)]
    n = 0
    while stack:
        a, b = stack.pop()
        n += 1
        if not _horner_iv(coeffs, Interval.hull(a, b)).contains_zero():
            continue
        if b - a < min_width:
            return False, n
        m = (a + b) / 2
        stack.extend([(m, b), (a, m)])
    return True, n


def eta_octic_roots() -> Certificate:
    p = eta_octic()
    one, r2 = QEta(1), QEta(SQRT2)
    at1 = p(one) == 0
    d_at1 = p.deriv()(one) == 0
    at_r2 = p(r2) == 0
    q, rem = p.divmod(Polynomial([-1, 1]) ** 2 * Polynomial([-SQRT2, 1]))
    deflated = not rem
    coeffs = [_to_interval(c) for c in q.coeffs]
    lead = coeffs[-1]
    bound = None
    clear, n = False, 0
    if not lead.contains_zero():
        # Cauchy bound on the root moduli of the deflated quintic
        ratios = [c / lead for c in coeffs[:-1]]
        bound = 1 + max(max(abs(r.lower), abs(r.upper)) for r in ratios)
        clear, n = _nonvanishing(coeffs, Fraction(0), Fraction(-(-bound.numerator // bound.denominator)))
    ok = at1 and d_at1 and at_r2 and deflated and clear
    return Certificate(
        "eta-octic-roots", _status(ok),
        "the eta-octic in u = sqrt2 w has positive real roots exactly 1 (double) and sqrt2",
        witness={"p(1)=0": at1, "p'(1)=0": d_at1, "p(sqrt2)=0": at_r2,
                 "exact_deflation": deflated,
                 "quotient_root_bound": float(bound) if bound is not None else None,
                 "quotient_nonzero_on_[0,bound]": clear, "subintervals": n},
        boxes=n,
        notes=["identities at u = 1, sqrt2 are exact in Q(sqrt2, eta) using "
               "eta^2 = (5 - 2 sqrt2) eta - 1; the root exclusion uses interval "
               "coefficients enclosing eta"],
    )


# -- scalar constants -------------------------------------------------------

def g_minimum() -> Certificate:
    two = Interval.exact(2)
    s = 1 / two.root(6)                     # sin(theta*) = 2^(-1/6)
    t = 1 - 1 / two.root(3)
    eps = t * t.sqrt()                      # (1 - 2^(-1/3))^(3/2)
    cos = (1 - s.sq()).sqrt()
    alpha = SQRT2_IV / 2
    g = alpha + eps * s / cos - s
    dg = eps / cos.sq() - cos
    ok = g.contains_zero() and g.width <= Fraction(1, 10**12) and dg.contains_zero()
    return Certificate(
        "g-minimum", _status(ok),
        "g(theta) = alpha + eps tan(theta) - sin(theta) has g = g' = 0 at theta = arcsin(2^(-1/6))",
        witness={"g": _iv(g), "g_prime": _iv(dg), "epsilon": _iv(eps)},
    )


def gamma_constants() -> Certificate:
    half_trace = QSqrt2(Fraction(5, 2), -1)
    prod = half_trace * half_trace - QSqrt2(29, -20) / 4      # gamma * eta, exactly
    g3 = GAMMA * GAMMA * GAMMA / 4
    two = Interval.exact(2)
    t = 1 - 1 / two.root(3)
    eps = t * t.sqrt()
    # 29 - 20 sqrt2 = (a + b sqrt2)^2 needs a^4 - 29 a^2 + 200 = 0, disc 41
    ok = (prod == 1 and g3.upper <= Fraction(86, 100)
          and abs(eps.mid() - 0.0937) < 5e-5 and (GAMMA * ETA).contains(1))
    return Certificate(
        "gamma-constants", _status(ok),
        "gamma * eta = 1, gamma^3/4 <= 0.86, epsilon = 0.0937 to four places",
        witness={"gamma": _iv(GAMMA), "eta": _iv(ETA), "gamma_eta_exact": str(prod),
                 "gamma_cubed_over_4": _iv(g3), "epsilon": _iv(eps),
                 "sqrt(29-20sqrt2)_in_Q(sqrt2)": False},
    )


def upsilon_chain() -> Certificate:
    alpha = SQRT2_IV / 2
    delta = alpha - GAMMA.sqrt() / 2
    ups = delta / (alpha.sq() + delta.sq()).sqrt()
    nxt = ups / (alpha.sq() + ups.sq()).sqrt()
    ok = (abs(nxt.mid() - UPSILON_NEXT) <= 1e-9 and nxt.lower > Fraction(14, 100)
          and nxt.width < Fraction(1, 10**20))
    return Certificate(
        "upsilon-chain", _status(ok),
        "Delta = alpha - sqrt(gamma)/2, Upsilon = Delta/sqrt(alpha^2+Delta^2), "
        "Upsilon/sqrt(alpha^2+Upsilon^2) = 0.18124764381 > 0.14",
        witness={"delta": _iv(delta), "upsilon": _iv(ups), "upsilon_next": _iv(nxt)},
    )


def cor_p2_geometry() -> Certificate:
    alpha = SQRT2_IV / 2
    xhat = (Interval.exact(Fraction(2, 3))).sqrt()
    root1mx2 = (1 - xhat.sq()).sqrt()
    f = alpha + (1 / xhat - 1) * root1mx2
    g = 2 * alpha - root1mx2
    yhat = SQRT2_IV - 1 / Interval.exact(3).sqrt()
    diff = f - g
    meet_ok = (diff.contains_zero() and diff.width <= Fraction(1, 10**12)
               and not (f - yhat).is_positive() and not (f - yhat).is_negative())
    tangent_ok = (root1mx2 / xhat - alpha).contains_zero()

    x = Polynomial.X
    # f'(x) = (x^3 - 1) / (x^2 sqrt(1-x^2)),  g'(x) = x / sqrt(1-x^2)
    fnum, gnum = x ** 3 - 1, x
    f_dec = sturm_count(fnum, Fraction(0), Fraction(1)) == 0 and fnum(Fraction(1, 2)) < 0
    g_inc = sturm_count(gnum, Fraction(0), Fraction(1)) == 0 and gnum(Fraction(1, 2)) > 0

    dist = 2 * (yhat - alpha).sq()
    expanded = Fraction(5, 3) - 2 * Interval.exact(Fraction(2, 3)).sqrt()
    printed = 1 - Interval.exact(Fraction(2, 3)).sqrt()
    quarter_gamma = GAMMA / 4
    expand_ok = not (dist - expanded).is_positive() and not (dist - expanded).is_negative()
    bound_ok = dist.upper < quarter_gamma.lower and printed.upper < quarter_gamma.lower
    differ = (printed - expanded).is_positive()

    def gfun(v):
        return 2 * alpha - (1 - Interval.exact(v).sq()).sqrt()
    convex_ok = (gfun(Fraction(1, 2)) - (gfun(Fraction(1, 4)) + gfun(Fraction(3, 4))) / 2).is_negative()

    ok = meet_ok and tangent_ok and f_dec and g_inc and expand_ok and bound_ok and convex_ok
    notes = []
    if differ:
        notes.append("printed |(yhat,yhat)-(alpha,alpha)|^2 = 1 - sqrt(2/3) ~ %.5f differs from the "
                     "direct expansion 5/3 - 2 sqrt(2/3) ~ %.5f; both are below gamma/4"
                     % (printed.mid(), expanded.mid()))
    notes.append("g is certified increasing, matching the printed derivative g'(x) = x/sqrt(1-x^2) > 0")
    return Certificate(
        "cor-p2-geometry", _status(ok),
        "f(x)=alpha+(1/x-1)sqrt(1-x^2) and g(x)=2alpha-sqrt(1-x^2) meet at sqrt(2/3) with value "
        "sqrt2-1/sqrt3; f decreasing, g increasing and convex; 2(yhat-alpha)^2 < gamma/4",
        witness={"f_minus_g_at_xhat": _iv(diff), "yhat": _iv(yhat),
                 "f_decreasing": f_dec, "g_increasing": g_inc,
                 "dist_sq_expanded": _iv(expanded), "dist_sq_printed": _iv(printed),
                 "gamma_over_4": _iv(quarter_gamma), "g_midpoint_convex": convex_ok},
        notes=notes,
    )


CLAIMS: dict[str, Callable[[], Certificate]] = {
    "quintic-root": quintic_root,
    "sextic-factorization": sextic_factorization,
    "quartic-factorization": quartic_factorization,
    "eq4-octic": eq4_octic,
    "eq3-discriminant": eq3_discriminant,
    "eq3-nonpositive": eq3_nonpositive,
    "f-eta-negative": f_eta_negative,
    "f-eta-sample": f_eta_sample,
    "eta-octic-roots": eta_octic_roots,
    "g-minimum": g_minimum,
    "gamma-constants": gamma_constants,
    "upsilon-chain": upsilon_chain,
    "cor-p2-geometry": cor_p2_geometry,
}


def run_claim(claim_id: str) -> Certificate:
    if claim_id not in CLAIMS:
        raise KeyError(claim_id)
    t0 = time.perf_counter()
    cert = CLAIMS[claim_id]()
    cert.wall_time = time.perf_counter() - t0
    return cert


def run_claims(ids: list[str] | None = None) -> list[Certificate]:
    return [run_claim(c) for c in (ids or list(CLAIMS))]
