import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from drsphere.certify.bnb import (ETA, BudgetExceeded, FunctionId, IntervalBox, Status,
                                  certify_negative, coefficients, enclose, evaluate_float)
from drsphere.certify.claims import (CLAIMS, QUARTIC, QUINTIC, SEXTIC, eq3_nonpositive,
                                     f_eta_negative, run_claim, run_claims,
                                     verify_factorization)
from drsphere.certify.field import ALPHA_EXACT, ETA as ETA_SYM, QEta, QSqrt2, SQRT2
from drsphere.certify.interval import Interval
from drsphere.certify.poly import Polynomial, ZeroPolynomial
from drsphere.certify.sturm import (NotExactlyOneRoot, count_real_roots, isolate_root,
                                    sturm_count)
from drsphere.regions import GAMMA

small = st.fractions(min_value=-20, max_value=20, max_denominator=50)
qs2 = st.builds(QSqrt2, small, small)
S2 = sp.sqrt(2)


def to_sym(q: QSqrt2):
    return sp.Rational(q.a.numerator, q.a.denominator) + sp.Rational(q.b.numerator, q.b.denominator) * S2


class TestField:
    @given(qs2, qs2)
    def test_ring_ops_match_sympy(self, p, q):
        assert sp.simplify(to_sym(p + q) - (to_sym(p) + to_sym(q))) == 0
        assert sp.simplify(to_sym(p * q) - sp.expand(to_sym(p) * to_sym(q))) == 0
        if q:
            assert p / q * q == p

    @given(qs2)
    def test_sign_is_exact(self, p):
        expect = sp.sign(to_sym(p))
        assert p.sign() == expect

    def test_near_cancellation_sign(self):
        # 99/70 is a convergent of sqrt2; 99 - 70 sqrt2 > 0 by ~0.00714
        assert QSqrt2(99, -70).sign() == 1
        assert QSqrt2(-140, 99).sign() == 1   # 99 sqrt2 > 140
        assert QSqrt2(577, -408).sign() == 1

    def test_alpha_and_sqrt2(self):
        assert ALPHA_EXACT * ALPHA_EXACT * 2 == 1
        assert SQRT2 * SQRT2 == 2

    def test_eta_relation(self):
        # eta^2 = (5 - 2 sqrt2) eta - 1, and the float value matches 1/gamma
        lhs = ETA_SYM * ETA_SYM
        assert lhs == QEta(-1, QSqrt2(5, -2))
        e = 1 / GAMMA
        assert abs(e * e - (5 - 2 * math.sqrt(2)) * e + 1) < 1e-15


def rand_poly(rng, deg, lo=-5, hi=5):
    return Polynomial([F(rng.randint(lo, hi)) for _ in range(deg)] + [F(rng.choice([-3, -1, 1, 2]))])


class TestPolynomial:
    def test_product_evaluates_pointwise(self):
        rng = random.Random(0)
        for _ in range(50):
            p, q = rand_poly(rng, rng.randint(0, 5)), rand_poly(rng, rng.randint(0, 5))
            t = QSqrt2(F(rng.randint(-5, 5), rng.randint(1, 4)), F(rng.randint(-5, 5), rng.randint(1, 4)))
            assert (p * q)(t) == p(t) * q(t)

    def test_divmod_reconstructs(self):
        rng = random.Random(1)
        for _ in range(50):
            p, q = rand_poly(rng, rng.randint(0, 7)), rand_poly(rng, rng.randint(0, 4))
            quo, rem = p.divmod(q)
            assert quo * q + rem == p
            assert not rem or rem.degree < q.degree

    def test_squarefree(self):
        x = Polynomial.from_high([1, 0])
        p = (x - 1) ** 2 * (x + 2)
        assert p.squarefree() == ((x - 1) * (x + 2)).monic()

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomial):
            sturm_count(Polynomial([]), 0, 1)

    def test_verify_factorization_examples(self):
        z = Polynomial.from_high([1, 0])
        assert verify_factorization(SEXTIC, [z - 1, QUINTIC])
        w = z
        r2 = QSqrt2(0, 1)
        assert verify_factorization(QUARTIC, [(w - r2) ** 2, Polynomial.from_high([1, QSqrt2(0, -2), -4])])
        assert not verify_factorization(z * z - 2, [z - 1, z + 2])


class TestSturm:
    def test_examples(self):
        z2 = Polynomial.from_high([1, 0, -2])
        assert sturm_count(z2, 0, 2) == 1
        assert sturm_count(QUINTIC, 0, 1) == 1
        sq = Polynomial.from_high([1, QSqrt2(0, -2), -4]) * Polynomial.from_high([1, QSqrt2(0, -1)]) ** 2
        assert sturm_count(sq, 1, SQRT2) == 0
        assert sturm_count(sq, 1, SQRT2, hi_open=False) == 1

    def test_isolation(self):
        lo, hi = isolate_root(QUINTIC, F(0), F(1))
        assert lo <= F("0.186012649543") + F(1, 10**12) and hi >= F("0.186012649543") - F(1, 10**12)
        assert hi - lo <= F(1, 10**12)
        z2 = Polynomial.from_high([1, 0, -2])
        lo, hi = isolate_root(z2, F(1), F(2))
        assert lo <= F(2) ** 0 * F("1.414213562373095") <= hi + F(1, 10**12)
        with pytest.raises(NotExactlyOneRoot):
            isolate_root(z2, F(-2), F(2))

    def test_agrees_with_sympy_oracle(self):
        rng = random.Random(7)
        z = sp.Symbol("z")
        for _ in range(60):
            deg = rng.randint(1, 6)
            coeffs = [rng.randint(-6, 6) for _ in range(deg)] + [rng.choice([-2, -1, 1, 3])]
            p = Polynomial([F(c) for c in coeffs])
            sp_p = sp.Poly(list(reversed(coeffs)), z)
            lo = F(rng.randint(-8, 0), rng.randint(1, 3))
            hi = lo + F(rng.randint(1, 12), rng.randint(1, 3))
            roots = set(sp.real_roots(sp_p))
            expect = sum(1 for r in roots if sp.Rational(lo.numerator, lo.denominator) < r
                         < sp.Rational(hi.numerator, hi.denominator))
            assert sturm_count(p, lo, hi) == expect, (coeffs, lo, hi)
            assert count_real_roots(p) == len(roots)

    def test_agrees_with_sign_change_grid(self):
        # a polynomial with well separated simple roots: grid sign changes count them
        z = Polynomial.from_high([1, 0])
        p = (z - F(1, 3)) * (z - F(5, 4)) * (z + 2) * (z - 3)
        ts = np.linspace(-1, 2, 3001) + 1.234e-5  # keep grid points off the roots
        vals = np.polyval([float(c) for c in reversed(p.coeffs)], ts)
        changes = int(np.sum(np.sign(vals[1:]) != np.sign(vals[:-1])))
        assert sturm_count(p, F(-1), F(2)) == changes == 2


rats = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


class TestInterval:
    @given(rats, rats, rats, rats)
    def test_arithmetic_encloses_exact_result(self, a, b, c, d):
        x = Interval.hull(min(a, b), max(a, b))
        y = Interval.hull(min(c, d), max(c, d))
        for u in (a, b):
            for v in (c, d):
                assert (x + y).contains(u + v)
                assert (x - y).contains(u - v)
                assert (x * y).contains(u * v)
                if not y.contains_zero():
                    assert (x / y).contains(u / v)

    @given(st.fractions(min_value=0, max_value=100, max_denominator=1000))
    def test_roots_enclose(self, a):
        iv = Interval.exact(a)
        s = iv.sqrt()
        assert s.lower ** 2 <= a <= s.upper ** 2
        r = iv.root(3)
        assert r.lower ** 3 <= a <= r.upper ** 3

    def test_sqrt2_tight(self):
        s = Interval.exact(2).sqrt()
        assert s.width < F(1, 2 ** 150)
        assert s.contains(F(math.sqrt(2))) or abs(float(s.lower) - math.sqrt(2)) < 1e-16

    def test_eta_enclosure(self):
        assert ETA.width < F(1, 10 ** 30)
        assert abs(ETA.mid() - 1 / GAMMA) < 1e-15


class TestBranchAndBound:
    def test_rewrite_matches_printed_form_symbolically(self):
        th, rho, eta = sp.symbols("theta rho eta", real=True)
        w, c, r = sp.sin(th), sp.cos(th), rho - 1
        eq3 = (2 * w**2 - 1) * rho**2 - (4 * w**2 - S2 * (w + c)) * rho - 2 * S2 * c + 2
        v, k = sp.sin(sp.pi / 4 - th), sp.cos(sp.pi / 4 - th)
        assert sp.simplify(sp.expand_trig(sp.expand(eq3 - (-2 * v * k * r**2 - 2 * (1 - k) * r - 2 * (1 - k) * v)))) == 0
        feta = ((eta * w**2 - 1) * rho**2 - (2 * eta * w**2 - S2 * (w + c)) * rho
                - (S2 * c - sp.Rational(3, 2)) * eta - 1)
        v, k = sp.sin(th - sp.pi / 4), sp.cos(th - sp.pi / 4)
        rew = (eta * w**2 - 1) * r**2 - 2 * (1 - k) * r + (1 - k) * (eta * (1 + v) - 2)
        assert sp.simplify(sp.expand_trig(sp.expand(feta - rew))) == 0

    @pytest.mark.parametrize("fid,wr", [(FunctionId.EQ3, (0.0, 0.7)), (FunctionId.F_ETA, (0.71, 0.999))])
    def test_enclosure_contains_float_samples(self, fid, wr):
        rng = np.random.default_rng(0)
        for _ in range(30):
            w0 = rng.uniform(*wr)
            w1 = min(w0 + rng.uniform(0, 0.05), wr[1])
            r0 = rng.uniform(0, 1)
            r1 = rng.uniform(r0, 1)
            box = IntervalBox((F(r0), F(r1)), (F(w0), F(w1)), fid)
            lo, hi = enclose(box)
            rs, ws = rng.uniform(r0, r1, 200), rng.uniform(w0, w1, 200)
            vals = evaluate_float(fid, rs, ws)
            assert np.all(vals <= float(hi) + 1e-12) and np.all(vals >= float(lo) - 1e-12)

    @pytest.mark.parametrize("fid,maker", [(FunctionId.EQ3, eq3_nonpositive), (FunctionId.F_ETA, f_eta_negative)])
    def test_points_in_proved_leaves_are_negative(self, fid, maker):
        cert = maker()
        box = IntervalBox(tuple(F(v) for v in cert.witness["box_rho"]),
                          tuple(F(v) for v in cert.witness["box_w"]), fid)
        sc = certify_negative(box, keep_leaves=True)
        assert sc.status is Status.PROVED_NEGATIVE
        rng = np.random.default_rng(1)
        leaves = sc.leaves
        pick = rng.integers(0, len(leaves), 10_000)
        rho = np.array([rng.uniform(float(leaves[i].rho[0]), float(leaves[i].rho[1])) for i in pick])
        w = np.array([rng.uniform(float(leaves[i].w[0]), float(leaves[i].w[1])) for i in pick])
        assert np.all(evaluate_float(fid, rho, w) < 0)

    @pytest.mark.parametrize("delta", [F(1, 100), F(1, 1000), F(1, 10_000)])
    def test_delta_limit(self, delta):
        assert eq3_nonpositive(delta).status is Status.PROVED_NONPOSITIVE
        assert f_eta_negative(delta).status is Status.PROVED_NEGATIVE

    def test_false_claims_are_not_proved(self):
        box = IntervalBox((F(0), F(1)), (F(9, 10), F(1)), FunctionId.EQ3)
        sc = certify_negative(box)
        assert sc.status is Status.INCONCLUSIVE and sc.offending is not None

    def test_budget(self):
        box = IntervalBox((F(0), F(1)), (F(0), F(7, 10)), FunctionId.EQ3)
        with pytest.raises(BudgetExceeded):
            certify_negative(box, max_boxes=3)

    def test_box_validation(self):
        with pytest.raises(ValueError):
            IntervalBox((F(1), F(0)), (F(0), F(1)), FunctionId.EQ3)
        with pytest.raises(ValueError):
            IntervalBox((F(0), F(2)), (F(0), F(1)), FunctionId.EQ3)

    def test_coefficients_vanish_on_diagonal(self):
        a, b, c = coefficients(FunctionId.EQ3, Interval.exact(2).sqrt() / 2)
        for iv in (a, b, c):
            assert iv.contains_zero() and iv.width < F(1, 10 ** 40)


class TestClaims:
    def test_all_claims_proved(self):
        certs = run_claims()
        assert [c.claim_id for c in certs] == list(CLAIMS)
        bad = [c.claim_id for c in certs if not c.proved]
        assert not bad

    def test_quintic_root_value(self):
        c = run_claim("quintic-root")
        lo, hi = c.witness["root_interval"]
        assert abs((lo + hi) / 2 - 0.186012649543) < 1e-10
        xlo, xhi = c.witness["xhat_interval"]
        assert abs((xlo + xhi) / 2 - 0.131530805878) < 1e-10

    def test_upsilon(self):
        c = run_claim("upsilon-chain")
        lo, hi = c.witness["upsilon_next"]
        assert abs((lo + hi) / 2 - 0.18124764381) < 1e-9

    def test_cor_p2_records_discrepancy(self):
        c = run_claim("cor-p2-geometry")
        assert c.proved and c.notes

    def test_serialization(self):
        d = run_claim("eq3-discriminant").to_dict(timings=False)
        assert "wall_time_s" not in d and d["status"] == "PROVED"
        assert "wall_time_s" in run_claim("eq3-discriminant").to_dict()

    def test_unknown_claim(self):
        with pytest.raises(KeyError):
            run_claim("no-such-claim")
