"""Acceptance gate: one test per release criterion, one PASS/FAIL line each.

Run `pytest tests/test_acceptance.py -v -s` to see the per-criterion lines
with measured residuals and wall-clock times.  Criteria 4 and 6 time their
full pipeline (period computation included) against fresh caches; the later
theta criteria reuse the engine built in criterion 4.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from mpmath import mp

from trigjac import PeriodEngine, RunConfig, TrigonalCurve, roots_of_poly
from trigjac.divisor import (
    canonical_divisor,
    frak_B,
    frak_B1,
    is_linearly_trivial,
    place_P,
    principal_divisor,
    rr_dim,
)
from trigjac.fsdet import mu_divisor_check
from trigjac.rconst import (
    match_published,
    random_effective_points,
    riemann_constant,
    shifted_constant,
)
from trigjac.semigroup import from_generators, family_semigroup
from trigjac.tables_ref import MAX_WEIGHT, PAIRS, R_ROWS, RB_ROWS
from trigjac.theta import classify_vanishing, theta_value

_STATE: dict = {}


def _line(num: int, name: str, ok: bool, detail: str, elapsed: float, budget: float | None):
    clock = f"{elapsed:.3f}s" + (f" < {budget:g}s" if budget is not None else "")
    text = f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail}; {clock})"
    print(text)
    assert ok, text
    if budget is not None:
        assert elapsed < budget, text


def _engine12(tmp_path_factory) -> PeriodEngine:
    if "e12" not in _STATE:
        cfg = RunConfig(precision=40, cache_dir=str(tmp_path_factory.mktemp("acc12")))
        with mp.workdps(cfg.working_dps):
            curve = TrigonalCurve(1, 2, [Fraction(0), Fraction(1), Fraction(-1)])
        engine = PeriodEngine(curve, cfg)
        engine.compute()
        _STATE["e12"] = engine
    return _STATE["e12"]


def _char12(engine: PeriodEngine):
    if "char12" not in _STATE:
        _STATE["char12"] = shifted_constant(engine).char
    return _STATE["char12"]


def test_criterion_1_semigroup_exactness():
    from_generators([3, 5, 7]).gaps  # warm the import and sieve path
    t0 = time.perf_counter()
    g1 = from_generators([3, 4, 5]).gaps
    g2 = from_generators([3, 7, 8]).gaps
    elapsed = time.perf_counter() - t0
    ok = g1 == (1, 2) and g2 == (1, 2, 4, 5)
    _line(1, "semigroup gap sets exact", ok,
          f"gaps(3,4,5)={list(g1)}, gaps(3,7,8)={list(g2)}", elapsed, 0.001)


def test_criterion_2_monomial_tables_match_reference():
    c = TrigonalCurve(1, 3, [Fraction(k) for k in range(1, 5)])
    c.basis_R(MAX_WEIGHT)  # warm
    t0 = time.perf_counter()
    bad = []
    for r, s in PAIRS:
        cur = TrigonalCurve(r, s, [Fraction(k + 1) for k in range(r + s)])
        got_r = cur.basis_R(MAX_WEIGHT).occupied_weights
        got_rb = cur.basis_RB(MAX_WEIGHT).occupied_weights
        if got_r != R_ROWS[(r, s)] or got_rb != RB_ROWS[(r, s)]:
            bad.append((r, s))
    elapsed = time.perf_counter() - t0
    _line(2, "graded tables equal embedded rows", not bad,
          f"pairs {sorted(PAIRS)}, weights 0..{MAX_WEIGHT}, mismatches {bad}",
          elapsed, 0.010)


def _random_distinct_fractions(rng: random.Random, count: int) -> list[Fraction]:
    out: list[Fraction] = []
    while len(out) < count:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if q not in out:
            out.append(q)
    return out


def test_criterion_3_exact_divisor_identities():
    rng = random.Random(20260814)
    t0 = time.perf_counter()
    checked = []
    for r, s in [(1, 2), (2, 3), (1, 3)]:
        c = TrigonalCurve(r, s, _random_distinct_fractions(rng, r + s))
        g = c.genus
        assert g == r + s - 1
        H = family_semigroup(r, s)
        assert (2 * g - 1) not in H.gaps and not H.is_symmetric()
        # div(dx/w) from first principles: dx has double zeros at every branch
        # place (total ramification) and a 4th-order pole at P, while div(w)
        # comes out of the valuation bookkeeping of principal_divisor
        w = c.monomial(0, 1, 0)
        k_indep = 2 * frak_B1(c) - place_P(c, 4) - principal_divisor(w)
        assert k_indep.exact_eq(canonical_divisor(c))
        assert k_indep.degree == 2 * g - 2
        # degree-0 combination of all branch places against (s+2r)P
        assert is_linearly_trivial(frak_B1(c) + frak_B(c) - place_P(c, s + 2 * r))
        obst = place_P(c, r) - frak_B(c)
        assert rr_dim(obst) == 0 and not is_linearly_trivial(obst)
        assert is_linearly_trivial(3 * (frak_B(c) - place_P(c, r)))
        checked.append((r, s))
    elapsed = time.perf_counter() - t0
    _line(3, "exact-layer divisor identities", checked == [(1, 2), (2, 3), (1, 3)],
          f"pairs {checked}, random rational branch points", elapsed, 1.0)


def test_criterion_4_shifted_constant_half_period(tmp_path_factory):
    t0 = time.perf_counter()
    engine = _engine12(tmp_path_factory)
    riemann_constant(engine)
    sc = shifted_constant(engine)
    elapsed = time.perf_counter() - t0
    _STATE["char12"] = sc.char
    tol = mp.mpf("1e-20")
    halves = set(sc.char.top) | set(sc.char.bottom)
    ok = (sc.lattice_dist_2delta_s < tol and sc.char_residual < tol
          and halves <= {Fraction(0), Fraction(1, 2)})
    _line(4, "2*Delta_s in the period lattice", ok,
          f"lattice dist {mp.nstr(sc.lattice_dist_2delta_s, 3)} < 1e-20, "
          f"char residual {mp.nstr(sc.char_residual, 3)} < 1e-20", elapsed, 300)


def test_criterion_5_theta_vanishes_on_shifted_images(tmp_path_factory):
    engine = _engine12(tmp_path_factory)
    curve, cfg = engine.curve, engine.config
    char = _char12(engine)
    t0 = time.perf_counter()
    with mp.workdps(cfg.working_dps):
        tau = engine.compute().tau
        g = curve.genus
        aB = engine.abel_divisor(frak_B(curve))
        pts = random_effective_points(curve, 20, random.Random(cfg.seed + 5))
        worst = mp.mpf(0)
        zs = []
        for pt in pts:
            ap = engine.abel_point(pt)
            z = [aB[l] + ap[l] for l in range(g)]
            zs.append(z)
            val, scale = theta_value(z, tau, char)
            worst = max(worst, abs(val) / scale)
        # control: push the last image off the divisor and demand non-vanishing
        off = [zs[-1][l] + mp.mpc("0.31", "0.17") * (l + 1) for l in range(g)]
        vo, so = theta_value(off, tau, char)
        off_rel = abs(vo) / so
    elapsed = time.perf_counter() - t0
    ok = worst < mp.mpf("1e-18") and off_rel > mp.mpf("1e-10")
    _STATE["zs12"] = zs
    _line(5, "theta[delta] vanishes on shifted Abel images", ok,
          f"20 tuples, worst |theta|/scale {mp.nstr(worst, 3)} < 1e-18, "
          f"control {mp.nstr(off_rel, 3)} > 1e-10", elapsed, 600)


def test_criterion_6_published_characteristic_row(tmp_path_factory):
    t0 = time.perf_counter()
    cfg = RunConfig(precision=40, cache_dir=str(tmp_path_factory.mktemp("accp")))
    with mp.workdps(cfg.working_dps):
        curve = TrigonalCurve(0, 4, roots_of_poly([1, 0, 0, 0, 1]))
    engine = PeriodEngine(curve, cfg)
    engine.compute()
    pub = match_published(engine)
    elapsed = time.perf_counter() - t0
    ok = (pub["applicable"] and pub["ok"]
          and pub["char_residual"] < mp.mpf("1e-18")
          and sorted(pub["expected"]["top"]) == ["0", "0", "1/2"]
          and sorted(pub["expected"]["bottom"]) == ["0", "0", "1/2"])
    _line(6, "quartic curve matches published characteristic", ok,
          f"expected {pub.get('expected')}, relabeling {pub.get('relabeling')}, "
          f"residual {mp.nstr(pub.get('char_residual', mp.mpf(1)), 3)} < 1e-18",
          elapsed, 900)


def test_criterion_7_parity_and_central_symmetry(tmp_path_factory):
    engine = _engine12(tmp_path_factory)
    curve, cfg = engine.curve, engine.config
    char = _char12(engine)
    t0 = time.perf_counter()
    with mp.workdps(cfg.working_dps):
        tau = engine.compute().tau
        g = curve.genus
        par = char.parity()
        on_div = _STATE.get("zs12")
        if on_div is None:
            aB = engine.abel_divisor(frak_B(curve))
            on_div = []
            for pt in random_effective_points(curve, 10, random.Random(cfg.seed + 5)):
                ap = engine.abel_point(pt)
                on_div.append([aB[l] + ap[l] for l in range(g)])
        samples = list(on_div[:10])
        rng = random.Random(cfg.seed + 7)
        while len(samples) < 20:
            base = samples[len(samples) % 10]
            samples.append([base[l] + mp.mpc(rng.uniform(0.1, 0.6), rng.uniform(0.1, 0.6))
                            for l in range(g)])
        par_worst = mp.mpf(0)
        bands_ok = True
        for z in samples:
            vp, sp = theta_value(z, tau, char)
            vn, sn = theta_value([-z[l] for l in range(g)], tau, char)
            par_worst = max(par_worst, abs(vn - par * vp) / max(sp, sn))
            bp = classify_vanishing(abs(vp), sp, cfg)
            bn = classify_vanishing(abs(vn), sn, cfg)
            if bp is None or bp != bn:
                bands_ok = False
    elapsed = time.perf_counter() - t0
    ok = bool(par in (-1, 1) and par_worst < mp.mpf("1e-20") and bands_ok)
    _line(7, "parity and theta(-z) = parity * theta(z)", ok,
          f"parity {par}, worst identity residual {mp.nstr(par_worst, 3)}, "
          f"20-point vanishing symmetry {bands_ok}", elapsed, 300)


def test_criterion_8_jacobi_inversion_count(tmp_path_factory):
    engine = _engine12(tmp_path_factory)
    curve, cfg = engine.curve, engine.config
    t0 = time.perf_counter()
    with mp.workdps(cfg.working_dps):
        pts = random_effective_points(curve, 1, random.Random(cfg.seed + 11))
    report = mu_divisor_check(engine, pts)
    elapsed = time.perf_counter() - t0
    tol = mp.mpf("1e-18")
    ok = (report["order"] == 5 and report["complementary_count"] == 1
          and report["abel_residual"] < tol and report["class_residual"] < tol
          and report["ok"])
    _line(8, "interpolation zero count N(g-1) = 2g-2+d1", ok,
          f"N(1)={report['order']}, complementary={report['complementary_count']}, "
          f"abel residual {mp.nstr(report['abel_residual'], 3)} < 1e-18",
          elapsed, 300)


def test_criterion_9_property_suite(tmp_path_factory):
    engine = _engine12(tmp_path_factory)
    curve, cfg = engine.curve, engine.config
    t0 = time.perf_counter()
    p = cfg.precision
    with mp.workdps(cfg.working_dps):
        data = engine.compute()
        g = curve.genus
        # Abel's theorem on principal divisors, one branch-supported and one
        # with generic support
        worst_abel = mp.mpf(0)
        for e in (curve.monomial(0, 1, 0),
                  curve.monomial(0, 1, 0) + curve.monomial(0, 0, 1),
                  curve.monomial(1, 0, 0) - 2 * curve.monomial(0, 0, 0)):
            red = engine.lattice_reduce(engine.abel_divisor(principal_divisor(e)))
            worst_abel = max(worst_abel, red.dist)
        abel_ok = worst_abel < mp.mpf(10) ** (-(p - 8))
        # Riemann-matrix axioms
        asym = max(abs(data.tau[i, j] - data.tau[j, i])
                   for i in range(g) for j in range(g))
        im_eig = mp.eigsy(mp.matrix([[mp.im(data.tau[i, j]) for j in range(g)]
                                     for i in range(g)]), eigvals_only=True)
        riemann_ok = asym < mp.mpf(10) ** (-(p - 8)) and min(im_eig) > 0
        # quadrature doubling stability straight from the diagnostics
        quad = data.diagnostics["quad_delta_max"]
        quad_ok = quad < mp.mpf(10) ** (-(p - 5))
    # precision escalation 30 -> 50 must shrink every residual by >= 10 orders
    resid = {}
    for prec in (30, 50):
        c2 = RunConfig(precision=prec,
                       cache_dir=str(tmp_path_factory.mktemp(f"acc{prec}")))
        eng = PeriodEngine(curve, c2)
        with mp.workdps(c2.working_dps):
            d2 = eng.compute()
            red = eng.lattice_reduce(
                eng.abel_divisor(principal_divisor(curve.monomial(0, 1, 0))))
            resid[prec] = {
                "abel": red.dist,
                "quad": d2.diagnostics["quad_delta_max"],
                "asym": d2.diagnostics["tau_asym"],
            }
    gains = {k: resid[30][k] / resid[50][k] for k in resid[30]}
    esc_ok = all(v >= mp.mpf(10) ** 10 for v in gains.values())
    elapsed = time.perf_counter() - t0
    ok = bool(abel_ok and riemann_ok and quad_ok and esc_ok)
    _line(9, "property suite", ok,
          f"abel residual {mp.nstr(worst_abel, 3)} < 1e-{p - 8}, tau asym "
          f"{mp.nstr(asym, 3)}, min Im eig {mp.nstr(min(im_eig), 3)}, quad delta "
          f"{mp.nstr(quad, 3)} < 1e-{p - 5}, escalation gains "
          + ", ".join(f"{k} 10^{mp.nstr(mp.log10(v), 3)}" for k, v in gains.items()),
          elapsed, None)
