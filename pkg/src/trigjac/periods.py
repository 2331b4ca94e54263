"""Period matrices and Abel maps for the trigonal family.

All integration happens in the x-plane.  The cover is restored analytically:
w is continued along each path as the cube root of A*B^2, with continuation
steps subdivided until the total argument swept around the branch roots stays
below pi/2, which pins the principal cube root of the step ratio.  On a chord
ending at a branch point b the vanishing factor (x-b)^m is split off and
handled in closed form, so evaluation keeps full precision arbitrarily close
to b and the integrand exposes only the integrable power (1-u)^(m/3 - 1) that
tanh-sinh quadrature absorbs.

A cycle is a lifted loop word; winding around a branch point only multiplies
1/y and 1/w by a cube root of unity, so every cycle period is a small integer
linear combination of the g*(number of rays) chord integrals I[form][ray].
Abel maps from the totally ramified point over infinity reuse one tail
integral for the same reason: the lift of the planar path through sheet j
multiplies the whole reference integral by the character of j.
"""

from __future__ import annotations

import hashlib
import json
import os
from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp

from .config import DEFAULT_CONFIG, RunConfig
from .curve import PointOnCurve, TrigonalCurve
from .divisor import Divisor
from .errors import PathCrossesBranchPoint, PrecisionLoss, VerificationError
from .homology import (
    BaseGeometry,
    LoopWord,
    candidate_words,
    choose_base_geometry,
    intersection_matrix,
    symplectic_basis,
)
from .quadrature import tanh_sinh_batch

CACHE_FORMAT = "periods-v1"


def _mpf_to_json(x) -> list:
    # read the raw mantissa; mp.mpf(x) would re-round to the ambient precision
    sign, man, exp, bc = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(x)._mpf_
    return [int(sign), str(man), int(exp), int(bc)]


def _mpf_from_json(t) -> mp.mpf:
    return mp.mpf((int(t[0]), int(t[1]), int(t[2]), int(t[3])))


def _mpc_to_json(z) -> list:
    if not hasattr(z, "real"):
        z = mp.mpc(z)
    return [_mpf_to_json(z.real), _mpf_to_json(z.imag)]


def _mpc_from_json(t) -> mp.mpc:
    return mp.mpc(_mpf_from_json(t[0]), _mpf_from_json(t[1]))


def _diag_from_json(v):
    # scalar diagnostics are raw-mantissa 4-lists; quadrature level lists are ints
    if isinstance(v, list) and len(v) == 4 and isinstance(v[1], str):
        return _mpf_from_json(v)
    return v


def _matrix_to_json(M) -> list:
    return [[_mpc_to_json(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def _matrix_from_json(rows) -> mp.matrix:
    M = mp.matrix(len(rows), len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            M[i, j] = _mpc_from_json(v)
    return M


def _poly_eval_roots(roots: Sequence, mults: Sequence[int], x):
    """Monic product prod (x - root)^mult; stable arbitrarily far from roots."""
    v = mp.mpc(1)
    for b, m in zip(roots, mults):
        v *= (x - b) ** m
    return v


def _arg_sum(roots, mults, x1, x2):
    total = mp.mpf(0)
    for b, m in zip(roots, mults):
        d1 = x1 - b
        d2 = x2 - b
        if d1 == 0 or d2 == 0:
            raise PathCrossesBranchPoint(f"path touches branch root {b}")
        total += m * abs(mp.arg(d2 / d1))
    return total


def _continue_cuberoot(roots, mults, x1, v1, x2, depth=0):
    """Analytic continuation of a cube root of the monic product along [x1, x2].

    Safe whenever the segment avoids the roots: subdivision bounds the swept
    argument of the product by pi/2, so the principal cube root of the value
    ratio is the correct branch.
    """
    if x1 == x2:
        return v1
    if depth > 60:
        raise PathCrossesBranchPoint("continuation subdivision did not terminate")
    if _arg_sum(roots, mults, x1, x2) <= mp.pi / 2:
        ratio = _poly_eval_roots(roots, mults, x2) / _poly_eval_roots(roots, mults, x1)
        return v1 * mp.exp(mp.log(ratio) / 3)
    xm = (x1 + x2) / 2
    vm = _continue_cuberoot(roots, mults, x1, v1, xm, depth + 1)
    return _continue_cuberoot(roots, mults, xm, vm, x2, depth + 1)


class _Walker:
    """Continuation anchors along one parametrized path, keyed by parameter."""

    def __init__(self, roots, mults, u0, x0, v0):
        self.roots = list(roots)
        self.mults = list(mults)
        self.items: list[tuple] = [(mp.mpf(u0), x0, v0)]
        self.us: list = [mp.mpf(u0)]

    def value_at(self, u, x):
        i = bisect_left(self.us, u)
        cands = [k for k in (i - 1, i) if 0 <= k < len(self.items)]
        k = min(cands, key=lambda t: abs(self.us[t] - u))
        _, xa, va = self.items[k]
        v = _continue_cuberoot(self.roots, self.mults, xa, va, x, 0)
        insort(self.items, (mp.mpf(u), x, v), key=lambda t: t[0])
        insort(self.us, mp.mpf(u))
        return v


@dataclass
class LatticeReduction:
    m: tuple
    n: tuple
    residual: tuple
    dist: object


@dataclass
class PeriodData:
    """Everything derived from one homology/geometry computation."""

    fingerprint: str
    precision: int
    geo: BaseGeometry
    words: list[LoopWord]
    basis_rows: list[list[int]]
    swapped: bool
    segment_integrals: mp.matrix  # g x n_rays, chord integrals on reference lift
    tail_integrals: list          # g, from x0 out to the point over infinity
    omega_alpha: mp.matrix
    omega_beta: mp.matrix
    tau: mp.matrix
    diagnostics: dict


def _zeta(k: int):
    return mp.exp(2j * mp.pi * (k % 3) / 3)


def _character(kind: str, k: int):
    # sheet shift j multiplies 1/y by zeta^j and 1/w by zeta^(-j)
    return _zeta(k) if kind == "y" else _zeta(-k)


class PeriodEngine:
    """Computes and serves periods, tau, and Abel maps for one curve."""

    def __init__(self, curve: TrigonalCurve, config: RunConfig = DEFAULT_CONFIG):
        self.curve = curve
        self.config = config
        self.forms = curve.holomorphic_form_codes()
        self.data: PeriodData | None = None
        roots = []
        mults = []
        weights = []
        for i, b in enumerate(curve.branch_points_mp()):
            roots.append(mp.mpc(b))
            mults.append(curve.branch_exponent(i))
            weights.append(1)
        self._roots = roots
        self._mults = mults          # orders of A*B^2 at the roots
        self._mults_ab = weights     # orders of A*B at the roots (all 1)

    # -- infrastructure -------------------------------------------------

    def _wdps(self):
        return mp.workdps(self.config.precision + self.config.guard_digits)

    def cache_key(self) -> str:
        ident = f"{CACHE_FORMAT}|{self.curve.fingerprint()}"
        return hashlib.sha256(ident.encode()).hexdigest()[:20]

    def _cache_path(self):
        if self.config.cache_dir is None:
            return None
        return os.path.join(self.config.cache_dir, f"periods_{self.cache_key()}.json")

    # -- integrals ------------------------------------------------------

    def _w0_at(self, x):
        return mp.exp(mp.log(_poly_eval_roots(self._roots, self._mults, x)) / 3)

    def _branch_segment(self, geo: BaseGeometry, pos: int):
        """Chord integrals from x0 to ray pos for all g forms."""
        bidx = geo.order[pos]
        b = self._roots[bidx]
        m = geo.m[pos]
        x0 = mp.mpc(geo.x0)
        d = b - x0
        h_roots = [rt for i, rt in enumerate(self._roots) if i != bidx]
        h_mults = [mu for i, mu in enumerate(self._mults) if i != bidx]
        g_roots = list(h_roots)
        g_mults = [1] * len(g_roots)
        h0 = mp.exp(mp.log(_poly_eval_roots(h_roots, h_mults, x0)) / 3)
        C = self._w0_at(x0) / h0
        walker = _Walker(h_roots, h_mults, 0, x0, h0)
        forms = self.forms
        third = mp.mpf(m) / 3

        def eval_batch(nodes):
            out = []
            for u, comp in nodes:
                x = b - d * comp if comp < mp.mpf("0.5") else x0 + d * u
                h = walker.value_at(u, x)
                ch = C * h
                compm = comp**third
                gval = _poly_eval_roots(g_roots, g_mults, x)
                xpow = {}
                vals = []
                for a, kind in forms:
                    xa = xpow.get(a)
                    if xa is None:
                        xa = x**a
                        xpow[a] = xa
                    if kind == "y":
                        vals.append(-xa * ch * compm / (comp * gval))
                    else:
                        vals.append(xa * d / (ch * compm))
                out.append(vals)
            return out

        res = tanh_sinh_batch(
            eval_batch,
            len(forms),
            self.config.quad_tol,
            self.config.quad_max_level,
            sing_order=mp.mpf(2) / 3,
        )
        return res

    def _tail_segment(self, geo: BaseGeometry):
        """Integrals from x0 out to the point over infinity along the tail ray."""
        x0 = mp.mpc(geo.x0)
        d = mp.mpc(geo.tail_dir) * (2 * geo.scale)
        walker = _Walker(self._roots, self._mults, 0, x0, self._w0_at(x0))
        forms = self.forms
        ab_roots = self._roots
        ab_mults = self._mults_ab

        def eval_batch(nodes):
            out = []
            for u, comp in nodes:
                x = x0 + d * (1 - comp) / comp
                w0 = walker.value_at(u, x)
                dxdu = d / comp**2
                ab = _poly_eval_roots(ab_roots, ab_mults, x)
                xpow = {}
                vals = []
                for a, kind in forms:
                    xa = xpow.get(a)
                    if xa is None:
                        xa = x**a
                        xpow[a] = xa
                    if kind == "y":
                        vals.append(xa * w0 / ab * dxdu)
                    else:
                        vals.append(xa / w0 * dxdu)
                out.append(vals)
            return out

        return tanh_sinh_batch(
            eval_batch,
            len(forms),
            self.config.quad_tol,
            self.config.quad_max_level,
            sing_order=mp.mpf(2) / 3,
        )

    def _plain_segment(self, x1, w1, x2):
        """Integrals along a chord avoiding branch roots; returns (vals, w at x2)."""
        d = x2 - x1
        walker = _Walker(self._roots, self._mults, 0, x1, w1)
        forms = self.forms
        ab_roots = self._roots
        ab_mults = self._mults_ab

        def eval_batch(nodes):
            out = []
            for u, comp in nodes:
                x = x1 + d * u if u <= mp.mpf("0.5") else x2 - d * comp
                w0 = walker.value_at(u, x)
                ab = _poly_eval_roots(ab_roots, ab_mults, x)
                xpow = {}
                vals = []
                for a, kind in forms:
                    xa = xpow.get(a)
                    if xa is None:
                        xa = x**a
                        xpow[a] = xa
                    if kind == "y":
                        vals.append(xa * w0 / ab * d)
                    else:
                        vals.append(xa / w0 * d)
                out.append(vals)
            return out

        res = tanh_sinh_batch(
            eval_batch,
            len(forms),
            self.config.quad_tol,
            self.config.quad_max_level,
            sing_order=0,
        )
        w2 = _continue_cuberoot(
            self._roots, self._mults, walker.items[-1][1], walker.items[-1][2], x2, 0
        )
        return res, w2

    # -- main computation -------------------------------------------------

    def compute(self, force: bool = False) -> PeriodData:
        if self.data is not None and not force:
            return self.data
        path = self._cache_path()
        if path is not None and not force and os.path.exists(path):
            data = self._load(path)
            if data is not None:
                self.data = data
                return data
        try:
            data = self._compute_once(self.config)
        except PrecisionLoss:
            data = self._compute_once(self.config.escalated())
        self.data = data
        if path is not None:
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            with open(path, "w") as fh:
                json.dump(self._dump(data), fh, sort_keys=True)
        return data

    def _compute_once(self, config: RunConfig) -> PeriodData:
        curve = self.curve
        g = curve.genus
        with mp.workdps(config.precision + config.guard_digits):
            geo = choose_base_geometry(
                [complex(b) for b in curve.branch_points_mp()],
                [curve.branch_exponent(i) for i in range(curve.n_branch)],
            )
            words = candidate_words(geo.m)
            K = intersection_matrix(words, geo.m)
            rows, _ = symplectic_basis(K, g)

            diagnostics = {}
            n_rays = len(geo.order)
            I = mp.matrix(g, n_rays)
            max_delta = mp.mpf(0)
            levels = []
            for pos in range(n_rays):
                res = self._branch_segment(geo, pos)
                for l in range(g):
                    I[l, pos] = res.values[l]
                max_delta = max(max_delta, res.last_delta)
                levels.append(res.level)
            tail = self._tail_segment(geo)
            max_delta = max(max_delta, tail.last_delta)
            diagnostics["quad_levels"] = levels + [tail.level]
            diagnostics["quad_delta_max"] = max_delta

            cand = mp.matrix(g, len(words))
            for c, word in enumerate(words):
                ks = word.sheets(geo.m)
                for l in range(g):
                    a, kind = self.forms[l]
                    total = mp.mpc(0)
                    for t, (ray, _e) in enumerate(word.letters):
                        chi = _character(kind, ks[t]) - _character(kind, ks[t + 1])
                        total += chi * I[l, ray]
                    cand[l, c] = total

            def cycle_periods(basis_rows):
                om_a = mp.matrix(g, g)
                om_b = mp.matrix(g, g)
                for jj in range(g):
                    for l in range(g):
                        va = mp.mpc(0)
                        vb = mp.mpc(0)
                        for c in range(len(words)):
                            if basis_rows[2 * jj][c]:
                                va += basis_rows[2 * jj][c] * cand[l, c]
                            if basis_rows[2 * jj + 1][c]:
                                vb += basis_rows[2 * jj + 1][c] * cand[l, c]
                        om_a[l, jj] = va
                        om_b[l, jj] = vb
                return om_a, om_b

            omega_alpha, omega_beta = cycle_periods(rows)
            tau = self._normalize(omega_alpha, omega_beta, config)
            swapped = False
            if tau is None:
                # intersection orientation opposite to the analytic one: swap
                # each (a_i, b_i) pair, a valid symplectic basis again
                rows = [rows[t ^ 1] for t in range(len(rows))]
                omega_alpha, omega_beta = cycle_periods(rows)
                tau = self._normalize(omega_alpha, omega_beta, config)
                swapped = True
                if tau is None:
                    raise PrecisionLoss("Im tau indefinite under both orientations")

            asym = mp.mpf(0)
            for i in range(g):
                for j in range(g):
                    asym = max(asym, abs(tau[i, j] - tau[j, i]))
            scale = max(1, mp.mnorm(tau, "inf"))
            if asym / scale > mp.mpf(10) ** (-(config.precision - 10)):
                raise PrecisionLoss(f"tau asymmetry {mp.nstr(asym, 5)}")
            imt = mp.matrix(g, g)
            for i in range(g):
                for j in range(g):
                    imt[i, j] = (tau[i, j].imag + tau[j, i].imag) / 2
            eigs = mp.eigsy(imt, eigvals_only=True)
            diagnostics["tau_asym"] = asym
            diagnostics["imtau_min_eig"] = min(eigs)
            if min(eigs) <= 0:
                raise PrecisionLoss("Im tau not positive definite")

            return PeriodData(
                fingerprint=curve.fingerprint(),
                precision=config.precision,
                geo=geo,
                words=words,
                basis_rows=rows,
                swapped=swapped,
                segment_integrals=I,
                tail_integrals=tail.values,
                omega_alpha=omega_alpha,
                omega_beta=omega_beta,
                tau=tau,
                diagnostics=diagnostics,
            )

    @staticmethod
    def _normalize(omega_alpha, omega_beta, config):
        """tau = omega_alpha^-1 omega_beta, or None if Im tau negative definite."""
        g = omega_alpha.rows
        try:
            tau = omega_alpha**-1 * omega_beta
        except ZeroDivisionError as exc:
            raise PrecisionLoss("alpha-period matrix is singular") from exc
        imt = mp.matrix(g, g)
        for i in range(g):
            for j in range(g):
                imt[i, j] = (tau[i, j].imag + tau[j, i].imag) / 2
        eigs = mp.eigsy(imt, eigvals_only=True)
        if max(eigs) < 0:
            return None
        return tau

    # -- derived quantities ----------------------------------------------

    def tau(self) -> mp.matrix:
        return self.compute().tau

    def _normalized(self, raw: list) -> list:
        data = self.compute()
        col = mp.matrix(len(raw), 1)
        for i, v in enumerate(raw):
            col[i, 0] = v
        out = mp.lu_solve(data.omega_alpha, col)
        return [out[i, 0] for i in range(len(raw))]

    def abel_branch(self, i: int) -> list:
        """Normalized Abel map of the i-th branch point, based at infinity."""
        data = self.compute()
        with self._wdps():
            pos = data.geo.order.index(i)
            g = self.curve.genus
            raw = [
                -data.tail_integrals[l] + data.segment_integrals[l, pos]
                for l in range(g)
            ]
            return self._normalized(raw)

    def _plan_path(self, x_target):
        """Waypoints from x0 to x_target keeping clear of branch roots."""
        data = self.compute()
        x0 = mp.mpc(data.geo.x0)
        scale = mp.mpf(data.geo.scale)
        clearance = scale / 25

        def ok(a, b):
            for rt in self._roots:
                d = b - a
                L2 = abs(d) ** 2
                if L2 == 0:
                    continue
                t = ((rt - a).conjugate() * d).real / L2
                t = max(0, min(1, t))
                dr = abs(rt - (a + t * d))
                if dr < clearance and dr < 0.9 * min(abs(rt - a), abs(rt - b)):
                    return False
            return True

        def plan(a, b, depth):
            if ok(a, b) or depth >= 8:
                if depth >= 8 and not ok(a, b):
                    raise PathCrossesBranchPoint("cannot route path around branch roots")
                return [b]
            d = b - a
            side = 1j * d / abs(d) * (scale / 2)
            best = None
            for sgn in (1, -1):
                midp = (a + b) / 2 + sgn * side
                clear = min(abs(midp - rt) for rt in self._roots)
                if best is None or clear > best[0]:
                    best = (clear, midp)
            midp = best[1]
            return plan(a, midp, depth + 1) + plan(midp, b, depth + 1)

        return [x0] + plan(x0, mp.mpc(x_target), 0)

    def abel_point(self, pt: PointOnCurve) -> list:
        """Normalized Abel map of a smooth affine point, based at infinity."""
        data = self.compute()
        g = self.curve.genus
        with self._wdps():
            pts = self._plan_path(pt.x)
            totals = [mp.mpc(0)] * g
            w_run = self._w0_at(pts[0])
            for a, b in zip(pts, pts[1:]):
                res, w_run = self._plain_segment(a, w_run, b)
                for l in range(g):
                    totals[l] += res.values[l]
            # identify the sheet shift of the requested lift
            zeta = mp.exp(2j * mp.pi / 3)
            dists = [abs(pt.w - zeta**k * w_run) for k in range(3)]
            order = sorted(range(3), key=lambda k: dists[k])
            # sheets are separated by |w|*sqrt(3); demand a clear winner
            if dists[order[0]] > mp.mpf("1e-6") * dists[order[1]]:
                raise VerificationError(
                    f"ambiguous sheet for point: offsets {[mp.nstr(d, 5) for d in dists]}"
                )
            j = order[0]
            raw = []
            for l in range(g):
                a, kind = self.forms[l]
                raw.append(_character(kind, j) * (-data.tail_integrals[l] + totals[l]))
            return self._normalized(raw)

    def abel_divisor(self, D: Divisor) -> list:
        """Normalized Abel map of a divisor, based at infinity (P maps to 0)."""
        g = self.curve.genus
        with self._wdps():
            total = [mp.mpc(0)] * g
            for i, c in enumerate(D.b):
                if c:
                    v = self.abel_branch(i)
                    for l in range(g):
                        total[l] += c * v[l]
            for pt, mult in D.generic:
                v = self.abel_point(pt)
                for l in range(g):
                    total[l] += mult * v[l]
            return total

    def lattice_reduce(self, v: Sequence) -> LatticeReduction:
        """Reduce a normalized vector modulo Z^g + tau Z^g."""
        data = self.compute()
        g = self.curve.genus
        with self._wdps():
            tau = data.tau
            imt = mp.matrix(g, g)
            col = mp.matrix(g, 1)
            for i in range(g):
                col[i, 0] = mp.mpc(v[i]).imag
                for j in range(g):
                    imt[i, j] = tau[i, j].imag
            try:
                nreal = mp.lu_solve(imt, col)
            except ZeroDivisionError as exc:
                raise PrecisionLoss("Im tau numerically singular") from exc
            n = [int(mp.nint(nreal[i, 0])) for i in range(g)]
            m = []
            for i in range(g):
                re = mp.mpc(v[i]).real - sum(tau[i, j].real * n[j] for j in range(g))
                m.append(int(mp.nint(re)))
            residual = []
            for i in range(g):
                residual.append(
                    mp.mpc(v[i]) - m[i] - sum(tau[i, j] * n[j] for j in range(g))
                )
            dist = max(abs(rv) for rv in residual) if residual else mp.mpf(0)
            return LatticeReduction(m=tuple(m), n=tuple(n), residual=tuple(residual), dist=dist)

    # -- serialization ----------------------------------------------------

    def _dump(self, data: PeriodData) -> dict:
        g = self.curve.genus
        return {
            "format": CACHE_FORMAT,
            "fingerprint": data.fingerprint,
            "precision": data.precision,
            "geo": {
                "x0": [data.geo.x0.real, data.geo.x0.imag],
                "order": list(data.geo.order),
                "angles": list(data.geo.angles),
                "m": list(data.geo.m),
                "tail_dir": [data.geo.tail_dir.real, data.geo.tail_dir.imag],
                "scale": data.geo.scale,
            },
            "words": [
                {"letters": [list(l) for l in w.letters], "start_sheet": w.start_sheet}
                for w in data.words
            ],
            "basis_rows": data.basis_rows,
            "swapped": data.swapped,
            "segment_integrals": _matrix_to_json(data.segment_integrals),
            "tail_integrals": [_mpc_to_json(v) for v in data.tail_integrals],
            "omega_alpha": _matrix_to_json(data.omega_alpha),
            "omega_beta": _matrix_to_json(data.omega_beta),
            "tau": _matrix_to_json(data.tau),
            "diagnostics": {k: v if isinstance(v, list) else _mpf_to_json(v)
                             for k, v in data.diagnostics.items()},
        }

    def _load(self, path) -> PeriodData | None:
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except (OSError, ValueError):
            return None
        if payload.get("format") != CACHE_FORMAT:
            return None
        if payload.get("fingerprint") != self.curve.fingerprint():
            return None
        if payload.get("precision", 0) < self.config.precision:
            return None
        # deserialization rounds to the ambient precision; restore at the
        # precision the data was computed with so the bits survive exactly
        with mp.workdps(int(payload["precision"]) + self.config.guard_digits):
            return self._load_payload(payload)

    def _load_payload(self, payload) -> PeriodData:
        geo = BaseGeometry(
            x0=complex(*payload["geo"]["x0"]),
            order=tuple(payload["geo"]["order"]),
            angles=tuple(payload["geo"]["angles"]),
            m=tuple(payload["geo"]["m"]),
            tail_dir=complex(*payload["geo"]["tail_dir"]),
            scale=payload["geo"]["scale"],
        )
        words = [
            LoopWord(letters=tuple(tuple(l) for l in w["letters"]), start_sheet=w["start_sheet"])
            for w in payload["words"]
        ]
        return PeriodData(
            fingerprint=payload["fingerprint"],
            precision=payload["precision"],
            geo=geo,
            words=words,
            basis_rows=[list(map(int, row)) for row in payload["basis_rows"]],
            swapped=payload["swapped"],
            segment_integrals=_matrix_from_json(payload["segment_integrals"]),
            tail_integrals=[_mpc_from_json(v) for v in payload["tail_integrals"]],
            omega_alpha=_matrix_from_json(payload["omega_alpha"]),
            omega_beta=_matrix_from_json(payload["omega_beta"]),
            tau=_matrix_from_json(payload["tau"]),
            diagnostics={k: _diag_from_json(v)
                         for k, v in payload.get("diagnostics", {}).items()},
        )
