"""Polynomial self-maps of K^d near a fixed point: orbits, remainder
Lipschitz bounds, certified invariant balls, fixed-point classification and
a-stable set membership.

Polynomials are stored as multi-index tables {(m_1,...,m_d): coeff}; all
radii and norms are handled as valuation exponents (r = p^-k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf as INF

from .errors import (
    JacobianSingular,
    NotAFixedPoint,
    PreconditionViolated,
    RadiusNotFound,
)
from .field import DEFAULT_PRECISION, ExtContext, NONZERO, ZERO, compare_threshold
from . import polyalg
from .polyalg import cmat, coerce, cvec, infer_context, mat_inverse, mat_vec
from . import spectral
from .spectral import AdaptedNorm, NormBlock, adapted_norm, operator_norm, splitting_at

# --------------------------------------------------------------------------
# monomial-table polynomials (generic coefficients)
# --------------------------------------------------------------------------


def _mzero(nvars):
    return {}


def _madd(a, b, ctx):
    out = dict(a)
    for m, c in b.items():
        out[m] = out[m] + c if m in out else c
    return {m: c for m, c in out.items() if ctx.zeroness(c) != ZERO}


def _mscale(a, s, ctx):
    return {m: s * c for m, c in a.items()}


def _mneg(a):
    return {m: -c for m, c in a.items()}


def _mmul(a, b, ctx):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            t = c1 * c2
            out[m] = out[m] + t if m in out else t
    return {m: c for m, c in out.items() if ctx.zeroness(c) != ZERO}


def _mpow(a, k, nvars, ctx):
    out = {tuple([0] * nvars): ctx.one}
    for _ in range(k):
        out = _mmul(out, a, ctx)
    return out


def _meval(a, x, ctx):
    acc = ctx.zero
    for m, c in a.items():
        t = c
        for i, e in enumerate(m):
            for _ in range(e):
                t = t * x[i]
        acc = acc + t
    return acc


def _msubst(a, polys, nvars_out, ctx):
    """Substitute variable i -> polys[i] (a table over nvars_out vars)."""
    out = {}
    for m, c in a.items():
        term = {tuple([0] * nvars_out): c}
        for i, e in enumerate(m):
            if e:
                term = _mmul(term, _mpow(polys[i], e, nvars_out, ctx), ctx)
        out = _madd(out, term, ctx)
    return out


def _mtrunc(a, max_deg):
    return {m: c for m, c in a.items() if sum(m) <= max_deg}


@dataclass(frozen=True)
class PolyMap:
    """nvars -> len(components) polynomial map.

    Each component is a tuple of (multi_index, coefficient) pairs in a
    deterministic order; coefficients are Fractions (or p-adics)."""

    prime: int
    nvars: int
    components: tuple

    @classmethod
    def from_tables(cls, tables, p: int, nvars: int = None) -> "PolyMap":
        nvars = nvars if nvars is not None else len(tables)
        comps = []
        for t in tables:
            items = []
            for m, c in sorted(t.items()):
                if isinstance(c, int):
                    c = Fraction(c)
                if isinstance(c, Fraction) and c == 0:
                    continue
                items.append((tuple(m), c))
            comps.append(tuple(items))
        return cls(p, nvars, tuple(comps))

    @property
    def dim(self) -> int:
        return len(self.components)

    def tables(self):
        return [dict(comp) for comp in self.components]

    def degree(self) -> int:
        return max((sum(m) for comp in self.components for m, _ in comp), default=0)

    def is_linear(self) -> bool:
        return all(sum(m) <= 1 for comp in self.components for m, _ in comp)

    def coeff_context(self, precision: int = DEFAULT_PRECISION):
        return infer_context([[c for _, c in comp] for comp in self.components],
                             self.prime, precision)

    def __call__(self, x):
        ctx = infer_context(
            [[c for _, c in comp] for comp in self.components] + [list(x)],
            self.prime)
        xx = cvec(x, ctx)
        return [_meval({m: coerce(c, ctx) for m, c in comp}, xx, ctx)
                for comp in self.components]


def linear_part(f: PolyMap):
    """Matrix of the degree-1 terms (the derivative at 0)."""
    d, n = f.dim, f.nvars
    a = [[Fraction(0)] * n for _ in range(d)]
    for i, comp in enumerate(f.components):
        for m, c in comp:
            if sum(m) == 1:
                a[i][m.index(1)] = c
    return a


def remainder(f: PolyMap) -> PolyMap:
    """F minus its affine-linear part: the terms of total degree >= 2."""
    tables = []
    for comp in f.components:
        tables.append({m: c for m, c in comp if sum(m) >= 2})
    return PolyMap.from_tables(tables, f.prime, f.nvars)


def shift_to_fixed_point(f: PolyMap, pt) -> PolyMap:
    """G = kappa o F o kappa^-1 for kappa(x) = x - pt; requires F(pt) = pt."""
    pt = [Fraction(x) for x in pt]
    ctx = f.coeff_context()
    val = f(pt)
    for a, b in zip(val, pt):
        if ctx.zeroness(coerce(a, ctx) - coerce(b, ctx)) == NONZERO:
            raise NotAFixedPoint(f"F({pt}) = {val} != {pt}")
    n = f.nvars
    shift_polys = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        shift_polys.append({e: ctx.one, tuple([0] * n): coerce(pt[i], ctx)})
    tables = []
    for i, comp in enumerate(f.components):
        t = _msubst({m: coerce(c, ctx) for m, c in comp}, shift_polys, n, ctx)
        zero_m = tuple([0] * n)
        t = _madd(t, {zero_m: -coerce(pt[i], ctx)}, ctx)
        tables.append(t)
    return PolyMap.from_tables(tables, f.prime, n)


def jacobian(f: PolyMap, pt=None):
    """Exact matrix of partial derivatives at pt (default 0)."""
    n = f.nvars
    ctx = f.coeff_context()
    if pt is None:
        pt = [Fraction(0)] * n
    pt = cvec(pt, ctx)
    rows = []
    for comp in f.components:
        row = []
        for j in range(n):
            dj = {}
            for m, c in comp:
                if m[j]:
                    dm = tuple(e - (1 if l == j else 0) for l, e in enumerate(m))
                    t = coerce(c, ctx) * ctx.from_rational(m[j])
                    dj[dm] = dj[dm] + t if dm in dj else t
            row.append(_meval(dj, pt, ctx))
        rows.append(row)
    return rows


def conjugate(f: PolyMap, t, tinv, ctx) -> list:
    """Tables of T o F o T^-1 over ctx (T given as matrix rows)."""
    n = f.nvars
    tinv_polys = []
    for i in range(n):
        poly = {}
        for j in range(n):
            c = tinv[i][j]
            if ctx.zeroness(c) != ZERO:
                e = tuple(1 if l == j else 0 for l in range(n))
                poly[e] = c
        tinv_polys.append(poly)
    inner = [
        _msubst({m: coerce(c, ctx) for m, c in comp}, tinv_polys, n, ctx)
        for comp in f.components
    ]
    out = []
    for i in range(len(t)):
        acc = {}
        for j in range(len(inner)):
            c = t[i][j]
            if ctx.zeroness(c) != ZERO:
                acc = _madd(acc, _mscale(inner[j], c, ctx), ctx)
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# remainder Lipschitz bounds and radii
# --------------------------------------------------------------------------


def _adapted_tables(f: PolyMap, norm: AdaptedNorm):
    """F conjugated into the norm's coordinates, with the norm's context."""
    ctx = norm._ctx()
    t = norm.transform(ctx)
    tinv = mat_inverse(t, ctx)
    return conjugate(f, t, tinv, ctx), ctx


def remainder_lipschitz(f: PolyMap, radius_exp, norm: AdaptedNorm):
    """Exponent L with Lip(R | B_r(0)) <= p^-L for r = p^-radius_exp, where
    R = F - F'(0).

    Per monomial c x^m (|m| >= 2) of component i in norm coordinates the
    contribution is v(c) + q_i + sum_l m_l (k - q_l) - k; the bound is the
    min over monomials and grows without bound as k -> infinity.  INF means
    R = 0 (Lipschitz constant 0).
    """
    k = Fraction(radius_exp)
    tables, ctx = _adapted_tables(f, norm)
    q = norm.weights
    best = INF
    for i, table in enumerate(tables):
        for m, c in table.items():
            if sum(m) < 2:
                continue
            v = ctx.val(c)
            if v == INF:
                continue
            e = v + q[i] + sum(ml * (k - q[l]) for l, ml in enumerate(m)) - k
            best = min(best, e)
    return best


def linearization_radius(f: PolyMap, norm: AdaptedNorm,
                         max_exp: int = 64, min_exp: int = 0):
    """Smallest k (largest ball p^-k) with Lip(R|B) < 1 / ||A^-1||; on that
    ball ||F(z) - F(y)|| = ||A (z - y)|| exactly."""
    a = linear_part(f)
    ctx = infer_context(a, f.prime)
    try:
        ainv = mat_inverse(cmat(a, ctx), ctx)
    except PreconditionViolated as exc:
        raise JacobianSingular("derivative at 0 is singular") from exc
    einv = operator_norm(ainv, f.prime, norm)  # ||A^-1|| = p^-einv
    for k in range(min_exp, max_exp + 1):
        lip = remainder_lipschitz(f, k, norm)
        if lip == INF or lip + einv > 0:
            return k
    raise RadiusNotFound(f"no radius exponent in [{min_exp}, {max_exp}] works")


# --------------------------------------------------------------------------
# ball certificates
# --------------------------------------------------------------------------

INVARIANT, ISOMETRIC, CONTRACTING = "Invariant", "Isometric", "Contracting"


@dataclass(frozen=True)
class BallCertificate:
    """On B_r, r = p^-radius_exp (in the attached norm):
    Invariant: ||F(x)|| <= ||x||; Isometric: ||F(x)|| = ||x|| exactly;
    Contracting: ||F(x)|| <= c ||x|| with c = p^-contraction_exp < 1."""

    mode: str
    radius_exp: int
    contraction_exp: object  # Fraction; >= 0 / == 0 / > 0 by mode
    norm: AdaptedNorm


def invariant_ball(f: PolyMap, mode: str, norm: AdaptedNorm,
                   max_exp: int = 64, min_exp: int = 0,
                   rate_below=None) -> BallCertificate:
    """Certified ball for the given mode; rate_below (a rational) optionally
    strengthens Contracting to demand c < rate_below."""
    p = f.prime
    a = linear_part(f)
    op_a = operator_norm(a, p, norm)
    if mode == INVARIANT:
        if op_a < 0:
            raise PreconditionViolated(f"||A|| = p^{-op_a} > 1")
    elif mode == ISOMETRIC:
        ctx = infer_context(a, p)
        ainv = mat_inverse(cmat(a, ctx), ctx)
        if op_a != 0 or operator_norm(ainv, p, norm) != 0:
            raise PreconditionViolated("A is not an isometry in this norm")
    elif mode == CONTRACTING:
        if op_a <= 0:
            raise PreconditionViolated(f"||A|| = p^{-op_a} not < 1")
        if rate_below is not None and compare_threshold(rate_below, op_a, p) <= 0:
            raise PreconditionViolated(f"||A|| not below rate {rate_below}")
    else:
        raise PreconditionViolated(f"unknown mode {mode!r}")
    for k in range(min_exp, max_exp + 1):
        lip = remainder_lipschitz(f, k, norm)
        if mode == INVARIANT:
            ok = lip >= 0
            c = min(op_a, lip)
        elif mode == ISOMETRIC:
            ok = lip > 0
            c = Fraction(0)
        else:
            c = min(op_a, lip)
            ok = lip > 0 and (
                rate_below is None or compare_threshold(rate_below, c, p) > 0
            )
        if ok:
            return BallCertificate(mode, k, c, norm)
    raise RadiusNotFound(f"no {mode} ball in exponent range [{min_exp}, {max_exp}]")


# --------------------------------------------------------------------------
# orbits
# --------------------------------------------------------------------------


def standard_norm_exp(x, p: int):
    """Exponent of the sup norm max |x_i| (INF for the zero vector)."""
    ctx = infer_context(list(x), p)
    vals = [ctx.val(coerce(c, ctx)) for c in x]
    vals = [v for v in vals if v != INF]
    return min(vals) if vals else INF


def orbit(f: PolyMap, x, n: int):
    """[(point, sup-norm exponent)] for x, F(x), ..., F^n(x), exact."""
    out = []
    z = list(x)
    for _ in range(n + 1):
        out.append((tuple(z), standard_norm_exp(z, f.prime)))
        z = f(z)
    return out


# --------------------------------------------------------------------------
# fixed point classification
# --------------------------------------------------------------------------

NON_EXPANDING = "NonExpanding"
STABLY_NEUTRAL = "StablyNeutral"
UNIFORMLY_ATTRACTIVE = "UniformlyAttractive"
HAS_EXPANSION = "HasExpansion"


@dataclass(frozen=True)
class FixedPointReport:
    point: tuple
    jacobian: tuple
    spectrum: tuple  # ((valuation, multiplicity), ...)
    label: str
    degenerate: bool  # singular jacobian
    certificate: object  # BallCertificate or None
    norm: object  # AdaptedNorm or None


def classify_fixed_point(f: PolyMap, pt=None,
                         precision: int = DEFAULT_PRECISION) -> FixedPointReport:
    """Label the fixed point purely from the spectrum of the derivative:
    all |lambda| < 1 -> UniformlyAttractive; all = 1 -> StablyNeutral;
    all <= 1 -> NonExpanding; otherwise (or singular) HasExpansion.  Attaches
    the matching ball certificate when one exists."""
    p = f.prime
    if pt is None:
        pt = [Fraction(0)] * f.nvars
    pt = [Fraction(x) for x in pt]
    g = shift_to_fixed_point(f, pt)
    a = linear_part(g)
    spec = spectral.spectrum_abs(a, p, precision)
    degenerate = any(v == INF for v, _ in spec)
    if degenerate:
        label = HAS_EXPANSION
    elif all(v > 0 for v, _ in spec):
        label = UNIFORMLY_ATTRACTIVE
    elif all(v == 0 for v, _ in spec):
        label = STABLY_NEUTRAL
    elif all(v >= 0 for v, _ in spec):
        label = NON_EXPANDING
    else:
        label = HAS_EXPANSION
    cert, norm = None, None
    mode = {UNIFORMLY_ATTRACTIVE: CONTRACTING, STABLY_NEUTRAL: ISOMETRIC,
            NON_EXPANDING: INVARIANT}.get(label)
    if mode is not None:
        norm = adapted_norm(a, p, precision=precision)
        try:
            cert = invariant_ball(g, mode, norm)
        except (PreconditionViolated, RadiusNotFound):
            cert = None
    return FixedPointReport(
        tuple(pt), tuple(tuple(r) for r in a), tuple(spec), label, degenerate,
        cert, norm,
    )


# --------------------------------------------------------------------------
# a-stable set membership
# --------------------------------------------------------------------------

CERTIFIED_MEMBER = "CertifiedMember"
CERTIFIED_NON_MEMBER = "CertifiedNonMember"
HEURISTIC_MEMBER = "HeuristicMember"
HEURISTIC_NON_MEMBER = "HeuristicNonMember"
UNDECIDED = "Undecided"


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: str
    trace: tuple  # sup-norm exponents of the orbit prefix
    justification: tuple  # human-readable inequality chain


def _is_exact_zero_vec(x, ctx):
    return all(ctx.zeroness(coerce(c, ctx)) == ZERO for c in x)


def _rat_bits(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return 64


def _bounded_orbit(f: PolyMap, x, horizon: int, bit_cap: int = 8192):
    """Orbit prefix, stopping early when exact-rational coordinate sizes
    explode (quadratic maps square the bit size every step)."""
    out = []
    z = list(x)
    for _ in range(horizon + 1):
        out.append((standard_norm_exp(z, f.prime), tuple(z)))
        if sum(_rat_bits(c) for c in z) > bit_cap:
            break
        z = f(z)
    return out


def _component_exps(norm, a, z, ctx):
    """(stable_exp, centre_exp, unstable_exp) of z: norm exponents of the
    components of z in the spectral blocks grouped by |.| vs a."""
    y = mat_vec(norm.transform(ctx), cvec(z, ctx))
    q = norm.weights
    out = {1: INF, 0: INF, -1: INF}
    off = 0
    for b in norm.blocks:
        side = compare_threshold(a, b.rho, norm.prime)
        for i in range(off, off + len(b.t)):
            v = ctx.val(y[i])
            if v != INF:
                out[side] = min(out[side], v + q[i])
        off += len(b.t)
    return out[1], out[0], out[-1]


def _linear_membership(f, a, x, horizon):
    p = f.prime
    s = splitting_at(linear_part(f), p, a)
    ctx = infer_context([list(s.winv), list(x)], p)
    coords = mat_vec(cmat(s.winv, ctx), cvec(x, ctx))
    ds, dc, du = s.dims()
    zness = [ctx.zeroness(coords[i]) for i in range(ds, ds + dc + du)]
    trace = tuple(e for _, e in orbit(f, x, min(horizon, 8)))
    if any(z not in (ZERO, NONZERO) for z in zness):
        return MembershipVerdict(
            UNDECIDED, trace,
            ("a centre/unstable coordinate of x is indistinguishable from "
             "zero at working precision",))
    bad = [ds + i for i, z in enumerate(zness) if z == NONZERO]
    if not bad:
        # certified: x lies in E_{a,s}; every eigenvalue there has |.| < a
        return MembershipVerdict(
            CERTIFIED_MEMBER, trace,
            ("x in E_{a,s} exactly (centre/unstable coordinates all zero)",
             "all stable eigenvalue absolute values < a, so a^-n ||A^n x|| -> 0"))
    kind = "centre" if bad[0] < ds + dc else "unstable"
    return MembershipVerdict(
        CERTIFIED_NON_MEMBER, trace,
        (f"x has a nonzero {kind} coordinate (index {bad[0]})",
         "that coordinate's norm is multiplied by exactly |lambda| >= a each "
         "step in the adapted norm, so a^-n ||A^n x|| does not tend to 0"))


def _try_graph_reduction(f, a, x, horizon, precision):
    """If the a-stable graph is an exactly invariant polynomial graph and x
    lies on it, reduce to the restricted map on the base coordinates."""
    from . import manifolds  # deferred: manifolds imports this module

    p = f.prime
    try:
        gs = manifolds.graph_series(f, a, manifolds.STABLE, order=max(6, f.degree() ** 2),
                                    precision=precision)
    except Exception:
        return None
    res = manifolds.residual(f, gs, truncate=False)
    ctx = gs._ctx()
    if any(ctx.zeroness(c) != ZERO for table in res for c in table.values()):
        return None
    # exact invariance; is x on the graph?
    base_x, comp_x = manifolds.split_point(gs, x)
    hval = manifolds.evaluate_graph(gs, base_x)
    if not all(ctx.zeroness(coerce(cv, ctx) - coerce(hv, ctx)) == ZERO
               for cv, hv in zip(comp_x, hval)):
        return None
    g_restricted = manifolds.restricted_base_map(f, gs)
    sub = stable_membership(g_restricted, a, base_x, horizon)
    if sub.verdict != CERTIFIED_MEMBER:
        return None
    just = (
        "the a-stable graph h is an exactly invariant polynomial graph "
        "(untruncated invariance residual == 0)",
        "x lies on the graph exactly, so its orbit stays on it and "
        "||F^n(x)|| <= C ||base orbit|| near 0",
    ) + sub.justification
    return MembershipVerdict(CERTIFIED_MEMBER, sub.trace, just)


def stable_membership(f: PolyMap, a, x, horizon: int = 64,
                      precision: int = DEFAULT_PRECISION) -> MembershipVerdict:
    """Verdict on x in W_a^s = {z : a^-n ||F^n(z)|| -> 0} for the fixed
    point 0 (chart-local semantics: certificates reason inside certified
    balls around 0)."""
    p = f.prime
    a = Fraction(a)
    if a <= 0:
        raise PreconditionViolated("threshold must be positive")
    ctx0 = infer_context([list(x)], p, precision)
    if _is_exact_zero_vec(x, ctx0):
        return MembershipVerdict(CERTIFIED_MEMBER, (INF,),
                                 ("x is the fixed point itself",))
    if f.is_linear():
        return _linear_membership(f, a, x, horizon)

    lin = linear_part(f)
    spec = spectral.spectrum_abs(lin, p, precision)
    below = all(compare_threshold(a, v, p) == 1 for v, _ in spec)
    above = all(compare_threshold(a, v, p) == -1 for v, _ in spec)
    pts = [(e, list(z)) for e, z in _bounded_orbit(f, x, horizon)]
    trace = tuple(e for e, _ in pts)

    if below:
        norm = adapted_norm(lin, p, precision=precision)
        try:
            cert = invariant_ball(f, CONTRACTING, norm, rate_below=a)
        except (PreconditionViolated, RadiusNotFound):
            cert = None
        if cert is not None:
            for n, (_, z) in enumerate(pts):
                if norm.norm_exp(z) >= cert.radius_exp:
                    just = (
                        f"F^{n}(x) lies in the ball p^-{cert.radius_exp} with a "
                        f"Contracting certificate at rate c = p^-{cert.contraction_exp} < a",
                        "hence a^-m ||F^m(x)|| <= (c/a)^m const -> 0",
                    )
                    return MembershipVerdict(CERTIFIED_MEMBER, trace, just)
    elif above:
        # ]0, a] misses the spectrum entirely: W_a^s is locally just {0}
        norm = adapted_norm(lin, p, precision=precision)
        try:
            k = linearization_radius(f, norm)
        except (JacobianSingular, RadiusNotFound):
            k = None
        if k is not None:
            ctx = infer_context([lin], p, precision)
            ainv = mat_inverse(cmat(lin, ctx), ctx)
            einv = operator_norm(ainv, p, norm)  # ||F(z)|| >= p^einv ||z|| in-ball
            if compare_threshold(a, -einv, p) != -1:
                k = None  # expansion factor not certified above a
        if k is not None:
            for n, (_, z) in enumerate(pts):
                zc = infer_context([z], p, precision)
                if _is_exact_zero_vec(z, zc):
                    return MembershipVerdict(
                        CERTIFIED_MEMBER, trace,
                        (f"F^{n}(x) = 0 exactly; the orbit is eventually the "
                         "fixed point",))
                if norm.norm_exp(z) >= k:
                    just = (
                        f"F^{n}(x) != 0 lies inside the linearization ball p^-{k}",
                        f"there ||F(z)|| >= p^{einv} ||z|| with p^{einv} > a "
                        "(every eigenvalue absolute value exceeds a)",
                        "so a^-m ||F^m(x)|| grows strictly until the orbit "
                        "leaves the chart ball and never returns to decay",
                    )
                    return MembershipVerdict(CERTIFIED_NON_MEMBER, trace, just)
    elif spectral.is_hyperbolic(lin, p, a, precision):
        red = _try_graph_reduction(f, a, x, horizon, precision)
        if red is not None:
            return red
        # dominant-unstable certificate: inside a ball where the remainder's
        # Lipschitz bound is beaten by the slowest unstable expansion rate
        # p^-ru (ru = largest unstable valuation), unstable dominance
        # propagates exactly and the unstable norm grows by > a each step
        norm = adapted_norm(lin, p, precision=precision)
        ru = max(v for v, _ in spec if compare_threshold(a, v, p) == -1)
        k = next((kk for kk in range(0, 65)
                  if remainder_lipschitz(f, kk, norm) > ru), None)
        if k is not None:
            nctx = norm._ctx()
            for n, (_, z) in enumerate(pts):
                zc = infer_context([z], p, precision)
                if _is_exact_zero_vec(z, zc):
                    return MembershipVerdict(
                        CERTIFIED_MEMBER, trace,
                        (f"F^{n}(x) = 0 exactly",))
                if norm.norm_exp(z) >= k:
                    es, ec, eu = _component_exps(norm, a, z, nctx)
                    if eu < min(es, ec):
                        just = (
                            f"F^{n}(x) lies inside the dominance ball p^-{k} "
                            f"with strictly dominant E_(a,u) component "
                            f"(exp {eu} < {min(es, ec)})",
                            "dominance propagates exactly (ultrametric dominated "
                            "sum, Lip(R) < expansion factor), so a^-m ||F^m(x)|| "
                            "grows strictly inside the chart ball",
                        )
                        return MembershipVerdict(CERTIFIED_NON_MEMBER, trace, just)

    # heuristics: trend of a^-n ||F^n(x)|| as exponents e_n - n * v_a where
    # a-comparisons stay exact: use t_n = trace[n] and compare consecutive
    # a^-n p^-t_n ratios p^(t_{n+1} - t_n) vs a
    tail = [t for t in trace if t != INF]
    if len(tail) >= 4:
        cmps = [compare_threshold(a, trace[i + 1] - trace[i], p)
                for i in range(len(trace) - 1)
                if trace[i] != INF and trace[i + 1] != INF]
        window = cmps[-(len(cmps) // 2 or 1):]
        if all(c == 1 for c in window):
            return MembershipVerdict(
                HEURISTIC_MEMBER, trace,
                ("a^-n ||F^n(x)|| strictly decreasing over the last half of "
                 "the horizon (no certificate applies)",))
        if all(c == -1 for c in window):
            return MembershipVerdict(
                HEURISTIC_NON_MEMBER, trace,
                ("a^-n ||F^n(x)|| strictly increasing over the last half of "
                 "the horizon (no certificate applies)",))
    return MembershipVerdict(UNDECIDED, trace,
                             ("no certificate applies and the orbit trend is "
                              "not monotone over the horizon",))
