"""Spectral analysis of linear maps over Q_p: eigenvalue absolute values,
splittings along a radius threshold, adapted ultrametric norms and exact
operator norms.

Absolute values are handled as valuation exponents (|x| = p^-v), so every
comparison against a rational threshold a is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import inf as INF, lcm

from .errors import PreconditionViolated
from .field import (
    DEFAULT_PRECISION,
    ExtContext,
    ExtElement,
    NONZERO,
    PadicContext,
    PadicNumber,
    RationalContext,
    compare_threshold,
)
from . import polyalg
from .polyalg import (
    Polynomial,
    charpoly,
    cmat,
    coerce,
    cvec,
    identity,
    infer_context,
    kernel_basis,
    invariant_unit_lattice,
    lattice_inverse,
    mat_inverse,
    mat_mul,
    mat_pow,
    mat_vec,
    newton_polygon,
    poly_eval_matrix,
    row_reduce,
    slope_factorization,
    solve_system,
    _pmul,
)

# --------------------------------------------------------------------------
# spectral data: generalized eigenspaces grouped by eigenvalue valuation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralBlock:
    """Generalized eigenspace sum for one eigenvalue valuation rho.

    |eigenvalue| = p^-rho; rho == INF is the nilpotent part.  The basis is
    exact rational whenever the corresponding charpoly factor is rational.
    """

    rho: object  # Fraction or INF
    dim: int
    basis: tuple  # ambient column vectors


@dataclass(frozen=True)
class SpectralData:
    prime: int
    charpoly: Polynomial
    blocks: tuple  # SpectralBlocks, rho increasing (INF last)

    @property
    def spectrum(self):
        """[(rho, multiplicity)] with |eigenvalue| = p^-rho."""
        return [(b.rho, b.dim) for b in self.blocks]


def _rational_factors(cp: Polynomial):
    """Irreducible factorization over Q via sympy, as coefficient lists."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c) * t**i for i, c in enumerate(cp.coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, t))
    out = []
    for fac, mult in factors:
        poly = sympy.Poly(fac, t)
        cs = [Fraction(str(c)) for c in reversed(poly.all_coeffs())]
        lead = cs[-1]
        cs = [c / lead for c in cs]
        out.append((cs, int(mult)))
    return out


def _pure_slope(coeffs, p):
    """Root valuation if all roots share one valuation, else None."""
    np_ = newton_polygon(Polynomial(tuple(coeffs), p), p)
    vals = np_.root_valuations
    if len(vals) == 1:
        return vals[0][0]
    return None


def spectral_data(m, p: int, precision: int = DEFAULT_PRECISION) -> SpectralData:
    """Group the spectrum of m by eigenvalue valuation and compute the
    generalized eigenspace sum of each group.

    Rational charpoly factors that are already slope-pure keep exact
    rational bases; slope-mixed factors are split by Hensel lifting and
    give capped-precision p-adic bases.
    """
    ctx = infer_context(m, p, precision)
    d = len(m)
    cp = charpoly(m, p, precision)
    # collect slope-pure factor coefficient lists tagged by rho
    tagged = []  # (rho, coeffs)
    if isinstance(ctx, RationalContext):
        for cs, mult in _rational_factors(cp):
            rho = _pure_slope(cs, p)
            if rho is not None:
                full = [Fraction(1)]
                qctx = RationalContext(p)
                for _ in range(mult):
                    full = _pmul(full, cs, qctx)
                tagged.append((rho, full))
            else:
                powed = [Fraction(1)]
                qctx = RationalContext(p)
                for _ in range(mult):
                    powed = _pmul(powed, cs, qctx)
                for sf in slope_factorization(Polynomial(tuple(powed), p), p, precision):
                    tagged.append((sf.root_valuation, list(sf.factor.coeffs)))
    else:
        for sf in slope_factorization(cp, p, precision):
            tagged.append((sf.root_valuation, list(sf.factor.coeffs)))
    # merge factors sharing a valuation
    merged = {}
    for rho, cs in tagged:
        if rho in merged:
            mctx = infer_context([merged[rho], cs], p, precision)
            merged[rho] = _pmul(cvec(merged[rho], mctx), cvec(cs, mctx), mctx)
        else:
            merged[rho] = cs
    blocks = []
    for rho in sorted(merged, key=lambda r: (r == INF, r)):
        cs = merged[rho]
        fctx = infer_context([m, cs], p, precision)
        fm = poly_eval_matrix(cvec(cs, fctx), cmat(m, fctx), fctx)
        basis = kernel_basis(fm, p, ctx=fctx)
        if len(basis) != len(cs) - 1:
            raise PreconditionViolated(
                f"eigenspace dimension {len(basis)} != multiplicity {len(cs) - 1}"
            )
        blocks.append(SpectralBlock(rho, len(basis), tuple(tuple(v) for v in basis)))
    if sum(b.dim for b in blocks) != d:
        raise PreconditionViolated("eigenspace dimensions do not sum to dim")
    return SpectralData(p, cp, tuple(blocks))


def spectrum_abs(m, p: int, precision: int = DEFAULT_PRECISION):
    """[(rho, mult)] sorted by decreasing absolute value p^-rho."""
    cp = charpoly(m, p, precision)
    return sorted(
        newton_polygon(cp, p).root_valuations, key=lambda t: (t[0] == INF, t[0])
    )


def is_hyperbolic(m, p: int, a, precision: int = DEFAULT_PRECISION) -> bool:
    """True iff no eigenvalue has absolute value exactly a."""
    return all(
        compare_threshold(a, rho, p) != 0 for rho, _ in spectrum_abs(m, p, precision)
    )


# --------------------------------------------------------------------------
# splitting along a threshold
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Splitting:
    """Direct sum decomposition at radius a: stable (|.| < a), centre
    (|.| = a), unstable (|.| > a), with the basis change to block coords."""

    prime: int
    a: Fraction
    stable: tuple
    centre: tuple
    unstable: tuple
    w: tuple  # columns: stable then centre then unstable
    winv: tuple  # rows: ambient -> block coordinates

    @property
    def centre_stable(self):
        return self.stable + self.centre

    def dims(self):
        return (len(self.stable), len(self.centre), len(self.unstable))


def splitting_at(m, p: int, a, precision: int = DEFAULT_PRECISION) -> Splitting:
    a = Fraction(a)
    data = spectral_data(m, p, precision)
    groups = {1: [], 0: [], -1: []}
    for b in data.blocks:
        groups[compare_threshold(a, b.rho, p)].extend(list(v) for v in b.basis)
    stable, centre, unstable = groups[1], groups[0], groups[-1]
    cols = stable + centre + unstable
    ctx = infer_context(cols, p, precision)
    d = len(m)
    w = [[coerce(cols[j][i], ctx) for j in range(d)] for i in range(d)]
    winv = mat_inverse(w, ctx)
    return Splitting(
        p,
        a,
        tuple(tuple(v) for v in stable),
        tuple(tuple(v) for v in centre),
        tuple(tuple(v) for v in unstable),
        tuple(tuple(r) for r in w),
        tuple(tuple(r) for r in winv),
    )


def eigenspace_sum(m, p: int, v, precision: int = DEFAULT_PRECISION):
    """Basis of the generalized eigenspace E_rho for |eigenvalue| = p^-v;
    empty when v is not a spectrum valuation."""
    if v != INF:
        v = Fraction(v)
    data = spectral_data(m, p, precision)
    for b in data.blocks:
        if b.rho == v:
            return [list(x) for x in b.basis]
    return []


# --------------------------------------------------------------------------
# adapted norms
# --------------------------------------------------------------------------


def _restrict(m, basis, ctx):
    """Matrix of m on span(basis) in the coordinates of basis."""
    d = len(m)
    k = len(basis)
    bm = [[coerce(basis[j][i], ctx) for j in range(k)] for i in range(d)]
    cols = []
    for j in range(k):
        img = mat_vec(cmat(m, ctx), [coerce(x, ctx) for x in basis[j]])
        cols.append(solve_system(bm, img, ctx))
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def _nilpotent_chains(n, ctx):
    """Jordan chain starters for a nilpotent matrix; returns a basis as
    chains [v_0, ..., v_{l-1}] with N v_k = v_{k-1} (v_0 in ker N)."""
    d = len(n)
    powers = [identity(d, ctx)]
    for _ in range(d):
        powers.append(mat_mul(n, powers[-1]))
    s = next(i for i in range(d + 1) if all(
        ctx.zeroness(x) != NONZERO for row in powers[i] for x in row))
    kernels = [kernel_basis(powers[i], ctx.p, ctx=ctx) if i else [] for i in range(s + 1)]

    reduced = []  # accumulating independent vectors (row-reduced snapshot)

    def independent(v):
        trial = reduced + [list(v)]
        _, pivots, _ = row_reduce(trial, ctx)
        return len(pivots) == len(trial)

    starters = []  # (vector, length)
    for i in range(s, 0, -1):
        base = [list(v) for v in kernels[i - 1]]
        for v, l in starters:
            if l > i:
                base.append(mat_vec(powers[l - i], list(v)))
        reduced = base
        for v in kernels[i]:
            if independent(v):
                starters.append((list(v), i))
                reduced.append(list(v))
    chains = []
    for v, l in starters:
        chains.append([mat_vec(powers[l - 1 - k], v) for k in range(l)])
    return chains


@dataclass(frozen=True)
class NormBlock:
    rho: object  # Fraction or INF
    t: tuple  # block coords -> norm coords (rows)
    weights: tuple  # per-coordinate valuation offsets (Fractions)


@dataclass(frozen=True)
class AdaptedNorm:
    """Ultrametric norm in which m acts with exact rate p^-rho on each
    spectral block (and with norm < eps on the nilpotent block).

    norm_exp(x) = min_i ( v((T Winv x)_i) + q_i ) over the global basis; the
    norm itself is p^(-norm_exp(x)).
    """

    prime: int
    ram: int
    winv: tuple  # ambient -> stacked block coordinates
    w: tuple
    blocks: tuple  # NormBlocks in stacking order
    eps_exp: object = None  # nilpotent contraction exponent j, if any

    def _ctx(self):
        # a degree-1 "extension" is just Q_p; using ExtContext uniformly keeps
        # the block transforms (ExtElement entries) in one arithmetic domain
        return ExtContext(self.prime, self.ram)

    def transform(self, ctx=None):
        """Full matrix T (block diag of block transforms) times Winv."""
        ctx = ctx or self._ctx()
        d = len(self.winv)
        big = [[ctx.zero] * d for _ in range(d)]
        off = 0
        for b in self.blocks:
            k = len(b.t)
            for i in range(k):
                for j in range(k):
                    big[off + i][off + j] = coerce(b.t[i][j], ctx)
            off += k
        return mat_mul(big, cmat(self.winv, ctx))

    @property
    def weights(self):
        return [q for b in self.blocks for q in b.weights]

    def norm_exp(self, x):
        """Valuation exponent of ||x||; INF for the zero vector."""
        ctx = self._ctx()
        y = mat_vec(self.transform(ctx), cvec(x, ctx))
        q = self.weights
        exps = []
        for i, c in enumerate(y):
            v = ctx.val(c)
            if v != INF:
                exps.append(v + q[i])
        return min(exps) if exps else INF


def adapted_norm(m, p: int, eps=None, precision: int = DEFAULT_PRECISION) -> AdaptedNorm:
    """Build an ultrametric norm adapted to the spectral decomposition of m.

    Finite-valuation blocks: scale by pi^(-rho*e) to a flat-polygon matrix,
    take the gauge of an invariant unit lattice (an exact isometry up to the
    factor p^-rho).  Nilpotent block: Jordan chains scaled by lambda = p^j
    with p^-j < eps.
    """
    data = spectral_data(m, p, precision)
    finite = [b for b in data.blocks if b.rho != INF]
    ram = lcm(1, *(Fraction(b.rho).denominator for b in finite)) if finite else 1
    cols = [list(v) for b in data.blocks for v in b.basis]
    wctx = infer_context(cols, p, precision)
    d = len(m)
    w = [[coerce(cols[j][i], wctx) for j in range(d)] for i in range(d)]
    winv = mat_inverse(w, wctx)

    blocks = []
    eps_exp = None
    for b in data.blocks:
        bctx = infer_context([m] + [list(v) for v in b.basis], p, precision)
        rest = _restrict(m, [list(v) for v in b.basis], bctx)
        if b.rho == INF:
            if eps is None:
                # default: subordinate to the smallest nonzero |eigenvalue|
                vmax = max((Fraction(f.rho) for f in finite), default=Fraction(0))
                j = int(vmax) + 1
            else:
                eps = Fraction(eps)
                if eps <= 0:
                    raise PreconditionViolated("eps must be positive")
                j = 0
                while compare_threshold(eps, Fraction(j), p) <= 0:
                    j += 1  # smallest j with p^-j < eps
            eps_exp = j
            chains = _nilpotent_chains(rest, bctx)
            cvecs, weights = [], []
            for chain in chains:
                for k, v in enumerate(chain):
                    cvecs.append(v)
                    weights.append(Fraction(-k * j))
            cw = [[cvecs[jj][ii] for jj in range(b.dim)] for ii in range(b.dim)]
            t = mat_inverse(cw, bctx)
            blocks.append(NormBlock(INF, tuple(tuple(r) for r in t), tuple(weights)))
        else:
            ectx = ExtContext(p, ram, precision)
            shift = ExtElement.pi(p, ram, -int(Fraction(b.rho) * ram))
            scaled = [[coerce(x, ectx) * shift for x in row] for row in cmat(rest, ectx)]
            lat = invariant_unit_lattice(scaled, p, ctx=ectx)
            t = lattice_inverse(lat, ectx)
            blocks.append(
                NormBlock(b.rho, tuple(tuple(r) for r in t),
                          tuple(Fraction(0) for _ in range(b.dim)))
            )
    return AdaptedNorm(p, ram, tuple(tuple(r) for r in winv),
                       tuple(tuple(r) for r in w), tuple(blocks), eps_exp)


def operator_norm(m, p: int, norm_dom: AdaptedNorm, norm_cod: AdaptedNorm = None):
    """Exact exponent r with ||Mx||_cod <= p^-r ||x||_dom, attained.

    For weighted sup norms the operator norm is
    min_{i,j} ( v(A'_ij) + q_i^cod - q_j^dom ) with A' the matrix of M in
    the two norm bases.
    """
    norm_cod = norm_cod or norm_dom
    ram = lcm(norm_dom.ram, norm_cod.ram)
    ctx = ExtContext(p, ram)
    tdom = norm_dom.transform(ctx)
    tcod = norm_cod.transform(ctx)
    a = mat_mul(tcod, mat_mul(cmat(m, ctx), mat_inverse(tdom, ctx)))
    qd, qc = norm_dom.weights, norm_cod.weights
    best = INF
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            v = ctx.val(x)
            if v != INF:
                best = min(best, v + qc[i] - qd[j])
    return best


# --------------------------------------------------------------------------
# non-hyperbolicity witness
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A vector v with a^-n ||m^n v|| constant in the adapted norm: the
    defining obstruction to hyperbolicity at radius a."""

    vector: tuple
    a: Fraction
    rho: Fraction  # a == p^-rho
    exponents: tuple  # norm_exp(m^n v) for n = 0..horizon
    constant: bool


def nonhyperbolicity_witness(m, p: int, a, horizon: int = 20,
                             precision: int = DEFAULT_PRECISION):
    """Witness vector showing a is in the spectrum of absolute values."""
    a = Fraction(a)
    data = spectral_data(m, p, precision)
    centre = next(
        (b for b in data.blocks if compare_threshold(a, b.rho, p) == 0), None
    )
    if centre is None:
        raise PreconditionViolated(f"map is hyperbolic at {a}: no witness")
    v0 = list(centre.basis[0])
    norm = adapted_norm(m, p, precision=precision)
    ctx = infer_context([m, v0], p, precision)
    mm = cmat(m, ctx)
    exps = []
    v = cvec(v0, ctx)
    for _ in range(horizon + 1):
        exps.append(norm.norm_exp(v))
        v = mat_vec(mm, v)
    rho = Fraction(centre.rho)
    constant = all(e == exps[0] + n * rho for n, e in enumerate(exps))
    return Witness(tuple(v0), a, rho, tuple(exps), constant)
