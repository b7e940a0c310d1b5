"""Truncated power-series graphs of local invariant manifolds (stable,
centre-stable, centre, unstable) solved order by order from the invariance
equation h(F_base(x, h(x))) = F_comp(x, h(x)), plus formal inversion.

All series arithmetic reuses the monomial tables of the dynamics module; the
graph is computed in splitting coordinates (base block first)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf as INF

from .errors import (
    JacobianSingular,
    PreconditionViolated,
    ResonanceDetected,
)
from .field import DEFAULT_PRECISION, ZERO, compare_threshold
from .polyalg import cmat, coerce, cvec, infer_context, mat_inverse, mat_vec, row_reduce
from . import spectral
from .dynamics import (
    PolyMap,
    _madd,
    _mmul,
    _mscale,
    _msubst,
    _mtrunc,
    linear_part,
)

STABLE = "Stable"
CENTRE_STABLE = "CentreStable"
CENTRE = "Centre"
UNSTABLE = "Unstable"


@dataclass(frozen=True)
class GraphSeries:
    """h: base -> complement with h(0) = 0, Dh(0) = 0; the manifold is
    {W.(xi, h(xi))} in ambient coordinates."""

    prime: int
    a: Fraction
    mode: str
    base_basis: tuple  # ambient vectors spanning the graph domain
    complement_basis: tuple
    coefficients: tuple  # ((multi_index, complement_vector), ...) deg 2..order
    order: int
    w: tuple  # ambient basis matrix, columns = base then complement
    winv: tuple

    def _ctx(self):
        return infer_context(
            [list(r) for r in self.winv] + [list(v) for _, v in self.coefficients],
            self.prime)

    def tables(self):
        """One monomial table per complement coordinate."""
        dc = len(self.complement_basis)
        out = [{} for _ in range(dc)]
        for m, vec in self.coefficients:
            for i, c in enumerate(vec):
                out[i][m] = c
        return out


@dataclass(frozen=True)
class InverseSeries:
    gmap: PolyMap  # G with G(F(x)) == x mod degree order+1
    order: int


# --------------------------------------------------------------------------
# formal inverse
# --------------------------------------------------------------------------


def formal_inverse(f: PolyMap, order: int = 6) -> InverseSeries:
    """G with G(F(x)) = x through total degree `order`, degree by degree."""
    p = f.prime
    n = f.nvars
    a = linear_part(f)
    ctx = infer_context([a] + [[c for _, c in comp] for comp in f.components], p)
    try:
        ainv = mat_inverse(cmat(a, ctx), ctx)
    except PreconditionViolated as exc:
        raise JacobianSingular("derivative at 0 is singular") from exc
    ainv_polys = []
    for i in range(n):
        poly = {}
        for j in range(n):
            if ctx.zeroness(ainv[i][j]) != ZERO:
                e = tuple(1 if l == j else 0 for l in range(n))
                poly[e] = ainv[i][j]
        ainv_polys.append(poly)
    g = [dict(pl) for pl in ainv_polys]  # start with A^-1
    ftabs = [{m: coerce(c, ctx) for m, c in comp} for comp in f.components]
    for k in range(2, order + 1):
        comp = [
            _mtrunc(_msubst(gi, ftabs, n, ctx), k) for gi in g
        ]
        for i in range(n):
            e = tuple(1 if l == i else 0 for l in range(n))
            known = {m: c for m, c in comp[i].items() if sum(m) == k and m != e}
            if not known:
                continue
            corr = _msubst(known, ainv_polys, n, ctx)
            g[i] = _madd(g[i], _mscale(corr, ctx.zero - ctx.one, ctx), ctx)
    return InverseSeries(PolyMap.from_tables(g, p, n), order)


# --------------------------------------------------------------------------
# graph series
# --------------------------------------------------------------------------


def _mode_split(s: "spectral.Splitting", mode: str):
    if mode == STABLE:
        return list(s.stable), list(s.centre) + list(s.unstable)
    if mode == CENTRE_STABLE:
        return list(s.stable) + list(s.centre), list(s.unstable)
    if mode == CENTRE:
        return list(s.centre), list(s.stable) + list(s.unstable)
    if mode == UNSTABLE:
        return list(s.unstable), list(s.stable) + list(s.centre)
    raise PreconditionViolated(f"unknown mode {mode!r}")


def _degree_monomials(nvars, k):
    """All multi-indices of total degree k, deterministic order."""
    if nvars == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in _degree_monomials(nvars - 1, k - first):
            out.append((first,) + rest)
    return out


def _solve_degree(ab, acc_mat, known, db, dc, k, ctx):
    """Solve h_k(A_b xi) - A_cc h_k(xi) = known for the degree-k coefficient
    tables of h; raises ResonanceDetected when the operator is singular."""
    monos = _degree_monomials(db, k)
    nm = len(monos)
    ab_polys = []
    for l in range(db):
        poly = {}
        for j in range(db):
            if ctx.zeroness(ab[l][j]) != ZERO:
                e = tuple(1 if q == j else 0 for q in range(db))
                poly[e] = ab[l][j]
        ab_polys.append(poly)
    # operator columns: unknowns indexed (comp coord i, monomial m)
    cols = []
    for i in range(dc):
        for m in monos:
            shifted = _msubst({m: ctx.one}, ab_polys, db, ctx)
            col = [ctx.zero] * (dc * nm)
            for mm, c in shifted.items():
                col[i * nm + monos.index(mm)] = c
            for ii in range(dc):
                if ctx.zeroness(acc_mat[ii][i]) != ZERO:
                    col[ii * nm + monos.index(m)] = (
                        col[ii * nm + monos.index(m)] - acc_mat[ii][i]
                    )
            cols.append(col)
    mat = [[cols[j][i] for j in range(dc * nm)] for i in range(dc * nm)]
    rhs = [ctx.zero] * (dc * nm)
    for i in range(dc):
        for m, c in known[i].items():
            rhs[i * nm + monos.index(m)] = c
    rows, pivots, aug = row_reduce(mat, ctx, rhs=[[b] for b in rhs])
    if len(pivots) < dc * nm:
        raise ResonanceDetected(
            f"degree-{k} coefficient operator is singular")
    x = [ctx.zero] * (dc * nm)
    for r, c in enumerate(pivots):
        x[c] = aug[r][0]
    tables = [{} for _ in range(dc)]
    for i in range(dc):
        for jm, m in enumerate(monos):
            c = x[i * nm + jm]
            if ctx.zeroness(c) != ZERO:
                tables[i][m] = c
    return tables


def _conjugated_split_map(f: PolyMap, s, mode: str, precision: int):
    """F in splitting coordinates with the mode's base block first.
    Returns (tables, db, dc, ctx, w, winv)."""
    base, comp = _mode_split(s, mode)
    db, dc = len(base), len(comp)
    if db == 0:
        raise PreconditionViolated(f"{mode} base subspace is zero")
    cols = base + comp
    d = f.nvars
    ctx = infer_context(
        [cols] + [[c for _, c in cmp_] for cmp_ in f.components], f.prime, precision)
    w = [[coerce(cols[j][i], ctx) for j in range(d)] for i in range(d)]
    winv = mat_inverse(w, ctx)
    from .dynamics import conjugate

    tables = conjugate(f, winv, w, ctx)
    # off-diagonal linear blocks must vanish (aggregates are invariant)
    for i in range(d):
        for m, c in tables[i].items():
            if sum(m) == 1:
                j = m.index(1)
                if (i < db) != (j < db) and ctx.zeroness(c) != ZERO:
                    raise PreconditionViolated(
                        "splitting blocks are not invariant at working precision")
    return tables, db, dc, ctx, w, winv


def graph_series(f: PolyMap, a, mode: str, order: int = 6,
                 precision: int = DEFAULT_PRECISION) -> GraphSeries:
    """Solve the invariance equation order by order for the mode's graph."""
    p = f.prime
    a = Fraction(a)
    if a <= 0:
        raise PreconditionViolated("threshold must be positive")
    lin = linear_part(f)
    if mode in (STABLE, UNSTABLE) and not spectral.is_hyperbolic(lin, p, a, precision):
        raise PreconditionViolated(f"{mode} graph needs a-hyperbolicity")
    if mode == UNSTABLE and a < 1:
        raise PreconditionViolated("Unstable mode requires a >= 1")
    if mode in (CENTRE, UNSTABLE):
        ctx = infer_context(lin, p)
        try:
            mat_inverse(cmat(lin, ctx), ctx)
        except PreconditionViolated as exc:
            raise JacobianSingular("derivative at 0 is singular") from exc
    solve_map = f
    if mode == UNSTABLE:
        solve_map = formal_inverse(f, order).gmap
    s = spectral.splitting_at(lin, p, a, precision)
    tables, db, dc, ctx, w, winv = _conjugated_split_map(solve_map, s, mode, precision)
    ab = [[tables[i].get(tuple(1 if q == j else 0 for q in range(f.nvars)), ctx.zero)
           for j in range(db)] for i in range(db)]
    acc = [[tables[db + i].get(
        tuple(1 if q == db + j else 0 for q in range(f.nvars)), ctx.zero)
        for j in range(dc)] for i in range(dc)]
    h = [{} for _ in range(dc)]  # tables over db variables
    for k in range(2, order + 1):
        fb_h, fc_h = _compose_with_graph(tables, h, db, dc, f.nvars, k, ctx)
        lhs = [_mtrunc(_msubst(h[i], fb_h, db, ctx), k) for i in range(dc)]
        known = []
        for i in range(dc):
            diff = _madd(fc_h[i], _mscale(lhs[i], ctx.zero - ctx.one, ctx), ctx)
            known.append({m: c for m, c in diff.items() if sum(m) == k})
        hk = _solve_degree(ab, acc, known, db, dc, k, ctx)
        h = [_madd(h[i], hk[i], ctx) for i in range(dc)]
    coeffs = []
    seen = sorted({m for t in h for m in t})
    for m in seen:
        vec = tuple(t.get(m, ctx.zero) for t in h)
        coeffs.append((m, vec))
    base, comp = _mode_split(s, mode)
    return GraphSeries(
        p, a, mode,
        tuple(tuple(v) for v in base), tuple(tuple(v) for v in comp),
        tuple(coeffs), order,
        tuple(tuple(r) for r in w), tuple(tuple(r) for r in winv),
    )


def _compose_with_graph(tables, h, db, dc, d, max_deg, ctx):
    """(F_base(xi, h(xi)), F_comp(xi, h(xi))) as tables over the db base
    variables, truncated at max_deg."""
    subs = []
    for l in range(db):
        e = tuple(1 if q == l else 0 for q in range(db))
        subs.append({e: ctx.one})
    subs.extend(h)
    fb = [_mtrunc(_msubst(tables[i], subs, db, ctx), max_deg) for i in range(db)]
    fc = [_mtrunc(_msubst(tables[db + i], subs, db, ctx), max_deg)
          for i in range(dc)]
    return fb, fc


def residual(f: PolyMap, gs: GraphSeries, truncate: bool = True):
    """h(F_base(xi, h(xi))) - F_comp(xi, h(xi)) as complement-coordinate
    tables; all-zero (through the order, if truncate) iff the graph is
    invariant."""
    solve_map = f
    if gs.mode == UNSTABLE:
        solve_map = formal_inverse(f, gs.order).gmap
    d = f.nvars
    db = len(gs.base_basis)
    dc = len(gs.complement_basis)
    ctx = gs._ctx()
    winv = cmat(gs.winv, ctx)
    from .dynamics import conjugate

    tables = conjugate(solve_map, winv, cmat(gs.w, ctx), ctx)
    h = [{m: coerce(c, ctx) for m, c in t.items()} for t in gs.tables()]
    cap = gs.order if truncate else max(
        gs.order, f.degree() * gs.order * max(1, gs.order))
    fb, fc = _compose_with_graph(tables, h, db, dc, d, cap, ctx)
    out = []
    for i in range(dc):
        lhs = _msubst(h[i], fb, db, ctx)
        if truncate:
            lhs = _mtrunc(lhs, gs.order)
            fci = _mtrunc(fc[i], gs.order)
        else:
            fci = fc[i]
        out.append(_madd(lhs, _mscale(fci, ctx.zero - ctx.one, ctx), ctx))
    return out


# --------------------------------------------------------------------------
# helpers used by membership certification
# --------------------------------------------------------------------------


def split_point(gs: GraphSeries, x):
    """(base coords, complement coords) of an ambient point."""
    ctx = infer_context([list(r) for r in gs.winv] + [list(x)], gs.prime)
    y = mat_vec(cmat(gs.winv, ctx), cvec(x, ctx))
    db = len(gs.base_basis)
    return y[:db], y[db:]


def evaluate_graph(gs: GraphSeries, xi):
    """h(xi) in complement coordinates."""
    ctx = gs._ctx()
    xi = cvec(xi, ctx)
    from .dynamics import _meval

    return [_meval({m: coerce(c, ctx) for m, c in t.items()}, xi, ctx)
            for t in gs.tables()]


def restricted_base_map(f: PolyMap, gs: GraphSeries) -> PolyMap:
    """G(xi) = F_base(xi, h(xi)): the dynamics on the invariant graph in
    base coordinates (exact when the graph is exactly invariant)."""
    solve_map = f
    if gs.mode == UNSTABLE:
        solve_map = formal_inverse(f, gs.order).gmap
    ctx = gs._ctx()
    db = len(gs.base_basis)
    dc = len(gs.complement_basis)
    from .dynamics import conjugate

    tables = conjugate(solve_map, cmat(gs.winv, ctx), cmat(gs.w, ctx), ctx)
    h = [{m: coerce(c, ctx) for m, c in t.items()} for t in gs.tables()]
    cap = f.degree() * max(2, gs.order)
    fb, _ = _compose_with_graph(tables, h, db, dc, f.nvars, cap, ctx)
    return PolyMap.from_tables(fb, gs.prime, db)
