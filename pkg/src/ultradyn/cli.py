"""Batch command-line front end.

Problem files are JSON with all numbers as rational strings ("2/7"); +inf
valuations serialize as "inf".  Output is deterministic (sorted keys, fixed
separators).  Exit codes: 0 success, 2 certified failure (violated
precondition, resonance, uncertifiable rank, no radius), 3 precision
exhausted, 4 schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import inf as INF

from .errors import (
    DivisionByZero,
    JacobianSingular,
    NotAFixedPoint,
    PrecisionExhausted,
    PreconditionViolated,
    RadiusNotFound,
    RankUncertified,
    ResonanceDetected,
    SchemaError,
)
from .field import DEFAULT_PRECISION, PadicNumber, ExtElement, _is_prime
from . import dynamics, manifolds, spectral

CERTIFIED_FAILURES = (
    PreconditionViolated,
    NotAFixedPoint,
    JacobianSingular,
    RadiusNotFound,
    ResonanceDetected,
    RankUncertified,
    DivisionByZero,
)


# --------------------------------------------------------------------------
# (de)serialization
# --------------------------------------------------------------------------


def _parse_rational(s, what="number") -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise SchemaError(f"{what} must be a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad {what}: {s!r}") from exc


def fmt(x) -> str:
    """Canonical string for valuations, rationals and field elements."""
    if x is None:
        return "none"
    if x == INF:
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, PadicNumber):
        if x.is_exact_zero:
            return "0"
        if x.is_uncertain:
            return f"O({x.prime}^{fmt(x.val)})"
        return f"{x.unit}*{x.prime}^{fmt(x.val)}+O({x.prime}^{fmt(x.val + x.prec)})"
    if isinstance(x, ExtElement):
        return "[" + ", ".join(fmt(c) for c in x.coeffs) + "]"
    raise SchemaError(f"cannot serialize {type(x).__name__}")


def _fmt_vec(v):
    return [fmt(c) for c in v]


def _fmt_mat(m):
    return [_fmt_vec(r) for r in m]


def _load_matrix(doc):
    m = doc.get("matrix")
    if not isinstance(m, list) or not m or not all(isinstance(r, list) for r in m):
        raise SchemaError("'matrix' must be a nonempty list of rows")
    if any(len(r) != len(m) for r in m):
        raise SchemaError("'matrix' must be square")
    return [[_parse_rational(c, "matrix entry") for c in r] for r in m]


def _load_map(doc, p):
    comps = doc.get("map")
    if not isinstance(comps, list) or not comps:
        raise SchemaError("'map' must be a nonempty list of components")
    nvars = len(comps)
    tables = []
    for comp in comps:
        if not isinstance(comp, list):
            raise SchemaError("each map component must be a list of terms")
        t = {}
        for term in comp:
            if (not isinstance(term, list) or len(term) != 2
                    or not isinstance(term[0], list)):
                raise SchemaError(
                    "each term must be [[e_1,...,e_d], \"coeff\"]")
            exps, c = term
            if len(exps) != nvars or not all(
                    isinstance(e, int) and e >= 0 for e in exps):
                raise SchemaError(f"bad multi-index {exps!r}")
            t[tuple(exps)] = _parse_rational(c, "coefficient")
        tables.append(t)
    return dynamics.PolyMap.from_tables(tables, p, nvars)


def _load_point(doc, nvars, key="point"):
    pt = doc.get(key)
    if not isinstance(pt, list) or len(pt) != nvars:
        raise SchemaError(f"'{key}' must be a list of {nvars} rationals")
    return [_parse_rational(c, "coordinate") for c in pt]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _cmd_spectrum(doc, p, precision, args):
    m = _load_matrix(doc)
    entries = spectral.spectrum_abs(m, p, precision)
    # smallest absolute value (largest valuation) first
    ordered = sorted(entries, key=lambda e: (e[0] != INF, -e[0] if e[0] != INF else 0))
    return {"entries": [{"v": fmt(v), "m": mult} for v, mult in ordered]}


def _cmd_hyperbolic(doc, p, precision, args):
    m = _load_matrix(doc)
    a = _require_a(doc, args)
    hyp = spectral.is_hyperbolic(m, p, a, precision)
    out = {"a": fmt(a), "hyperbolic": hyp}
    if not hyp:
        w = spectral.nonhyperbolicity_witness(m, p, a, precision=precision)
        out["witness"] = {
            "vector": _fmt_vec(w.vector),
            "rho": fmt(w.rho),
            "constant": w.constant,
            "exponents": [fmt(e) for e in w.exponents],
        }
    return out


def _cmd_split(doc, p, precision, args):
    m = _load_matrix(doc)
    a = _require_a(doc, args)
    s = spectral.splitting_at(m, p, a, precision)
    return {
        "a": fmt(a),
        "stable": _fmt_mat(s.stable),
        "centre": _fmt_mat(s.centre),
        "unstable": _fmt_mat(s.unstable),
        "dims": list(s.dims()),
    }


def _cmd_norm(doc, p, precision, args):
    m = _load_matrix(doc)
    eps = doc.get("eps")
    eps = _parse_rational(eps, "eps") if eps is not None else None
    n = spectral.adapted_norm(m, p, eps=eps, precision=precision)
    return {
        "ram": n.ram,
        "eps_exp": fmt(n.eps_exp) if n.eps_exp is not None else "none",
        "weights": [fmt(q) for q in n.weights],
        "blocks": [
            {"rho": fmt(b.rho), "transform": _fmt_mat(b.t)} for b in n.blocks
        ],
        "winv": _fmt_mat(n.winv),
        "operator_norm_exp": fmt(spectral.operator_norm(m, p, n)),
    }


def _cmd_classify(doc, p, precision, args):
    f = _load_map(doc, p)
    pt = (_load_point(doc, f.nvars) if "point" in doc
          else [Fraction(0)] * f.nvars)
    r = dynamics.classify_fixed_point(f, pt, precision)
    out = {
        "point": _fmt_vec(r.point),
        "jacobian": _fmt_mat(r.jacobian),
        "spectrum": [{"v": fmt(v), "m": mult} for v, mult in r.spectrum],
        "class": r.label,
        "degenerate": r.degenerate,
    }
    if r.certificate is not None:
        out["certificate"] = {
            "mode": r.certificate.mode,
            "radius_exp": r.certificate.radius_exp,
            "contraction_exp": fmt(r.certificate.contraction_exp),
        }
    return out


def _cmd_graph(doc, p, precision, args):
    f = _load_map(doc, p)
    a = _require_a(doc, args)
    mode = doc.get("mode", "Stable")
    if mode not in (manifolds.STABLE, manifolds.CENTRE_STABLE,
                    manifolds.CENTRE, manifolds.UNSTABLE):
        raise SchemaError(f"unknown mode {mode!r}")
    order = args.order or doc.get("order", 6)
    gs = manifolds.graph_series(f, a, mode, order=order, precision=precision)
    return {
        "mode": gs.mode,
        "a": fmt(gs.a),
        "base_basis": _fmt_mat(gs.base_basis),
        "complement_basis": _fmt_mat(gs.complement_basis),
        "coefficients": [
            {"multi_index": list(m), "vector": _fmt_vec(vec)}
            for m, vec in gs.coefficients
        ],
        "order": gs.order,
    }


def _cmd_orbit(doc, p, precision, args):
    f = _load_map(doc, p)
    x = _load_point(doc, f.nvars)
    n = args.horizon or doc.get("steps", 8)
    pts = dynamics.orbit(f, x, n)
    return {"orbit": [
        {"point": _fmt_vec(z), "norm_exp": fmt(e)} for z, e in pts
    ]}


def _cmd_member(doc, p, precision, args):
    f = _load_map(doc, p)
    a = _require_a(doc, args)
    x = _load_point(doc, f.nvars)
    horizon = args.horizon or doc.get("horizon", 64)
    v = dynamics.stable_membership(f, a, x, horizon, precision)
    return {
        "a": fmt(a),
        "verdict": v.verdict,
        "trace": [fmt(e) for e in v.trace],
        "justification": list(v.justification),
    }


COMMANDS = {
    "spectrum": _cmd_spectrum,
    "hyperbolic": _cmd_hyperbolic,
    "split": _cmd_split,
    "norm": _cmd_norm,
    "classify": _cmd_classify,
    "graph": _cmd_graph,
    "orbit": _cmd_orbit,
    "member": _cmd_member,
}


def _require_a(doc, args):
    if args.a is not None:
        return _parse_rational(args.a, "threshold a")
    if "a" in doc:
        return _parse_rational(doc["a"], "threshold a")
    raise SchemaError("threshold 'a' required (flag --a or input field)")


def _emit_table(result, out, prefix=""):
    if isinstance(result, dict):
        for k in sorted(result):
            _emit_table(result[k], out, f"{prefix}{k}.")
    elif isinstance(result, list):
        for i, v in enumerate(result):
            _emit_table(v, out, f"{prefix}{i}.")
    else:
        out.write(f"{prefix[:-1]}\t{result}\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ultradyn",
        description="exact spectral/dynamical analysis over Q_p")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", required=True, help="JSON problem file")
    parser.add_argument("--prime", type=int, default=None)
    parser.add_argument("--precision", type=int, default=None)
    parser.add_argument("--a", default=None, help="threshold, rational string")
    parser.add_argument("--order", type=int, default=None)
    parser.add_argument("--horizon", type=int, default=None)
    parser.add_argument("--format", choices=("json", "table"), default="json")
    args = parser.parse_args(argv)

    try:
        try:
            with open(args.input) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read input: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"input is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise SchemaError("input must be a JSON object")
        p = args.prime if args.prime is not None else doc.get("prime")
        if not isinstance(p, int) or not _is_prime(p):
            raise SchemaError(f"'prime' must be a prime integer, got {p!r}")
        precision = (args.precision if args.precision is not None
                     else doc.get("precision", DEFAULT_PRECISION))
        if not isinstance(precision, int) or precision < 1:
            raise SchemaError("'precision' must be a positive integer")
        result = COMMANDS[args.command](doc, p, precision, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 4
    except PrecisionExhausted as exc:
        print(json.dumps({"error": "PrecisionExhausted", "detail": str(exc)},
                         sort_keys=True))
        return 3
    except CERTIFIED_FAILURES as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)},
                         sort_keys=True))
        return 2

    if args.format == "json":
        print(json.dumps(result, sort_keys=True, separators=(", ", ": ")))
    else:
        _emit_table(result, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
