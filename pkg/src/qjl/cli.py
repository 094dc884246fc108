"""Command-line front end (``qjl``).

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 precision error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import GQ
from .dsl import format_poly, parse_expr, parse_poly, to_poly
from .errors import (NotInAlgebraError, PrecisionError, QJLError, RangeError)
from .series import QYSeries

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


@dataclass
class RunConfig:
    trunc_N: int = 12
    identity_N: int = 20
    float_tol: float = 1e-6
    output: str = "text"

    def __post_init__(self):
        if self.trunc_N < 1 or self.identity_N < 1:
            raise ValueError("truncation orders must be positive")
        if not 0 < self.float_tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.output not in ("text", "json", "csv"):
            raise ValueError(f"unknown output format {self.output!r}")

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        cfg = {}
        env = os.environ.get("QJL_TRUNC_N")
        if env:
            cfg["trunc_N"] = int(env)
        cfg.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**cfg)


class _Usage(Exception):
    pass


# -- helpers ------------------------------------------------------------------------------

def _poly(src: str):
    return parse_poly(src)


def _series_text(s: QYSeries, terms: int = 6) -> str:
    lines = [f"weight {s.weight}, q-offset {s.q_offset}, known below q^{s.precision}"]
    for n, c in sorted(s.terms.items())[:terms]:
        lines.append(f"  q^{s.q_offset + n}: {c!r}")
    if len(s.terms) > terms:
        lines.append(f"  ... ({len(s.terms) - terms} more nonzero terms)")
    return "\n".join(lines)


def _qseries_json(s) -> dict:
    return {"precision": str(s.precision),
            "terms": [[str(e), str(c.re), str(c.im)] for e, c in sorted(s.terms.items())]}


def _qseries_text(s) -> str:
    return repr(s)


def _emit(cfg: RunConfig, text: str, data=None, csv_text: str | None = None):
    if cfg.output == "json" and data is not None:
        print(json.dumps(data, indent=2, sort_keys=True))
    elif cfg.output == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        print(text)


def _model(src: str):
    from .models import load_model
    if os.path.isfile(src):
        with open(src) as fh:
            return load_model(json.load(fh))
    return load_model(src)


def _complex(src: str) -> complex:
    return complex(src.replace(" ", "").replace("i", "j"))


def _gamma(src: str):
    from .transform import S, T
    if src.upper() == "S":
        return S
    if src.upper() == "T":
        return T
    parts = [int(x) for x in src.split(",")]
    if len(parts) != 4:
        raise _Usage("gamma must be S, T or a,b,c,d")
    return ((parts[0], parts[1]), (parts[2], parts[3]))


# -- commands ---------------------------------------------------------------------------------

def cmd_expand(args, cfg):
    from .quasijacobi import expand
    poly = _poly(args.expr)
    s = expand(poly, cfg.trunc_N)
    _emit(cfg, _series_text(s, args.terms), s.to_json())
    return EXIT_OK


def cmd_recognize(args, cfg):
    from .quasijacobi import SYMBOLS, expand, recognize
    if args.series:
        with open(args.series) as fh:
            s = QYSeries.from_json(json.load(fh))
    elif args.expr:
        s = expand(_poly(args.expr), cfg.trunc_N)
    else:
        raise _Usage("give --series FILE or --expr")
    allowed = args.allowed.split(",") if args.allowed else SYMBOLS
    w = args.weight if args.weight is not None else s.weight
    try:
        f = recognize(s, allowed, w)
    except NotInAlgebraError as exc:
        print(f"not recognized: {exc} {exc.residual}", file=sys.stderr)
        return EXIT_FAILED
    _emit(cfg, format_poly(f), {"poly": format_poly(f), "weight": w})
    return EXIT_OK


def cmd_depth(args, cfg):
    from .quasijacobi import depth
    d = depth(_poly(args.expr))
    _emit(cfg, f"({d.s}, {d.t})", {"s": d.s, "t": d.t})
    return EXIT_OK


def cmd_identity(args, cfg):
    from .quasijacobi import identity_check
    N = args.N or cfg.identity_N
    rep = identity_check(_poly(args.lhs), _poly(args.rhs), N)
    if rep.equal:
        text = f"equal to q^{N}"
    else:
        w, e, a, b = rep.first_difference
        text = f"differ: weight {w}, first difference at q^{e}: lhs {a!r} vs rhs {b!r}"
    for note in rep.notes:
        text += f"\nnote: {note}"
    _emit(cfg, text, rep.to_json())
    return EXIT_OK if rep.equal else EXIT_FAILED


def cmd_rc_bracket(args, cfg):
    from .quasijacobi import depth, rc_bracket, rc_bracket_n
    f, g = _poly(args.f), _poly(args.g)
    k = args.k if args.k is not None else f.weight()
    l = args.l if args.l is not None else g.weight()
    if args.n is None:
        b = rc_bracket(f, k, g, l, literal=args.literal)
    else:
        b = rc_bracket_n(f, k, g, l, args.n)
    d = depth(b)
    _emit(cfg, f"{format_poly(b)}\ndepth ({d.s}, {d.t})",
          {"poly": format_poly(b), "depth": [d.s, d.t]})
    return EXIT_OK


def cmd_genus(args, cfg):
    from .genus import elliptic_genus, jacobi_normalized
    from .quasijacobi import recognize
    m = _model(args.model)
    N = cfg.trunc_N
    if args.recognize:
        s = jacobi_normalized(m, N, use_divisors=not args.no_divisors)
        f = recognize(s, w=m.dim)
        _emit(cfg, format_poly(f), {"poly": format_poly(f), "normalizer": f"(theta'(0)/theta(z))^{m.dim}"})
        return EXIT_OK
    s = elliptic_genus(m, N, use_divisors=not args.no_divisors)
    _emit(cfg, _series_text(s, args.terms), s.to_json())
    return EXIT_OK


def cmd_pair_genus(args, cfg):
    from .genus import elliptic_genus
    m = _model(args.model)
    N = cfg.trunc_N
    s = elliptic_genus(m, N, use_divisors=True)
    if not args.compare:
        _emit(cfg, _series_text(s, args.terms), s.to_json())
        return EXIT_OK
    other = elliptic_genus(_model(args.compare), N)
    diff = s.first_difference(other)
    if diff is None:
        _emit(cfg, f"equal to q^{min(s.precision, other.precision)}", {"equal": True})
        return EXIT_OK
    _emit(cfg, f"differ at q^{diff[0]}: {diff[1]!r} vs {diff[2]!r}",
          {"equal": False, "q_exponent": str(diff[0])})
    return EXIT_FAILED


def _poly_in_y(p: dict) -> str:
    terms = []
    for k in sorted(p):
        v = p[k]
        if not v:
            continue
        mono = "" if k == 0 else ("y" if k == 1 else f"y^{k}")
        coef = str(v)
        if mono and v == 1:
            coef = ""
        elif mono and v == -1:
            coef = "-"
        else:
            coef = coef + ("*" if mono else "")
        terms.append(coef + mono)
    return " + ".join(terms).replace("+ -", "- ") or "0"


def cmd_chi_y(args, cfg):
    from .genus import chi_y
    m = _model(args.model)
    p = chi_y(m)
    at_minus_one = sum(v * (-1) ** k for k, v in p.items())
    euler = m.euler_number()
    text = f"{_poly_in_y(p)}\nchi_(-1) = {at_minus_one}, euler number = {euler}"
    _emit(cfg, text, {"chi_y": {str(k): str(v) for k, v in p.items()},
                      "chi_minus_one": str(at_minus_one), "euler_number": str(euler)})
    return EXIT_OK if at_minus_one == euler else EXIT_FAILED


def cmd_ochanine(args, cfg):
    from .genus import (ochanine_direct, ochanine_signature_cusp, ochanine_via_specialization,
                        signature_cusp_correction)
    m = _model(args.model)
    N = cfg.trunc_N
    if args.method == "direct":
        s = ochanine_direct(m, N)
    elif args.method == "specialization":
        s = ochanine_via_specialization(m, N)
    elif args.method == "signature-cusp":
        s = ochanine_signature_cusp(m, N)
    else:
        a, b = ochanine_direct(m, N), ochanine_via_specialization(m, N)
        c = ochanine_signature_cusp(m, N) * signature_cusp_correction(m.dim, N)
        same, cusp = a.agrees(b), c.agrees(b)
        text = (f"direct:         {a}\nspecialization: {b}\n"
                f"direct == specialization: {same}\n"
                f"signature cusp * correction == specialization: {cusp}")
        _emit(cfg, text, {"direct": _qseries_json(a), "specialization": _qseries_json(b),
                          "equal": same, "signature_cusp_equal": cusp})
        return EXIT_OK if same else EXIT_FAILED
    _emit(cfg, _qseries_text(s), _qseries_json(s))
    return EXIT_OK


def cmd_specialize(args, cfg):
    from .genus import elliptic_genus
    from .quasijacobi import expand
    if args.model:
        s = elliptic_genus(_model(args.model), cfg.trunc_N)
    elif args.expr:
        s = expand(_poly(args.expr), cfg.trunc_N)
    else:
        raise _Usage("give --model or --expr")
    if args.zeta:
        v = GQ.parse(args.zeta)
        out = s.specialize_zeta(v)
    else:
        out = s.specialize_torsion(args.alpha, args.beta)
    _emit(cfg, _qseries_text(out), _qseries_json(out))
    return EXIT_OK


def cmd_shift_check(args, cfg):
    from .transform import shift_check
    N = cfg.trunc_N if args.N else max(cfg.trunc_N, 40)
    if args.expr == "theta":
        from .theta import theta
        rep = shift_check(theta(N), args.m, "theta")
    else:
        expected = _poly(args.expected) if args.expected else None
        rep = shift_check(_poly(args.expr), args.m, expected, N=N)
    text = (f"{'pass' if rep.passed else 'FAIL'}: shift by {args.m} tau checked on "
            f"[q^{rep.checked_from}, q^{rep.checked_to})")
    _emit(cfg, text, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_modular_check(args, cfg):
    from .quasijacobi import expand
    from .transform import modular_check
    N = cfg.trunc_N if args.N else max(cfg.trunc_N, 40)
    poly = _poly(args.expr)
    s = expand(poly, N)
    basis = [b for b in args.basis.split(";") if b] if args.basis else []
    fit = modular_check(s, s.weight, _gamma(args.gamma), basis=basis)
    ok = fit.residual < cfg.float_tol
    coef = ", ".join(f"{c.real:.12g}{c.imag:+.12g}i" for c in fit.coefficients)
    text = f"residual {fit.residual:.3e} ({'pass' if ok else 'FAIL'})"
    if basis:
        text += f"\ncoefficients: {coef}; condition {fit.condition:.3g}"
    _emit(cfg, text, fit.to_json())
    return EXIT_OK if ok else EXIT_FAILED


def cmd_lattice_oracle(args, cfg):
    from .theta import ebar
    from .transform import LatticeSumSpec, brute_lattice_sum
    tau, z = _complex(args.tau), _complex(args.z)
    spec = LatticeSumSpec(args.n, args.cutoff, args.cutoff)
    lat = brute_lattice_sum(spec, z, tau)
    N = cfg.trunc_N if args.N else max(cfg.trunc_N, 40)
    v, err = ebar(args.n, N).eval_complex(tau, z)
    ser = (2j * math.pi) ** args.n * v
    diff = abs(lat - ser)
    ok = diff < cfg.float_tol
    text = (f"lattice sum  {lat.real:.15g}{lat.imag:+.15g}i\n"
            f"q-expansion  {ser.real:.15g}{ser.imag:+.15g}i\n"
            f"difference   {diff:.3e} ({'pass' if ok else 'FAIL'})")
    _emit(cfg, text, {"lattice": [lat.real, lat.imag], "series": [ser.real, ser.imag],
                      "difference": diff, "series_tail_bound": err})
    return EXIT_OK if ok else EXIT_FAILED


def _table_for(model_src: str, need_m: int, N: int | None):
    """c(m, l) table; an explicit -N is honoured even when too short (RangeError)."""
    from .dmvv import extract_cml
    from .genus import elliptic_genus
    return extract_cml(elliptic_genus(_model(model_src), N if N else need_m + 1))


def _rows(lay: dict) -> list:
    return [{"m": m, "l": l, "value": str(v)} for (m, l), v in sorted(lay.items())]


def cmd_dmvv(args, cfg):
    from .dmvv import borcherds_product
    P, M, L = args.layers, args.M, args.L
    t = _table_for(args.model, M * max(P, 1), args.N)
    b = borcherds_product(t, P, M, L)
    if args.table:
        _emit(cfg, t.to_csv().rstrip(), {"c": _rows(t.c), "normalizer": t.normalizer},
              t.to_csv())
        return EXIT_OK
    lines = []
    for n, lay in enumerate(b.layers):
        body = ", ".join(f"q^{m} y^{l}: {v}" for (m, l), v in sorted(lay.items()))
        lines.append(f"p^{n}: {body}")
    data = {"layers": [_rows(lay) for lay in b.layers]}
    _emit(cfg, "\n".join(lines), data, b.to_csv())
    return EXIT_OK


def cmd_sym_genus(args, cfg):
    from .dmvv import sym_product_genus
    t = _table_for(args.model, args.M * max(args.n, 1), args.N)
    lay = sym_product_genus(t, args.n, args.M, args.L)
    rows = "\n".join(f"{m},{l},{v}" for (m, l), v in sorted(lay.items()))
    _emit(cfg, "m,l,value\n" + rows, {"layer": _rows(lay)},
          "m,l,value\n" + rows + "\n")
    return EXIT_OK


COMMANDS = {
    "expand": cmd_expand, "recognize": cmd_recognize, "depth": cmd_depth,
    "identity": cmd_identity, "rc-bracket": cmd_rc_bracket, "genus": cmd_genus,
    "pair-genus": cmd_pair_genus, "chi-y": cmd_chi_y, "ochanine": cmd_ochanine,
    "specialize": cmd_specialize, "shift-check": cmd_shift_check,
    "modular-check": cmd_modular_check, "lattice-oracle": cmd_lattice_oracle,
    "dmvv": cmd_dmvv, "sym-genus": cmd_sym_genus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", type=int, default=None, help="truncation order")
    common.add_argument("--output", choices=["text", "json", "csv"], default=None)
    common.add_argument("--tol", type=float, default=None, help="floating-point tolerance")

    p = argparse.ArgumentParser(prog="qjl", description="Exact quasi-Jacobi forms and elliptic genera")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    a = add("expand", "q-expansion of a generator polynomial")
    a.add_argument("--expr", required=True)
    a.add_argument("--terms", type=int, default=6)

    a = add("recognize", "write a series as a generator polynomial")
    a.add_argument("--series", help="JSON series file")
    a.add_argument("--expr")
    a.add_argument("--allowed", help="comma-separated symbols")
    a.add_argument("--weight", type=int)

    a = add("depth", "depth of a generator polynomial")
    a.add_argument("--expr", required=True)

    a = add("identity", "compare two polynomials by q-expansion")
    a.add_argument("--lhs", required=True)
    a.add_argument("--rhs", required=True)

    a = add("rc-bracket", "Rankin-Cohen bracket")
    a.add_argument("--f", required=True)
    a.add_argument("--g", required=True)
    a.add_argument("--k", type=int)
    a.add_argument("--l", type=int)
    a.add_argument("-n", type=int, default=None, help="bracket order (omit for the first bracket)")
    a.add_argument("--literal", action="store_true", help="use k*Df*g - l*Dg*f")

    for name, help_ in (("genus", "elliptic genus of a model"),
                        ("pair-genus", "elliptic genus of a model with divisors")):
        a = add(name, help_)
        a.add_argument("--model", required=True)
        a.add_argument("--terms", type=int, default=6)
        if name == "genus":
            a.add_argument("--recognize", action="store_true")
            a.add_argument("--no-divisors", action="store_true")
        else:
            a.add_argument("--compare", help="model to compare with")

    a = add("chi-y", "chi_y genus from the q^0 layer")
    a.add_argument("--model", required=True)

    a = add("ochanine", "Ochanine genus")
    a.add_argument("--model", required=True)
    a.add_argument("--method", choices=["direct", "specialization", "signature-cusp", "compare"],
                   default="compare")

    a = add("specialize", "specialize zeta or z = (alpha tau + beta)/2")
    a.add_argument("--model")
    a.add_argument("--expr")
    a.add_argument("--zeta", help="1, -1, I or -I")
    a.add_argument("--alpha", type=int, default=0)
    a.add_argument("--beta", type=int, default=1)

    a = add("shift-check", "exact check of z -> z + m tau")
    a.add_argument("--expr", required=True, help="generator polynomial or 'theta'")
    a.add_argument("-m", type=int, default=1)
    a.add_argument("--expected", help="expected value of the shifted function (stored normalization)")

    a = add("modular-check", "numeric modular transformation with anomaly fit")
    a.add_argument("--expr", required=True)
    a.add_argument("--gamma", default="S")
    a.add_argument("--basis", default="", help="';'-separated anomaly terms, e.g. 'cz/(ctau+d)'")

    a = add("lattice-oracle", "brute-force lattice sum against the q-expansion")
    a.add_argument("-n", type=int, required=True)
    a.add_argument("--tau", default="2i")
    a.add_argument("--z", default="0.3+0.1i")
    a.add_argument("--cutoff", type=int, default=2000)

    a = add("dmvv", "symmetric-product generating series")
    a.add_argument("--model", required=True)
    a.add_argument("--layers", type=int, default=4)
    a.add_argument("-M", type=int, default=0)
    a.add_argument("-L", type=int, default=4)
    a.add_argument("--table", action="store_true", help="emit the c(m,l) table instead")

    a = add("sym-genus", "predicted genus of a symmetric product")
    a.add_argument("--model", required=True)
    a.add_argument("-n", type=int, required=True)
    a.add_argument("-M", type=int, default=2)
    a.add_argument("-L", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_env(output=args.output, float_tol=args.tol)
        if args.N is not None:
            cfg.trunc_N = args.N
            cfg.identity_N = args.N
        return COMMANDS[args.command](args, cfg)
    except (PrecisionError, RangeError) as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (NotInAlgebraError,) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (_Usage, QJLError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    """Console entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
