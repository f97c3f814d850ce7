"""Command-line interface: ``weylsymp <command> [flags]``.

Every command writes one canonical JSON document to standard output (or a
text rendering with ``--pretty``).  Exit status: 0 success, 1 domain error
with ``{"error": code, "detail": ...}``, 2 usage error.
"""

import argparse
import json
import sys

from . import jsonio
from .approx import approximate
from .errors import AlgebraError, FormatError
from .gauge import TruncatedAuto, normalize
from .parse import parse_hbar_poly, parse_weyl
from .poly import Poly, center_names
from .rings import GF
from .star import HbarPoly, StarOrdering, classical_limit, lift_tame, star, transported_star
from .symplectic import (Endo, PoissonStructure, TameWord, endo_compose, is_automorphism_certificate,
                         is_symplectomorphism, jacobian, jacobian_is_unit_constant, tame_invert)
from .suite import run_suite
from .weyl import (WeylAuto, WeylElt, center_to_poly, induced_poisson_bracket, is_central,
                   reduce_mod_p, restrict_to_center, weyl_auto_check)

COMMANDS = ("verify", "compose", "invert", "lift", "limit", "star", "gauge-normalize", "modp",
            "center", "approximate", "suite")


class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="weylsymp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", action="append", default=[], metavar="FILE",
                       help="JSON input file ('-' for stdin); repeatable")
        p.add_argument("--pretty", action="store_true", help="human-readable rendering")
        return p

    p = add("verify", "check symplecticity / Jacobian / inverse of an endomorphism or word")
    p.add_argument("--symplectic", action="store_true")
    p.add_argument("--word", metavar="FILE")
    add("compose", "compose endomorphisms, words or Weyl automorphisms left to right")
    p = add("invert", "invert a tame word")
    p.add_argument("--word", metavar="FILE")
    p = add("lift", "lift a tame word to the Weyl algebra")
    p.add_argument("--word", metavar="FILE")
    p.add_argument("--order", type=int, metavar="K")
    add("limit", "classical limit of a Weyl automorphism")
    p = add("star", "star product of two inputs")
    p.add_argument("--product", choices=["normal", "moyal"], default="normal")
    p.add_argument("--word", metavar="FILE", help="transport the product along a lifted word")
    p = add("gauge-normalize", "n=1 removal of y-free terms")
    p.add_argument("--order", type=int, metavar="K")
    p = add("modp", "reduce a lifted word modulo p")
    p.add_argument("--p", type=int, required=True, metavar="PRIME")
    p.add_argument("--word", metavar="FILE")
    p.add_argument("--restrict-center", action="store_true")
    p = add("center", "centrality and induced bracket in characteristic p")
    p.add_argument("--p", type=int, required=True, metavar="PRIME")
    p = add("approximate", "tame approximation to a target height")
    p.add_argument("--height", type=int, required=True, metavar="K")
    p.add_argument("--seed", type=int, required=True)
    p = add("suite", "run the seeded property suite")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scale", type=int, default=1, help="multiply every case count")
    p.add_argument("--only", metavar="PREFIX", help="run properties whose name starts with PREFIX")
    return parser


# input helpers ---------------------------------------------------------------

def _inputs(args, count=None, at_least=None):
    if count is not None and len(args.input) != count:
        raise UsageError(f"{args.command} needs exactly {count} --input file(s)")
    if at_least is not None and len(args.input) < at_least:
        raise UsageError(f"{args.command} needs at least {at_least} --input file(s)")
    return [jsonio.read_json(path) for path in args.input]


def _word(args):
    path = getattr(args, "word", None)
    if path is None:
        if len(args.input) != 1:
            raise UsageError(f"{args.command} needs --word FILE")
        path = args.input[0]
    data = jsonio.read_json(path)
    if not isinstance(data, dict) or "word" not in data:
        raise FormatError("expected a tame word JSON object")
    return TameWord.from_json(data)


def _weyl_auto(data):
    if not isinstance(data, dict) or "images" not in data:
        raise FormatError("expected a Weyl automorphism JSON object")
    if data["images"] and all(isinstance(s, str) for s in data["images"]):
        n = data.get("n", len(data["images"]) // 2)
        images = [parse_weyl(s, n, order=data.get("K")) for s in data["images"]]
        return TruncatedAuto(images, data["K"]) if "K" in data else WeylAuto(images)
    if "K" in data:
        return TruncatedAuto.from_json(data)
    return WeylAuto.from_json(data)


def _hbar_poly(data):
    if isinstance(data, str):
        return parse_hbar_poly(data)
    if isinstance(data, dict) and "coeffs" in data:
        return HbarPoly.from_json(data)
    return HbarPoly.from_poly(jsonio.poly_from_any(data))


def _weyl_elt(data, p):
    ring = GF(p)
    if isinstance(data, str):
        return parse_weyl(data, ring=ring, hbar=False)
    return WeylElt.from_json(data).specialize(ring) if data.get("ring", "Q[h]") == "Q[h]" \
        else WeylElt.from_json(data)


# commands --------------------------------------------------------------------

def cmd_verify(args):
    items = _inputs(args)
    if args.word:
        items.insert(0, jsonio.read_json(args.word))
    if not items:
        raise UsageError("verify needs --input or --word")
    first = items[0]
    if jsonio.is_weyl_auto(first):
        return {"weyl_relations": weyl_auto_check(_weyl_auto(first))}
    phi = jsonio.endo_from_any(first)
    out = {"jacobian_one": (jacobian_is_unit_constant(phi) if phi.ring.characteristic == 0
                            else jacobian(phi) == Poly.one(phi.nvars, phi.ring))}
    if args.symplectic or phi.nvars % 2 == 0:
        if phi.nvars % 2:
            raise AlgebraError("symplectic check needs an even number of variables")
        out["symplectic"] = is_symplectomorphism(PoissonStructure(phi.nvars // 2), phi)
    if len(items) > 1:
        out["inverse"] = is_automorphism_certificate(phi, jsonio.endo_from_any(items[1]))
    return out


def cmd_compose(args):
    items = _inputs(args, at_least=2)
    if all(jsonio.is_weyl_auto(d) for d in items):
        autos = [_weyl_auto(d) for d in items]
        out = autos[0]
        for a in autos[1:]:
            out = out.compose(a)
        return out.to_json()
    endos = [jsonio.endo_from_any(d) for d in items]
    out = endos[0]
    for e in endos[1:]:
        out = endo_compose(out, e)
    return out.to_json()


def cmd_invert(args):
    w = _word(args)
    return tame_invert(w).to_json()


def cmd_lift(args):
    w = _word(args)
    if args.order is not None and args.order < 0:
        raise UsageError("--order must be non-negative")
    return lift_tame(w, order=args.order).to_json()


def cmd_limit(args):
    data, = _inputs(args, count=1)
    return classical_limit(_weyl_auto(data)).to_json()


def cmd_star(args):
    ordering = StarOrdering(args.product)
    f, g = (_hbar_poly(d) for d in _inputs(args, count=2))
    if args.word:
        data = jsonio.read_json(args.word)
        return transported_star(TameWord.from_json(data), f, g, ordering).to_json()
    return star(f, g, ordering).to_json()


def cmd_gauge_normalize(args):
    data, = _inputs(args, count=1)
    psi = _weyl_auto(data)
    K = args.order if args.order is not None else psi.order
    if K is None:
        raise UsageError("gauge-normalize needs --order K or a truncated input with K")
    gauges, _ = normalize(psi, K)
    return [q.to_json() for q in gauges]


def cmd_modp(args):
    w = _word(args)
    p = args.p
    reduced = reduce_mod_p(w, p)
    psi = lift_tame(w).specialize(GF(p))
    if args.restrict_center:
        return restrict_to_center(psi).to_json()
    out = psi.to_json()
    out["word"] = reduced.to_json()["word"]
    return out


def cmd_center(args):
    p = args.p
    elts = [_weyl_elt(d, p) for d in _inputs(args, at_least=1)]
    if len(elts) > 2:
        raise UsageError("center takes one or two --input files")
    out = {"central": [is_central(u) for u in elts]}
    out["center_poly"] = [center_to_poly(u, p).to_json() if c else None
                          for u, c in zip(elts, out["central"])]
    if len(elts) == 2:
        out["bracket"] = induced_poisson_bracket(elts[0], elts[1], p).to_json()
    return out


def cmd_approximate(args):
    data, = _inputs(args, count=1)
    sigma = jsonio.endo_from_any(data)
    if args.height < 0:
        raise UsageError("--height must be non-negative")
    return approximate(sigma, args.height, args.seed).to_json()


def cmd_suite(args):
    report = run_suite(args.seed, max(1, args.scale), args.only)
    props = [{"name": name, "passed": passed, "total": total, "failure": failure}
             for name, passed, total, failure in report]
    ok = all(p["passed"] == p["total"] for p in props)
    return {"seed": args.seed, "ok": ok, "properties": props}


HANDLERS = {
    "verify": cmd_verify, "compose": cmd_compose, "invert": cmd_invert, "lift": cmd_lift,
    "limit": cmd_limit, "star": cmd_star, "gauge-normalize": cmd_gauge_normalize,
    "modp": cmd_modp, "center": cmd_center, "approximate": cmd_approximate, "suite": cmd_suite,
}


# rendering -------------------------------------------------------------------

def render_pretty(command, result):
    if command == "suite":
        lines = [f"{p['name']}: {p['passed']}/{p['total']}" for p in result["properties"]]
        lines.append("OK" if result["ok"] else "FAILED")
        return "\n".join(lines)
    try:
        if isinstance(result, dict) and "images" in result:
            if "n_vars" in result:
                names = center_names(result["n_vars"]) if command == "modp" else None
                return Endo.from_json(result).format(names)
            return "(" + ", ".join(u.format() for u in _weyl_auto(result).images) + ")"
        if isinstance(result, dict) and "coeffs" in result:
            return HbarPoly.from_json(result).format()
        if isinstance(result, dict) and "word" in result and "target" not in result:
            w = TameWord.from_json(result)
            return "\n".join(repr(f) for f in w)
        if isinstance(result, list):
            return "\n".join(WeylElt.from_json(q).format() for q in result)
    except AlgebraError:
        pass
    return json.dumps(result, sort_keys=True, indent=2)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (AlgebraError, ZeroDivisionError) as exc:
        code = getattr(exc, "code", "ZeroDivision")
        detail = getattr(exc, "detail", str(exc))
        print(jsonio.dumps({"error": code, "detail": detail}))
        return 1
    text = render_pretty(args.command, result) if args.pretty else jsonio.dumps(result)
    print(text)
    if args.command == "suite" and not result["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
