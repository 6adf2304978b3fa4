"""Command-line interface.  Every command prints one JSON document (``geodesic`` prints CSV)."""

from __future__ import annotations

import argparse
import math
import re
import sys
from fractions import Fraction

from . import raster
from ._numeric import fmt
from .character import ImaginaryCharacter, MoveWord, apply_word, kappa
from .classifier import BOWDITCH_VARIANTS, Budget, Variant, bq_check, classify
from .errors import DegenerateError, DomainError
from .surface import SheetSelector, Window, level_topology, slopes, z_sheet
from .tree import alternating_geodesic, geodesic_closed_form

SCHEMA = "v1"
_SQRT = re.compile(r"^([+-]?)sqrt\(?([0-9.]+(?:/[0-9]+)?)\)?$")


class FlagError(Exception):
    pass


def parse_number(text: str, flag: str, exact: bool):
    """Parse a float, ``p/q`` or ``sqrtN`` literal; ``exact`` keeps rationals exact and refuses roots."""
    s = text.strip()
    m = _SQRT.match(s)
    if m:
        if exact:
            raise FlagError(f"{flag}: {text!r} is irrational; --exact accepts only rational literals")
        val = math.sqrt(float(Fraction(m.group(2))))
        return -val if m.group(1) == "-" else val
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        try:
            f = float(s)
        except ValueError:
            raise FlagError(f"{flag}: cannot parse number {text!r}") from None
        if exact or not math.isfinite(f):
            raise FlagError(f"{flag}: {text!r} is not a finite rational literal")
        return f
    if exact:
        return q.numerator if q.denominator == 1 else q
    return float(q)


def dumps(obj) -> str:
    """JSON with floats at 17 significant digits and fractions as ``"p/q"`` strings."""
    if obj is None or obj is True or obj is False:
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return '"%s"' % (obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, float):
        return f"{obj:.17g}" if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
    if isinstance(obj, dict):
        return "{" + ",".join(f"{dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(payload: dict) -> None:
    sys.stdout.write(dumps({"schema": SCHEMA, **payload}) + "\n")


def _char_json(c: ImaginaryCharacter) -> dict:
    return {"x": c.x, "y": c.y, "z": c.z}


def _budget(args) -> Budget:
    return Budget(args.budget_depth, args.max_abs, args.walk_limit)


def _character(args, need_z=True) -> ImaginaryCharacter:
    x = parse_number(args.x, "--x", args.exact)
    y = parse_number(args.y, "--y", args.exact)
    if args.z is not None:
        z = parse_number(args.z, "--z", args.exact)
    elif getattr(args, "k", None) is not None:
        k = parse_number(args.k, "--k", args.exact)
        z = z_sheet(k, x, y, SheetSelector.parse(args.sheet))
        if z is None:
            raise DomainError(f"({x}, {y}) has no preimage on the level set k={k}")
    else:
        raise FlagError("--z is required (or give --k and --sheet to lift onto a sheet)")
    return ImaginaryCharacter(x, y, z)


def cmd_classify(args):
    c = _character(args)
    res = classify(c, _budget(args))
    _emit({"character": _char_json(c), "kappa": kappa(c), **res.to_json()})


def cmd_orbit(args):
    c = _character(args)
    word = MoveWord.parse(args.word)
    path = [c]
    for g in word:
        path.append(apply_word(path[-1], MoveWord((g,))))
    _emit({"character": _char_json(c), "word": str(word), "result": _char_json(path[-1]),
           "kappa": kappa(path[-1]), "path": [_char_json(p) for p in path]})


def cmd_geodesic(args):
    c = _character(args)
    if args.n_min > args.n_max:
        raise FlagError("--n-min must not exceed --n-max")
    ns = range(args.n_min, args.n_max + 1)
    values = alternating_geodesic(c, args.slot, ns)
    lines = ["n,trace"] + [f"{n},{fmt(v)}" for n, v in zip(ns, values)]
    if args.slot == 3:
        try:
            fit = geodesic_closed_form(c.z, c.x, c.y)
            lines.append("# " + dumps({"a": _real(fit.a), "b": _real(fit.b), "lambda": _real(fit.lam)}))
        except DegenerateError:
            lines.append("# " + dumps({"parabolic": True}))
    sys.stdout.write("\n".join(lines) + "\n")


def _real(v):
    return v if not isinstance(v, complex) else [v.real, v.imag]


def _window(args) -> Window:
    try:
        return Window.parse(args.window, args.res)
    except ValueError as exc:
        raise FlagError(f"--window/--res: {exc}") from None


def _job(args) -> raster.RasterJob:
    k = float(parse_number(args.k, "--k", False))
    return raster.RasterJob(k, SheetSelector.parse(args.sheet), _window(args), _budget(args),
                            raster.Coloring.parse(args.coloring))


def cmd_render(args):
    job = _job(args)
    if args.threads < 1:
        raise FlagError("--threads must be at least 1")
    meta = raster.write_render(job, args.out, args.threads, args.csv)
    _emit({"out": args.out, "sidecar": args.out + ".json", "stats": meta["stats"]})


def _variants(text):
    if text is None:
        return BOWDITCH_VARIANTS
    out = []
    for name in filter(None, (t.strip() for t in text.split(","))):
        try:
            out.append(Variant(name))
        except ValueError:
            raise FlagError(f"--variants: unknown variant {name!r}") from None
    return out


def cmd_measure(args):
    k = float(parse_number(args.k, "--k", False))
    rep = raster.measure_region(k, SheetSelector.parse(args.sheet), _window(args), _variants(args.variants),
                                _budget(args), args.threads)
    _emit(rep.to_json())


def cmd_topology(args):
    k = parse_number(args.k, "--k", args.exact)
    out = {"k": k, "topology": level_topology(k).value}
    if k >= 2:
        out["slopes"] = list(slopes(k))
    _emit(out)


def cmd_psi(args):
    a = float(parse_number(args.a, "--a", False))
    b = float(parse_number(args.b, "--b", False))
    c = raster.psi(a, b)
    _emit({"character": _char_json(c), "kappa": kappa(c)})


def cmd_bq(args):
    c = _character(args)
    C = parse_number(args.C, "--C", args.exact)
    rep = bq_check(c, C, _budget(args))
    _emit({"character": _char_json(c), **rep.to_json()})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bowditch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def budget_flags(sp):
        sp.add_argument("--budget-depth", type=int, default=10_000)
        sp.add_argument("--max-abs", type=float, default=1e300)
        sp.add_argument("--walk-limit", type=int, default=100_000)

    def point_flags(sp, lift=False):
        sp.add_argument("--x", required=True)
        sp.add_argument("--y", required=True)
        sp.add_argument("--z")
        if lift:
            sp.add_argument("--k")
            sp.add_argument("--sheet", default="plus")
        sp.add_argument("--exact", action="store_true")

    def window_flags(sp):
        sp.add_argument("--k", required=True)
        sp.add_argument("--sheet", default="plus")
        sp.add_argument("--window", default="-4:4:-4:4")
        sp.add_argument("--res", type=int, default=256)
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("classify", help="classify one character")
    point_flags(sp, lift=True)
    budget_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("orbit", help="apply a word of generators")
    point_flags(sp)
    sp.add_argument("--word", required=True)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("geodesic", help="traces around a region, as CSV")
    point_flags(sp)
    sp.add_argument("--slot", type=int, choices=(1, 2, 3), default=3)
    sp.add_argument("--n-min", type=int, default=-20)
    sp.add_argument("--n-max", type=int, default=20)
    sp.set_defaults(func=cmd_geodesic)

    sp = sub.add_parser("render", help="render a PPM image of the classification")
    window_flags(sp)
    budget_flags(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--csv")
    sp.add_argument("--coloring", default="ByVariant")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("measure", help="area of classified pixels")
    window_flags(sp)
    budget_flags(sp)
    sp.add_argument("--variants", help="comma-separated variant names (default: the Bowditch variants)")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("topology", help="topology of a level set")
    sp.add_argument("--k", required=True)
    sp.add_argument("--exact", action="store_true")
    sp.set_defaults(func=cmd_topology)

    sp = sub.add_parser("psi", help="parametrised point of the level k = 2")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.set_defaults(func=cmd_psi)

    sp = sub.add_parser("bq", help="check the BQ-conditions")
    point_flags(sp)
    sp.add_argument("--C", default="2")
    budget_flags(sp)
    sp.set_defaults(func=cmd_bq)
    return p


_VALUE_FLAGS = {"--x", "--y", "--z", "--k", "--a", "--b", "--C", "--window"}


def _glue_values(argv):
    # values such as -1:1:-1:1 or -sqrt2 would otherwise be taken for options
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        args.func(args)
    except FlagError as exc:
        parser.error(str(exc))
    except (DomainError, DegenerateError, ValueError) as exc:
        sys.stderr.write(f"bowditch: error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
