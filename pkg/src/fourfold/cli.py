"""Command-line front end.

Expression grammar:

    expr  := term ('#' term)*
    term  := [INT '*'] block
    block := CP2 | -CP2 | -CP2fake | S2xS2 | K3 | -K3 | E8 | -E8 | W
           | Enriques | S4 | S1xY(b1=INT) | S2xSigma(g=INT)

Exit codes: 0 success or informational output, 1 input error,
3 inconclusive or hypotheses not met.
"""

import argparse
import json
import re
import sys

from . import charpoly, cover, lattice, manifold, obstruct
from .errors import (
    FourfoldError,
    GenusZero,
    HypothesesNotMet,
    NegativeMultiplicity,
    ParseError,
)

_SIMPLE_BLOCKS = {
    "CP2": lambda: manifold.CP2(),
    "-CP2": lambda: manifold.NegCP2(),
    "-CP2fake": lambda: manifold.NegCP2Fake(),
    "S2xS2": lambda: manifold.S2xS2(),
    "K3": lambda: manifold.K3(),
    "-K3": lambda: manifold.NegK3(),
    "E8": lambda: manifold.E8Block(1),
    "-E8": lambda: manifold.E8Block(-1),
    "W": lambda: manifold.W(),
    "Enriques": lambda: manifold.Block("Enriques"),
    "S4": lambda: manifold.Block("S4"),
}

_TERM_RE = re.compile(
    r"\s*(?:(?P<mult>-?\d+)\s*\*\s*)?"
    r"(?P<block>-?[A-Za-z][A-Za-z0-9]*(?:\s*\(\s*[A-Za-z0-9]+\s*=\s*-?\d+\s*\))?)"
    r"\s*")


def _parse_block(text, offset):
    text = re.sub(r"\s+", "", text)
    if text in _SIMPLE_BLOCKS:
        return (_SIMPLE_BLOCKS[text](),)
    m = re.fullmatch(r"S1xY\(b1=(-?\d+)\)", text)
    if m:
        b1 = int(m.group(1))
        if b1 < 0:
            raise ParseError("b1 must be non-negative", offset)
        return (manifold.S1xY(b1),)
    m = re.fullmatch(r"S2xSigma\(g=(-?\d+)\)", text)
    if m:
        g = int(m.group(1))
        if g < 1:
            raise GenusZero("S2xSigma requires positive genus")
        return (manifold.S2xSigma(g),)
    raise ParseError(f"unknown block {text!r}", offset)


def parse(text):
    """Parse a connected-sum expression into a ManifoldExpr."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    blocks = []
    pos = 0
    parts = text.split("#")
    for part in parts:
        if not part.strip():
            raise ParseError("empty connected-sum term", pos)
        m = _TERM_RE.fullmatch(part)
        if m is None:
            bad = pos + (len(part) - len(part.lstrip()))
            raise ParseError(f"cannot parse term {part.strip()!r}", bad)
        mult = 1
        if m.group("mult") is not None:
            mult = int(m.group("mult"))
            if mult < 0:
                raise NegativeMultiplicity(
                    f"multiplicity {mult} must be >= 0")
        block = _parse_block(m.group("block"), pos + m.start("block"))
        blocks.extend(block * mult)
        pos += len(part) + 1
    return manifold.ManifoldExpr(tuple(blocks))


def render(x):
    return x.render()


def emit_json(cert):
    """Stable machine-readable form of a certificate."""
    index = {}
    if cert.index_kind:
        index[cert.index_kind] = cert.index_value
    doc = {
        "verdict": cert.verdict,
        "theorem": cert.theorem_used,
        "base_dim": cert.base_dim,
        "b_plus_ell": cert.b_plus_ell,
        "witness_monomial": cert.witness_monomial,
        "c1_square": cert.c1_square,
        "sigma": cert.sigma,
        "index": index,
        "inputs": dict(cert.inputs),
        "transcript": list(cert.transcript),
    }
    return json.dumps(doc, indent=2)


def _cmd_invariants(args):
    x = parse(args.expr)
    if args.reverse:
        x = manifold.mirror(x)
    inv = lattice.invariants(x.form)
    print(f"expression: {x.render()}")
    print(f"sigma = {x.sigma}")
    print(f"b1 = {x.b1}")
    print(f"b2 = {x.b2}")
    print(f"b_plus = {inv.b_plus}")
    print(f"b_minus = {inv.b_minus}")
    print(f"parity = {inv.parity}")
    print(f"spin = {x.spin}")
    print(f"ks = {x.ks}")
    return 0


def _cmd_classify(args):
    x = parse(args.expr)
    normal = manifold.normalize_homeo_type(x, reverse=args.reverse)
    print(normal.render())
    return 0


def _cmd_cover(args):
    x = parse(args.expr)
    if args.reverse:
        x = manifold.mirror(x)
    ls = cover.build_standard_cover(x)
    target = cover.w2_plus_w1sq(ls)
    print(f"b_plus_ell = {ls.b_plus_ell}")
    print(f"free_rank_ell = {ls.free_rank_ell}")
    print(f"torsion_bits = {ls.torsion_bits}")
    print(f"b1_ell = {ls.b1_ell} (reported, not computed)")
    print(f"w2_plus_w1sq free bits = {list(target.free_bits)}")
    print(f"w2_plus_w1sq torsion bits = {list(target.torsion_bits)}")
    return 0


def _cmd_spinc(args):
    x = parse(args.expr)
    if args.reverse:
        x = manifold.mirror(x)
    ls = cover.build_standard_cover(x)
    for c in cover.enumerate_characteristics(ls, args.bound):
        print(f"square = {c.square}: free = {list(c.free_part)}, "
              f"torsion = {list(c.torsion_part)}")
    return 0


def _cmd_certify(args):
    x = parse(args.expr)
    if args.reverse:
        x = manifold.mirror(x)
    try:
        cert = obstruct.certify(x, scenario=args.scenario, bound=args.bound)
    except HypothesesNotMet as e:
        if args.json:
            print(json.dumps({"verdict": "HypothesesNotMet",
                              "reason": str(e)}, indent=2))
        else:
            print(f"HypothesesNotMet: {e.args[0] if e.args else e}")
        return 3
    if args.json:
        print(emit_json(cert))
    else:
        print(f"verdict: {cert.verdict}")
        print(f"theorem: {cert.theorem_used}")
        print(f"base: T^{cert.base_dim}")
        for line in cert.transcript:
            print(f"  {line}")
    return 0 if cert.verdict == obstruct.NONSMOOTHABLE else 3


def _parse_constraint_file(path, k):
    """Read V1/W1 class data: sections with `rank N` then `w_i = <poly>`."""
    sections = {}
    current = None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("//")[0].strip()
            if not line:
                continue
            if line in ("V1", "W1"):
                current = line
                sections[current] = {"rank": None, "sw": {}}
                continue
            if current is None:
                raise ParseError(f"class data before section header: {line!r}")
            if line.startswith("rank"):
                sections[current]["rank"] = int(line.split()[1])
                continue
            m = re.fullmatch(r"w_(\d+)\s*=\s*(.*)", line)
            if not m:
                raise ParseError(f"cannot parse class data line {line!r}")
            sections[current]["sw"][int(m.group(1))] = parse_poly(
                m.group(2), k)
    out = {}
    for name in ("V1", "W1"):
        if name not in sections or sections[name]["rank"] is None:
            raise ParseError(f"missing section or rank for {name}")
        rank = sections[name]["rank"]
        top = max(sections[name]["sw"], default=0)
        sw = tuple(sections[name]["sw"].get(i, charpoly.ExtPoly.zero(k))
                   for i in range(1, max(rank, top) + 1))
        out[name] = charpoly.BundleClassData(k=k, rank=rank, sw=sw)
    return out["V1"], out["W1"]


def parse_poly(text, k):
    """Parse the canonical polynomial syntax (sums of t/u/v monomials)."""
    text = text.strip()
    if text == "0":
        return charpoly.ExtPoly.zero(k)
    poly = charpoly.ExtPoly.zero(k)
    for term in text.split("+"):
        term = term.strip()
        out = charpoly.ExtPoly.one(k)
        for factor in term.split("*"):
            factor = factor.strip()
            if factor == "1":
                continue
            m = re.fullmatch(r"t(\d+)", factor)
            if m:
                out = out * charpoly.ExtPoly.t(k, int(m.group(1)))
                continue
            m = re.fullmatch(r"u(?:\^(\d+))?", factor)
            if m:
                power = int(m.group(1) or 1)
                out = out * charpoly.ExtPoly.u(k, power)
                continue
            raise ParseError(f"cannot parse polynomial factor {factor!r}")
        poly = poly + out
    return poly


def _cmd_constraints(args):
    x = parse(args.expr)
    if args.reverse:
        x = manifold.mirror(x)
    normalized = manifold.normalize_homeo_type(x)
    ls = cover.build_standard_cover(normalized)
    slots = manifold.reflection_slots(normalized)
    k = min(ls.b_plus_ell, len(slots)) if args.generators is None \
        else args.generators
    fam = obstruct.build_family(normalized, ls, slots[:k])
    v1, w1 = _parse_constraint_file(args.data, fam.k)
    report = obstruct.corollary_constraints(fam, v1, w1)
    print(f"n_minus_m = {report.n_minus_m}")
    print(f"e(H+) = {report.euler}")
    for entry in report.entries:
        status = "ok" if entry.satisfied else "VIOLATED"
        print(f"degree {entry.degree}: w_i([W1]-[V1]) = {entry.virtual_class}"
              f", product = {entry.product} [{status}]")
    print("Incompatible" if report.incompatible else "Compatible")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="fourfold",
        description="Non-smoothability certificates for families of "
                    "4-manifolds over tori, with exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("expr", help="connected-sum expression")
        sp.add_argument("--reverse", action="store_true",
                        help="reverse orientation before processing")

    sp = sub.add_parser("invariants", help="signature, Betti numbers, spin, KS")
    common(sp)
    sp.set_defaults(func=_cmd_invariants)

    sp = sub.add_parser("classify", help="homeomorphism normal form")
    common(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("cover", help="twisted-coefficient invariants")
    common(sp)
    sp.set_defaults(func=_cmd_cover)

    sp = sub.add_parser("spinc", help="enumerate characteristic classes")
    common(sp)
    sp.add_argument("--bound", type=int, default=1)
    sp.set_defaults(func=_cmd_spinc)

    sp = sub.add_parser("certify", help="run the full certificate pipeline")
    common(sp)
    sp.add_argument("--scenario", default="auto",
                    choices=["auto", "spin", "nonspin", "enriques"])
    sp.add_argument("--bound", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("constraints",
                        help="index-bundle vanishing constraints from a data file")
    common(sp)
    sp.add_argument("data", help="class data file with V1/W1 sections")
    sp.add_argument("--generators", type=int, default=None)
    sp.set_defaults(func=_cmd_constraints)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FourfoldError as e:
        print(str(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
