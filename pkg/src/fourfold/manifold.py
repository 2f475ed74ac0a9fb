"""Formal connected sums of oriented closed 4-manifold blocks.

A ManifoldExpr is a multiset of standard blocks with additive invariants
(signature, Betti numbers, Kirby-Siebenmann bit) and a normalizer that
rewrites the simply-connected part into its homeomorphism normal form.
"""

from dataclasses import dataclass

from . import lattice
from .errors import (
    DefinitePartUnsupported,
    GenusZero,
    OrientationReversalUnavailable,
    SpinKSInconsistent,
)

# kinds whose blocks are simply connected and carry the free intersection form
SIMPLY_CONNECTED_KINDS = (
    "CP2", "NegCP2", "NegCP2Fake", "S2xS2", "K3", "NegK3", "E8",
)
# kinds forming the N part of a connected sum (nontrivial double covers live here)
N_KINDS = ("S1xY", "S2xSigma")

_KIND_ORDER = {
    "E8": 0, "K3": 1, "NegK3": 2, "S2xS2": 3, "CP2": 4, "NegCP2": 5,
    "NegCP2Fake": 6, "W": 7, "S1xY": 8, "S2xSigma": 9,
}


@dataclass(frozen=True)
class Block:
    kind: str
    sign: int = 0    # only for E8
    param: int = 0   # b1(Y) for S1xY, genus for S2xSigma

    def __post_init__(self):
        if self.kind == "S2xSigma" and self.param < 1:
            raise GenusZero("S2xSigma requires positive genus")
        if self.kind == "S1xY" and self.param < 0:
            raise ValueError("S1xY requires b1(Y) >= 0")
        if self.kind == "E8" and self.sign not in (1, -1):
            raise ValueError("E8 block needs sign +1 or -1")

    @property
    def form_atoms(self):
        k = self.kind
        if k == "CP2":
            return (lattice.Diag(1),)
        if k in ("NegCP2", "NegCP2Fake"):
            return (lattice.Diag(-1),)
        if k == "S2xS2":
            return (lattice.Hyperbolic(),)
        if k == "K3":
            return (lattice.E8(-1), lattice.E8(-1)) + (lattice.Hyperbolic(),) * 3
        if k == "NegK3":
            return (lattice.E8(1), lattice.E8(1)) + (lattice.Hyperbolic(),) * 3
        if k == "E8":
            return (lattice.E8(self.sign),)
        if k == "S1xY":
            return (lattice.Hyperbolic(),) * self.param
        if k == "S2xSigma":
            return (lattice.Hyperbolic(),)
        return ()  # W, S4

    @property
    def form(self):
        return lattice.IntersectionForm(self.form_atoms)

    @property
    def b1(self):
        if self.kind == "S1xY":
            return 1 + self.param
        if self.kind == "S2xSigma":
            return 2 * self.param
        return 0

    @property
    def b2(self):
        return self.form.rank

    @property
    def sigma(self):
        return sum(_ATOM_SIGMA[type(a).__name__] * getattr(a, "sign", getattr(a, "eps", 1))
                   for a in self.form_atoms)

    @property
    def spin(self):
        # W is non-spin through its torsion w2; every other block is spin
        # exactly when its free intersection form is even
        if self.kind in ("W", "NegCP2Fake", "CP2", "NegCP2"):
            return False
        return True

    @property
    def ks(self):
        return 1 if self.kind in ("E8", "NegCP2Fake", "W") else 0

    @property
    def w2_nonzero_torsion(self):
        return self.kind == "W"

    @property
    def h1z2_rank(self):
        if self.kind == "S1xY":
            return 1 + self.param
        if self.kind == "S2xSigma":
            return 2 * self.param
        if self.kind == "W":
            return 1
        return 0

    def render(self):
        if self.kind == "S1xY":
            return f"S1xY(b1={self.param})"
        if self.kind == "S2xSigma":
            return f"S2xSigma(g={self.param})"
        if self.kind == "E8":
            return "E8" if self.sign > 0 else "-E8"
        return {"CP2": "CP2", "NegCP2": "-CP2", "NegCP2Fake": "-CP2fake",
                "S2xS2": "S2xS2", "K3": "K3", "NegK3": "-K3", "W": "W"}[self.kind]


_ATOM_SIGMA = {"Diag": 1, "Hyperbolic": 0, "E8": 8}


def _sort_key(b):
    return (_KIND_ORDER[b.kind], -b.sign, b.param)


# convenience constructors

def CP2():
    return Block("CP2")


def NegCP2():
    return Block("NegCP2")


def NegCP2Fake():
    return Block("NegCP2Fake")


def S2xS2():
    return Block("S2xS2")


def K3():
    return Block("K3")


def NegK3():
    return Block("NegK3")


def E8Block(sign=-1):
    return Block("E8", sign=sign)


def W():
    return Block("W")


def S1xY(b1=0):
    return Block("S1xY", param=b1)


def S2xSigma(genus):
    return Block("S2xSigma", param=genus)


def _expand(block):
    """Enriques surfaces decompose as -E8 # S2xS2 # W; S4 is the identity."""
    if block.kind == "Enriques":
        return (E8Block(-1), S2xS2(), W())
    if block.kind == "S4":
        return ()
    return (block,)


@dataclass(frozen=True)
class ManifoldExpr:
    summands: tuple = ()

    def __post_init__(self):
        blocks = []
        for b in self.summands:
            if b.kind in ("Enriques", "S4"):
                blocks.extend(_expand(b))
            else:
                blocks.append(b)
        object.__setattr__(self, "summands",
                           tuple(sorted(blocks, key=_sort_key)))

    @property
    def form(self):
        atoms = ()
        for b in self.summands:
            atoms += b.form_atoms
        return lattice.IntersectionForm(atoms)

    @property
    def sigma(self):
        return sum(b.sigma for b in self.summands)

    @property
    def b1(self):
        return sum(b.b1 for b in self.summands)

    @property
    def b2(self):
        return sum(b.b2 for b in self.summands)

    @property
    def b_plus(self):
        return lattice.invariants(self.form).b_plus

    @property
    def b_minus(self):
        return lattice.invariants(self.form).b_minus

    @property
    def spin(self):
        return all(b.spin for b in self.summands)

    @property
    def ks(self):
        return sum(b.ks for b in self.summands) % 2

    @property
    def torsion_slots(self):
        return sum(1 for b in self.summands if b.kind == "W")

    @property
    def h1z2_rank(self):
        return sum(b.h1z2_rank for b in self.summands)

    def sc_part(self):
        return tuple(b for b in self.summands if b.kind in SIMPLY_CONNECTED_KINDS)

    def non_sc_part(self):
        return tuple(b for b in self.summands if b.kind not in SIMPLY_CONNECTED_KINDS)

    def n_part(self):
        return tuple(b for b in self.summands if b.kind in N_KINDS)

    def render(self):
        if not self.summands:
            return "S4"
        return " # ".join(b.render() for b in self.summands)


def expr(*blocks):
    return ManifoldExpr(tuple(blocks))


def connected_sum(a, b):
    return ManifoldExpr(a.summands + b.summands)


_MIRROR = {"CP2": "NegCP2", "NegCP2": "CP2", "K3": "NegK3", "NegK3": "K3"}


def mirror(x):
    """Orientation reversal: swap each block for its mirror."""
    out = []
    for b in x.summands:
        if b.kind in _MIRROR:
            out.append(Block(_MIRROR[b.kind]))
        elif b.kind == "E8":
            out.append(E8Block(-b.sign))
        elif b.kind == "NegCP2Fake":
            raise OrientationReversalUnavailable(
                "the positively-oriented fake CP2 block is not modeled")
        else:
            out.append(b)  # S2xS2, W, S1xY, S2xSigma are mirror-symmetric here
    return ManifoldExpr(tuple(out))


def _normalize_sc(sc_blocks, w_count):
    """Normal form of the simply-connected part, as a tuple of blocks.

    w_count is the number of W summands in the ambient expression; a
    rational homology sphere with torsion w2 pairs with E8 summands in the
    normal form used for the Enriques-type decompositions.
    """
    sc = ManifoldExpr(sc_blocks)
    inv = lattice.invariants(sc.form)
    if inv.rank == 0:
        return ()
    if inv.definite != "indefinite":
        raise DefinitePartUnsupported(
            "the simply-connected part must be indefinite or empty")
    ks = sum(b.ks for b in sc_blocks) % 2
    sigma, bp, bm = inv.signature, inv.b_plus, inv.b_minus

    if inv.parity == "even":
        p = abs(sigma) // 8
        if ks != p % 2:
            raise SpinKSInconsistent(
                "spin part violates KS = sigma/8 mod 2")
        sign = 1 if sigma > 0 else -1
        return (E8Block(sign),) * p + (S2xS2(),) * min(bp, bm)

    # odd case
    if w_count >= 1:
        # Enriques-style shape: w_count E8 summands plus a diagonal rest
        for sign, heavy in ((-1, bm), (1, bp)):
            if ks == w_count % 2 and heavy - 8 * w_count >= 0:
                n_plus = bp if sign < 0 else bp - 8 * w_count
                n_minus = bm - 8 * w_count if sign < 0 else bm
                if n_plus + n_minus >= 1:
                    return ((E8Block(sign),) * w_count
                            + (CP2(),) * n_plus + (NegCP2(),) * n_minus)
    if ks == 0:
        if sigma <= -9:
            return ((NegCP2(),) * (-sigma - 9) + (E8Block(-1),)
                    + (NegCP2Fake(),) + (S2xS2(),) * bp)
        if sigma >= 9:
            return ((CP2(),) * (sigma - 7) + (E8Block(1),)
                    + (NegCP2Fake(),) + (S2xS2(),) * (bm - 1))
        return (CP2(),) * bp + (NegCP2(),) * bm
    # ks == 1: one fake summand fixes the Kirby-Siebenmann bit
    return (CP2(),) * bp + (NegCP2(),) * (bm - 1) + (NegCP2Fake(),)


def normalize_homeo_type(x, reverse=False):
    """Rewrite the simply-connected part into Freedman normal form.

    Blocks with b1 and the W blocks pass through unchanged.  With
    reverse=True the whole expression is mirrored first.
    """
    if reverse:
        x = mirror(x)
    sc = x.sc_part()
    rest = x.non_sc_part()
    normal_sc = _normalize_sc(sc, x.torsion_slots)
    return ManifoldExpr(normal_sc + rest)


@dataclass(frozen=True)
class Slot:
    """A reflection slot: one H+-flipping self-map supported on one summand."""

    block_index: int   # index into expr.summands
    kind: str          # "S2xS2" or "CP2"

    def act(self, component):
        """Induced sign action on the block's H^2 coordinates."""
        if self.kind == "S2xS2":
            a, b = component
            return (-b, -a)
        return (-component[0],)


def reflection_slots(x):
    """One slot per S2xS2 summand and per CP2 summand, in block order."""
    slots = []
    for i, b in enumerate(x.summands):
        if b.kind in ("S2xS2", "CP2"):
            slots.append(Slot(block_index=i, kind=b.kind))
    return tuple(slots)


def block_table():
    """Machine-readable table of block invariants (parametric blocks sampled)."""
    samples = [
        CP2(), NegCP2(), NegCP2Fake(), S2xS2(), K3(), NegK3(),
        E8Block(1), E8Block(-1), W(), S1xY(0), S1xY(1), S2xSigma(1),
        S2xSigma(2),
    ]
    table = {}
    for b in samples:
        table[b.render()] = {
            "b1": b.b1,
            "b2": b.b2,
            "sigma": b.sigma,
            "spin": b.spin,
            "ks": b.ks,
            "h1z2_rank": b.h1z2_rank,
        }
    # Enriques is a composite: report the invariants of its expansion
    e = ManifoldExpr((Block("Enriques"),))
    table["Enriques"] = {
        "b1": e.b1, "b2": e.b2, "sigma": e.sigma,
        "spin": e.spin, "ks": e.ks, "h1z2_rank": e.h1z2_rank,
    }
    return table
