"""Double covers as local coefficient systems, and characteristic classes.

The cover recipe twists the coefficient system nontrivially on every
S1xY / S2xSigma summand and leaves the simply-connected summands alone.
Those twisted summands then contribute nothing to the free part of the
twisted second cohomology, so candidate first Chern classes live on the
free lattice of the remaining summands plus one torsion bit per W block.
"""

import functools
import itertools
from dataclasses import dataclass

from . import lattice
from .errors import DimensionMismatch, NoNontrivialCoverAvailable
from .manifold import N_KINDS

# entries allowed per atom coordinate for a characteristic vector:
# diagonal coordinates must be odd, even-atom coordinates must be even


@dataclass(frozen=True)
class LocalSystem:
    base: object                 # ManifoldExpr
    selection: tuple             # bool per block: cover nontrivial there
    nontrivial: bool
    b_plus_ell: int
    free_rank_ell: int
    torsion_bits: int            # one per W block
    w1_sq_zero: bool
    b1_ell: int = 0
    b1_ell_caveat: bool = True   # b1^ell is reported, never computed

    def free_form(self):
        """Free part of H^2 with twisted coefficients: the non-N summands."""
        atoms = ()
        for block, twisted in zip(self.base.summands, self.selection):
            if not twisted:
                atoms += block.form_atoms
        return lattice.IntersectionForm(atoms)

    def free_block_offsets(self):
        """Map block index -> (offset, span) into the free twisted lattice."""
        offsets = {}
        off = 0
        for i, (block, twisted) in enumerate(
                zip(self.base.summands, self.selection)):
            if twisted:
                continue
            span = block.form.rank
            offsets[i] = (off, span)
            off += span
        return offsets

    def char_class(self, free_part, torsion_part=None):
        free_part = tuple(free_part)
        if torsion_part is None:
            torsion_part = (1,) * self.torsion_bits
        torsion_part = tuple(torsion_part)
        form = self.free_form()
        if len(free_part) != form.rank:
            raise DimensionMismatch(
                f"free part has length {len(free_part)}, "
                f"expected {form.rank}")
        if len(torsion_part) != self.torsion_bits:
            raise DimensionMismatch(
                f"torsion part has length {len(torsion_part)}, "
                f"expected {self.torsion_bits}")
        target = w2_plus_w1sq(self)
        mod2_ok = (lattice.is_characteristic(form, free_part)
                   and torsion_part == target.torsion_bits)
        return CharClass(
            free_part=free_part,
            torsion_part=torsion_part,
            square=lattice.square(form, free_part),
            mod2_ok=mod2_ok,
        )


@dataclass(frozen=True)
class CharClass:
    """Candidate twisted Euler class: free lattice vector plus torsion bits."""

    free_part: tuple
    torsion_part: tuple
    square: int
    mod2_ok: bool


@dataclass(frozen=True)
class Mod2Class:
    """A mod-2 class given per free coordinate and per W torsion generator."""

    free_bits: tuple
    torsion_bits: tuple

    def is_zero(self):
        return not any(self.free_bits) and not any(self.torsion_bits)


def build_standard_cover(x):
    """The standard cover: nontrivial on every S1xY / S2xSigma summand.

    The twisted coefficients kill the free second cohomology of those
    summands and contribute no w1-square, so b_+ with twisted coefficients
    equals b_+ of the remaining part.
    """
    selection = tuple(b.kind in N_KINDS for b in x.summands)
    if not any(selection):
        if x.h1z2_rank == 0:
            raise NoNontrivialCoverAvailable(
                "H^1(X; Z2) = 0: no nontrivial double cover exists")
        raise NoNontrivialCoverAvailable(
            "no S1xY or S2xSigma summand: the standard cover recipe "
            "does not apply")
    free_atoms = ()
    for block, twisted in zip(x.summands, selection):
        if not twisted:
            free_atoms += block.form_atoms
    free_form = lattice.IntersectionForm(free_atoms)
    inv = lattice.invariants(free_form)
    return LocalSystem(
        base=x,
        selection=selection,
        nontrivial=True,
        b_plus_ell=inv.b_plus,
        free_rank_ell=inv.rank,
        torsion_bits=x.torsion_slots,
        w1_sq_zero=True,
    )


def w2_plus_w1sq(ls):
    """The mod-2 class every twisted Euler class must reduce to.

    On free coordinates this is the canonical characteristic vector mod 2
    (1 on rank-1 diagonal coordinates, 0 on even atoms); on each W block it
    is the nonzero torsion bit; on twisted summands it vanishes.
    """
    bits = []
    for atom in ls.free_form().atoms:
        if isinstance(atom, lattice.Diag):
            bits.append(1)
        else:
            bits.extend([0] * atom.rank)
    return Mod2Class(
        free_bits=tuple(bits),
        torsion_bits=(1,) * ls.torsion_bits,
    )


def spinc_minus_exists(ls, c):
    """True iff the candidate class reduces to w2 + w1^2 mod 2."""
    form = ls.free_form()
    if len(c.free_part) != form.rank:
        raise DimensionMismatch(
            f"free part has length {len(c.free_part)}, expected {form.rank}")
    if len(c.torsion_part) != ls.torsion_bits:
        raise DimensionMismatch(
            f"torsion part has length {len(c.torsion_part)}, "
            f"expected {ls.torsion_bits}")
    target = w2_plus_w1sq(ls)
    if tuple(b % 2 for b in c.torsion_part) != target.torsion_bits:
        return False
    return lattice.is_characteristic(form, c.free_part)


@functools.lru_cache(maxsize=None)
def _atom_candidates(atom, bound):
    """Per-atom characteristic coordinate blocks with entries in [-bound, bound]."""
    entries = range(-bound, bound + 1)
    r = atom.rank
    out = []
    for combo in itertools.product(entries, repeat=r):
        single = lattice.IntersectionForm((atom,))
        if lattice.is_characteristic(single, combo):
            out.append(combo)
    return out


def enumerate_characteristics(ls, bound=1):
    """All valid classes with free entries in [-bound, bound], square descending.

    The characteristic condition splits over atoms, so candidates are built
    per atom and combined; torsion bits are forced to the target class.
    Output order is canonical: square descending, then lexicographic.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    form = ls.free_form()
    per_atom = [_atom_candidates(atom, bound) for atom in form.atoms]
    out = []
    for parts in itertools.product(*per_atom):
        free = tuple(x for part in parts for x in part)
        out.append(ls.char_class(free))
    out.sort(key=lambda c: (-c.square, c.free_part))
    return out
