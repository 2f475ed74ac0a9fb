"""Families over tori and the non-smoothability certificate engine.

A family is a multiple mapping torus of commuting reflections, one per
torus generator, each supported on a single S2xS2 or CP2 summand.  The
positive-cohomology bundle of such a family splits as one line bundle per
generator plus a trivial complement; its Stiefel-Whitney classes feed the
two obstruction checks:

  theorem A: top class nonzero and c1^2 > sigma  -> no smooth structure;
  theorem B (c1 = 0): top or next-to-top class nonzero and sigma < 0
             -> no smooth structure.
"""

from dataclasses import dataclass

from . import charpoly, cover, manifold
from .errors import (
    DefinitePartUnsupported,
    HypothesesNotMet,
    NoNontrivialCoverAvailable,
    PreconditionViolated,
    RankMismatch,
    SlotUnavailable,
    TooManyGenerators,
    ZeroClassUnavailable,
)

NONSMOOTHABLE = "NonSmoothable"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class FamilyDescriptor:
    manifold: object            # ManifoldExpr, normalized
    cover: object               # LocalSystem
    generators: tuple           # one Slot per torus generator
    k: int                      # base torus dimension
    h_plus_bundle: object       # BundleClassData over T^k


@dataclass(frozen=True)
class Certificate:
    verdict: str
    theorem_used: str           # "ThmA", "ThmB", or "none"
    base_dim: int
    b_plus_ell: int
    witness_monomial: str
    c1_square: object           # int or None
    sigma: int
    index_kind: str             # "real_m_minus_n", "complex_r_minus_s", or ""
    index_value: object         # int or None
    inputs: tuple               # ordered (key, value) string pairs
    transcript: tuple           # ordered strings of exact arithmetic facts

    def input(self, key):
        return dict(self.inputs)[key]


def build_family(x, ls, slots):
    """Multiple mapping torus over T^k from k distinct reflection slots."""
    slots = tuple(slots)
    available = set(manifold.reflection_slots(x))
    for s in slots:
        if s not in available:
            raise SlotUnavailable(f"no reflection slot {s} on {x.render()}")
    if len(set(slots)) != len(slots):
        raise SlotUnavailable("reflection slots must be pairwise distinct")
    k = len(slots)
    if k > ls.b_plus_ell:
        raise TooManyGenerators(
            f"{k} generators exceed b_plus_ell = {ls.b_plus_ell}")
    bundle = charpoly.total_sw_line_sum(
        k, [(i,) for i in range(1, k + 1)], ls.b_plus_ell - k)
    return FamilyDescriptor(
        manifold=x, cover=ls, generators=slots, k=k, h_plus_bundle=bundle)


def lift_valid(f, c):
    """True iff every generator carries the candidate class to plus/minus itself.

    Slot reflections move only their own summand; the sign ambiguity is
    allowed because the characteristic bundle is an O(2)-bundle, so the
    twisted Euler class is defined up to the cover's sign action.
    """
    offsets = f.cover.free_block_offsets()
    for slot in f.generators:
        off, span = offsets[slot.block_index]
        comp = tuple(c.free_part[off:off + span])
        acted = slot.act(comp)
        if acted != comp and acted != tuple(-x for x in comp):
            return False
    return True


def _base_inputs(f, scenario, bound):
    return (
        ("expression", f.manifold.render()),
        ("normalized", f.manifold.render()),
        ("scenario", scenario),
        ("bound", str(bound)),
    )


def check_theorem_A(f, c, scenario="manual", bound=1):
    """Top-class obstruction: fires when w_top(H+) != 0 and c1^2 > sigma."""
    if not c.mod2_ok:
        raise PreconditionViolated(
            "candidate class does not reduce to w2 + w1^2")
    if not lift_valid(f, c):
        raise PreconditionViolated(
            "generators do not lift: class not carried to plus/minus itself")
    b = f.cover.b_plus_ell
    w_top = charpoly.equivariant_euler(f.h_plus_bundle, "pm1_fixed")
    sigma = f.manifold.sigma
    transcript = [
        f"b_plus_ell = {b}",
        f"base_dim = {f.k}",
        f"w_{b}(H+(E,l)) = {w_top.render()}",
        f"c1_square = {c.square}",
        f"sigma = {sigma}",
    ]
    if w_top and c.square > sigma:
        m_minus_n = (c.square - sigma) // 4
        transcript += [
            f"inequality c1_square <= sigma violated: {c.square} > {sigma}",
            f"real index m_minus_n = (c1_square - sigma)/4 = {m_minus_n} > 0",
        ]
        return Certificate(
            verdict=NONSMOOTHABLE, theorem_used="ThmA", base_dim=f.k,
            b_plus_ell=b, witness_monomial=w_top.render(),
            c1_square=c.square, sigma=sigma,
            index_kind="real_m_minus_n", index_value=m_minus_n,
            inputs=_base_inputs(f, scenario, bound),
            transcript=tuple(transcript),
        )
    if not w_top:
        transcript.append(f"hypothesis failed: w_{b}(H+(E,l)) = 0")
    else:
        transcript.append(
            f"inequality c1_square <= sigma holds: {c.square} <= {sigma}")
    return Certificate(
        verdict=INCONCLUSIVE, theorem_used="none", base_dim=f.k,
        b_plus_ell=b, witness_monomial="", c1_square=c.square, sigma=sigma,
        index_kind="", index_value=None,
        inputs=_base_inputs(f, scenario, bound),
        transcript=tuple(transcript),
    )


def check_theorem_B(f, scenario="manual", bound=1):
    """Zero-class obstruction: fires when w_b or w_{b-1} is nonzero and sigma < 0."""
    target = cover.w2_plus_w1sq(f.cover)
    if not target.is_zero():
        raise ZeroClassUnavailable(
            "w2 + w1^2 != 0: no candidate class with c1 = 0 exists")
    b = f.cover.b_plus_ell
    w_b = f.h_plus_bundle.w(b)
    w_b1 = f.h_plus_bundle.w(b - 1)
    euler = charpoly.equivariant_euler(f.h_plus_bundle, "c4_hplus")
    sigma = f.manifold.sigma
    witness = w_b if w_b else w_b1
    transcript = [
        f"b_plus_ell = {b}",
        f"base_dim = {f.k}",
        f"w_{b}(H+(E,l)) = {w_b.render()}",
        f"w_{b - 1}(H+(E,l)) = {w_b1.render()}",
        f"e_C4(H+(E,l)) = {euler.render()}",
        "c1_square = 0",
        f"sigma = {sigma}",
    ]
    if euler and sigma < 0:
        r_minus_s = -sigma // 8
        transcript += [
            f"inequality sigma >= 0 violated: {sigma} < 0",
            f"complex index r_minus_s = -sigma/8 = {r_minus_s} > 0",
        ]
        return Certificate(
            verdict=NONSMOOTHABLE, theorem_used="ThmB", base_dim=f.k,
            b_plus_ell=b, witness_monomial=witness.render(),
            c1_square=0, sigma=sigma,
            index_kind="complex_r_minus_s", index_value=r_minus_s,
            inputs=_base_inputs(f, scenario, bound),
            transcript=tuple(transcript),
        )
    if not euler:
        transcript.append(
            f"hypothesis failed: w_{b} and w_{b - 1} of H+(E,l) both vanish")
    else:
        transcript.append(f"inequality sigma >= 0 holds: {sigma} >= 0")
    return Certificate(
        verdict=INCONCLUSIVE, theorem_used="none", base_dim=f.k,
        b_plus_ell=b, witness_monomial="", c1_square=0, sigma=sigma,
        index_kind="", index_value=None,
        inputs=_base_inputs(f, scenario, bound),
        transcript=tuple(transcript),
    )


@dataclass(frozen=True)
class ConstraintEntry:
    degree: int
    virtual_class: str
    product: str
    satisfied: bool


@dataclass(frozen=True)
class ConstraintReport:
    n_minus_m: int
    euler: str
    entries: tuple
    incompatible: bool


def corollary_constraints(f, v1, w1):
    """Vanishing constraints on user-supplied index-bundle class data.

    For every degree above the virtual index rank, the virtual class of
    [W1] - [V1] times the Euler class of H+ must vanish on a smooth family;
    a nonzero product marks the supplied data incompatible.
    """
    if v1.k != f.k or w1.k != f.k:
        raise RankMismatch(
            f"class data must live over T^{f.k}")
    virt = charpoly.virtual_sw(w1, v1)
    euler = charpoly.equivariant_euler(f.h_plus_bundle, "pm1_fixed")
    n_minus_m = w1.rank - v1.rank
    entries = []
    for i in range(max(0, n_minus_m + 1), f.k + 1):
        product = virt[i] * euler
        entries.append(ConstraintEntry(
            degree=i,
            virtual_class=virt[i].render(),
            product=product.render(),
            satisfied=product.is_zero(),
        ))
    return ConstraintReport(
        n_minus_m=n_minus_m,
        euler=euler.render(),
        entries=tuple(entries),
        incompatible=any(not e.satisfied for e in entries),
    )


def _prepare(x):
    """Orient so the simply-connected signature is nonpositive, then normalize."""
    sc_sigma = sum(b.sigma for b in x.sc_part())
    if sc_sigma > 0:
        x = manifold.mirror(x)
    try:
        return manifold.normalize_homeo_type(x)
    except DefinitePartUnsupported:
        raise HypothesesNotMet(
            "indefinite simply-connected part required") from None


def _standard_cover(x):
    try:
        return cover.build_standard_cover(x)
    except NoNontrivialCoverAvailable as e:
        raise HypothesesNotMet(str(e)) from None


def _with_inputs(cert, original, normalized, scenario, bound):
    inputs = (
        ("expression", original.render()),
        ("normalized", normalized.render()),
        ("scenario", scenario),
        ("bound", str(bound)),
    )
    return Certificate(**{**cert.__dict__, "inputs": inputs})


def _certify_spin(x, bound):
    if x.torsion_slots:
        raise HypothesesNotMet("spin scenario does not apply to W blocks")
    normalized = _prepare(x)
    sc = manifold.ManifoldExpr(normalized.sc_part())
    if not sc.spin:
        raise HypothesesNotMet("spin simply-connected part required")
    if abs(sc.sigma) <= 8:
        raise HypothesesNotMet("|sigma(M)| > 8")
    ls = _standard_cover(normalized)
    n = ls.b_plus_ell
    slots = [s for s in manifold.reflection_slots(normalized)
             if s.kind == "S2xS2"]
    fam = build_family(normalized, ls, slots[:n - 1])
    cert = check_theorem_B(fam, scenario="spin", bound=bound)
    return _with_inputs(cert, x, normalized, "spin", bound)


def _certify_thm_a(x, scenario, bound):
    """Shared path for the non-spin and Enriques scenarios."""
    normalized = _prepare(x)
    ls = _standard_cover(normalized)
    n = ls.b_plus_ell
    slots = list(manifold.reflection_slots(normalized))
    if len(slots) < n:
        raise HypothesesNotMet(
            f"need {n} reflection slots, found {len(slots)}")
    fam = build_family(normalized, ls, slots[:n])
    fallback = None
    for c in cover.enumerate_characteristics(ls, bound):
        if not lift_valid(fam, c):
            continue
        cert = check_theorem_A(fam, c, scenario=scenario, bound=bound)
        if cert.verdict == NONSMOOTHABLE:
            return _with_inputs(cert, x, normalized, scenario, bound)
        if fallback is None:
            fallback = cert
    if fallback is None:
        raise HypothesesNotMet("no liftable characteristic class found")
    return _with_inputs(fallback, x, normalized, scenario, bound)


def _certify_nonspin(x, bound):
    if x.torsion_slots:
        raise HypothesesNotMet(
            "non-spin scenario does not apply to W blocks")
    if x.ks != 0:
        raise HypothesesNotMet(
            "Kirby-Siebenmann class must vanish for a smooth manifold")
    normalized = _prepare(x)
    sc = manifold.ManifoldExpr(normalized.sc_part())
    if sc.spin:
        raise HypothesesNotMet("non-spin simply-connected part required")
    if abs(sc.sigma) <= 8:
        raise HypothesesNotMet("|sigma(M)| > 8")
    return _certify_thm_a(x, "nonspin", bound)


def _certify_enriques(x, bound):
    if x.torsion_slots < 1:
        raise HypothesesNotMet("at least one Enriques block required")
    if x.ks != 0:
        raise HypothesesNotMet(
            "Kirby-Siebenmann class must vanish for a smooth manifold")
    return _certify_thm_a(x, "enriques", bound)


_SCENARIOS = {
    "spin": _certify_spin,
    "nonspin": _certify_nonspin,
    "enriques": _certify_enriques,
}


def certify(x, scenario="auto", bound=1):
    """End-to-end certificate: normalize, cover, build family, run checkers.

    auto tries enriques, then nonspin, then spin; the first NonSmoothable
    certificate wins.  Raises HypothesesNotMet when no scenario applies.
    """
    if scenario in _SCENARIOS:
        return _SCENARIOS[scenario](x, bound)
    if scenario != "auto":
        raise ValueError(f"unknown scenario {scenario!r}")
    failures = []
    fallback = None
    for name in ("enriques", "nonspin", "spin"):
        try:
            cert = _SCENARIOS[name](x, bound)
        except HypothesesNotMet as e:
            failures.append(f"{name}: {e.args[0] if e.args else e}")
            continue
        if cert.verdict == NONSMOOTHABLE:
            return cert
        if fallback is None:
            fallback = cert
    if fallback is not None:
        return fallback
    raise HypothesesNotMet("; ".join(failures))


def replay(cert):
    """Re-run a certificate from its echoed inputs; True iff it reproduces."""
    from .cli import parse

    x = parse(cert.input("expression"))
    again = certify(x, scenario=cert.input("scenario"),
                    bound=int(cert.input("bound")))
    return again == cert
