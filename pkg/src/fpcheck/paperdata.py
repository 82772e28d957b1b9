"""Registry of the Mazur-type construction's combinatorial data, and a
one-call verification suite over it.

The knot complement's group, the derivation of its A5 quotient, the handle
counts of the five manifolds involved (each as a function of ``n >= 2``) and
the intersection numbers of the knot with a sphere fibre are stored here as
constants. Relations are transcribed in the TeX notation they are quoted in
and converted on load, so every stored display can be compared character
for character with its anchor.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import __version__
from .abelian import (
    HandleCountTable,
    abelian_invariants,
    determinant,
    euler_characteristic,
    relation_matrix,
)
from .coset import DEFAULT_MAX_COSETS, order, permutation_rep
from .permgrp import ClosureOverflow, SearchOverflow, closure, find_epimorphism, satisfies
from .tietze import DerivationScript, DerivationStep, replay_derivation
from .words import Presentation, parse_relations

__all__ = [
    "PaperFact",
    "IntersectionData",
    "CheckResult",
    "VerificationReport",
    "tex_to_text",
    "complement_presentation",
    "target_presentation",
    "derivation_script",
    "handle_tables",
    "intersection_data",
    "presentation_from_diagram",
    "facts",
    "verify_paper",
    "PASS",
    "FAIL",
    "INCONCLUSIVE",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


# --------------------------------------------------------------------------
# TeX relation strings

_TEX_TOKEN = re.compile(
    r"\s*(?:(?P<sym>[A-Za-z])(?:_(?:\{(?P<sub1>\w+)\}|(?P<sub2>\w)))?"
    r"|(?P<lp>\()|(?P<rp>\))|(?P<eq>=)|(?P<one>1)"
    r"|\^(?:\{(?P<exp1>-?\d+)\}|(?P<exp2>-?\d)))")


def tex_to_text(tex: str) -> str:
    """``x_2^{-2}x_1`` -> ``x2^-2 x1``; ``(ab)^5=1`` -> ``( a b )^5 = 1``."""
    out = []
    pos = 0
    tex = tex.strip()
    while pos < len(tex):
        m = _TEX_TOKEN.match(tex, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot read {tex[pos:]!r}")
        if m.group("sym"):
            out.append(m.group("sym") + (m.group("sub1") or m.group("sub2") or ""))
        elif m.group("lp"):
            out.append("(")
        elif m.group("rp"):
            out.append(")")
        elif m.group("eq"):
            out.append("=")
        elif m.group("one"):
            out.append("1")
        else:
            out[-1] += "^" + (m.group("exp1") or m.group("exp2"))
        pos = m.end()
    return " ".join(out)


def _tex_relators(tex_relations: Sequence[str], symbols) -> tuple:
    return tuple(w for t in tex_relations for w in parse_relations(tex_to_text(t), symbols))


def _tex_presentation(symbols, tex_relations, label="") -> Presentation:
    return Presentation(tuple(symbols), _tex_relators(tex_relations, symbols), label)


# --------------------------------------------------------------------------
# Facts


@dataclass(frozen=True)
class PaperFact:
    id: str
    payload: object
    source: str
    quote: str

    def __post_init__(self):
        if not self.quote:
            raise ValueError(f"fact {self.id} has no anchor quote")


@dataclass(frozen=True)
class IntersectionData:
    geometric: int
    algebraic: int

    def __post_init__(self):
        if self.geometric < 0:
            raise ValueError("negative geometric intersection number")

    def consistent(self) -> bool:
        """Signed count bounded by, and congruent mod 2 to, the point count."""
        return (abs(self.algebraic) <= self.geometric
                and (self.geometric - self.algebraic) % 2 == 0)


XS = ("x1", "x2", "x3")
AB = ("a", "b")

COMPLEMENT_TEX = (
    "x_1x_2x_1x_2^{-1}x_1^{-1}x_2^{-1}=1",
    "x_2^{-1}x_3^{-1}x_2^{-1}x_3x_2x_3=1",
    "x_1^{-1}x_2x_3^{-1}=1",
)
TARGET_TEX = ("a^2=b^{3}=(ab)^5=1",)

# displays of the derivation, in order
_D_ELIM = ("x_1x_2x_1x_2^{-1}x_1^{-1}x_2^{-1}=1",
           "x_2^{-2}x_1x_2^{-1}x_1^{-1}x_2^2x_1^{-1}x_2=1")
_D_CONJ = ("x_1x_2x_1x_2^{-1}x_1^{-1}x_2^{-1}=1",
           "x_2^{-1}x_1x_2^{-1}x_1^{-1}x_2^2x_1^{-1}=1")
_D_CHANGE = ("a^2b^{-3}=1", "ab^{-2}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}b^2a^{-1}ba^{-1}=1")
_D_CONJ_A = ("a^2b^{-3}=1", "b^{-2}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}b^2a^{-1}b=1")
_D_CONJ_B = ("a^2b^{-3}=1", "b^{-1}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}b^2a^{-1}=1")
_D_QUOT = ("a^2=b^{3}=1", "b^{-1}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}b^2a^{-1}=1")
# the ten "multiply both sides" lines; relator form makes each a rewrite of
# the same relation modulo a^2 = b^3 = 1
_D_SHUTTLE = (
    "b^{-1}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}b^2=a",
    "b^{-1}ab^{-1}ab^{-1}a^{-1}b^2a^{-1}=ab",
    "b^{-1}ab^{-1}ab^{-1}a^{-1}b^2=aba",
    "b^{-1}ab^{-1}ab^{-1}a^{-1}=abab",
    "b^{-1}ab^{-1}ab^{-1}=ababa",
    "b^{-1}ab^{-1}a=ababab",
    "b^{-1}ab^{-1}=abababa",
    "b^{-1}a=abababab",
    "b^{-1}=ababababa",
    "1=ababababab",
)
_D_TORSION = ("a^2=b^{3}=1", "1=ababababab")
_D_FINAL = TARGET_TEX


def complement_presentation() -> Presentation:
    """Group of the knot complement, read off its handle diagram."""
    return _tex_presentation(XS, COMPLEMENT_TEX, "knot complement in S^n x S^2")


def target_presentation() -> Presentation:
    """The (2,3,5) triangle group presentation of A5."""
    return _tex_presentation(AB, TARGET_TEX, "A5")


def derivation_script() -> DerivationScript:
    """Step-by-step derivation from the complement group to A5.

    Relator indices are 0-based. The quotient step (index 5) is the only
    one that may shrink the group.
    """
    exp = _tex_presentation
    t = tex_to_text
    steps = (
        DerivationStep.eliminate(
            "x3", 2, expected=exp(XS[:2], _D_ELIM),
            note="solve relator 3 for x3"),
        DerivationStep.conjugate(
            1, "x2", expected=exp(XS[:2], _D_CONJ),
            note="conjugate relator 2 by x2"),
        DerivationStep.change(
            AB, ("a b^-1", "b^2 a^-1"), ("x1 x2 x1", "x2 x1"),
            expected=exp(AB, _D_CHANGE),
            note="a = x1 x2 x1, b = x2 x1"),
        DerivationStep.conjugate(
            1, "a^-1", expected=exp(AB, _D_CONJ_A),
            note="conjugate relator 2 by a^-1"),
        DerivationStep.conjugate(
            1, "b", expected=exp(AB, _D_CONJ_B),
            note="conjugate relator 2 by b"),
        DerivationStep.quotient(
            "a^2", "b^3",
            note="quotient by a^2 and b^3"),
        # a^2 b^-3 is trivial modulo a^2 and b^3; dropping it gives the display
        DerivationStep.replace(
            0, "1", expected=exp(AB, _D_QUOT),
            note="drop a^2 b^-3"),
        DerivationStep.normalize(
            0, {"a": 2, "b": 3}, expected=exp(AB, _D_TORSION),
            checkpoints=tuple(t(d) for d in _D_SHUTTLE),
            note="rewrite relator 1 modulo a^2, b^3; checkpoints are the ten shuttle lines"),
        DerivationStep.replace(
            0, "(a b)^5", expected=exp(AB, _D_FINAL),
            note="write the last relator as (ab)^5"),
    )
    return DerivationScript(steps, complement_presentation(), "complement group to A5")


QUOTIENT_STEP_INDEX = 5


def _table(dim, handles):
    return HandleCountTable.from_handles(dim, [(i, c) for i, c in handles if c])


def handle_tables(n: int) -> dict:
    """Handle counts of the five manifolds for a given ``n >= 2``.

    Indices that coincide for small ``n`` are merged additively.
    """
    if n < 2:
        raise ValueError("the construction needs n >= 2")
    return {
        "SnxS2": _table(n + 2, [(0, 1), (2, 1), (n, 1), (n + 2, 1)]),
        "Kn": _table(n, [(0, 3), (1, 2), (n - 1, 2), (n, 3)]),
        "complement": _table(n + 2, [(0, 1), (1, 3), (2, 3), (n, 3), (n + 1, 2)]),
        "X": _table(n + 3, [(0, 1), (n, 1), (n + 1, 1)]),
        "boundaryX": _table(n + 2, [(0, 1), (1, 3), (2, 3), (n, 3), (n + 1, 3), (n + 2, 1)]),
    }


def expected_euler_characteristics(n: int) -> dict:
    """Euler characteristics implied by topology, independent of the counts.

    S^n x S^2 is a product of spheres, K^n an n-sphere, X contractible, the
    boundary of X a homology (n+2)-sphere, and a codimension-2 complement
    has chi(ambient) - chi(knot).
    """
    sphere = lambda d: 1 + (-1) ** d  # noqa: E731
    return {
        "SnxS2": sphere(n) * sphere(2),
        "Kn": sphere(n),
        "complement": sphere(n) * sphere(2) - sphere(n),
        "X": 1,
        "boundaryX": sphere(n + 2),
    }


def intersection_data() -> IntersectionData:
    return IntersectionData(geometric=3, algebraic=1)


def presentation_from_diagram(dotted: Sequence[str], attaching: Sequence[Sequence]) -> Presentation:
    """Fundamental group presentation from a dotted-sphere handle diagram.

    ``dotted`` names the 1-handles (dotted spheres). Each entry of
    ``attaching`` lists, for one 2-handle, the dotted spheres its attaching
    circle passes through in order, as ``(name, sign)`` pairs. Higher
    handles do not affect the group and are not needed.
    """
    index = {s: i + 1 for i, s in enumerate(dotted)}
    rels = []
    for circle in attaching:
        w = []
        for name, sign in circle:
            if sign not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {sign}")
            w.append(index[name] * sign)
        rels.append(tuple(w))
    return Presentation(tuple(dotted), tuple(rels), "handle diagram")


SOURCES = {
    "complement-presentation": (
        "complement group proposition, proof",
        r"\langle x_1,x_2,x_3|x_1x_2x_1x_2^{-1}x_1^{-1}x_2^{-1}=1,"
        r"x_2^{-1}x_3^{-1}x_2^{-1}x_3x_2x_3=1,x_1^{-1}x_2x_3^{-1}=1 \rangle"),
    "target-presentation": ("complement group proposition, proof", "a^2=b^{3}=(ab)^5=1"),
    "derivation-script": ("complement group proposition, proof",
                          "isomorphic to the alternating group $A_5$ of degree $5$"),
    "handles-SnxS2": ("standard decomposition of S^n x S^2",
                      "a single $0$-handle, a single $2$-handle, a single $n$-handle, "
                      "and a single $(n+2)$-handle"),
    "handles-Kn": ("decomposition of K^n",
                   "three $0$-handles, two $1$-handles, two $(n-1)$-handles and three $n$-handles"),
    "handles-complement": ("decomposition of the complement",
                           "a single $(n+2)$-dimensional $0$-handle, three $1$-handles"),
    "handles-X": ("decomposition of X", "a $0$-handle, an $n$-handle and an $(n+1)$-handle"),
    "handles-boundaryX": ("decomposition of the boundary of X",
                          "a $0$-handle, three $1$-handles, three $2$-handles, three $n$-handles, "
                          "three $(n+1)$-handles and an $(n+2)$-handle"),
    "intersection-data": ("homotopy proposition",
                          r"geometric intersection number $|K^n\cap (\{x_0\}\times S^2)|=3"),
    "nontrivial": ("complement group proposition", "is non-trivial"),
    "homology-sphere": ("boundary corollary", "a non-simply connected homology $(n+2)$-sphere"),
}


def facts() -> list:
    """All registry entries with their anchors."""
    def src(k):
        return SOURCES[k]
    out = [
        PaperFact("complement-presentation", complement_presentation(), *src("complement-presentation")),
        PaperFact("target-presentation", target_presentation(), *src("target-presentation")),
        PaperFact("derivation-script", derivation_script(), *src("derivation-script")),
        PaperFact("intersection-data", intersection_data(), *src("intersection-data")),
    ]
    for name in ("SnxS2", "Kn", "complement", "X", "boundaryX"):
        out.append(PaperFact(f"handles-{name}", lambda n, name=name: handle_tables(n)[name],
                             *src(f"handles-{name}")))
    return out


# --------------------------------------------------------------------------
# Verification suite


@dataclass
class CheckResult:
    id: str
    citation: str
    outcome: str
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return {"id": self.id, "citation": self.citation, "outcome": self.outcome,
                "details": self.details, "elapsed_ms": round(self.elapsed_ms, 3)}


@dataclass
class VerificationReport:
    checks: list
    n_range: tuple

    @property
    def outcome(self) -> str:
        outcomes = {c.outcome for c in self.checks}
        if FAIL in outcomes:
            return FAIL
        if INCONCLUSIVE in outcomes:
            return INCONCLUSIVE
        return PASS

    def __getitem__(self, check_id) -> CheckResult:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {
            "toolkit": "fpcheck",
            "version": __version__,
            "outcome": self.outcome,
            "n_range": list(self.n_range),
            "checks": [c.to_dict() for c in self.checks],
        }

    def summary(self) -> str:
        lines = [f"{c.outcome.upper():13s}{c.id:28s}{c.elapsed_ms:9.1f} ms" for c in self.checks]
        lines.append(f"overall: {self.outcome}")
        return "\n".join(lines)


def _timed(check_id, source_key, fn: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    outcome, details = fn()
    return CheckResult(check_id, SOURCES[source_key][1], outcome, details,
                       (time.perf_counter() - t0) * 1000)


def _fmt_perms(perms, symbols):
    return {s: str(x) for s, x in zip(symbols, perms)}


def verify_paper(
    n_range: Sequence[int] = range(2, 11),
    max_cosets: int = DEFAULT_MAX_COSETS,
    search_cap: int = 10_000_000,
    complement: Optional[Presentation] = None,
    script: Optional[DerivationScript] = None,
    strategy: str = "felsch",
) -> VerificationReport:
    """Run every computable check, in a fixed order.

    ``complement`` and ``script`` replace the registry entries, which is how
    negative controls are run. Coset-enumeration or search overflow makes a
    check inconclusive, never failed.
    """
    n_values = list(n_range)
    if not n_values or min(n_values) < 2:
        raise ValueError("n_range must be nonempty with n >= 2")
    comp = complement if complement is not None else complement_presentation()
    scr = script if script is not None else derivation_script()
    target = target_presentation()
    checks = []

    def replay():
        rep = replay_derivation(comp, scr)
        quot = [i for i, s in enumerate(scr.steps) if s.is_quotient]
        details = {
            "steps": len(scr.steps),
            "steps_applied": rep.steps_applied,
            "isomorphism_preserving_prefix_length": rep.isomorphism_preserving_prefix_length,
            "quotient_steps": quot,
            "mismatch_indices": [m.index for m in rep.mismatches],
            "error": list(rep.error) if rep.error else None,
        }
        final_ok = rep.final is not None and rep.final.equivalent_to(target)
        details["terminal_matches_target"] = final_ok
        ok = (rep.ok and rep.steps_applied == len(scr.steps) and len(quot) == 1
              and rep.isomorphism_preserving_prefix_length == quot[0] and final_ok)
        return (PASS if ok else FAIL), details

    def target_order():
        res = order(target, max_cosets, strategy)
        if not res.completed:
            return INCONCLUSIVE, {"overflow_cap": max_cosets}
        perms = permutation_rep(res.table)
        try:
            oracle = len(closure(perms, cap=10 * res.index))
        except ClosureOverflow:
            oracle = None
        details = {"order": res.index, "closure_of_permutation_rep": oracle,
                   "cosets_defined": res.cosets_defined}
        return (PASS if res.index == 60 == oracle else FAIL), details

    def epimorphism():
        try:
            found = find_epimorphism(comp, 5, 60, cap=search_cap)
        except SearchOverflow as exc:
            return INCONCLUSIVE, {"reason": str(exc)}
        if found is None:
            return FAIL, {"assignment": None}
        image = len(closure(found, cap=60))
        ok = satisfies(comp, found) and image == 60 and all(x.is_even() for x in found)
        return (PASS if ok else FAIL), {
            "assignment": _fmt_perms(found, comp.generators), "image_order": image,
            "implication": "an epimorphism onto a nontrivial group implies "
                           "the presented group is nontrivial"}

    def perfect():
        inv = abelian_invariants(comp)
        m = relation_matrix(comp)
        det = determinant(m) if m.nrows == m.ncols else None
        ok = inv.is_trivial() and det in (1, -1)
        return (PASS if ok else FAIL), {"free_rank": inv.free_rank, "torsion": list(inv.torsion),
                                        "relation_matrix": m.tolist(), "determinant": det}

    def complement_order():
        res = order(comp, max_cosets, strategy)
        if not res.completed:
            return INCONCLUSIVE, {"overflow_cap": max_cosets}
        k = res.index
        details = {"order": k, "divisible_by_60": k % 60 == 0,
                   "cosets_defined": res.cosets_defined}
        # group order along the derivation
        rep = replay_derivation(comp, scr)
        orders = []
        for p in rep.intermediate_presentations:
            r = order(p, max_cosets, strategy)
            orders.append(r.index if r.completed else None)
        details["orders_along_derivation"] = orders
        q = rep.isomorphism_preserving_prefix_length
        prefix_ok = all(o == k for o in orders[:q])
        after_ok = all(o is not None and k % o == 0 for o in orders[q:])
        if None in orders[:q]:
            return INCONCLUSIVE, details
        return (PASS if k % 60 == 0 and prefix_ok and after_ok else FAIL), details

    def euler():
        rows, ok = [], True
        for n in n_values:
            tables = handle_tables(n)
            want = expected_euler_characteristics(n)
            got = {name: euler_characteristic(t) for name, t in tables.items()}
            ok = ok and got == want
            rows.append({"n": n, "chi": got, "expected": want,
                         "merged": sorted(k for k, t in tables.items() if t.merged)})
        return (PASS if ok else FAIL), {"per_n": rows}

    def intersection():
        d = intersection_data()
        return (PASS if d.consistent() else FAIL), {"geometric": d.geometric,
                                                    "algebraic": d.algebraic}

    plan = [
        ("derivation-replay", "derivation-script", replay),
        ("target-order", "derivation-script", target_order),
        ("complement-epimorphism-A5", "nontrivial", epimorphism),
        ("complement-perfect", "homology-sphere", perfect),
        ("complement-order", "complement-presentation", complement_order),
        ("euler-characteristics", "handles-boundaryX", euler),
        ("intersection-parity", "intersection-data", intersection),
    ]
    for check_id, src, fn in plan:
        checks.append(_timed(check_id, src, fn))
    return VerificationReport(checks, (min(n_values), max(n_values)))
