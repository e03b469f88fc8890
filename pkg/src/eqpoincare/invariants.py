"""Equivariant Poincaré series and monodromy zeta functions from resolution data,
recovery of the zeta functions from a factored Poincaré series, and the
reduction consistency checks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .burnside import ParseError, burnside_ring, subgroup_name, tb_ring
from .group_core import FiniteGroup, kernel
from .resolution import ResolutionData, n_value, omega_vector, require_valid
from .series import (BinomialFactor, FactoredSeries, MultiSeries, SeriesError, map_coefficients,
                     substitute_monomial)

ZETA = "zeta"
ZETA_TILDE = "zeta-tilde"


class RecoveryError(ValueError):
    """The factored series does not support the requested zeta recovery."""


@dataclass(frozen=True)
class ZetaFactor:
    """(1 - t^n)^(-q [G/K]) with K the subgroup class ``base``."""

    n: Fraction
    base: int
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n", Fraction(self.n))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.n <= 0:
            raise RecoveryError(f"zeta exponent must be positive, got {self.n}")


class FactoredZeta:
    """Canonical product of ZetaFactors: merged on (n, base), zero q dropped, sorted."""

    def __init__(self, group: FiniteGroup, variant: str, factors: Iterable[ZetaFactor] = ()):
        if variant not in (ZETA, ZETA_TILDE):
            raise ValueError(f"unknown zeta variant {variant!r}")
        self.group = group
        self.variant = variant
        merged: dict = {}
        for f in factors:
            merged[(f.n, f.base)] = merged.get((f.n, f.base), 0) + f.q
        self.factors = tuple(ZetaFactor(n, b, q) for (n, b), q in sorted(merged.items()) if q)
        if variant == ZETA_TILDE:
            for f in self.factors:
                if f.n.denominator != 1 or f.q.denominator != 1:
                    raise RecoveryError(f"zeta-tilde factor (n={f.n}, q={f.q}) is not integral")

    def _key(self):
        return tuple((f.n, f.base, f.q) for f in self.factors)

    def __eq__(self, other):
        if not isinstance(other, FactoredZeta):
            return NotImplemented
        return self.group == other.group and self.variant == other.variant and self._key() == other._key()

    def __hash__(self):
        return hash((self.variant, self._key()))

    def bases(self) -> set[int]:
        return {f.base for f in self.factors}

    def __str__(self):
        return render_zeta(self)

    def __repr__(self):
        return f"FactoredZeta({self.variant}, {render_zeta(self)!r})"

    def to_json(self) -> dict:
        A = burnside_ring(self.group)
        return {"variant": self.variant,
                "factors": [{"n": str(f.n), "q": str(f.q), "base": A.key_name(f.base)} for f in self.factors],
                "text": render_zeta(self)}

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> FactoredZeta:
        A = burnside_ring(group)
        return cls(group, data["variant"],
                   [ZetaFactor(Fraction(f["n"]), A.parse_name(f["base"]) if f["base"] != "1" else A.unit_key,
                               Fraction(f["q"])) for f in data["factors"]])


def render_zeta(z: FactoredZeta) -> str:
    if not z.factors:
        return "1"
    A = burnside_ring(z.group)
    out = []
    for f in z.factors:
        power = "t" if f.n == 1 else f"t^{f.n}" if f.n.denominator == 1 else f"t^({f.n})"
        out.append(f"(1 - {power})^{{{A.render(A.basis(f.base) * -f.q)}}}")
    return "*".join(out)


_ZETA_FACTOR = re.compile(r"\(1 - t(?:\^\(?(\d+(?:/\d+)?)\)?)?\)\^\{([^{}]*)\}")


def parse_zeta(text: str, group: FiniteGroup, variant: str) -> FactoredZeta:
    A = burnside_ring(group)
    text = text.strip()
    if text == "1":
        return FactoredZeta(group, variant)
    factors, pos = [], 0
    for m in _ZETA_FACTOR.finditer(text):
        if text[pos:m.start()].strip(" *"):
            raise ParseError(f"unexpected text {text[pos:m.start()]!r}")
        pos = m.end()
        n = Fraction(m.group(1) or 1)
        for key, c in A.parse(m.group(2)).terms.items():
            factors.append(ZetaFactor(n, key, -Fraction(c)))
    if text[pos:].strip(" *") or not factors:
        raise ParseError(f"cannot parse zeta function {text!r}")
    return FactoredZeta(group, variant, factors)


# -- from resolution data -----------------------------------------------------------


def poincare_from_resolution(res: ResolutionData, bound: Sequence[int] | None = None):
    """Product over strata of (1 - t^ω)^(-χ [G/H]_α), and its expansion when a bound is given."""
    require_valid(res)
    ring = tb_ring(res.group)
    factors = []
    for s in res.strata:
        if s.chi == 0:
            continue
        w = omega_vector(res, s)
        if not any(w):
            raise SeriesError(f"stratum {s.id} has zero ω")
        factors.append(BinomialFactor(w, s.chi, ring.cls(s.isotropy, s.character)))
    p = FactoredSeries(ring, res.r, factors)
    return p, (p.expand(bound) if bound is not None else None)


def zeta_from_resolution(res: ResolutionData) -> tuple[FactoredZeta, FactoredZeta]:
    require_valid(res)
    G = res.group
    zeta, tilde = [], []
    for s in res.strata:
        if s.chi == 0:
            continue
        n = n_value(res, s)
        h, hh = s.isotropy.order, s.slice_isotropy.order
        base = G.subgroup_class_index(s.slice_isotropy)
        zeta.append(ZetaFactor(n, base, Fraction(hh * s.chi, h)))
        e = Fraction(n * hh, h)
        if e.denominator != 1:
            raise RecoveryError(f"stratum {s.id}: zeta-tilde exponent {e} is not an integer")
        tilde.append(ZetaFactor(e, base, s.chi))
    return FactoredZeta(G, ZETA, zeta), FactoredZeta(G, ZETA_TILDE, tilde)


# -- recovery from a factored Poincaré series ----------------------------------------


@dataclass
class RecoveredZeta:
    zeta: FactoredZeta
    zeta_tilde: FactoredZeta
    warnings: list[str] = field(default_factory=list)
    selections: list[dict] = field(default_factory=list)

    def __iter__(self):
        return iter((self.zeta, self.zeta_tilde))


def _exact_div(a: int, b: int, what: str) -> int:
    if a % b:
        raise RecoveryError(f"{what}: {a} is not divisible by {b}")
    return a // b


def _free_map(G: FiniteGroup, f: BinomialFactor) -> tuple[ZetaFactor, ZetaFactor]:
    tw, h = sum(f.w), f.cls.subgroup.order
    label = f"factor w={f.w}"
    n = _exact_div(tw, G.order, label)
    nt = _exact_div(tw, G.order * h, label)
    return ZetaFactor(n, 0, Fraction(f.s, h)), ZetaFactor(nt, 0, f.s)


def _pick_minimal(cands: list[BinomialFactor], K: str) -> BinomialFactor:
    best = min(cands, key=BinomialFactor.sort_key)
    key = (sum(best.w), best.w)
    rivals = {c.w for c in cands if sum(c.w) == key[0] and c.w != best.w}
    if rivals:
        raise RecoveryError(f"ambiguous minimal factor for base {K}: exponents {sorted(rivals | {best.w})} "
                            "are incomparable with equal total degree")
    return best


def recover_zeta(p: FactoredSeries, G: FiniteGroup | None = None, mode: str = "general") -> RecoveredZeta:
    """Read ζ and ζ̃ off a factored Poincaré series.

    ``free`` assumes G acts freely off the origin.  ``general`` first locates,
    for every isotropy class K ≠ e in the factor bases, the two smallest
    factors with distinct characters and exchanges their kernels.
    """
    ring = p.ring
    G = G or ring.group
    if not ring.compatible(tb_ring(G)):
        raise RecoveryError("series is not over the given group")
    if mode not in ("free", "general"):
        raise RecoveryError(f"unknown mode {mode!r}")
    out = RecoveredZeta(FactoredZeta(G, ZETA), FactoredZeta(G, ZETA_TILDE))

    def free_all(factors):
        z, zt = [], []
        for f in factors:
            a, b = _free_map(G, f)
            z.append(a)
            zt.append(b)
        return z, zt

    if mode == "free":
        z, zt = free_all(p.factors)
        out.zeta, out.zeta_tilde = FactoredZeta(G, ZETA, z), FactoredZeta(G, ZETA_TILDE, zt)
        return out

    whole = len(G.subgroup_classes) - 1
    used: set = set()
    z, zt = [], []
    for K in sorted({f.cls.subgroup_index for f in p.factors} - {0}):
        Kname = f"[G/{subgroup_name(G, K)}]"
        based = [f for f in p.factors if f.cls.subgroup_index == K]
        positive = [f for f in based if f.s > 0]
        if not positive:
            out.warnings.append(f"base {Kname}: no factor with positive exponent; mapped by the free rule")
            continue
        first = _pick_minimal(positive, Kname)
        others = [f for f in based if f.cls.char_index != first.cls.char_index]
        if not others:
            if K == whole:
                out.warnings.append(
                    f"only one character occurs on base {Kname}: treated as a scalar action and "
                    "recovered by the free rule; whether the hypothesis for general recovery holds "
                    "cannot be decided from the series alone, and different actions with this "
                    "Poincaré series may have different zeta functions")
                out.selections.append({"base": Kname, "fallback": "scalar"})
                z, zt = free_all(p.factors)
                out.zeta, out.zeta_tilde = FactoredZeta(G, ZETA, z), FactoredZeta(G, ZETA_TILDE, zt)
                return out
            out.warnings.append(f"base {Kname}: a single character occurs; mapped by the free rule")
            continue
        second = _pick_minimal(others, Kname)
        for f in (first, second):
            if f.s != 1:
                raise RecoveryError(f"selected exceptional factor w={f.w} on {ring.key_name(f.cls)} "
                                    f"has exponent {f.s}, expected 1")
        k = first.cls.subgroup.order
        alpha, beta = first.cls.character, second.cls.character
        ker_a, ker_b = kernel(alpha), kernel(beta)
        for f, ker in ((first, ker_b), (second, ker_a)):
            base = G.subgroup_class_index(ker)
            tw = sum(f.w)
            z.append(ZetaFactor(Fraction(tw, G.order), base, Fraction(ker.order, k)))
            nt = Fraction(tw * ker.order, G.order * k)
            if nt.denominator != 1:
                raise RecoveryError(f"factor w={f.w}: zeta-tilde exponent {nt} is not an integer")
            zt.append(ZetaFactor(nt, base, 1))
        used.update((first, second))
        out.selections.append({"base": Kname,
                               "first": {"w": list(first.w), "class": ring.key_name(first.cls)},
                               "second": {"w": list(second.w), "class": ring.key_name(second.cls)}})
    rz, rzt = free_all(f for f in p.factors if f not in used)
    out.zeta = FactoredZeta(G, ZETA, z + rz)
    out.zeta_tilde = FactoredZeta(G, ZETA_TILDE, zt + rzt)
    return out


# -- consistency checks -------------------------------------------------------------


def statement1_sides(p: FactoredSeries, nonequiv: FactoredSeries,
                     bound: Sequence[int]) -> tuple[MultiSeries, MultiSeries]:
    """ρ̂ of the equivariant series, and the non-equivariant series in |G|·r
    variables with each block of |G| consecutive variables set equal."""
    G = p.ring.group
    r = p.arity
    bound = tuple(bound)
    if len(bound) != r:
        raise SeriesError(f"bound has arity {len(bound)}, series has {r}")
    if nonequiv.arity != G.order * r:
        raise SeriesError(f"non-equivariant series needs {G.order * r} variables, has {nonequiv.arity}")
    if nonequiv.ring.group.order != 1:
        raise SeriesError("non-equivariant series must be over the trivial group")
    lhs = map_coefficients(p.expand(bound), "rhohat")
    big = tuple(b for b in bound for _ in range(G.order))
    images = [tuple(int(j // G.order == i) for i in range(r)) for j in range(G.order * r)]
    rhs = substitute_monomial(map_coefficients(nonequiv.expand(big), "rhohat"), images, bound)
    return lhs, rhs


def statement1_rhohat_check(p: FactoredSeries, nonequiv: FactoredSeries, bound: Sequence[int]) -> bool:
    lhs, rhs = statement1_sides(p, nonequiv, bound)
    return lhs == rhs


def eps_reduction(p: FactoredSeries, bound: Sequence[int]) -> MultiSeries:
    return map_coefficients(p.expand(bound), "eps")
