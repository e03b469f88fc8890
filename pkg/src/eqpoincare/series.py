"""Truncated multivariate power series with exact coefficients.

A series in t1..tr is stored sparsely as a map from exponent vectors to
coefficients, truncated to the box of degrees componentwise <= ``bound``.
Coefficients come from one of the rings in :mod:`eqpoincare.burnside`
(Ã(G), A(G)⊗Q, R1(G)) or from the integers.

The binomial ``(1 - t^w)^(-s[X])`` over Ã(G) is the pre-lambda series
``sum_k [S^k X] t^(k w)`` raised to the s-th power; :func:`factorize` writes a
unit series uniquely as a product of such binomials.
"""
from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass
from math import prod
from typing import Callable, Iterable, Sequence

from .burnside import (ZZ, ParseError, TBClass, TBRing, burnside_ring, eps, r1_ring, rho, rhohat,
                       tb_ring)

Degree = tuple[int, ...]


class SeriesError(ValueError):
    """Incompatible or invalid series operands."""


class FactorizationError(SeriesError):
    """A series could not be written as a product of binomials."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def total(d: Sequence[int]) -> int:
    return sum(d)


def _within(d: Sequence[int], bound: Sequence[int]) -> bool:
    return all(x <= b for x, b in zip(d, bound))


def _graded_key(d: Degree):
    return (sum(d), d)


class MultiSeries:
    """Truncated power series; immutable by convention."""

    __slots__ = ("ring", "bound", "coeffs")

    def __init__(self, ring, bound: Sequence[int], coeffs: dict | None = None):
        self.ring = ring
        self.bound = tuple(int(b) for b in bound)
        if any(b < 0 for b in self.bound):
            raise SeriesError("truncation bound must be nonnegative")
        self.coeffs = {}
        for d, c in (coeffs or {}).items():
            d = tuple(d)
            if len(d) != len(self.bound):
                raise SeriesError(f"degree {d} does not match arity {len(self.bound)}")
            if c and _within(d, self.bound):
                self.coeffs[d] = c

    @classmethod
    def one(cls, ring, bound: Sequence[int]) -> MultiSeries:
        return cls(ring, bound, {(0,) * len(bound): ring.one})

    @property
    def arity(self) -> int:
        return len(self.bound)

    def coefficient(self, d: Sequence[int]):
        return self.coeffs.get(tuple(d), self.ring.zero)

    def terms(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: _graded_key(kv[0]))

    def _check(self, other: MultiSeries):
        if not isinstance(other, MultiSeries):
            raise SeriesError("expected a MultiSeries")
        if other.bound != self.bound:
            raise SeriesError(f"bound mismatch: {self.bound} vs {other.bound}")
        if not self.ring.compatible(other.ring):
            raise SeriesError(f"coefficient ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.bound == other.bound and self.ring.compatible(other.ring)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.bound, frozenset(self.coeffs.items())))

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return MultiSeries(self.ring, self.bound, out)

    def __neg__(self):
        return MultiSeries(self.ring, self.bound, {d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return series_mul(self, other)

    def __str__(self):
        return render_series(self)

    def __repr__(self):
        return f"MultiSeries(bound={self.bound}, {render_series(self)!r})"


def monomial(d: Sequence[int]) -> str:
    parts = [f"t{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(d) if e]
    return "*".join(parts) or "1"


def render_series(s: MultiSeries) -> str:
    out = []
    for d, c in s.terms():
        text = s.ring.render(c)
        if not any(d):
            term = text
        elif text == "1":
            term = monomial(d)
        elif text == "-1":
            term = "-" + monomial(d)
        else:
            if " " in text:
                text = f"({text})"
            term = f"{text}*{monomial(d)}"
        if out:
            out.append(" - " + term[1:] if term.startswith("-") else " + " + term)
        else:
            out.append(term)
    return "".join(out) or "0"


# -- arithmetic ---------------------------------------------------------------------


def series_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Truncated Cauchy product."""
    a._check(b)
    bound = a.bound
    out: dict = {}
    for d1, c1 in a.coeffs.items():
        for d2, c2 in b.coeffs.items():
            d = tuple(x + y for x, y in zip(d1, d2))
            if not _within(d, bound):
                continue
            p = c1 * c2
            out[d] = out[d] + p if d in out else p
    return MultiSeries(a.ring, bound, out)


def series_inverse(a: MultiSeries) -> MultiSeries:
    """Inverse of a series with constant term 1, truncated to the same bound."""
    zero_deg = (0,) * a.arity
    if a.coefficient(zero_deg) != a.ring.one:
        raise SeriesError("series inverse needs constant term 1")
    support = [(d, c) for d, c in a.coeffs.items() if any(d)]
    reach = {zero_deg}
    frontier = [zero_deg]
    while frontier:
        nxt = []
        for d in frontier:
            for e, _ in support:
                s = tuple(x + y for x, y in zip(d, e))
                if s not in reach and _within(s, a.bound):
                    reach.add(s)
                    nxt.append(s)
        frontier = nxt
    inv = {zero_deg: a.ring.one}
    for d in sorted(reach, key=_graded_key)[1:]:
        acc = a.ring.zero
        for e, c in support:
            f = tuple(x - y for x, y in zip(d, e))
            if min(f) >= 0 and f in inv:
                acc = acc + c * inv[f]
        if acc:
            inv[d] = -acc
    return MultiSeries(a.ring, a.bound, inv)


def _poly_mul(a: list, b: list, n: int, zero) -> list:
    out = [zero] * (n + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), n + 1 - i)):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out


def _poly_inv(a: list, n: int, zero) -> list:
    inv = [zero] * (n + 1)
    inv[0] = a[0]
    for k in range(1, n + 1):
        acc = zero
        for i in range(1, k + 1):
            if a[i] and inv[k - i]:
                acc = acc + a[i] * inv[k - i]
        inv[k] = -acc
    return inv


def substitute_monomial(a: MultiSeries, images: Sequence[Sequence[int]],
                        bound: Sequence[int] | None = None) -> MultiSeries:
    """Replace each variable t'_j by the monomial t^images[j].

    Without an explicit target bound, the image of the source bound's corner is used.
    """
    images = [tuple(int(x) for x in im) for im in images]
    if len(images) != a.arity:
        raise SeriesError(f"need {a.arity} image degrees, got {len(images)}")
    if not images:
        raise SeriesError("no variables to substitute")
    r = len(images[0])
    if any(len(im) != r for im in images):
        raise SeriesError("image degrees have different arities")
    if any(not any(im) for im in images):
        raise SeriesError("image degrees must be nonzero")
    if bound is None:
        bound = [sum(b * im[i] for b, im in zip(a.bound, images)) for i in range(r)]
    out: dict = {}
    for d, c in a.coeffs.items():
        e = tuple(sum(v * im[i] for v, im in zip(d, images)) for i in range(r))
        if _within(e, bound):
            out[e] = out[e] + c if e in out else c
    return MultiSeries(a.ring, bound, out)


_REDUCTIONS: dict[str, tuple[Callable, Callable]] = {
    "rho": (rho, burnside_ring),
    "rhohat": (rhohat, lambda G: ZZ),
    "eps": (eps, r1_ring),
}


def map_coefficients(p: MultiSeries, reduction: str) -> MultiSeries:
    """Apply rho, rhohat or eps to every coefficient of a series over Ã(G)."""
    if not isinstance(p.ring, TBRing):
        raise SeriesError("reductions apply to series over Ã(G)")
    try:
        fn, target = _REDUCTIONS[reduction]
    except KeyError:
        raise SeriesError(f"unknown reduction {reduction!r}") from None
    return MultiSeries(target(p.ring.group), p.bound, {d: fn(c) for d, c in p.coeffs.items()})


# -- binomial factors ----------------------------------------------------------------


@dataclass(frozen=True)
class BinomialFactor:
    """(1 - t^w)^(-s [cls])"""

    w: Degree
    s: int
    cls: TBClass

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if any(x < 0 for x in self.w) or not any(self.w):
            raise SeriesError(f"binomial exponent must be a nonzero degree, got {self.w}")

    def sort_key(self):
        return (sum(self.w), self.w, self.cls)


def expand_binomial(f: BinomialFactor, bound: Sequence[int]) -> MultiSeries:
    ring = f.cls.ring
    bound = tuple(bound)
    if len(f.w) != len(bound):
        raise SeriesError("factor degree and bound have different arities")
    n = min(b // x for x, b in zip(f.w, bound) if x > 0)
    base = ring.symmetric_powers(f.cls, n)
    poly = [ring.one] + [ring.zero] * n
    for _ in range(abs(f.s)):
        poly = _poly_mul(poly, base, n, ring.zero)
    if f.s < 0:
        poly = _poly_inv(poly, n, ring.zero)
    return MultiSeries(ring, bound, {tuple(k * x for x in f.w): c for k, c in enumerate(poly)})


class FactoredSeries:
    """Canonical product of binomials (1 - t^w)^(-s [G/H]_alpha) over Ã(G).

    Factors sharing (w, class) are merged, zero exponents dropped, and the rest
    sorted by (total degree of w, w, class).
    """

    def __init__(self, ring: TBRing, arity: int, factors: Iterable[BinomialFactor] = ()):
        self.ring = ring
        self.arity = int(arity)
        merged: dict = {}
        for f in factors:
            if len(f.w) != self.arity:
                raise SeriesError(f"factor degree {f.w} does not match arity {self.arity}")
            if f.cls.ring is not None and not ring.compatible(f.cls.ring):
                raise SeriesError("factor class belongs to another group")
            merged[(f.w, f.cls)] = merged.get((f.w, f.cls), 0) + f.s
        self.factors = tuple(sorted((BinomialFactor(w, s, c) for (w, c), s in merged.items() if s),
                                    key=BinomialFactor.sort_key))

    def __eq__(self, other):
        if not isinstance(other, FactoredSeries):
            return NotImplemented
        return (self.arity == other.arity and self.ring.compatible(other.ring)
                and self.factors == other.factors)

    def __hash__(self):
        return hash((self.arity, self.factors))

    def __mul__(self, other: FactoredSeries) -> FactoredSeries:
        if self.arity != other.arity:
            raise SeriesError("arity mismatch")
        return FactoredSeries(self.ring, self.arity, self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def expand(self, bound: Sequence[int]) -> MultiSeries:
        out = MultiSeries.one(self.ring, bound)
        for f in self.factors:
            out = out * expand_binomial(f, bound)
        return out

    def __str__(self):
        return render_factored(self)

    def __repr__(self):
        return f"FactoredSeries({render_factored(self)!r})"


def render_factored(p: FactoredSeries) -> str:
    if not p.factors:
        return "1"
    return "*".join(f"(1 - {monomial(f.w)})^{{{p.ring.render(p.ring.basis(f.cls) * -f.s)}}}"
                    for f in p.factors)


def _read_braced(text: str, start: int) -> tuple[str, int]:
    depth, i = 0, start
    while i < len(text):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return text[start + 1:i], i + 1
        i += 1
    raise ParseError("unbalanced braces")


def parse_monomial(text: str, arity: int | None = None) -> Degree:
    exps: dict[int, int] = {}
    for part in text.replace(" ", "").split("*"):
        m = re.fullmatch(r"t(\d*)(?:\^(\d+))?", part)
        if not m or (m.group(1) == "" and arity not in (None, 1)) or m.group(1) == "0":
            raise ParseError(f"cannot parse monomial factor {part!r}")
        i = int(m.group(1) or 1) - 1
        exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
    n = arity if arity is not None else max(exps) + 1
    if max(exps) >= n:
        raise ParseError(f"variable t{max(exps) + 1} exceeds arity {n}")
    return tuple(exps.get(i, 0) for i in range(n))


def parse_factored(ring: TBRing, text: str, arity: int | None = None) -> FactoredSeries:
    """Inverse of :func:`render_factored`."""
    text = text.strip()
    raw = []
    i = 0
    while i < len(text):
        if text[i] in " *":
            i += 1
            continue
        m = re.compile(r"\(\s*1\s*-\s*([^)]*)\)\s*\^\s*").match(text, i)
        if not m:
            if text[i:].strip() == "1" and not raw:
                break
            raise ParseError(f"cannot parse factor at {text[i:]!r}")
        mono = m.group(1)
        j = m.end()
        if j < len(text) and text[j] == "{":
            exp_text, i = _read_braced(text, j)
        else:
            e = re.compile(r"-?\d+").match(text, j)
            if not e:
                raise ParseError("missing exponent")
            exp_text, i = e.group(0), e.end()
        raw.append((mono, ring.parse(exp_text)))
    if arity is None:
        arity = max((len(parse_monomial(m)) for m, _ in raw), default=1)
    factors = []
    for mono, exponent in raw:
        w = parse_monomial(mono, arity)
        for cls, c in exponent.terms.items():
            if Fraction(c).denominator != 1:
                raise ParseError("binomial exponents must be integral")
            factors.append(BinomialFactor(w, -int(c), cls))
    return FactoredSeries(ring, arity, factors)


def factorize(p: MultiSeries) -> FactoredSeries:
    """Unique factorization of a unit series over Ã(G) into binomials, up to the bound.

    Repeatedly take the smallest nonconstant degree w (total degree, then
    lexicographic), read its coefficient sum_i s_i [c_i] and divide out every
    (1 - t^w)^(-s_i [c_i]).  Higher symmetric powers only touch multiples of w,
    so the coefficient at w is cleared and smaller degrees stay untouched.
    """
    ring = p.ring
    if not isinstance(ring, TBRing):
        raise FactorizationError("only series over Ã(G) are factorized")
    zero_deg = (0,) * p.arity
    if p.coefficient(zero_deg) != ring.one:
        raise FactorizationError("constant term is not 1", p)
    residual = p
    factors = []
    for _ in range(prod(b + 1 for b in p.bound) + 1):
        candidates = [d for d in residual.coeffs if any(d)]
        if not candidates:
            return FactoredSeries(ring, p.arity, factors)
        w = min(candidates, key=_graded_key)
        peel = MultiSeries.one(ring, p.bound)
        for cls, s in residual.coeffs[w].terms.items():
            factors.append(BinomialFactor(w, s, cls))
            peel = peel * expand_binomial(BinomialFactor(w, -s, cls), p.bound)
        residual = residual * peel
    raise FactorizationError("factorization did not terminate within the bound", residual)


# -- JSON ------------------------------------------------------------------------------


def ring_for_tag(tag: str, group=None):
    if tag == "z":
        return ZZ
    if group is None:
        raise SeriesError(f"ring {tag!r} needs a group")
    makers = {"tb": tb_ring, "burnside": burnside_ring, "r1": r1_ring}
    if tag not in makers:
        raise SeriesError(f"unknown ring tag {tag!r}")
    return makers[tag](group)


def series_to_json(s: MultiSeries) -> dict:
    return {
        "arity": s.arity,
        "bound": list(s.bound),
        "ring": s.ring.tag,
        "terms": [{"deg": list(d), "coeff": s.ring.render(c)} for d, c in s.terms()],
    }


def series_from_json(data: dict, group=None) -> MultiSeries:
    try:
        ring = ring_for_tag(data.get("ring", "tb"), group)
        bound = data["bound"]
        if "arity" in data and data["arity"] != len(bound):
            raise SeriesError("arity does not match bound")
        coeffs: dict = {}
        for t in data["terms"]:
            d = tuple(t["deg"])
            c = ring.parse(str(t["coeff"]))
            coeffs[d] = coeffs[d] + c if d in coeffs else c
    except (KeyError, TypeError) as exc:
        raise SeriesError(f"malformed series JSON: {exc}") from exc
    return MultiSeries(ring, bound, coeffs)


def factored_to_json(p: FactoredSeries) -> dict:
    return {
        "arity": p.arity,
        "factors": [{"w": list(f.w), "s": f.s, "class": p.ring.key_name(f.cls)} for f in p.factors],
        "text": render_factored(p),
    }


def factored_from_json(data: dict, ring: TBRing) -> FactoredSeries:
    try:
        if "factors" not in data and "text" in data:
            return parse_factored(ring, data["text"], data.get("arity"))
        arity = int(data["arity"])
        factors = [BinomialFactor(tuple(f["w"]), int(f["s"]), ring.parse_name(f["class"])
                                  if f["class"] != "1" else ring.unit_key)
                   for f in data["factors"]]
    except (KeyError, TypeError) as exc:
        raise SeriesError(f"malformed factored-series JSON: {exc}") from exc
    return FactoredSeries(ring, arity, factors)


def random_factored_series(ring: TBRing, bound: Sequence[int], nfactors: int, rng,
                           max_s: int = 2) -> FactoredSeries:
    """A random product of binomials whose exponents fit inside ``bound``."""
    bound = tuple(bound)
    classes = ring.classes
    factors = []
    while len(factors) < nfactors:
        w = tuple(rng.randint(0, b) for b in bound)
        if not any(w):
            continue
        s = rng.choice([x for x in range(-max_s, max_s + 1) if x])
        factors.append(BinomialFactor(w, s, rng.choice(classes)))
    return FactoredSeries(ring, len(bound), factors)
