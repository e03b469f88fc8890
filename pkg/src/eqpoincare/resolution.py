"""Combinatorics of a G-resolution: dual graph with a group action, the
multiplicity matrix, valuation attachments and stratum records.

Strata are input data.  Each stratum carries its Euler characteristic, the
isotropy group H of a point, the character of H on the equivariant curvette
through it, and the isotropy group Ĥ of a nearby point on that curvette.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .group_core import Character, FiniteGroup, GroupError, Subgroup, load_group


class ResolutionError(ValueError):
    """Malformed resolution data or a failed structural requirement."""


@dataclass(frozen=True)
class DualGraph:
    """Vertices are exceptional components; ``g_action[a][j]`` is the image of vertex j under a."""

    vertices: tuple[str, ...]
    g_action: tuple[tuple[int, ...], ...]
    self_int: tuple[int, ...]
    intersection_offdiag: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise ResolutionError(f"unknown vertex {v!r}") from None

    def intersection_matrix(self) -> list[list[int]]:
        n = self.size
        return [[self.self_int[i] if i == j else self.intersection_offdiag[i][j] for j in range(n)]
                for i in range(n)]

    def edges(self) -> list[tuple[str, str]]:
        n = self.size
        return [(self.vertices[i], self.vertices[j]) for i in range(n) for j in range(i + 1, n)
                if self.intersection_offdiag[i][j]]

    def orbit(self, j: int) -> tuple[int, ...]:
        return tuple(sorted({perm[j] for perm in self.g_action}))

    def stabilizer(self, j: int) -> Subgroup:
        return Subgroup(tuple(a for a, perm in enumerate(self.g_action) if perm[j] == j))


@dataclass(frozen=True)
class ValuationDescriptor:
    index: int
    kind: str
    component: str


@dataclass(frozen=True)
class Stratum:
    id: str
    component: str
    chi: int
    isotropy: Subgroup
    character: Character
    slice_isotropy: Subgroup
    cover_degree: int | None = None


@dataclass(frozen=True)
class MultMatrix:
    vertices: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[str, str]) -> int:
        s, d = key
        return self.entries[self.vertices.index(s)][self.vertices.index(d)]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class ResolutionData:
    group: FiniteGroup
    r: int
    graph: DualGraph
    valuations: tuple[ValuationDescriptor, ...]
    strata: tuple[Stratum, ...]
    smooth_chi: dict | None = None
    name: str = ""

    def stratum(self, sid: str) -> Stratum:
        for s in self.strata:
            if s.id == sid:
                return s
        raise ResolutionError(f"unknown stratum {sid!r}")


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures), "notes": list(self.notes)}


# -- exact linear algebra -----------------------------------------------------------


def _inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ResolutionError("intersection matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def multiplicity_matrix(g: DualGraph) -> MultMatrix:
    """m = -(E∘E)^(-1), checked integral, positive and symmetric."""
    if not g.size:
        raise ResolutionError("dual graph has no vertices")
    inv = _inverse(g.intersection_matrix())
    m = [[-x for x in row] for row in inv]
    n = g.size
    for i in range(n):
        for j in range(n):
            if m[i][j].denominator != 1:
                raise ResolutionError(f"m[{g.vertices[i]},{g.vertices[j]}] = {m[i][j]} is not integral")
            if m[i][j] <= 0:
                raise ResolutionError(f"m[{g.vertices[i]},{g.vertices[j]}] = {m[i][j]} is not positive")
            if m[i][j] != m[j][i]:
                raise ResolutionError("multiplicity matrix is not symmetric")
    return MultMatrix(g.vertices, tuple(tuple(int(x) for x in row) for row in m))


def _mult(res: ResolutionData) -> MultMatrix:
    cache = res.__dict__.get("_mult")
    if cache is None:
        cache = multiplicity_matrix(res.graph)
        object.__setattr__(res, "_mult", cache)
    return cache


def omega_vector(res: ResolutionData, stratum: Stratum) -> tuple[int, ...]:
    """ω_i = sum over a in G of m[σ_i, a·δ], σ_i the component of valuation i."""
    m = _mult(res).entries
    g = res.graph
    d = g.index(stratum.component)
    return tuple(sum(m[g.index(v.component)][perm[d]] for perm in g.g_action) for v in res.valuations)


def n_value(res: ResolutionData, stratum: Stratum) -> int:
    m = _mult(res).entries
    g = res.graph
    d = g.index(stratum.component)
    return sum(m[g.index(v.component)][d] for v in res.valuations)


def cover_degree(res: ResolutionData, stratum: Stratum) -> int:
    if stratum.cover_degree is not None:
        return stratum.cover_degree
    return res.group.order // stratum.isotropy.order


# -- validation ---------------------------------------------------------------------


def validate(res: ResolutionData) -> ValidationReport:
    rep = ValidationReport()
    fail = rep.failures.append
    G, g = res.group, res.graph
    n = g.size

    ident = tuple(range(n))
    if g.g_action[0] != ident:
        fail("action: the identity does not act trivially")
    for a, perm in enumerate(g.g_action):
        if sorted(perm) != list(ident):
            fail(f"action: element {G.labels[a]} does not permute the vertices")
    if not rep.failures:
        for a in range(G.order):
            for b in range(G.order):
                ab = g.g_action[G.mul(a, b)]
                if any(ab[j] != g.g_action[a][g.g_action[b][j]] for j in range(n)):
                    fail(f"action: not a homomorphism at ({G.labels[a]}, {G.labels[b]})")
                    break

    off = g.intersection_offdiag
    for i in range(n):
        if g.self_int[i] >= 0:
            fail(f"graph: self-intersection of {g.vertices[i]} is not negative")
        for j in range(n):
            if i != j and off[i][j] not in (0, 1):
                fail(f"graph: intersection {g.vertices[i]}.{g.vertices[j]} = {off[i][j]} is not 0 or 1")
            if j > i and off[i][j] != off[j][i]:
                fail(f"graph: edge data not symmetric at ({g.vertices[i]}, {g.vertices[j]})")
    if not any("action" in f for f in rep.failures):
        for a, perm in enumerate(g.g_action):
            bad = [g.vertices[i] for i in range(n) if g.self_int[perm[i]] != g.self_int[i]]
            if bad:
                fail(f"graph: self-intersections not invariant under {G.labels[a]} at {bad}")
            if any(off[perm[i]][perm[j]] != off[i][j] for i in range(n) for j in range(n)):
                fail(f"graph: edges not invariant under {G.labels[a]}")

    try:
        _mult(res)
    except ResolutionError as exc:
        fail(f"multiplicity matrix: {exc}")

    idx = sorted(v.index for v in res.valuations)
    if idx != list(range(1, res.r + 1)):
        fail(f"valuations: indices {idx} are not 1..{res.r}")
    for v in res.valuations:
        if v.kind not in ("curve", "divisorial"):
            fail(f"valuation {v.index}: unknown kind {v.kind!r}")
        if v.component not in g.vertices:
            fail(f"valuation {v.index}: unknown component {v.component!r}")

    ids = [s.id for s in res.strata]
    if len(set(ids)) != len(ids):
        fail("strata: duplicate ids")
    for s in res.strata:
        where = f"stratum {s.id}"
        if s.component not in g.vertices:
            fail(f"{where}: unknown component {s.component!r}")
            continue
        H, Hh = s.isotropy, s.slice_isotropy
        if not G.is_subgroup(H):
            fail(f"{where}: H is not a subgroup")
            continue
        j = g.index(s.component)
        if not H.issubset(g.stabilizer(j)):
            fail(f"{where}: H does not stabilize component {s.component}")
        if not G.is_subgroup(Hh) or not Hh.issubset(H):
            fail(f"{where}: Hhat is not a subgroup of H")
        if s.character.subgroup != H or s.character not in G.characters(H):
            fail(f"{where}: alpha is not a one-dimensional character of H")
        if s.cover_degree is not None and s.cover_degree <= 0:
            fail(f"{where}: cover_degree must be positive")

    if res.smooth_chi is not None and not rep.failures:
        seen = set()
        for j in range(n):
            orb = g.orbit(j)
            if orb in seen:
                continue
            seen.add(orb)
            names = [g.vertices[i] for i in orb]
            if not all(v in res.smooth_chi for v in names):
                continue
            declared = sum(res.smooth_chi[v] for v in names)
            counted = sum(s.chi * cover_degree(res, s) for s in res.strata if g.index(s.component) in orb)
            if declared != counted:
                fail(f"euler: orbit {names} has smooth-part χ {declared} but strata give {counted}")
    rep.notes.append("stratum Euler characteristics are declared, unverified")
    return rep


def require_valid(res: ResolutionData) -> None:
    rep = validate(res)
    if not rep.ok:
        raise ResolutionError("; ".join(rep.failures))


# -- loading ------------------------------------------------------------------------


def element_ref(G: FiniteGroup, ref: Any) -> int:
    """Resolve an element given by index or label."""
    if isinstance(ref, int) and not isinstance(ref, bool):
        if 0 <= ref < G.order:
            return ref
    elif isinstance(ref, str):
        if ref in G.labels:
            return G.labels.index(ref)
        if ref.strip().isdigit() and int(ref) < G.order:
            return int(ref)
    raise ResolutionError(f"unknown group element {ref!r}")


def _vertex_perm(vertices: tuple[str, ...], spec) -> tuple[int, ...]:
    if isinstance(spec, dict):
        image = {str(k): str(v) for k, v in spec.items()}
        targets = [image.get(v, v) for v in vertices]
    else:
        if len(spec) != len(vertices):
            raise ResolutionError("vertex permutation has the wrong length")
        targets = [vertices[x] if isinstance(x, int) else str(x) for x in spec]
    try:
        return tuple(vertices.index(t) for t in targets)
    except ValueError:
        raise ResolutionError(f"vertex permutation {spec!r} names unknown vertices") from None


def _close_action(G: FiniteGroup, known: dict[int, tuple[int, ...]], n: int) -> tuple:
    known = dict(known)
    known.setdefault(0, tuple(range(n)))
    changed = True
    while changed and len(known) < G.order:
        changed = False
        for a, pa in list(known.items()):
            for b, pb in list(known.items()):
                ab = G.mul(a, b)
                if ab not in known:
                    known[ab] = tuple(pa[pb[j]] for j in range(n))
                    changed = True
    if len(known) < G.order:
        missing = [G.labels[a] for a in range(G.order) if a not in known]
        raise ResolutionError(f"action does not determine elements {missing}")
    return tuple(known[a] for a in range(G.order))


def load_group_ref(spec, base_dir: Path | None = None) -> FiniteGroup:
    if isinstance(spec, str):
        path = Path(spec)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        try:
            spec = json.loads(path.read_text())
        except OSError as exc:
            raise ResolutionError(f"cannot read group file {path}: {exc}") from exc
    try:
        return load_group(spec)
    except GroupError as exc:
        raise ResolutionError(f"group: {exc}") from exc


def resolution_from_json(data: dict, base_dir: Path | None = None, name: str = "") -> ResolutionData:
    try:
        G = load_group_ref(data["group"], base_dir)
        vertices = tuple(str(v) for v in data["vertices"])
        if len(set(vertices)) != len(vertices):
            raise ResolutionError("duplicate vertex names")
        n = len(vertices)
        pos = {v: i for i, v in enumerate(vertices)}

        action_spec = data.get("action")
        if action_spec:
            known = {element_ref(G, k): _vertex_perm(vertices, v) for k, v in action_spec.items()}
            g_action = _close_action(G, known, n)
        else:
            g_action = (tuple(range(n)),) * G.order

        self_int = tuple(int(data["self_int"][v]) for v in vertices)
        off = [[0] * n for _ in range(n)]
        if "intersection" in data:
            mat = data["intersection"]
            for i in range(n):
                for j in range(n):
                    if i != j:
                        off[i][j] = int(mat[i][j])
        for e in data.get("edges", []):
            a, b = (str(x) for x in e)
            if a not in pos or b not in pos:
                raise ResolutionError(f"edge {e} names an unknown vertex")
            if a == b:
                raise ResolutionError(f"edge {e} is a loop")
            off[pos[a]][pos[b]] = off[pos[b]][pos[a]] = 1
        graph = DualGraph(vertices, g_action, self_int, tuple(tuple(r) for r in off))

        valuations = tuple(sorted(
            (ValuationDescriptor(int(v["i"]), str(v.get("kind", "curve")), str(v["component"]))
             for v in data["valuations"]), key=lambda v: v.index))
        r = int(data.get("r", len(valuations)))

        strata = []
        for s in data.get("strata", []):
            H = Subgroup.of(element_ref(G, x) for x in s["H"])
            vals = {element_ref(G, k): Fraction(str(v)) for k, v in (s.get("alpha") or {}).items()}
            if any(h not in H for h in vals):
                raise ResolutionError(f"stratum {s['id']}: alpha is defined off H")
            alpha = Character(H, tuple(vals.get(h, 0) for h in H))
            Hh = Subgroup.of(element_ref(G, x) for x in s.get("Hhat", [0]))
            cd = s.get("cover_degree")
            strata.append(Stratum(str(s["id"]), str(s["component"]), int(s["chi"]), H, alpha, Hh,
                                  None if cd is None else int(cd)))
        smooth = data.get("smooth_chi")
        smooth = None if smooth is None else {str(k): int(v) for k, v in smooth.items()}
    except (KeyError, TypeError, ValueError, GroupError) as exc:
        if isinstance(exc, ResolutionError):
            raise
        raise ResolutionError(f"malformed resolution: {exc!r}") from exc
    return ResolutionData(G, r, graph, valuations, tuple(strata), smooth, name or data.get("name", ""))


def load_resolution(path: str | Path) -> ResolutionData:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ResolutionError(f"cannot read {path}: {exc}") from exc
    return resolution_from_json(data, path.parent, path.stem)
