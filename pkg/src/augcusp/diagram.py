"""Planar link diagrams as PD codes: parsing, faces, twist regions.

A crossing is a 4-tuple of edge ids listed counterclockwise from the incoming
understrand, so slots 0 and 2 carry the understrand and slots 1 and 3 the
overstrand.  Edge ids are positive integers, each appearing exactly twice in
the crossing list.  A component label is attached to every edge; crossingless
components (bare loops) are carried separately since PD codes cannot encode
them.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field

from .errors import DiagramInvariantError, PDSyntaxError, ReducibleDiagramWarning

Edge = int
Crossing = tuple[Edge, Edge, Edge, Edge]
HalfEnd = tuple[int, int]  # (crossing index, slot)


@dataclass(frozen=True)
class Diagram:
    """Validated planar link diagram.

    Attributes:
        crossings: PD tuples, counterclockwise from the incoming understrand.
        components: edge id -> component label.
        signs: optional per-crossing sign (+1/-1), parallel to `crossings`.
        loops: labels of crossingless components (not representable in PD).
    """

    crossings: tuple[Crossing, ...]
    components: dict[Edge, str]
    signs: tuple[int, ...] | None = None
    loops: tuple[str, ...] = ()

    def __post_init__(self):
        _validate(self)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.components)

    @property
    def component_labels(self) -> list[str]:
        seen: dict[str, None] = {}
        for e in sorted(self.components):
            seen.setdefault(self.components[e], None)
        for lab in self.loops:
            seen.setdefault(lab, None)
        return list(seen)

    def occurrences(self) -> dict[Edge, list[HalfEnd]]:
        occ: dict[Edge, list[HalfEnd]] = {}
        for ci, cr in enumerate(self.crossings):
            for slot, e in enumerate(cr):
                occ.setdefault(e, []).append((ci, slot))
        return occ

    def component_cycles(self) -> dict[str, list[Edge]]:
        """Each component's edges in traversal order (cyclic, fixed origin)."""
        occ = self.occurrences()
        cycles: dict[str, list[Edge]] = {}
        done: set[Edge] = set()
        for start in sorted(self.components):
            if start in done:
                continue
            # Directed edge = (edge, index of the occurrence it runs toward).
            cyc: list[Edge] = []
            e, end = start, 0
            while True:
                cyc.append(e)
                done.add(e)
                ci, slot = occ[e][end]
                nxt = self.crossings[ci][(slot + 2) % 4]
                entry = (ci, (slot + 2) % 4)
                end = 1 if occ[nxt][0] == entry else 0
                e = nxt
                if (e, end) == (start, 0):
                    break
            cycles[self.components[start]] = cyc
        return cycles

    def to_json(self) -> str:
        doc = {
            "pd": [list(c) for c in self.crossings],
            "components": {str(e): lab for e, lab in sorted(self.components.items())},
        }
        if self.signs is not None:
            doc["signs"] = list(self.signs)
        if self.loops:
            doc["loops"] = list(self.loops)
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class Face:
    """One complementary region: corners and the edges along its boundary."""

    corners: tuple[HalfEnd, ...]  # (crossing, slot) sectors, in walk order
    boundary: tuple[Edge, ...]

    @property
    def sides(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class FaceMap:
    faces: tuple[Face, ...]

    @property
    def bigons(self) -> tuple[Face, ...]:
        out = []
        for f in self.faces:
            if f.sides == 2 and f.corners[0][0] != f.corners[1][0]:
                out.append(f)
        return tuple(out)

    def face_of_corner(self) -> dict[HalfEnd, int]:
        idx = {}
        for i, f in enumerate(self.faces):
            for c in f.corners:
                idx[c] = i
        return idx


@dataclass
class TwistRegion:
    """Maximal chain of bigons (m = 2) or a validated m-strand ribbon twist."""

    crossings: list[int]
    strand_count: int
    full_twists: int
    half_twist: bool
    handedness: int
    is_cycle: bool = False
    bigon_edge_pairs: list[tuple[Edge, Edge]] = field(default_factory=list)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)


# -- parsing and validation -------------------------------------------------


def parse_diagram(text: str) -> Diagram:
    """Parse the JSON envelope {"pd": ..., "components": ..., "signs": ...}."""
    if not text.strip():
        raise PDSyntaxError("empty input")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PDSyntaxError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "pd" not in doc:
        raise PDSyntaxError("expected an object with a 'pd' field")
    pd = doc["pd"]
    if not isinstance(pd, list) or not all(
        isinstance(c, list) and len(c) == 4 for c in pd
    ):
        raise PDSyntaxError("'pd' must be a list of 4-element lists")
    try:
        crossings = tuple(tuple(int(e) for e in c) for c in pd)
    except (TypeError, ValueError) as exc:
        raise PDSyntaxError(f"edge ids must be integers: {exc}") from exc
    if any(e <= 0 for c in crossings for e in c):
        raise PDSyntaxError("edge ids must be positive integers")

    comp_doc = doc.get("components")
    if comp_doc is None:
        components = _infer_components(crossings)
    else:
        if not isinstance(comp_doc, dict):
            raise PDSyntaxError("'components' must be an object")
        components = {int(k): str(v) for k, v in comp_doc.items()}

    signs_doc = doc.get("signs")
    signs = None
    if signs_doc is not None:
        if len(signs_doc) != len(crossings) or not all(
            s in (1, -1) for s in signs_doc
        ):
            raise PDSyntaxError("'signs' must list +1/-1 per crossing")
        signs = tuple(int(s) for s in signs_doc)

    loops = tuple(str(s) for s in doc.get("loops", ()))
    return Diagram(crossings, components, signs, loops)


def _infer_components(crossings) -> dict[Edge, str]:
    parent: dict[Edge, Edge] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for cr in crossings:
        union(cr[0], cr[2])
        union(cr[1], cr[3])
    reps: dict[Edge, int] = {}
    out: dict[Edge, str] = {}
    for e in sorted({e for cr in crossings for e in cr}):
        r = find(e)
        if r not in reps:
            reps[r] = len(reps)
        out[e] = str(reps[r])
    return out


def _validate(d: Diagram) -> None:
    if not d.crossings and not d.loops:
        raise DiagramInvariantError("diagram has no crossings and no loops")
    counts: dict[Edge, int] = {}
    for cr in d.crossings:
        for e in cr:
            counts[e] = counts.get(e, 0) + 1
    bad = sorted(e for e, n in counts.items() if n != 2)
    if bad:
        raise DiagramInvariantError(
            f"edge ids must appear exactly twice, offending: {bad}"
        )
    if set(counts) != set(d.components):
        missing = sorted(set(counts) - set(d.components))
        extra = sorted(set(d.components) - set(counts))
        raise DiagramInvariantError(
            f"component map mismatch (missing {missing}, extra {extra})"
        )
    # Threading consistency: edges joined through a crossing share a label.
    for cr in d.crossings:
        if d.components[cr[0]] != d.components[cr[2]]:
            raise DiagramInvariantError(
                f"understrand changes component at crossing {cr}"
            )
        if d.components[cr[1]] != d.components[cr[3]]:
            raise DiagramInvariantError(
                f"overstrand changes component at crossing {cr}"
            )
    if d.signs is not None and len(d.signs) != len(d.crossings):
        raise DiagramInvariantError("signs length differs from crossing count")
    if d.crossings:
        k = _connected_parts(d)
        faces = compute_faces(d)
        v = len(d.crossings)
        e = 2 * v
        f = len(faces.faces)
        # Each connected part of the projection contributes its own sphere.
        if v - e + f != 2 * k:
            raise DiagramInvariantError(
                f"face traversal does not close on a sphere: V-E+F = {v - e + f}"
            )


def _connected_parts(d: Diagram) -> int:
    adj: dict[Edge, set[Edge]] = {}
    for cr in d.crossings:
        for a, b in itertools.combinations(set(cr), 2):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    seen: set[Edge] = set()
    parts = 0
    for start in adj:
        if start in seen:
            continue
        parts += 1
        seen.add(start)
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return parts


# -- faces -------------------------------------------------------------------


def compute_faces(d: Diagram) -> FaceMap:
    """All complementary regions by corner traversal.

    Corner (c, k) is the sector between slots k and k+1 at crossing c.  The
    walk keeps the region on the right of each traversed edge, which on a
    counterclockwise slot ordering means: leave through slot k+1, arrive at
    the twin occurrence (c', s'), continue with corner (c', s').
    """
    occ = d.occurrences()
    twin: dict[HalfEnd, HalfEnd] = {}
    for e, ends in occ.items():
        a, b = ends
        twin[a] = b
        twin[b] = a
    unvisited: set[HalfEnd] = {
        (ci, k) for ci in range(len(d.crossings)) for k in range(4)
    }
    faces = []
    while unvisited:
        start = min(unvisited)
        corner = start
        corners = []
        boundary = []
        while True:
            corners.append(corner)
            unvisited.discard(corner)
            ci, k = corner
            out_slot = (k + 1) % 4
            edge = d.crossings[ci][out_slot]
            boundary.append(edge)
            corner = twin[(ci, out_slot)]
            if corner == start:
                break
        faces.append(Face(tuple(corners), tuple(boundary)))
    return FaceMap(tuple(faces))


# -- twist regions (two strands) ----------------------------------------------


def _alternating_bigon(d: Diagram, f: Face) -> bool:
    """A bigon is alternating when each of its edges changes over/under role
    between its two crossings; otherwise the two crossings cancel."""
    (c1, _), (c2, _) = f.corners
    occ = d.occurrences()
    for e in f.boundary:
        roles = []
        for ci, slot in occ[e]:
            roles.append(slot % 2)
        if roles[0] == roles[1]:
            return False
    return True


def detect_twist_regions(d: Diagram) -> list[TwistRegion]:
    """Maximal alternating bigon chains plus singleton regions.

    Crossings belonging to no bigon become singleton regions.  A chain that
    fails the alternation requirement is split at the junction and a
    ReducibleDiagramWarning is emitted.
    """
    faces = compute_faces(d)
    links: dict[int, list[tuple[Face, int]]] = {
        i: [] for i in range(len(d.crossings))
    }
    for f in faces.bigons:
        if not _alternating_bigon(d, f):
            warnings.warn(
                "non-alternating bigon chain: diagram is reducible; "
                "splitting the twist region at the junction",
                ReducibleDiagramWarning,
                stacklevel=2,
            )
            continue
        (c1, _), (c2, _) = f.corners
        links[c1].append((f, c2))
        links[c2].append((f, c1))
    if any(len(lk) > 2 for lk in links.values()):
        # The 2-crossing Hopf diagram has four bigons and two equally valid
        # twist-region readings; fix one by pairing edge-disjoint bigons.
        bigons = faces.bigons
        if len(d.crossings) == 2 and len(bigons) == 4:
            b0 = bigons[0]
            partner = next(
                f for f in bigons[1:] if not set(f.boundary) & set(b0.boundary)
            )
            chain = [b0.corners[0][0], b0.corners[1][0]]
            return [_chain_region(d, chain, [b0, partner], True)]
        raise DiagramInvariantError(
            "a crossing borders more than two bigons; not a reduced diagram"
        )

    regions: list[TwistRegion] = []
    visited: set[int] = set()
    for c0 in range(len(d.crossings)):
        if c0 in visited:
            continue
        if not links[c0]:
            visited.add(c0)
            regions.append(_singleton_region(d, c0))
            continue
        # Collect the path/cycle component through bigon adjacency.
        comp = {c0}
        stack = [c0]
        while stack:
            for _, nb in links[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        ends = sorted(c for c in comp if len(links[c]) == 1)
        is_cycle = not ends
        start = ends[0] if ends else min(comp)
        chain = [start]
        pairs: list[Face] = []
        prev_face: Face | None = None
        cur = start
        while True:
            step = None
            for f, nb in links[cur]:
                if f is not prev_face:
                    step = (f, nb)
                    break
            if step is None:
                break
            f, nb = step
            pairs.append(f)
            if nb == start:
                break  # cycle closed; the closing bigon is recorded
            chain.append(nb)
            prev_face, cur = f, nb
        visited.update(comp)
        if set(chain) != comp:
            raise DiagramInvariantError(
                "bigon adjacency is not a simple chain; not a reduced diagram"
            )
        regions.append(_chain_region(d, chain, pairs, is_cycle))
    return regions


def _crossing_handed(d: Diagram, ci: int) -> int:
    if d.signs is not None:
        return d.signs[ci]
    return 1


def _singleton_region(d: Diagram, ci: int) -> TwistRegion:
    return TwistRegion(
        crossings=[ci],
        strand_count=2,
        full_twists=0,
        half_twist=True,
        handedness=_crossing_handed(d, ci),
    )


def _chain_region(
    d: Diagram, chain: list[int], pairs: list[Face], is_cycle: bool
) -> TwistRegion:
    n = len(chain)
    handed = _crossing_handed(d, chain[0])
    bigon_edges = [tuple(sorted(f.boundary)) for f in pairs]
    return TwistRegion(
        crossings=chain,
        strand_count=2,
        full_twists=handed * (n // 2),
        half_twist=bool(n % 2),
        handedness=handed,
        is_cycle=is_cycle,
        bigon_edge_pairs=bigon_edges,
    )


# -- generalized twist regions --------------------------------------------------


def _subtangle_strands(d: Diagram, crossing_ids: list[int]):
    """Thread the strands of a subdiagram spanned by the given crossings.

    Returns a list of strands, each a list of (crossing, role) steps where
    role is "o" or "u", ordered along the strand from one boundary end to
    the other.
    """
    S = set(crossing_ids)
    occ = d.occurrences()

    def inside(e: Edge) -> bool:
        a, b = occ[e]
        return a[0] in S and b[0] in S

    boundary_ends: list[HalfEnd] = []
    for c in sorted(S):
        for s in range(4):
            if not inside(d.crossings[c][s]):
                boundary_ends.append((c, s))
    if len(boundary_ends) % 2:
        raise DiagramInvariantError("open strand end inside annotation")
    strands = []
    seen: set[HalfEnd] = set()
    for start in boundary_ends:
        if start in seen:
            continue
        seen.add(start)
        path = []
        c, s = start
        while True:
            path.append((c, "u" if s % 2 == 0 else "o"))
            exit_slot = (s + 2) % 4
            e = d.crossings[c][exit_slot]
            if not inside(e):
                other = _other_end(occ, e, (c, exit_slot))
                if other[0] in S:
                    # the edge leaves and re-enters: treat as boundary
                    pass
                seen.add((c, exit_slot))
                break
            c, s = _other_end(occ, e, (c, exit_slot))
        strands.append(path)
    # Each strand was traced once from each of its two ends; deduplicate.
    unique = []
    used: set[tuple] = set()
    for p in strands:
        key = min(tuple(p), tuple(reversed(p)))
        if key not in used:
            used.add(key)
            unique.append(p)
    return unique


def _other_end(occ, e: Edge, here: HalfEnd) -> HalfEnd:
    a, b = occ[e]
    return b if a == here else a


def validate_generalized_region(
    d: Diagram, crossing_ids: list[int], strand_count: int | None = None
) -> TwistRegion:
    """Check that the annotated crossings form an m-strand ribbon twist.

    A full twist contributes m(m-1) crossings with every strand pair
    crossing twice; a half twist adds m(m-1)/2 with every pair crossing
    once and alternating over/under along each strand.  Returns the region
    with (m, full twists, half twist) on success.
    """
    ids = sorted(set(crossing_ids))
    if len(ids) != len(crossing_ids):
        raise DiagramInvariantError("annotation repeats a crossing")
    for c in ids:
        if not 0 <= c < len(d.crossings):
            raise DiagramInvariantError(f"annotation names crossing {c} not in diagram")
    strands = _subtangle_strands(d, ids)
    m = len(strands)
    if m == 0:
        # The annotation swallows a closed subdiagram (a cyclic bigon chain);
        # defer to the two-strand chain detector.
        for reg in detect_twist_regions(d):
            if sorted(reg.crossings) == ids:
                if strand_count not in (None, 2):
                    raise DiagramInvariantError(
                        f"closed chain has 2 strands, expected {strand_count}"
                    )
                return reg
        raise DiagramInvariantError(
            "annotation bounds no strands and is not a bigon chain"
        )
    if strand_count is not None and m != strand_count:
        raise DiagramInvariantError(
            f"annotation has {m} strands, expected {strand_count}"
        )
    if m < 2:
        raise DiagramInvariantError("a twist region needs at least two strands")
    n = len(ids)
    # Candidate (t, half) from the crossing count.
    per_full = m * (m - 1)
    per_half = per_full // 2
    t, rem = divmod(n, per_full)
    half = rem == per_half
    if rem and not half:
        offender = ids[0]
        raise DiagramInvariantError(
            f"{n} crossings is not t full + half ribbon twists of {m} strands "
            f"(first offending crossing {offender})"
        )
    # Every unordered strand pair must meet exactly 2t + (1 if half) times.
    pair_counts: dict[frozenset, int] = {}
    strand_of: dict[int, list[int]] = {}
    for si, path in enumerate(strands):
        for c, _ in path:
            strand_of.setdefault(c, []).append(si)
    for c, ss in strand_of.items():
        if len(ss) != 2:
            raise DiagramInvariantError(
                f"crossing {c} is not met by exactly two annotation strands"
            )
        pair_counts[frozenset(ss)] = pair_counts.get(frozenset(ss), 0) + 1
    want = 2 * t + (1 if half else 0)
    for pair, cnt in sorted(pair_counts.items()):
        if cnt != want:
            offender = min(c for c, ss in strand_of.items() if frozenset(ss) == pair)
            raise DiagramInvariantError(
                f"strand pair crosses {cnt} times, ribbon pattern needs {want} "
                f"(first offending crossing {offender})"
            )
    if len(pair_counts) != m * (m - 1) // 2 and want > 0:
        raise DiagramInvariantError("some strand pairs never cross")
    # In a ribbon twist every pair alternates who passes over: t times each
    # per t full twists, with a half twist adding one unbalanced crossing.
    over_of: dict[tuple[int, int], int] = {}
    role_at: dict[int, dict[int, str]] = {}
    for si, path in enumerate(strands):
        for c, r in path:
            role_at.setdefault(c, {})[si] = r
    for c, by_strand in role_at.items():
        (s1, r1), (s2, r2) = sorted(by_strand.items())
        if r1 == r2:
            raise DiagramInvariantError(
                f"crossing {c}: both strands claim the same role"
            )
        over = s1 if r1 == "o" else s2
        under = s2 if over == s1 else s1
        over_of[(over, under)] = over_of.get((over, under), 0) + 1
    for pair in sorted(pair_counts):
        i, j = sorted(pair)
        diff = abs(over_of.get((i, j), 0) - over_of.get((j, i), 0))
        if diff > (1 if half else 0):
            offender = min(c for c, ss in strand_of.items() if frozenset(ss) == pair)
            raise DiagramInvariantError(
                "over and under passes are unbalanced: not a ribbon twist "
                f"(first offending crossing {offender})"
            )
    # For two strands also demand alternation (rules out reducible pairs).
    if m == 2:
        for path in strands:
            roles = [r for _, r in path]
            for a, b in zip(roles, roles[1:]):
                if a == b:
                    raise DiagramInvariantError(
                        "strand does not alternate over and under: reducible "
                        f"pair (first offending crossing {path[0][0]})"
                    )
    handed = _crossing_handed(d, ids[0])
    return TwistRegion(
        crossings=list(ids),
        strand_count=m,
        full_twists=handed * t,
        half_twist=half,
        handedness=handed,
    )


# -- PD isomorphism -----------------------------------------------------------


def _tuple_variants(cr: Crossing):
    # Rotating by two re-bases the understrand at its other end; this is the
    # same unoriented crossing.  Odd rotations would exchange over and under.
    yield cr
    yield (cr[2], cr[3], cr[0], cr[1])


def pd_isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """Combinatorial isomorphism of PD codes up to edge relabeling."""
    if len(d1.crossings) != len(d2.crossings):
        return False
    if len(d1.loops) != len(d2.loops):
        return False
    if not d1.crossings:
        return True
    n = len(d1.crossings)
    occ2: dict[Edge, int] = {}
    for cr in d2.crossings:
        for e in cr:
            occ2[e] = occ2.get(e, 0) + 1

    crossings2 = list(d2.crossings)

    def backtrack(i: int, used: set[int], emap: dict[Edge, Edge]) -> bool:
        if i == n:
            return True
        cr = d1.crossings[i]
        for j in range(n):
            if j in used:
                continue
            for variant in _tuple_variants(crossings2[j]):
                new = {}
                ok = True
                for a, b in zip(cr, variant):
                    cur = emap.get(a, new.get(a))
                    if cur is None:
                        if b in emap.values() or b in new.values():
                            ok = False
                            break
                        new[a] = b
                    elif cur != b:
                        ok = False
                        break
                if not ok:
                    continue
                emap.update(new)
                used.add(j)
                if backtrack(i + 1, used, emap):
                    return True
                used.discard(j)
                for k in new:
                    del emap[k]
        return False

    return backtrack(0, set(), {})


# -- braid insertion and ribbon twist patterns --------------------------------


def braid_crossing(
    sign: int, left_in: Edge, right_in: Edge, left_out: Edge, right_out: Edge
) -> Crossing:
    """PD tuple for one braid letter, strands flowing downward.

    For a positive letter the left strand passes over; the understrand runs
    from top-right to bottom-left.  Counterclockwise from the incoming
    understrand this reads (right_in, left_in, left_out, right_out).  For a
    negative letter the left strand dives under, exiting at the right
    position below, which reads (left_in, left_out, right_out, right_in).
    """
    if sign > 0:
        return (right_in, left_in, left_out, right_out)
    return (left_in, left_out, right_out, right_in)


def full_ribbon_braid(m: int, t: int) -> list[tuple[int, int]]:
    """Braid word of |t| full ribbon twists on m strands: signed generator
    indices ((sigma_1 ... sigma_{m-1})^m per full twist)."""
    word: list[tuple[int, int]] = []
    s = 1 if t >= 0 else -1
    for _ in range(abs(t)):
        for _ in range(m):
            for i in range(1, m):
                word.append((i, s))
    return word


def half_ribbon_braid(m: int, s: int) -> list[tuple[int, int]]:
    """Braid word of a single ribbon half twist on m strands (one crossing of
    the outermost strands for the whole ribbon: the permutation reverses the
    strand order)."""
    word: list[tuple[int, int]] = []
    for k in range(1, m):
        for i in range(k, 0, -1):
            word.append((i, s))
    return word


def ribbon_tangle(m: int, t: int, half: bool, handedness: int = 1):
    """PD crossings of the standard m-strand twist pattern, as an open tangle.

    Returns (crossings, top_edges, bottom_edges, next_free_edge).  Edge ids
    start at 1; top edges are 1..m.
    """
    word = full_ribbon_braid(m, t)
    if half:
        word += half_ribbon_braid(m, 1 if handedness >= 0 else -1)
    if t < 0:
        pass
    nxt = m + 1
    current = list(range(1, m + 1))
    crossings: list[Crossing] = []
    for i, s in word:
        li, ri = current[i - 1], current[i]
        lo, ro = nxt, nxt + 1
        nxt += 2
        crossings.append(braid_crossing(s * (1 if handedness >= 0 else 1), li, ri, lo, ro))
        current[i - 1], current[i] = lo, ro
    return crossings, list(range(1, m + 1)), current, nxt
