"""Generalized augmented links: crossing circles, slope ledgers, fillings.

An AugmentedLink keeps the untwisted base diagram (flat strands plus retained
half twists) together with structural data per crossing circle: how the
knotting strands pass through its disk (passages, in order along each
component), the counterclockwise rotation of the four strand ends around the
collapsed twist region (used to build the polyhedral nerve), and the parity
classes of its two plane punctures (used by the 3-punctured-sphere
certificate).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import (
    Crossing,
    Diagram,
    Edge,
    HalfEnd,
    TwistRegion,
    braid_crossing,
    compute_faces,
    detect_twist_regions,
    full_ribbon_braid,
)
from .errors import DiagramInvariantError

Dart = tuple[int, str]  # (slot, side); side "E" points at the retained crossing


@dataclass(frozen=True)
class Passage:
    """One pass of a knotting strand through a crossing disk.

    direction is +1 when the component walk crosses the disk W to E; frame is
    +1 when the disk's W side faces the first base occurrence of `edge`, and
    rank orders multiple passages along the same base edge from that end.
    Bare loops carry edge None and use list order instead.
    """

    circle: str
    slot: int
    direction: int
    edge: Edge | None
    frame: int = 1
    rank: int = 0


@dataclass
class CrossingCircle:
    label: str
    strand_count: int
    half_twist: bool
    handedness: int
    # CCW cyclic order of the 2m strand-end darts around the collapsed
    # region, or None when the region swallows the whole diagram.
    rotation: list[Dart] | None
    # Parity class (0/1, global flip per component) of the two plane
    # punctures relative to each base component's curve.
    end_sides: dict[str, tuple[int, int]] = field(default_factory=dict)
    # Local frame handedness at the disk (+1 when the hole boundary reads
    # slot0-E, slot0-W, slot1-W, slot1-E counterclockwise) and the braid
    # letter sign that reproduces the removed twist pattern.
    chirality: int = 1
    pattern_sign: int = 1


@dataclass
class AugmentedLink:
    base: Diagram
    passages: dict[str, list[Passage]]
    circles: dict[str, CrossingCircle]

    @property
    def knotting_components(self) -> list[str]:
        return sorted(self.passages)

    def circle_of(self, label: str) -> CrossingCircle:
        if label not in self.circles:
            raise KeyError(f"no crossing circle {label!r}")
        return self.circles[label]

    def is_regular(self) -> bool:
        return all(c.strand_count == 2 for c in self.circles.values())

    def to_json(self) -> str:
        doc = {
            "base": json.loads(self.base.to_json()),
            "passages": {
                comp: [
                    [p.circle, p.slot, p.direction, p.edge, p.frame, p.rank]
                    for p in ps
                ]
                for comp, ps in sorted(self.passages.items())
            },
            "circles": {
                lab: {
                    "m": c.strand_count,
                    "half_twist": c.half_twist,
                    "handedness": c.handedness,
                    "rotation": c.rotation,
                    "end_sides": {k: list(v) for k, v in sorted(c.end_sides.items())},
                }
                for lab, c in sorted(self.circles.items())
            },
        }
        return json.dumps(doc, sort_keys=True)


class SlopeLedger:
    """Exact rational filling slopes per cusp, kept in lowest terms."""

    def __init__(self, entries: dict[str, Fraction] | None = None):
        self.entries: dict[str, Fraction] = {}
        for k, v in (entries or {}).items():
            self[k] = v

    def __setitem__(self, cusp: str, slope: Fraction) -> None:
        slope = Fraction(slope)
        if slope != 0:
            self.entries[cusp] = slope
        else:
            self.entries.pop(cusp, None)

    def __getitem__(self, cusp: str) -> Fraction:
        return self.entries[cusp]

    def __contains__(self, cusp: str) -> bool:
        return cusp in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, SlopeLedger) and self.entries == other.entries

    def compose(self, other: "SlopeLedger") -> "SlopeLedger":
        """Combine twist-type fillings: 1/s then 1/t acts as 1/(s + t)."""
        out = SlopeLedger(dict(self.entries))
        for cusp, slope in other.entries.items():
            if cusp not in out.entries:
                out[cusp] = slope
                continue
            a, b = out.entries[cusp], slope
            if abs(a.numerator) != 1 or abs(b.numerator) != 1:
                raise ValueError(
                    f"can only compose reciprocal-integer slopes, got {a}, {b}"
                )
            s = a.denominator * a.numerator
            t = b.denominator * b.numerator
            out[cusp] = Fraction(0) if s + t == 0 else Fraction(1, s + t)
        return out

    def negated(self) -> "SlopeLedger":
        return SlopeLedger({k: -v for k, v in self.entries.items()})

    def to_json(self) -> str:
        return json.dumps(
            {
                k: f"{v.numerator}/{v.denominator}"
                for k, v in sorted(self.entries.items())
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "SlopeLedger":
        doc = json.loads(text)
        out = SlopeLedger()
        for k, v in doc.items():
            num, den = v.split("/")
            out[k] = Fraction(int(num), int(den))
        return out


# -- region analysis ----------------------------------------------------------


def _other_occurrence(occ, e: Edge, here: HalfEnd) -> HalfEnd:
    a, b = occ[e]
    return b if a == here else a


def _region_disk_edges(d: Diagram, r: TwistRegion) -> tuple[Edge, Edge]:
    """The two original edges the crossing disk cuts, as (slot 0, slot 1)."""
    if r.crossing_count == 1:
        ci = r.crossings[0]
        return d.crossings[ci][0], d.crossings[ci][3]
    ea, eb = r.bigon_edge_pairs[0]
    return ea, eb


def _thread_to_external(d, occ, internal: set[Edge], c: int, s: int) -> HalfEnd:
    """Follow a strand from the occurrence (c, s) until it exits the region."""
    while True:
        exit_slot = (s + 2) % 4
        e = d.crossings[c][exit_slot]
        if e not in internal:
            return (c, exit_slot)
        c, s = _other_occurrence(occ, e, (c, exit_slot))


def _region_structure(d: Diagram, r: TwistRegion, fm, corner_face):
    occ = d.occurrences()
    S = set(r.crossings)
    internal = {e for e, ends in occ.items() if ends[0][0] in S and ends[1][0] in S}
    ea, eb = _region_disk_edges(d, r)
    anchor = r.crossings[0]

    # Lateral faces: beyond the slot-0 strand and beyond the slot-1 strand.
    if r.crossing_count == 1:
        ci = r.crossings[0]
        lat_n = corner_face[(ci, 0)]
        lat_s = corner_face[(ci, 2)]
    else:
        bigon_faces = {
            i
            for i, f in enumerate(fm.faces)
            if f.sides == 2 and set(f.boundary) == {ea, eb}
        }
        lat_n = lat_s = None
        for i, f in enumerate(fm.faces):
            if i in bigon_faces:
                continue
            if ea in f.boundary and lat_n is None:
                lat_n = i
            if eb in f.boundary and lat_s is None:
                lat_s = i
        if lat_n is None or lat_s is None:
            raise DiagramInvariantError("could not locate lateral faces of region")

    darts = [
        (c, s)
        for c in sorted(S)
        for s in range(4)
        if d.crossings[c][s] not in internal
    ]
    rotation = None
    if len(darts) == 4:
        dart_labels: dict[HalfEnd, Dart] = {}
        if r.crossing_count == 1:
            ci = r.crossings[0]
            dart_labels[(ci, 0)] = (0, "W")
            dart_labels[(ci, 2)] = (0, "E")
            dart_labels[(ci, 3)] = (1, "W")
            dart_labels[(ci, 1)] = (1, "E")
        else:
            c1 = r.crossings[0]
            for slot, e in ((0, ea), (1, eb)):
                occ_a, occ_b = occ[e]
                near = occ_a if occ_a[0] == c1 else occ_b
                far = occ_b if near is occ_a else occ_a
                dart_labels[_thread_to_external(d, occ, internal, *near)] = (slot, "E")
                dart_labels[_thread_to_external(d, occ, internal, *far)] = (slot, "W")
        if set(dart_labels) != set(darts):
            raise DiagramInvariantError("region strand threading did not close")
        start = min(darts)
        cyc = [start]
        c, s = start
        for _ in range(3):
            t = (s + 1) % 4
            e = d.crossings[c][t]
            while e in internal:
                c, t = _other_occurrence(occ, e, (c, t))
                t = (t + 1) % 4
                e = d.crossings[c][t]
            s = t
            cyc.append((c, s))
        rotation = [dart_labels[x] for x in cyc]
        gaps = [corner_face[x] for x in cyc]
        if {lat_n, lat_s} - set(gaps):
            raise DiagramInvariantError("lateral faces missing from region walk")

    # E-side anchor occurrence of each disk edge (at the retained crossing).
    if r.crossing_count == 1:
        ci = r.crossings[0]
        disk_occs = ((ci, 0), (ci, 3))
    else:
        c1 = r.crossings[0]
        pair = []
        for e in (ea, eb):
            occ_a, occ_b = occ[e]
            pair.append(occ_a if occ_a[0] == c1 else occ_b)
        disk_occs = tuple(pair)

    # Local frame handedness: +1 when slot1 sits counterclockwise-next from
    # slot0 at the E-side crossing.
    s_a, s_b = disk_occs[0][1], disk_occs[1][1]
    chirality = 1 if s_b == (s_a + 1) % 4 else -1

    # Twist pattern: the braid letter sign is anchored at the crossing
    # adjacent to the disk that gets removed and reinserted.
    if r.crossing_count == 1:
        pattern_anchor = r.crossings[0]
    elif r.half_twist:
        pattern_anchor = r.crossings[1]
    else:
        pattern_anchor = r.crossings[0]
    occ_a, occ_b = occ[ea]
    anchor_occ = occ_a if occ_a[0] == pattern_anchor else occ_b
    slot0_under = anchor_occ[1] % 2 == 0
    pattern_sign = chirality * (1 if slot0_under else -1)
    if r.half_twist:
        # The retained half-twist crossing sits between the disk and the
        # frame anchor; one extra crossing mirrors the local frame.
        chirality, pattern_sign = -chirality, -pattern_sign

    return {
        "disk": (ea, eb),
        "anchor": anchor,
        "rotation": rotation,
        "laterals": (lat_n, lat_s),
        "disk_occs": disk_occs,
        "chirality": chirality,
        "pattern_sign": pattern_sign,
    }


def _face_coloring(d: Diagram, fm, component: str) -> dict[int, int] | None:
    """2-coloring of faces by crossing parity with the component's curve."""
    edge_faces: dict[Edge, list[int]] = {}
    for i, f in enumerate(fm.faces):
        for e in f.boundary:
            edge_faces.setdefault(e, []).append(i)
    color = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        for e in fm.faces[i].boundary:
            flip = 1 if d.components.get(e) == component else 0
            for j in edge_faces[e]:
                want = color[i] ^ flip
                if j == i:
                    if flip == 1 and edge_faces[e].count(i) == 2:
                        return None  # curve touches the face on both sides
                    continue
                if j in color:
                    if color[j] != want:
                        return None
                else:
                    color[j] = want
                    stack.append(j)
    if len(color) != len(fm.faces):
        return None
    return color


# -- the augmentation splice ---------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        while self.parent.setdefault(x, x) != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _check_regions(d: Diagram, regions: list[TwistRegion]) -> None:
    seen: set[int] = set()
    for r in regions:
        for c in r.crossings:
            if not 0 <= c < len(d.crossings):
                raise DiagramInvariantError(f"region crossing {c} not in diagram")
            if c in seen:
                raise DiagramInvariantError(f"regions overlap at crossing {c}")
            seen.add(c)


def augment(
    d: Diagram, regions: list[TwistRegion] | None = None
) -> tuple[AugmentedLink, SlopeLedger]:
    """Insert a crossing circle at every region and strip the full twists.

    Returns the untwisted augmented link (half twists retained in the base)
    and the ledger of 1/t_i filling slopes that restore the input.
    """
    if regions is None:
        regions = detect_twist_regions(d)
    _check_regions(d, regions)
    occ = d.occurrences()
    fm = compute_faces(d)
    corner_face = fm.face_of_corner()
    colorings = {
        comp: _face_coloring(d, fm, comp) for comp in set(d.components.values())
    }

    infos = []
    for idx, r in enumerate(regions):
        label = f"C{idx + 1}"
        st = _region_structure(d, r, fm, corner_face)
        infos.append((label, r, st))

    removed: set[int] = set()
    for _, r, _st in infos:
        keep = r.crossings[0] if r.half_twist else None
        for c in r.crossings:
            if c != keep:
                removed.add(c)

    uf = _UnionFind()
    for c in removed:
        cr = d.crossings[c]
        uf.union(cr[0], cr[2])
        uf.union(cr[1], cr[3])

    survivors = [
        (ci, tuple(uf.find(e) for e in cr))
        for ci, cr in enumerate(d.crossings)
        if ci not in removed
    ]
    old_to_new_ci = {ci: k for k, (ci, _) in enumerate(survivors)}
    used_edges = {e for _, cr in survivors for e in cr}

    class_members: dict[Edge, list[Edge]] = {}
    for e in d.components:
        class_members.setdefault(uf.find(e), []).append(e)

    base_components: dict[Edge, str] = {}
    for rep in used_edges:
        base_components[rep] = d.components[class_members[rep][0]]
    loop_comps = sorted(
        {
            d.components[members[0]]
            for rep, members in class_members.items()
            if rep not in used_edges
        }
    )

    base = Diagram(
        tuple(cr for _, cr in survivors),
        base_components,
        None,
        tuple(loop_comps),
    )
    base_occ = base.occurrences()

    def surviving_occ(c: int, s: int) -> HalfEnd | None:
        """Map an original edge end to its base occurrence after splicing."""
        visited: set[HalfEnd] = set()
        while c in removed:
            if (c, s) in visited:
                return None  # the strand closes up inside removed crossings
            visited.add((c, s))
            exit_slot = (s + 2) % 4
            e = d.crossings[c][exit_slot]
            c, s = _other_occurrence(occ, e, (c, exit_slot))
        return (old_to_new_ci[c], s)

    # Disk events, attached to original edges with their E-side anchors.
    events_by_edge: dict[Edge, list[tuple[str, int, HalfEnd]]] = {}
    for label, r, st in infos:
        ea, eb = st["disk"]
        for slot, e in ((0, ea), (1, eb)):
            near = st["disk_occs"][slot]
            events_by_edge.setdefault(e, []).append((label, slot, near))

    # Walk the original components, recording passages in order.
    passages: dict[str, list[Passage]] = {}
    rank_counter: dict[tuple[Edge, int], int] = {}
    for comp, cyc in d.component_cycles().items():
        plist: list[Passage] = []
        e, end = cyc[0], 0
        for _ in range(len(cyc)):
            toward = occ[e][end]
            start = _other_occurrence(occ, e, toward)
            evs = events_by_edge.get(e, [])
            evs_sorted = sorted(evs, key=lambda ev: 0 if ev[2] == start else 1)
            for label, slot, near in evs_sorted:
                direction = 1 if near == toward else -1
                rep = uf.find(e)
                if rep in used_edges:
                    e_surv = surviving_occ(*near)
                    frame = 1 if base_occ[rep][1] == e_surv else -1
                    plist.append(Passage(label, slot, direction, rep, frame, 0))
                else:
                    plist.append(Passage(label, slot, direction, None))
            ci, sl = toward
            nxt = d.crossings[ci][(sl + 2) % 4]
            entry = (ci, (sl + 2) % 4)
            end = 1 if occ[nxt][0] == entry else 0
            e = nxt
        if plist:
            passages[comp] = plist

    # Ranks along each base edge, measured from base occurrence 0.
    for comp, plist in passages.items():
        groups: dict[Edge, list[int]] = {}
        for i, p in enumerate(plist):
            if p.edge is not None:
                groups.setdefault(p.edge, []).append(i)
        for e, idxs in groups.items():
            # The edge is traversed once, so its events are consecutive in
            # the cyclic walk; rotate past the wrap-around gap if needed.
            order = sorted(idxs)
            if order[-1] - order[0] != len(order) - 1:
                for k in range(1, len(order)):
                    if order[k] - order[k - 1] > 1:
                        order = order[k:] + order[:k]
                        break
            # Walk order along the edge runs occ0 -> occ1 iff frame and
            # direction agree (W faces occ0 and the walk crosses W to E,
            # or both reversed).
            p0 = plist[order[0]]
            occ0_first = (p0.frame == p0.direction)
            ordered = order if occ0_first else list(reversed(order))
            for rank, i in enumerate(ordered):
                p = plist[i]
                plist[i] = Passage(p.circle, p.slot, p.direction, p.edge, p.frame, rank)

    for comp in base.loops:
        passages.setdefault(comp, [])

    circles: dict[str, CrossingCircle] = {}
    ledger = SlopeLedger()
    for label, r, st in infos:
        lat_n, lat_s = st["laterals"]
        end_sides: dict[str, tuple[int, int]] = {}
        for comp, coloring in colorings.items():
            if coloring is not None:
                end_sides[comp] = (coloring[lat_n], coloring[lat_s])
        circles[label] = CrossingCircle(
            label=label,
            strand_count=2,
            half_twist=r.half_twist,
            handedness=r.handedness,
            rotation=st["rotation"],
            end_sides=end_sides,
            chirality=st["chirality"],
            pattern_sign=st["pattern_sign"],
        )
        if r.full_twists != 0:
            ledger[label] = Fraction(1, r.full_twists)

    al = AugmentedLink(base=base, passages=passages, circles=circles)
    _validate_augmented(al)
    return al, ledger


def _validate_augmented(al: AugmentedLink) -> None:
    counts: dict[str, int] = {lab: 0 for lab in al.circles}
    for plist in al.passages.values():
        for p in plist:
            counts[p.circle] += 1
    for lab, c in al.circles.items():
        if counts[lab] != c.strand_count:
            raise DiagramInvariantError(
                f"circle {lab}: disk punctured {counts[lab]} times, "
                f"expected {c.strand_count}"
            )


# -- filling -------------------------------------------------------------------


def apply_filling(al: AugmentedLink, ledger: SlopeLedger) -> Diagram:
    """Reinsert t full twists per 1/t ledger entry and delete those circles.

    Circles without a ledger entry stay in the result and are expanded into
    PD crossings (the circle's loop crossing every strand of its disk twice).
    """
    twists: dict[str, int] = {}
    for cusp, slope in ledger.entries.items():
        if cusp not in al.circles:
            raise DiagramInvariantError(f"ledger names unknown cusp {cusp!r}")
        if abs(slope.numerator) != 1:
            raise DiagramInvariantError(
                f"slope {slope} on a crossing circle is not 1/t; combinatorial "
                "twisting is undefined (use geometric tools)"
            )
        twists[cusp] = slope.denominator * slope.numerator
    return _fill(al, twists, expand_rest=True)


def untwist_retwist_roundtrip(
    d: Diagram, regions: list[TwistRegion] | None = None
) -> Diagram:
    """augment followed by the inverse filling; isomorphic to the input."""
    if regions is None:
        regions = detect_twist_regions(d)
    al, ledger = augment(d, regions)
    twists = {lab: 0 for lab in al.circles}
    for cusp, slope in ledger.entries.items():
        twists[cusp] = slope.denominator * slope.numerator
    return _fill(al, twists, expand_rest=False)


def _fill(al: AugmentedLink, twists: dict[str, int], expand_rest: bool) -> Diagram:
    crossings: list[Crossing] = list(al.base.crossings)
    occ: dict[Edge, list[HalfEnd]] = {}
    for ci, cr in enumerate(crossings):
        for s, e in enumerate(cr):
            occ.setdefault(e, []).append((ci, s))
    counter = [max(occ, default=0) + 1]

    def fresh() -> Edge:
        counter[0] += 1
        return counter[0] - 1

    comp_of_new: dict[Edge, str] = dict(al.base.components)
    slot_component: dict[tuple[str, int], str] = {}
    for comp, plist in al.passages.items():
        for p in plist:
            slot_component[(p.circle, p.slot)] = comp

    uf = _UnionFind()
    stubs: dict[str, dict[int, tuple[Edge, Edge]]] = {}
    for lab in sorted(al.circles):
        circle = al.circles[lab]
        m = circle.strand_count
        if lab in twists:
            t = twists[lab]
            letter = circle.pattern_sign * circle.handedness * (1 if t >= 0 else -1)
            word = [(i, letter) for i, _ in full_ribbon_braid(m, abs(t))]
            # Braid positions run across the disk; a left-handed local frame
            # mirrors the assignment so the tangle glues back planarly.
            pos_to_slot = (
                list(range(m)) if circle.chirality == 1 else list(range(m - 1, -1, -1))
            )
            w_stubs = [fresh() for _ in range(m)]
            current = list(w_stubs)
            for i, s in word:
                lo, ro = fresh(), fresh()
                crossings.append(braid_crossing(s, current[i - 1], current[i], lo, ro))
                current[i - 1], current[i] = lo, ro
            stubs[lab] = {
                pos_to_slot[p]: (w_stubs[p], current[p]) for p in range(m)
            }
            for p in range(m):
                comp = slot_component[(lab, pos_to_slot[p])]
                comp_of_new[w_stubs[p]] = comp
                comp_of_new[current[p]] = comp
        elif expand_rest:
            stubs[lab] = _expand_circle(crossings, fresh, al, lab, comp_of_new)
        else:
            raise DiagramInvariantError(f"no filling for circle {lab}")

    loops_left: list[str] = []
    for comp in sorted(al.passages):
        plist = al.passages[comp]
        if not plist:
            if comp in al.base.loops:
                loops_left.append(comp)
            continue
        if comp in al.base.loops:
            pieces = [fresh() for _ in range(len(plist))]
            for piece in pieces:
                comp_of_new[piece] = comp
            for k, p in enumerate(plist):
                w_stub, e_stub = stubs[p.circle][p.slot]
                before, after = pieces[k - 1], pieces[k]
                if p.direction == 1:
                    uf.union(before, w_stub)
                    uf.union(after, e_stub)
                else:
                    uf.union(before, e_stub)
                    uf.union(after, w_stub)
        else:
            by_edge: dict[Edge, list[Passage]] = {}
            for p in plist:
                by_edge.setdefault(p.edge, []).append(p)
            for e, evs in by_edge.items():
                evs = sorted(evs, key=lambda p: p.rank)
                ends = occ[e]
                pieces = [e] + [fresh() for _ in range(len(evs))]
                far_ci, far_s = ends[1]
                cr = list(crossings[far_ci])
                cr[far_s] = pieces[-1]
                crossings[far_ci] = tuple(cr)
                for piece in pieces[1:]:
                    comp_of_new[piece] = comp
                for k, p in enumerate(evs):
                    w_stub, e_stub = stubs[p.circle][p.slot]
                    if p.frame == 1:  # W side faces occurrence 0
                        uf.union(pieces[k], w_stub)
                        uf.union(pieces[k + 1], e_stub)
                    else:
                        uf.union(pieces[k], e_stub)
                        uf.union(pieces[k + 1], w_stub)

    resolved = [tuple(uf.find(e) for e in cr) for cr in crossings]
    comp_map: dict[Edge, str] = {}
    for e, lab in comp_of_new.items():
        comp_map.setdefault(uf.find(e), lab)
    ids = sorted({e for cr in resolved for e in cr})
    compact = {e: i + 1 for i, e in enumerate(ids)}
    final = tuple(tuple(compact[e] for e in cr) for cr in resolved)
    components = {compact[e]: comp_map.get(e, "?") for e in ids}
    if any(lab == "?" for lab in components.values()):
        from .diagram import _infer_components

        inferred = _infer_components(final)
        known: dict[str, str] = {}
        for e, lab in components.items():
            if lab != "?":
                known.setdefault(inferred[e], lab)
        for e in components:
            if components[e] == "?":
                components[e] = known.get(inferred[e], inferred[e])
    return Diagram(final, components, None, tuple(sorted(loops_left)))


def _expand_circle(crossings, fresh, al: AugmentedLink, lab: str, comp_of_new):
    """Replace an unfilled circle by its PD loop crossing each strand twice.

    The circle's W arc descends across the strands passing over them; the E
    arc ascends passing under, which matches a round circle perpendicular to
    the projection plane.  A left-handed disk frame mirrors the picture.
    Returns the (W stub, E stub) pair per slot.
    """
    circle = al.circles[lab]
    m = circle.strand_count
    mirror = circle.chirality == -1
    pos_to_slot = list(range(m)) if not mirror else list(range(m - 1, -1, -1))
    loop = [fresh() for _ in range(2 * m)]
    for seg in loop:
        comp_of_new[seg] = lab
    slot_component: dict[int, str] = {}
    for comp, plist in al.passages.items():
        for p in plist:
            if p.circle == lab:
                slot_component[p.slot] = comp

    def put(cr: tuple) -> None:
        # A left-handed frame only reverses the column-to-slot assignment;
        # the underlying 4-valent map is symmetric under the flip.
        crossings.append(cr)

    # Frame matched to the braid insertion: strands run downward in columns
    # (W end up), the circle's upper arc crosses over them left to right and
    # the lower arc returns under them.
    mids = {}
    out = {}
    for p in range(m):
        j = pos_to_slot[p]
        w_stub, mid = fresh(), fresh()
        comp_of_new[w_stub] = slot_component[j]
        comp_of_new[mid] = slot_component[j]
        # Upper crossing at column p: strand (under) runs w_stub -> mid,
        # circle (over) runs loop[p] -> loop[p+1].  CCW from the incoming
        # under edge at the north: (N, W, S, E).
        put((w_stub, loop[p], mid, loop[p + 1]))
        mids[j] = mid
        out[j] = [w_stub, None]
    for i in range(m):
        p = m - 1 - i  # the lower arc returns right to left
        j = pos_to_slot[p]
        e_stub = fresh()
        comp_of_new[e_stub] = slot_component[j]
        c_in = loop[m + i]
        c_out = loop[(m + i + 1) % (2 * m)]
        # Lower crossing at column p: circle (under) runs c_in -> c_out
        # leftward, strand (over) runs mid -> e_stub.  CCW from the incoming
        # under edge at the east: (E, N, W, S).
        put((c_in, mids[j], c_out, e_stub))
        out[j][1] = e_stub
    return {j: tuple(v) for j, v in out.items()}
