"""Polyhedral nerve of a fully augmented link and its circle packing.

Cutting the complement along the projection plane and the crossing disks
yields two identical right-angled ideal polyhedra.  The faces coming from
the projection plane form a circle packing whose tangency graph (the white
nerve) is computed here combinatorially; the crossing-disk faces are the
circles through the tangency points of each triangular interstice.  Half
twists do not change the polyhedra, only the face gluing, so the nerve is
built from the untwisted companion of the link.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .augment import AugmentedLink
from .errors import ConvergenceError, UnsupportedLinkError
from .mobius import Circline, MobiusMap, tangency_point, tangency_residual

WDart = tuple[str, int, str]  # (circle, slot, "W"/"E")


@dataclass(frozen=True)
class NerveEdge:
    """A tangency between two white faces: an ideal vertex of the polyhedron."""

    a: int
    b: int
    kind: str  # "arc" (knotting strand) or "circle" (crossing circle)
    cusp: str  # component or circle label
    ref: object = None  # arc id or circle label


@dataclass
class Nerve:
    whites: int
    edges: list[NerveEdge]
    flowers: list[list[int]]  # per white vertex: incident edge ids, cyclic
    triangles: list[tuple[tuple[int, int, int], str, str]]  # (edge ids), circle, side
    infinity_edge: int
    # arc structure for cusp walks: per arc id: (cusp, darts at its two ends)
    arcs: dict[int, tuple[str, WDart, WDart]] = field(default_factory=dict)
    circle_half: dict[str, bool] = field(default_factory=dict)
    circle_sign: dict[str, int] = field(default_factory=dict)
    arc_edge: dict[int, int] = field(default_factory=dict)  # arc id -> edge id
    circle_edge: dict[str, int] = field(default_factory=dict)
    dart_arc: dict[WDart, int] = field(default_factory=dict)

    def edge_vertices(self, eid: int) -> tuple[int, int]:
        e = self.edges[eid]
        return (e.a, e.b)

    def cusps(self) -> list[str]:
        return sorted({e.cusp for e in self.edges})


# -- companion structure -------------------------------------------------------


def _companion_arcs(al: AugmentedLink):
    """Arc pairing of the untwisted companion plus dart rotations.

    Returns (arcs, rotations) where arcs maps arc id -> (cusp, dart, dart)
    and rotations maps circle -> CCW dart cycle of the bare disk.
    """
    # Arcs of the link as given: consecutive passages along each component.
    raw: list[tuple[str, WDart, WDart]] = []
    for comp, plist in sorted(al.passages.items()):
        n = len(plist)
        if n == 0:
            raise UnsupportedLinkError(
                f"component {comp!r} meets no crossing disk; the diagram is "
                "not sufficiently reduced for explicit geometry"
            )
        for k, p in enumerate(plist):
            q = plist[(k + 1) % n]
            leave: WDart = (p.circle, p.slot, "E" if p.direction == 1 else "W")
            arrive: WDart = (q.circle, q.slot, "W" if q.direction == 1 else "E")
            raw.append((comp, leave, arrive))

    # Untwist: the half-twist crossing east of the disk swaps the two rails,
    # so flattening it exchanges the destinations of the two E-side darts.
    partner: dict[WDart, WDart] = {}
    for comp, x, y in raw:
        partner[x] = y
        partner[y] = x
    for lab in sorted(al.circles):
        c = al.circles[lab]
        if not c.half_twist:
            continue
        if c.strand_count != 2:
            raise UnsupportedLinkError(
                f"circle {lab}: no explicit geometry available for "
                f"{c.strand_count}-strand twist regions"
            )
        a: WDart = (lab, 0, "E")
        b: WDart = (lab, 1, "E")
        x, y = partner[a], partner[b]
        if x == b:  # the two E darts join each other; flattening keeps that
            continue
        partner[a], partner[y] = y, a
        partner[b], partner[x] = x, b

    # Rebuild arcs from the involution; label cusps afterwards.
    arcs: dict[int, tuple[str, WDart, WDart]] = {}
    seen: set[WDart] = set()
    aid = 0
    for comp, x, y in raw:
        for d in (x, y):
            if d in seen:
                continue
            e = partner[d]
            seen.add(d)
            seen.add(e)
            arcs[aid] = ("?", d, e) if d <= e else ("?", e, d)
            aid += 1

    # Cusp orbits: crossing a disk identifies (j, W) with (j, E) for a plain
    # circle and (j, W) with (1 - j, E) under a half-twist shear.
    arc_of: dict[WDart, int] = {}
    for i, (_, d, e) in arcs.items():
        arc_of[d] = i
        arc_of[e] = i
    parent = {i: i for i in arcs}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for lab in sorted(al.circles):
        half = al.circles[lab].half_twist
        for j in (0, 1):
            w: WDart = (lab, j, "W")
            e: WDart = (lab, (1 - j) if half else j, "E")
            union(arc_of[w], arc_of[e])

    # Label orbits by the true component owning each W dart.
    dart_comp: dict[WDart, str] = {}
    for comp, plist in al.passages.items():
        for p in plist:
            dart_comp[(p.circle, p.slot, "W")] = comp
            dart_comp[(p.circle, p.slot, "E")] = comp
    orbit_label: dict[int, str] = {}
    for i, (_, d, e) in sorted(arcs.items()):
        for dd in (d, e):
            if dd[2] == "W":
                orbit_label.setdefault(find(i), dart_comp[dd])
    labeled = {}
    for i, (_, d, e) in arcs.items():
        lab = orbit_label.get(find(i))
        if lab is None:
            raise UnsupportedLinkError("could not label a cusp orbit")
        labeled[i] = (lab, d, e)

    # Companion rotations around the bare disk.  The recorded region walk is
    # the ground truth; a retained half twist swaps the slots of the E darts.
    # When the walk is unavailable (the region swallows its complement) the
    # word is synthesized from the calibrated frame handedness.
    rotations: dict[str, list[WDart]] = {}
    for lab in sorted(al.circles):
        c = al.circles[lab]
        if c.rotation is not None:
            word = list(c.rotation)
            if c.half_twist:
                word = [
                    ((1 - s), side) if side == "E" else (s, side)
                    for s, side in word
                ]
            rotations[lab] = [(lab, s, side) for s, side in word]
        elif c.chirality == 1:
            rotations[lab] = [(lab, 1, "E"), (lab, 1, "W"), (lab, 0, "W"), (lab, 0, "E")]
        else:
            rotations[lab] = [(lab, 0, "E"), (lab, 0, "W"), (lab, 1, "W"), (lab, 1, "E")]
    return labeled, rotations


def build_nerve(al: AugmentedLink, infinity: int | None = None) -> Nerve:
    """Tangency nerve of the white (projection plane) faces.

    Supported inputs are regular fully augmented links: every crossing disk
    meets exactly two strands and there are at least two crossing circles.
    """
    if not al.circles:
        raise UnsupportedLinkError("no crossing circles")
    for lab, c in sorted(al.circles.items()):
        if c.strand_count != 2:
            raise UnsupportedLinkError(
                f"circle {lab} has {c.strand_count} strands: no explicit "
                "geometry available"
            )
    if len(al.circles) < 2:
        raise UnsupportedLinkError(
            "a single twist region does not produce a hyperbolic augmented "
            "link; need at least two crossing circles"
        )

    arcs, rotations = _companion_arcs(al)
    dart_arc: dict[WDart, int] = {}
    for i, (_, d, e) in arcs.items():
        dart_arc[d] = i
        dart_arc[e] = i

    # Face traversal of the collapsed embedded graph: vertices are circles,
    # edges are arcs, rotations as above.  Walking keeps a face on a fixed
    # side: from an arriving dart step to the next dart clockwise in the
    # rotation and leave through its arc.
    def next_in_rotation(d: WDart, shift: int) -> WDart:
        rot = rotations[d[0]]
        return rot[(rot.index(d) + shift) % len(rot)]

    unused: set[tuple[WDart, int]] = set()
    for i, (_, d, e) in arcs.items():
        unused.add((d, i))
        unused.add((e, i))
    faces: list[list[tuple[WDart, int]]] = []
    gap_face: dict[tuple[WDart, WDart], int] = {}
    while unused:
        start = min(unused)
        walk = []
        cur = start
        while True:
            walk.append(cur)
            unused.discard(cur)
            d, i = cur
            _, x, y = arcs[i]
            twin = y if d == x else x
            nxt_d = next_in_rotation(twin, 1)
            gap_face[(twin, nxt_d)] = len(faces)
            cur = (nxt_d, dart_arc[nxt_d])
            if cur == start:
                break
        faces.append(walk)
    whites = len(faces)

    v = len(al.circles)
    e_count = len(arcs)
    if whites != 2 - v + e_count:
        raise UnsupportedLinkError(
            "collapsed diagram is not planar; no polyhedral decomposition"
        )

    face_of_dart: dict[tuple[WDart, int], int] = {}
    for fi, walk in enumerate(faces):
        for item in walk:
            face_of_dart[item] = fi

    # Nerve edges: one per arc (faces on its two sides) and one per circle
    # (the two lateral gaps, between mixed-side dart pairs).
    edges: list[NerveEdge] = []
    arc_edge: dict[int, int] = {}
    for i in sorted(arcs):
        cusp, d, e = arcs[i]
        fa = face_of_dart[(d, i)]
        fb = face_of_dart[(e, i)]
        arc_edge[i] = len(edges)
        edges.append(NerveEdge(min(fa, fb), max(fa, fb), "arc", cusp, i))
    circle_edge: dict[str, int] = {}
    tri_raw: list[tuple[str, str, int]] = []
    for lab in sorted(al.circles):
        rot = rotations[lab]
        lateral = []
        ends = {}
        for k in range(4):
            d1, d2 = rot[k], rot[(k + 1) % 4]
            f = gap_face[(d1, d2)]
            if d1[2] != d2[2]:
                lateral.append(f)
            else:
                ends[d1[2]] = f
        if len(lateral) != 2 or set(ends) != {"W", "E"}:
            raise UnsupportedLinkError(f"circle {lab}: degenerate disk gaps")
        circle_edge[lab] = len(edges)
        edges.append(
            NerveEdge(min(lateral), max(lateral), "circle", lab, lab)
        )
        tri_raw.append((lab, "W", ends["W"]))
        tri_raw.append((lab, "E", ends["E"]))

    # Simplicity: tangent circles meet once, so edge pairs must be unique.
    pairs = [(e.a, e.b) for e in edges]
    if len(set(pairs)) != len(pairs) or any(a == b for a, b in pairs):
        raise UnsupportedLinkError(
            "white faces would be tangent more than once; the diagram is not "
            "prime and twist-reduced (augmented link not hyperbolic)"
        )

    # Incident edges per white vertex, in the cyclic order of the face walk.
    flowers: list[list[int]] = [[] for _ in range(whites)]
    for fi, walk in enumerate(faces):
        for d, i in walk:
            flowers[fi].append(arc_edge[i])
            # A lateral gap follows when the next dart sits on the same
            # circle with mixed sides.
            _, x, y = arcs[i]
            twin = y if d == x else x
            nxt = rotations[twin[0]][(rotations[twin[0]].index(twin) + 1) % 4]
            if nxt[2] != twin[2]:
                flowers[fi].append(circle_edge[twin[0]])

    # Triangles: the circle's lateral tangency plus the arcs at its two
    # same-side darts.
    triangles = []
    for lab, side, _f_end in tri_raw:
        a0 = dart_arc[(lab, 0, side)]
        a1 = dart_arc[(lab, 1, side)]
        triangles.append(
            ((circle_edge[lab], arc_edge[a0], arc_edge[a1]), lab, side)
        )

    tri_vertex_sets = set()
    for (e0, e1, e2), lab, side in triangles:
        vs = frozenset(
            [edges[e0].a, edges[e0].b, edges[e1].a, edges[e1].b, edges[e2].a, edges[e2].b]
        )
        if len(vs) != 3:
            raise UnsupportedLinkError("shaded face is not a triangle")
        tri_vertex_sets.add(vs)

    n = Nerve(
        whites=whites,
        edges=edges,
        flowers=flowers,
        triangles=triangles,
        infinity_edge=infinity if infinity is not None else 0,
        arcs=arcs,
        circle_half={lab: al.circles[lab].half_twist for lab in al.circles},
        circle_sign={lab: al.circles[lab].handedness for lab in al.circles},
        arc_edge=arc_edge,
        circle_edge=circle_edge,
        dart_arc=dart_arc,
    )
    _check_degrees(n)
    return n


def _check_degrees(n: Nerve) -> None:
    for fi, fl in enumerate(n.flowers):
        if len(fl) < 3:
            raise UnsupportedLinkError(
                f"white face {fi} has degree {len(fl)} < 3; degenerate nerve"
            )


# -- the packing solver --------------------------------------------------------


@dataclass
class CirclePacking:
    """Solved packing: one circline per white vertex plus derived shaded ones."""

    nerve: Nerve
    whites: list[Circline]
    shaded: list[Circline]  # parallel to nerve.triangles
    tangencies: dict[int, complex | None]  # edge id -> point (None = infinity)
    tol: float
    normalization: dict

    def residuals(self) -> list[float]:
        out = []
        for e in self.nerve.edges:
            out.append(tangency_residual(self.whites[e.a], self.whites[e.b]))
        return out

    def max_residual(self) -> float:
        return max(self.residuals())

    def scale(self) -> float:
        rs = [c.radius for c in self.whites if not c.is_line]
        return max(rs) if rs else 1.0

    def apply_mobius(self, t: MobiusMap) -> "CirclePacking":
        whites = [c.apply(t) for c in self.whites]
        shaded = [c.apply(t) for c in self.shaded]
        tang = {k: t(z) for k, z in self.tangencies.items()}
        return CirclePacking(self.nerve, whites, shaded, tang, self.tol, dict(self.normalization))

    def to_json(self) -> str:
        def circ(c: Circline):
            if c.is_line:
                n = c.normal()
                return {"line": {"normal": [n.real, n.imag], "offset": c.offset()}}
            z = c.center
            return {"circle": {"center": [z.real, z.imag], "radius": c.radius}}

        doc = {
            "whites": [circ(c) for c in self.whites],
            "shaded": [circ(c) for c in self.shaded],
            "tangencies": {
                str(k): ([z.real, z.imag] if z is not None else None)
                for k, z in sorted(self.tangencies.items())
            },
            "max_residual": self.max_residual(),
            "normalization": {
                k: v for k, v in self.normalization.items() if isinstance(v, (int, float, str))
            },
        }
        return json.dumps(doc, sort_keys=True)


def _petal_angle(r: float, a: float, b: float) -> float:
    """Angle at the center of a radius-r circle spanned by tangent petals of
    radii a and b (math.inf for a line petal)."""
    ta = 1.0 if math.isinf(a) else a / (r + a)
    tb = 1.0 if math.isinf(b) else b / (r + b)
    x = math.sqrt(ta * tb)
    return 2.0 * math.asin(min(1.0, x))


def solve_flower_radii(
    flowers: dict[int, list[int]],
    fixed: dict[int, float],
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> dict[int, float]:
    """Euclidean circle packing radii by angle-sum iteration.

    flowers maps each free vertex to the cyclic list of its petal vertices;
    fixed maps constrained vertices to radii (math.inf marks a line).  Every
    free vertex's angle sum is driven to 2 pi with the uniform-neighbor
    update and simple super-step acceleration.
    """
    radii: dict[int, float] = dict(fixed)
    free = sorted(set(flowers) - set(fixed))
    for v in free:
        radii.setdefault(v, 1.0)

    def angle_sum(v: int) -> float:
        r = radii[v]
        pet = flowers[v]
        k = len(pet)
        total = 0.0
        for i in range(k):
            total += _petal_angle(r, radii[pet[i]], radii[pet[(i + 1) % k]])
        return total

    target = 2.0 * math.pi
    prev_err = math.inf
    prev_radii: dict[int, float] | None = None
    for _ in range(max_iter):
        before = {v: radii[v] for v in free}
        err = 0.0
        for v in free:
            theta = angle_sum(v)
            k = len(flowers[v])
            r = radii[v]
            beta = math.sin(theta / (2 * k))
            delta = math.sin(target / (2 * k))
            hat = beta * r / (1.0 - beta) if beta < 1.0 else r
            radii[v] = hat * (1.0 - delta) / delta
            err = max(err, abs(theta - target))
        if err <= tol:
            return radii
        # Super-step: extrapolate along the last displacement when the error
        # is contracting at a steady rate.
        if prev_radii is not None and 0 < err < prev_err:
            ratio = err / prev_err
            lam = ratio / (1.0 - ratio)
            if 0.0 < lam < 100.0:
                trial = {v: radii[v] + lam * (radii[v] - before[v]) for v in free}
                if all(r > 0 for r in trial.values()):
                    radii.update(trial)
        prev_radii = before
        prev_err = err
    raise ConvergenceError(
        f"packing iteration did not reach tol={tol} in {max_iter} steps",
        prev_err,
    )


def solve_packing(nerve: Nerve, tol: float = 1e-12, max_iter: int = 100_000) -> CirclePacking:
    """Solve and lay out the packing with the designated tangency at infinity.

    The two white faces of the infinity edge become horizontal lines y = 0
    and y = H; every other face becomes a circle in the strip.
    """
    eid = nerve.infinity_edge
    u, v = nerve.edge_vertices(eid)
    petals = {
        i: _neighbor_cycle(nerve, i) for i in range(nerve.whites) if i not in (u, v)
    }
    fixed = {u: math.inf, v: math.inf}
    radii = solve_flower_radii(petals, fixed, tol=max(tol * 1e-2, 1e-15), max_iter=max_iter)
    whites = _layout(nerve, u, v, radii)
    whites = _refine(nerve, whites, u, v, tol)
    shaded, tangencies = _derive_shaded(nerve, whites)
    packing = CirclePacking(
        nerve=nerve,
        whites=whites,
        shaded=shaded,
        tangencies=tangencies,
        tol=tol,
        normalization={"infinity_edge": eid, "frame": "strip"},
    )
    worst = packing.max_residual()
    if worst > tol * max(1.0, packing.scale()):
        raise ConvergenceError(
            f"tangency residual {worst:.3e} exceeds tol after refinement", worst
        )
    return packing


def _neighbor_cycle(nerve: Nerve, i: int) -> list[int]:
    out = []
    for eid in nerve.flowers[i]:
        a, b = nerve.edge_vertices(eid)
        out.append(b if a == i else a)
    return out


def _layout(nerve: Nerve, u: int, v: int, radii: dict[int, float]) -> list[Circline]:
    """Place circles from a root tangent to both lines, most-constrained first.

    Each new circle's two candidate positions (from two placed neighbors)
    are scored against the tangency constraints of all its placed neighbors
    and the non-overlap of everything already placed.
    """
    h = None
    for i in range(nerve.whites):
        if i in (u, v):
            continue
        nb = set(_neighbor_cycle(nerve, i))
        if u in nb and v in nb:
            h = 2.0 * radii[i]
            root = i
            break
    if h is None:
        raise UnsupportedLinkError("no face tangent to both reflection lines")

    placed: dict[int, Circline] = {
        u: Circline.line(0.0, 1j),  # y = 0, packing above
        v: Circline.line(h * 1j, -1j),  # y = h, packing below
    }
    placed[root] = Circline.circle(complex(0.0, radii[root]), radii[root])
    neighbors = {i: _neighbor_cycle(nerve, i) for i in range(nerve.whites)}

    def gap(c: Circline, z: complex, rw: float) -> float:
        """Signed tangency error of a radius-rw circle at z against c."""
        if c.is_line:
            return _signed(c, z) - rw
        return abs(z - c.center) - (c.radius + rw)

    while len(placed) < nerve.whites:
        best_v = None
        best_known = -1
        for i in range(nerve.whites):
            if i in placed:
                continue
            known = sum(1 for nb in neighbors[i] if nb in placed)
            if known > best_known:
                best_known = known
                best_v = i
        if best_known < 2:
            raise ConvergenceError("layout stalled: nerve not 2-connected", math.inf)
        w = best_v
        rw = radii[w]
        known = [nb for nb in neighbors[w] if nb in placed]
        # Prefer circle anchors over lines for the two-solution construction.
        known.sort(key=lambda k: placed[k].is_line)
        cands = _tangent_candidates(placed[known[0]], placed[known[1]], rw)
        if not cands:
            raise ConvergenceError(f"no tangent position for face {w}", math.inf)
        best_z, best_score = None, math.inf
        for z in cands:
            score = 0.0
            for nb in known:
                score = max(score, abs(gap(placed[nb], z, rw)))
            for k, c in placed.items():
                if k in known or c.is_line:
                    continue
                overlap = -(gap(c, z, rw))
                score = max(score, overlap)
            if score < best_score:
                best_score = score
                best_z = z
        placed[w] = Circline.circle(best_z, rw)
    return [placed[i] for i in range(nerve.whites)]


def _tangent_candidates(ca: Circline, cb: Circline, rw: float) -> list[complex]:
    """Centers of a radius-rw circle tangent to both placed circlines."""
    cands: list[complex] = []
    if ca.is_line and cb.is_line:
        return cands
    if ca.is_line:
        ca, cb = cb, ca
    if cb.is_line:
        n = cb.normal()
        zb = ca.center
        s = _signed(cb, zb)
        d2 = (ca.radius + rw) ** 2 - (s - rw) ** 2
        if d2 < -1e-9 * (ca.radius + rw) ** 2:
            return cands
        d = math.sqrt(max(0.0, d2))
        base = zb - (s - rw) * n
        t = 1j * n
        for sgn in (1.0, -1.0):
            cands.append(base + sgn * d * t)
        return cands
    za, ra = ca.center, ca.radius
    zb, rb = cb.center, cb.radius
    d = abs(zb - za)
    if d == 0:
        return cands
    l1, l2 = ra + rw, rb + rw
    x = (d * d + l1 * l1 - l2 * l2) / (2 * d)
    h2 = l1 * l1 - x * x
    if h2 < -1e-9 * l1 * l1:
        return cands
    hh = math.sqrt(max(0.0, h2))
    u_ = (zb - za) / d
    for sgn in (1.0, -1.0):
        cands.append(za + x * u_ + sgn * hh * (1j * u_))
    return cands


def _signed(line: Circline, z: complex) -> float:
    n = line.normal()
    return (n.real * z.real + n.imag * z.imag) - line.offset()


def _refine(nerve: Nerve, whites: list[Circline], u: int, v: int, tol: float):
    """Gauss-Newton polish of centers and radii on the tangency equations."""
    idx = [i for i in range(nerve.whites) if i not in (u, v)]
    if not idx:
        return whites
    pos = {i: k for k, i in enumerate(idx)}
    yv = whites[v].offset() if whites[v].is_line else None
    h = abs(yv)
    x = np.zeros(3 * len(idx) + 1)
    for i in idx:
        z = whites[i].center
        x[3 * pos[i]] = z.real
        x[3 * pos[i] + 1] = z.imag
        x[3 * pos[i] + 2] = whites[i].radius
    x[-1] = h

    eqs = [e for k, e in enumerate(nerve.edges) if k != nerve.infinity_edge]
    # Gauge: fix the x coordinate of the lowest-index free circle.
    gauge = idx[0]

    def residual(xv):
        res = []
        hh = xv[-1]
        for e in eqs:
            a, b = e.a, e.b
            if a in (u, v) and b in (u, v):
                continue
            if b in (u, v):
                a, b = b, a
            if a in (u, v):
                zb = complex(xv[3 * pos[b]], xv[3 * pos[b] + 1])
                rb = xv[3 * pos[b] + 2]
                if a == u:
                    res.append(zb.imag - rb)
                else:
                    res.append((hh - zb.imag) - rb)
            else:
                za = complex(xv[3 * pos[a]], xv[3 * pos[a] + 1])
                zb = complex(xv[3 * pos[b]], xv[3 * pos[b] + 1])
                ra, rb = xv[3 * pos[a] + 2], xv[3 * pos[b] + 2]
                res.append(abs(zb - za) - (ra + rb))
        res.append(xv[3 * pos[gauge]] - x[3 * pos[gauge]])
        res.append(xv[-1] - h)
        return np.array(res)

    xv = x.copy()
    for _ in range(60):
        r0 = residual(xv)
        if np.max(np.abs(r0)) < 1e-15:
            break
        jac = np.zeros((len(r0), len(xv)))
        eps = 1e-7
        for j in range(len(xv)):
            xp = xv.copy()
            xp[j] += eps
            jac[:, j] = (residual(xp) - r0) / eps
        step, *_ = np.linalg.lstsq(jac, -r0, rcond=None)
        nxt = xv + step
        if np.max(np.abs(residual(nxt))) >= np.max(np.abs(r0)):
            break
        xv = nxt

    out = list(whites)
    for i in idx:
        z = complex(xv[3 * pos[i]], xv[3 * pos[i] + 1])
        out[i] = Circline.circle(z, xv[3 * pos[i] + 2])
    out[u] = Circline.line(0.0, 1j)
    out[v] = Circline.line(xv[-1] * 1j, -1j)
    return out


def _derive_shaded(nerve: Nerve, whites: list[Circline]):
    tangencies: dict[int, complex | None] = {}
    for k, e in enumerate(nerve.edges):
        tangencies[k] = tangency_point(whites[e.a], whites[e.b])
    shaded = []
    for (e0, e1, e2), lab, side in nerve.triangles:
        pts = [tangencies[e0], tangencies[e1], tangencies[e2]]
        shaded.append(_circle_through(pts))
    return shaded, tangencies


def _circle_through(pts) -> Circline:
    """Circline through three points, one of which may be infinity."""
    finite = [p for p in pts if p is not None]
    if len(finite) == 2:
        z1, z2 = finite
        d = z2 - z1
        n = d / abs(d) * 1j
        return Circline.line(z1, n)
    z1, z2, z3 = finite
    # Solve |z - c| identical for the three points.
    ax, ay = z1.real, z1.imag
    bx, by = z2.real, z2.imag
    cx, cy = z3.real, z3.imag
    dmat = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(dmat) < 1e-14 * (abs(z1 - z2) + abs(z2 - z3)) ** 2:
        d = z3 - z1
        n = d / abs(d) * 1j
        return Circline.line(z1, n)
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / dmat
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / dmat
    center = complex(ux, uy)
    return Circline.circle(center, abs(center - z1))


# -- normalization --------------------------------------------------------------


def normalize_at_vertex(packing: CirclePacking, edge_id: int) -> CirclePacking:
    """Mobius-normalize with the given tangency point at infinity.

    The two white circles tangent there become the lines y = 0 and y = 1;
    the two shaded circles through the point become vertical lines, the
    leftmost at x = 0, with the packing in the right half strip.
    """
    nerve = packing.nerve
    e = nerve.edges[edge_id]
    p = packing.tangencies[edge_id]
    t = MobiusMap.identity() if p is None else MobiusMap.inversion_at(p)
    moved = packing.apply_mobius(t)
    _snap_huge_circles(moved)
    wa, wb = moved.whites[e.a], moved.whites[e.b]
    if not (wa.is_line and wb.is_line):
        raise ValueError("normalization did not produce two parallel lines")
    # Rotate the common normal to +i so both lines are horizontal.
    rot = 1j / wa.normal()
    moved = moved.apply_mobius(MobiusMap.affine(rot / abs(rot), 0))
    wa, wb = moved.whites[e.a], moved.whites[e.b]
    ya, yb = _line_height(wa), _line_height(wb)
    lo, hi = min(ya, yb), max(ya, yb)
    scale = 1.0 / (hi - lo)
    moved = moved.apply_mobius(MobiusMap.affine(scale, -1j * lo * scale))
    # Shift x so the leftmost vertical shaded line (a crossing-disk lift
    # through the cusp) sits at x = 0.
    xs = _vertical_shaded_offsets(moved)
    if xs:
        moved = moved.apply_mobius(MobiusMap.affine(1.0, -min(xs)))
    moved.normalization.clear()
    moved.normalization.update({"infinity_edge": edge_id, "frame": "unit-strip"})
    return moved


def _snap_huge_circles(packing: CirclePacking) -> None:
    """Convert circles that should be lines (tangency sent to infinity with
    roundoff) into honest lines."""

    def disc(c: Circline) -> float:
        return abs(c.b) ** 2 - c.a * c.d

    radii = []
    for c in packing.whites + packing.shaded:
        if not c.is_line and disc(c) > 0:
            radii.append(math.sqrt(disc(c)) / abs(c.a))
    if not radii:
        return
    ref = sorted(radii)[len(radii) // 2]
    cutoff = 1e7 * max(ref, 1e-30)

    def snap(c: Circline) -> Circline:
        if c.is_line:
            return c
        d2 = disc(c)
        if d2 > 0 and math.sqrt(d2) / abs(c.a) <= cutoff:
            return c
        s = abs(2 * c.b)
        if s == 0:
            raise ValueError("degenerate circline cannot be snapped to a line")
        return Circline(0.0, c.b / s, c.d / s)

    packing.whites[:] = [snap(c) for c in packing.whites]
    packing.shaded[:] = [snap(c) for c in packing.shaded]


def _vertical_shaded_offsets(packing: CirclePacking) -> list[float]:
    xs = []
    for c in packing.shaded:
        if c.is_line:
            n = c.normal()
            if abs(n.imag) < 1e-9:
                xs.append(c.offset() * (1 if n.real > 0 else -1))
    return xs


def _line_height(line: Circline) -> float:
    n = line.normal()
    return line.offset() * (1.0 if n.imag > 0 else -1.0)
