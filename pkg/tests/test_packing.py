import math

import pytest

from augcusp import catalog
from augcusp.augment import augment
from augcusp.errors import UnsupportedLinkError
from augcusp.mobius import cross_ratio
from augcusp.packing import (
    build_nerve,
    normalize_at_vertex,
    solve_flower_radii,
    solve_packing,
)


def descartes_fourth(k1, k2, k3):
    return k1 + k2 + k3 + 2 * math.sqrt(k1 * k2 + k2 * k3 + k3 * k1)


class TestFlowerSolver:
    def test_hexagonal_symmetry_forces_equal_radius(self):
        petals = list(range(1, 7))
        flowers = {0: petals}
        fixed = {p: 1.0 for p in petals}
        radii = solve_flower_radii(flowers, fixed, tol=1e-14)
        assert abs(radii[0] - 1.0) <= 1e-12

    def test_descartes_relation_one_line_two_units(self):
        # A line and two unit circles tangent to it; the inner circle's
        # curvature must satisfy the Descartes relation.
        flowers = {3: [0, 1, 2]}
        fixed = {0: math.inf, 1: 1.0, 2: 1.0}
        radii = solve_flower_radii(flowers, fixed, tol=1e-14)
        k4 = 1.0 / radii[3]
        assert abs(k4 - descartes_fourth(0.0, 1.0, 1.0)) <= 1e-10
        assert abs(radii[3] - 0.25) <= 1e-11

    def test_tetrahedral_strip_solves_descartes(self):
        # The K4 nerve of the minimal supported link: two lines and two
        # circles, all pairwise tangent; curvatures satisfy Descartes.
        al, _ = augment(catalog.figure_eight())
        nerve = build_nerve(al)
        packing = solve_packing(nerve, tol=1e-12)
        ks = sorted(
            0.0 if c.is_line else 1.0 / c.radius for c in packing.whites
        )
        k1, k2, k3, k4 = ks
        assert abs(k4 - descartes_fourth(k1, k2, k3)) <= 1e-10


class TestNerve:
    def test_borromean_nerve_is_tetrahedral(self):
        al, _ = augment(catalog.figure_eight())
        n = build_nerve(al)
        assert n.whites == 4
        assert len(n.edges) == 6
        assert len(n.triangles) == 4
        degrees = [len(fl) for fl in n.flowers]
        assert degrees == [3, 3, 3, 3]

    def test_family_parent_nerve_counts(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        n = build_nerve(al)
        assert n.whites == 5
        assert len(n.edges) == 9
        assert len(n.triangles) == 6

    def test_interior_degree_at_least_three(self):
        for d in (catalog.rational_link([2] * 5), catalog.pretzel_link([3, 3, 3])):
            al, _ = augment(d)
            n = build_nerve(al)
            assert all(len(fl) >= 3 for fl in n.flowers)

    def test_generalized_strands_rejected(self):
        from augcusp.families import gen_longitude_family

        al = gen_longitude_family(1)
        with pytest.raises(UnsupportedLinkError):
            build_nerve(al)

    def test_single_circle_rejected(self):
        al, _ = augment(catalog.trefoil())
        with pytest.raises(UnsupportedLinkError):
            build_nerve(al)

    def test_hairpin_circle_rejected(self):
        # The closure of this chain diagram lets a crossing circle slide off.
        al, _ = augment(catalog.rational_link([2, 2]))
        with pytest.raises(UnsupportedLinkError):
            build_nerve(al)


class TestPackingInvariants:
    def test_residuals_within_tolerance(self):
        for vec in ([2, 2], [2, 2, 2], [2] * 5):
            d = catalog.figure_eight() if vec == [2, 2] else catalog.rational_link(vec)
            al, _ = augment(d)
            packing = solve_packing(build_nerve(al), tol=1e-12)
            assert packing.max_residual() <= 1e-12 * max(1.0, packing.scale())

    def test_angle_sums(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        nerve = build_nerve(al)
        packing = solve_packing(nerve, tol=1e-12)
        u, v = nerve.edge_vertices(nerve.infinity_edge)
        for i in range(nerve.whites):
            if i in (u, v):
                continue
            c = packing.whites[i]
            total = 0.0
            nb = []
            for eid in nerve.flowers[i]:
                a, b = nerve.edge_vertices(eid)
                nb.append(b if a == i else a)
            k = len(nb)
            for j in range(k):
                pa, pb = packing.whites[nb[j]], packing.whites[nb[(j + 1) % k]]
                ra = math.inf if pa.is_line else pa.radius
                rb = math.inf if pb.is_line else pb.radius
                ta = 1.0 if math.isinf(ra) else ra / (c.radius + ra)
                tb = 1.0 if math.isinf(rb) else rb / (c.radius + rb)
                total += 2 * math.asin(math.sqrt(ta * tb))
            assert abs(total - 2 * math.pi) <= 1e-9

    def test_disjoint_interiors(self):
        al, _ = augment(catalog.rational_link([2] * 5))
        nerve = build_nerve(al)
        packing = solve_packing(nerve)
        adj = {frozenset(nerve.edge_vertices(k)) for k in range(len(nerve.edges))}
        for i in range(nerve.whites):
            for j in range(i + 1, nerve.whites):
                ci, cj = packing.whites[i], packing.whites[j]
                if ci.is_line or cj.is_line:
                    continue
                d = abs(ci.center - cj.center)
                if frozenset((i, j)) in adj:
                    assert abs(d - (ci.radius + cj.radius)) <= 1e-9
                else:
                    assert d >= ci.radius + cj.radius - 1e-9

    def test_shaded_circles_pass_through_tangencies(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        nerve = build_nerve(al)
        packing = solve_packing(nerve)
        for k, (eids, lab, side) in enumerate(nerve.triangles):
            circ = packing.shaded[k]
            for eid in eids:
                z = packing.tangencies[eid]
                if z is not None:
                    assert circ.contains(z, 1e-8)

    def test_reflection_symmetry_of_family_nerve(self):
        # The palindromic chain's packing is mirror symmetric once the middle
        # circle's tangency is normalized to infinity.
        from augcusp.families import gen_twobridge_family, twobridge_middle_circle

        fam = gen_twobridge_family(2, [1, 1])
        nerve = build_nerve(fam.parent)
        packing = solve_packing(nerve)
        mid = twobridge_middle_circle(fam)
        eid = min(k for k, e in enumerate(nerve.edges) if e.cusp == mid)
        norm = normalize_at_vertex(packing, eid)
        finite = [c for c in norm.whites if not c.is_line]
        xs = [c.center.real for c in finite]
        axis = (min(xs) + max(xs)) / 2
        mirrored = sorted(
            (round(2 * axis - c.center.real, 8), round(c.center.imag, 8), round(c.radius, 8))
            for c in finite
        )
        original = sorted(
            (round(c.center.real, 8), round(c.center.imag, 8), round(c.radius, 8))
            for c in finite
        )
        assert mirrored == original


class TestNormalization:
    def test_idempotent(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        nerve = build_nerve(al)
        packing = solve_packing(nerve)
        once = normalize_at_vertex(packing, 3)
        twice = normalize_at_vertex(once, 3)
        for a, b in zip(once.whites, twice.whites):
            if a.is_line:
                assert b.is_line
            else:
                assert abs(a.center - b.center) <= 1e-8
                assert abs(a.radius - b.radius) <= 1e-8

    def test_cross_ratio_invariance(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        nerve = build_nerve(al)
        packing = solve_packing(nerve)
        norm = normalize_at_vertex(packing, 3)
        finite = [
            k
            for k, z in packing.tangencies.items()
            if z is not None and norm.tangencies[k] is not None
        ]
        a, b, c, d = finite[:4]
        before = cross_ratio(*(packing.tangencies[k] for k in (a, b, c, d)))
        after = cross_ratio(*(norm.tangencies[k] for k in (a, b, c, d)))
        assert abs(before - after) <= 1e-10

    def test_tangency_residuals_preserved(self):
        al, _ = augment(catalog.rational_link([2, 2, 2]))
        nerve = build_nerve(al)
        packing = solve_packing(nerve)
        norm = normalize_at_vertex(packing, 5)
        assert norm.max_residual() <= 1e-9
