import random
from fractions import Fraction

import pytest

from augcusp import catalog
from augcusp.augment import (
    SlopeLedger,
    apply_filling,
    augment,
    untwist_retwist_roundtrip,
)
from augcusp.diagram import detect_twist_regions, pd_isomorphic
from augcusp.errors import DiagramInvariantError
from augcusp.families import three_punctured_certificate


class TestAugment:
    def test_trefoil(self):
        al, ledger = augment(catalog.trefoil())
        assert len(al.circles) == 1
        c = al.circles["C1"]
        assert c.strand_count == 2 and c.half_twist
        assert len(al.base.crossings) == 1  # the retained half twist
        assert ledger.entries == {"C1": Fraction(1, 1)}

    def test_figure_eight(self):
        al, ledger = augment(catalog.figure_eight())
        assert len(al.circles) == 2
        assert al.base.crossings == ()  # flat base
        assert al.base.loops == ("0",)
        assert all(abs(s) == 1 for s in ledger.entries.values())
        assert len(ledger) == 2

    def test_half_twist_only_region_has_no_ledger_entry(self):
        al, ledger = augment(catalog.unknot_kink())
        assert len(al.circles) == 1
        assert len(ledger) == 0

    def test_overlapping_regions_rejected(self):
        d = catalog.figure_eight()
        regs = detect_twist_regions(d)
        bad = [regs[0], regs[0]]
        with pytest.raises(DiagramInvariantError):
            augment(d, bad)

    def test_disk_punctured_twice(self):
        for d in (catalog.trefoil(), catalog.rational_link([2, 3, 2])):
            al, _ = augment(d)
            counts = {lab: 0 for lab in al.circles}
            for plist in al.passages.values():
                for p in plist:
                    counts[p.circle] += 1
            assert all(v == 2 for v in counts.values())


class TestFilling:
    def test_roundtrip_trefoil_and_figure_eight(self):
        for d in (catalog.trefoil(), catalog.figure_eight()):
            assert pd_isomorphic(untwist_retwist_roundtrip(d), d)

    def test_apply_filling_inverts_augment(self):
        d = catalog.trefoil()
        al, ledger = augment(d)
        assert pd_isomorphic(apply_filling(al, ledger), d)

    def test_one_third_slope_inserts_six_crossings(self):
        al, _ = augment(catalog.figure_eight())
        filled = apply_filling(al, SlopeLedger({"C1": Fraction(1, 3)}))
        # 6 braid crossings plus the 4 of the expanded second circle
        assert len(filled.crossings) == 10

    def test_negative_slope_inserts_mirror_twists(self):
        al, _ = augment(catalog.figure_eight())
        pos = apply_filling(al, SlopeLedger({"C1": Fraction(1, 2)}))
        neg = apply_filling(al, SlopeLedger({"C1": Fraction(1, -2)}))
        assert len(pos.crossings) == len(neg.crossings) == 8
        # Chirality is visible on the trefoil: only the matching sign
        # reproduces the input diagram.
        al3, _ = augment(catalog.trefoil())
        pos3 = apply_filling(al3, SlopeLedger({"C1": Fraction(1, 1)}))
        neg3 = apply_filling(al3, SlopeLedger({"C1": Fraction(1, -1)}))
        assert pd_isomorphic(pos3, catalog.trefoil())
        assert not pd_isomorphic(neg3, pos3)

    def test_non_reciprocal_slope_rejected(self):
        al, _ = augment(catalog.figure_eight())
        with pytest.raises(DiagramInvariantError):
            apply_filling(al, SlopeLedger({"C1": Fraction(2, 3)}))

    def test_unknown_cusp_rejected(self):
        al, _ = augment(catalog.figure_eight())
        with pytest.raises(DiagramInvariantError):
            apply_filling(al, SlopeLedger({"nope": Fraction(1, 1)}))

    def test_randomized_roundtrips(self):
        rng = random.Random(20260808)
        count = 0
        for _ in range(60):
            kind = rng.choice(["rational", "pretzel"])
            if kind == "rational":
                k = rng.randint(1, 5)
                vec = [rng.randint(2, 4) for _ in range(k)]
                d = catalog.rational_link(vec)
            else:
                c = rng.randint(2, 4)
                vec = [rng.randint(2, 5) for _ in range(c)]
                d = catalog.pretzel_link(vec)
            assert pd_isomorphic(untwist_retwist_roundtrip(d), d), vec
            count += 1
        assert count >= 50


class TestSlopeLedger:
    def test_lowest_terms_and_text_form(self):
        led = SlopeLedger({"C1": Fraction(2, 4)})
        assert led["C1"] == Fraction(1, 2)
        assert led.to_json() == '{"C1": "1/2"}'
        assert SlopeLedger.from_json(led.to_json()) == led

    def test_zero_slopes_not_recorded(self):
        led = SlopeLedger({"C1": Fraction(0, 5)})
        assert len(led) == 0

    def test_compose_with_negation_is_empty(self):
        led = SlopeLedger({"C1": Fraction(1, 2), "C2": Fraction(1, -3)})
        assert len(led.compose(led.negated())) == 0

    def test_compose_associative_on_twists(self):
        a = SlopeLedger({"C1": Fraction(1, 1)})
        b = SlopeLedger({"C1": Fraction(1, 2)})
        c = SlopeLedger({"C1": Fraction(1, 3)})
        assert a.compose(b).compose(c) == a.compose(b.compose(c))
        assert a.compose(b)["C1"] == Fraction(1, 3)


class TestCertificate:
    def test_borromean_inside_is_twice_punctured(self):
        # The flat strand of the augmented figure eight bounds a disk
        # punctured by exactly one circle pair, so the bound applies.
        al, _ = augment(catalog.figure_eight())
        cert = three_punctured_certificate(al, "0")
        assert cert is not None
        assert cert.bound == 4.0
        assert sorted(cert.side_punctures) == [2, 2]

    def test_longer_chain_strand_not_certified(self):
        # Five circles spread their punctures so neither side of the strand
        # is punctured exactly twice.
        al, _ = augment(catalog.rational_link([2] * 5))
        assert three_punctured_certificate(al, "0") is None
        al2, _ = augment(catalog.pretzel_link([3, 3, 3]))
        assert three_punctured_certificate(al2, "0") is None

    def test_unknown_component_rejected(self):
        al, _ = augment(catalog.figure_eight())
        with pytest.raises(KeyError):
            three_punctured_certificate(al, "zzz")
