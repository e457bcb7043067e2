"""Tests for finite distributive lattices, prime filters and the hull-kernel round trip."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from spectral_domains.exceptions import EnumerationCapExceeded, InputError
from spectral_domains.lattice_duality import (
    FinDistLattice,
    PrimeFilterStrategy,
    generate_lattice,
    hull_kernel_space,
    is_prime_filter,
    lattice_from_leq,
    point_trace,
    prime_filters,
    roundtrip_iso_check,
    roundtrip_report,
    venn_cell_count,
)
from spectral_domains.open_ring import Carrier, OpenSet, cells
from spectral_domains.sampling import random_open


def names_of(lattice: FinDistLattice, members: frozenset[int]) -> set[str]:
    return {lattice.names[i] for i in members}


def order_from(names: list[str], above: dict[str, set[str]]) -> list[list[bool]]:
    return [[b in above[a] for b in names] for a in names]


# ---------------------------------------------------------------------------
# lattice_from_leq
# ---------------------------------------------------------------------------


class TestLatticeFromLeq:
    def test_derives_tables(self, five_lattice: FinDistLattice) -> None:
        a, b, ab = (five_lattice.names.index(n) for n in ("a", "b", "ab"))
        assert five_lattice.join(a, b) == ab
        assert five_lattice.meet(a, b) == five_lattice.bottom
        assert five_lattice.names[five_lattice.top] == "top"

    def test_not_reflexive(self) -> None:
        with pytest.raises(InputError, match="not reflexive"):
            lattice_from_leq(["x", "y"], [[False, True], [False, True]])

    def test_not_antisymmetric(self) -> None:
        with pytest.raises(InputError, match="not antisymmetric"):
            lattice_from_leq(["x", "y"], [[True, True], [True, True]])

    def test_missing_join(self) -> None:
        names = ["bot", "a", "b"]
        above = {"bot": {"bot", "a", "b"}, "a": {"a"}, "b": {"b"}}
        with pytest.raises(InputError, match="no meet or no join"):
            lattice_from_leq(names, order_from(names, above))

    def test_diamond_is_not_distributive(self) -> None:
        names = ["bot", "a", "b", "c", "top"]
        above = {
            "bot": set(names),
            "a": {"a", "top"},
            "b": {"b", "top"},
            "c": {"c", "top"},
            "top": {"top"},
        }
        with pytest.raises(InputError, match="Not distributive"):
            lattice_from_leq(names, order_from(names, above))

    def test_wrong_shape(self) -> None:
        with pytest.raises(InputError, match="matrix"):
            lattice_from_leq(["x", "y"], [[True, True]])

    def test_labels_follow_the_order(self) -> None:
        carrier = Carrier.of(0, 3)
        names = ["bot", "a", "b", "top"]
        above = {"bot": set(names), "a": {"a", "top"}, "b": {"b", "top"}, "top": {"top"}}
        labels = [
            OpenSet.empty(carrier),
            OpenSet.interval(carrier, 0, 1),
            OpenSet.interval(carrier, 1, 2),
            OpenSet.interval(carrier, 0, 2),
        ]
        lattice = lattice_from_leq(names, order_from(names, above), labels)
        assert lattice.is_labeled

    def test_swapped_labels_rejected(self) -> None:
        carrier = Carrier.of(0, 1)
        labels = [OpenSet.full(carrier), OpenSet.empty(carrier)]
        with pytest.raises(InputError, match="Labels disagree with leq"):
            lattice_from_leq(["bot", "top"], [[True, True], [False, True]], labels)

    def test_comparable_labels_on_incomparable_elements(self) -> None:
        carrier = Carrier.of(0, 3)
        names = ["bot", "a", "b", "top"]
        above = {"bot": set(names), "a": {"a", "top"}, "b": {"b", "top"}, "top": {"top"}}
        labels = [
            OpenSet.empty(carrier),
            OpenSet.interval(carrier, 0, 1),
            OpenSet.interval(carrier, 0, 2),
            OpenSet.interval(carrier, 0, 3),
        ]
        with pytest.raises(InputError, match="'a' ≰ 'b'"):
            lattice_from_leq(names, order_from(names, above), labels)


# ---------------------------------------------------------------------------
# generate_lattice
# ---------------------------------------------------------------------------


class TestGenerateLattice:
    def test_two_disjoint_generators(self, carrier: Carrier) -> None:
        a, b = OpenSet.interval(carrier, 0, 1), OpenSet.interval(carrier, 1, 2)
        lattice = generate_lattice([a, b], carrier)
        assert list(lattice.labels) == [
            OpenSet.empty(carrier),
            a,
            b,
            OpenSet.interval(carrier, 0, 2),
            OpenSet.full(carrier),
        ]
        assert lattice.bottom == 0
        assert lattice.top == 4

    def test_no_generators(self, carrier: Carrier) -> None:
        lattice = generate_lattice([], carrier)
        assert list(lattice.labels) == [OpenSet.empty(carrier), OpenSet.full(carrier)]

    def test_generator_equal_to_top(self, carrier: Carrier) -> None:
        assert generate_lattice([OpenSet.full(carrier)], carrier).size == 2

    def test_tables_follow_set_operations(self, carrier: Carrier) -> None:
        a, b = OpenSet.interval(carrier, 0, 2), OpenSet.interval(carrier, 1, 3)
        lattice = generate_lattice([a, b], carrier)
        ia, ib = lattice.index_of(a), lattice.index_of(b)
        assert lattice.labels[lattice.meet(ia, ib)] == OpenSet.interval(carrier, 1, 2)
        assert lattice.labels[lattice.join(ia, ib)] == OpenSet.interval(carrier, 0, 3)

    def test_cap(self, carrier: Carrier) -> None:
        generators = [OpenSet.interval(carrier, k, k + 1) for k in range(3)]
        with pytest.raises(EnumerationCapExceeded) as excinfo:
            generate_lattice(generators, carrier, cap=4)
        assert excinfo.value.cap == 4

    def test_unknown_label(self, carrier: Carrier) -> None:
        lattice = generate_lattice([], carrier)
        with pytest.raises(KeyError):
            lattice.index_of(OpenSet.interval(carrier, 0, 1))


# ---------------------------------------------------------------------------
# Prime filters and the point space
# ---------------------------------------------------------------------------


class TestPrimeFilters:
    def test_two_chain(self, two_chain: FinDistLattice) -> None:
        points = prime_filters(two_chain)
        assert [names_of(two_chain, p.members) for p in points] == [{"top"}]

    def test_five_element_lattice(self, five_lattice: FinDistLattice) -> None:
        points = prime_filters(five_lattice)
        assert [names_of(five_lattice, p.members) for p in points] == [
            {"a", "ab", "top"},
            {"b", "ab", "top"},
            {"top"},
        ]

    def test_boolean_square(self) -> None:
        names = ["bot", "a", "b", "top"]
        above = {"bot": set(names), "a": {"a", "top"}, "b": {"b", "top"}, "top": {"top"}}
        lattice = lattice_from_leq(names, order_from(names, above))
        points = prime_filters(lattice)
        assert [names_of(lattice, p.members) for p in points] == [{"a", "top"}, {"b", "top"}]

    @pytest.mark.parametrize("strategy", list(PrimeFilterStrategy))
    def test_every_point_passes_brute_force_check(
        self, five_lattice: FinDistLattice, strategy: PrimeFilterStrategy
    ) -> None:
        for p in prime_filters(five_lattice, strategy=strategy):
            assert is_prime_filter(five_lattice, p.members)

    def test_strategies_agree(self, carrier: Carrier) -> None:
        rng = random.Random(3)
        for _ in range(30):
            lattice = generate_lattice([random_open(rng, carrier) for _ in range(2)], carrier)
            exhaustive = prime_filters(lattice, strategy=PrimeFilterStrategy.EXHAUSTIVE)
            assert exhaustive == prime_filters(lattice)

    def test_exhaustive_cap(self, five_lattice: FinDistLattice) -> None:
        with pytest.raises(EnumerationCapExceeded):
            prime_filters(five_lattice, strategy=PrimeFilterStrategy.EXHAUSTIVE, cap=4)

    def test_non_filters_rejected(self, five_lattice: FinDistLattice) -> None:
        idx = {n: five_lattice.names.index(n) for n in five_lattice.names}
        assert not is_prime_filter(five_lattice, frozenset())
        assert not is_prime_filter(five_lattice, frozenset(idx.values()))  # contains bottom
        assert not is_prime_filter(five_lattice, frozenset({idx["a"], idx["top"]}))  # not upper
        assert not is_prime_filter(five_lattice, frozenset({idx["ab"], idx["top"]}))  # not prime


class TestHullKernelSpace:
    def test_two_chain(self, two_chain: FinDistLattice) -> None:
        space = hull_kernel_space(two_chain)
        assert len(space.points) == 1
        assert space.opens == (frozenset(), frozenset({0}))

    def test_five_element_lattice(self, five_lattice: FinDistLattice) -> None:
        space = hull_kernel_space(five_lattice)
        opens = dict(zip(five_lattice.names, space.opens, strict=True))
        assert len(space.points) == 3
        assert opens["bot"] == frozenset()
        assert opens["ab"] == frozenset({0, 1})
        assert opens["top"] == frozenset({0, 1, 2})

    def test_opens_respect_meet_and_join(self, five_lattice: FinDistLattice) -> None:
        space = hull_kernel_space(five_lattice)
        n = five_lattice.size
        for u in range(n):
            for v in range(n):
                assert space.opens[five_lattice.meet(u, v)] == space.opens[u] & space.opens[v]
                assert space.opens[five_lattice.join(u, v)] == space.opens[u] | space.opens[v]
                if five_lattice.le(u, v):
                    assert space.opens[u] <= space.opens[v]


class TestRoundtrip:
    def test_two_chain(self, two_chain: FinDistLattice) -> None:
        assert roundtrip_iso_check(two_chain)

    def test_five_element_lattice(self, five_lattice: FinDistLattice) -> None:
        report = roundtrip_report(five_lattice)
        assert report.iso
        assert (report.points, report.opens) == (3, 5)
        assert report.witness is None

    def test_generated_lattices(self, carrier: Carrier) -> None:
        rng = random.Random(11)
        for _ in range(40):
            generators = [random_open(rng, carrier) for _ in range(rng.randint(1, 4))]
            lattice = generate_lattice(generators, carrier)
            assert roundtrip_iso_check(lattice)
            assert len(prime_filters(lattice)) == venn_cell_count(generators, carrier)


class TestPointTrace:
    def test_each_point_is_a_trace(self, carrier: Carrier) -> None:
        a, b = OpenSet.interval(carrier, 0, 2), OpenSet.interval(carrier, 1, 3)
        lattice = generate_lattice([a, b], carrier)
        points = set(prime_filters(lattice))
        traces = {point_trace(lattice, c.representative) for c in cells([a, b])}
        assert traces == points

    def test_trace_at_left_end(self, carrier: Carrier) -> None:
        lattice = generate_lattice([OpenSet.interval(carrier, 0, 1)], carrier)
        trace = point_trace(lattice, Fraction(0))
        assert {lattice.labels[i] for i in trace.members} == {OpenSet.full(carrier)}

    def test_unlabeled_lattice(self, two_chain: FinDistLattice) -> None:
        with pytest.raises(InputError, match="labeled"):
            point_trace(two_chain, Fraction(0))


def test_venn_cell_count(carrier: Carrier) -> None:
    a, b = OpenSet.interval(carrier, 0, 2), OpenSet.interval(carrier, 1, 3)
    # outside both, only a, both, only b
    assert venn_cell_count([a, b], carrier) == 4
