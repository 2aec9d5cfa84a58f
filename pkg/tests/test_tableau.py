import numpy as np
import pytest

from super_scrambler.model import C3, OperatorProgram, SuperPauli, Swap, T
from super_scrambler.tableau import (
    Region,
    SuperStabilizerTableau,
    TableauError,
)


def tableau_from_labels(labels):
    return SuperStabilizerTableau.loads("\n".join(labels) + "\n")


def random_evolved(rng, n, gate_count=60):
    tab = SuperStabilizerTableau.new_all_x(n)
    for _ in range(gate_count):
        kind = rng.integers(0, 3)
        if kind == 0:
            tab.apply_t(int(rng.integers(1, n + 1)))
        elif kind == 1:
            a, b = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            tab.apply_swap(int(a), int(b))
        else:
            c, t1, t2 = rng.choice(np.arange(1, n + 1), size=3, replace=False)
            tab.apply_c3(int(c), int(t1), int(t2))
    return tab


class TestNewAllX:
    def test_three_qubits(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        assert tab.dumps() == "ZII\nIZI\nIIZ\n"

    def test_single_qubit(self):
        assert SuperStabilizerTableau.new_all_x(1).dumps() == "Z\n"

    def test_large_product_state_entropy(self):
        tab = SuperStabilizerTableau.new_all_x(120)
        assert len(tab.stabilizers) == 120
        assert tab.entropy(Region.prefix(60)) == 0

    def test_zero_qubits_rejected(self):
        with pytest.raises(TableauError):
            SuperStabilizerTableau.new_all_x(0)


class TestApplyT:
    def test_z_to_x(self):
        tab = tableau_from_labels(["ZII", "IZI", "IIZ"])
        tab.apply_t(1)
        assert tab.stabilizer(0).label() == "XII"

    def test_x_to_z(self):
        tab = tableau_from_labels(["XII", "IZI", "IIZ"])
        tab.apply_t(1)
        assert tab.stabilizer(0).label() == "ZII"

    def test_double_application_is_identity(self):
        rng = np.random.default_rng(4)
        tab = random_evolved(rng, 9)
        before = tab.dumps()
        tab.apply_t(5)
        tab.apply_t(5)
        assert tab.dumps() == before

    def test_out_of_range(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        with pytest.raises(TableauError):
            tab.apply_t(4)


class TestApplySwap:
    def test_component_exchange(self):
        tab = tableau_from_labels(["XZI", "IZI", "IIZ"])
        tab.apply_swap(1, 2)
        assert tab.stabilizer(0).label() == "ZXI"

    def test_untouched_site(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        tab.apply_swap(1, 2)
        assert tab.stabilizer(2).label() == "IIZ"

    def test_double_application_is_identity(self):
        rng = np.random.default_rng(8)
        tab = random_evolved(rng, 6)
        before = tab.dumps()
        tab.apply_swap(1, 4)
        tab.apply_swap(1, 4)
        assert tab.dumps() == before

    def test_equal_sites_rejected(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        with pytest.raises(TableauError):
            tab.apply_swap(2, 2)


class TestApplyC3:
    def test_z2_becomes_z1z2(self):
        tab = tableau_from_labels(["IZI", "ZII", "IIZ"])
        tab.apply_c3(1, 2, 3)
        assert tab.stabilizer(0).label() == "ZZI"

    def test_x1_image(self):
        tab = tableau_from_labels(["XII", "IZI", "IIZ"])
        tab.apply_c3(1, 2, 3)
        sp = tab.stabilizer(0)
        assert sp.x_mask == 0b111
        assert sp.z_mask == 0b110
        assert sp.label() == "XYY"

    def test_involution_on_all_single_site_patterns(self):
        # all 64 (x, z) bit patterns over 3 sites, applied twice
        for pattern in range(64):
            x, z = pattern & 0b111, pattern >> 3
            tab = SuperStabilizerTableau(
                3,
                np.array([[x], [0], [0]], dtype=np.uint64),
                np.array([[z], [0], [0]], dtype=np.uint64),
            )
            tab.apply_c3(1, 2, 3)
            tab.apply_c3(1, 2, 3)
            assert tab.stabilizer(0) == SuperPauli(3, x, z)

    def test_index_agnostic_roles(self):
        tab = tableau_from_labels(["IIZ", "ZII", "IZI"])
        tab.apply_c3(3, 1, 2)  # control on site 3
        assert tab.stabilizer(2).label() == "IZZ"

    def test_repeated_indices_rejected(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        with pytest.raises(TableauError):
            tab.apply_c3(1, 1, 2)


class TestApplyProgram:
    def test_empty_program(self):
        tab = SuperStabilizerTableau.new_all_x(4)
        before = tab.dumps()
        tab.apply_program(OperatorProgram(4, ()))
        assert tab.dumps() == before

    def test_ghz_three_qubits(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        tab.apply_program(OperatorProgram(3, (T(1), C3(1, 2, 3))))
        assert sorted(s.label() for s in tab.stabilizers) == ["XYY", "ZIZ", "ZZI"]

    def test_program_followed_by_reverse_is_identity(self):
        # every gate is a mask-level involution, so the reversed list undoes it
        rng = np.random.default_rng(12)
        for _ in range(10):
            n = int(rng.integers(3, 10))
            tab = SuperStabilizerTableau.new_all_x(n)
            gates = []
            for _ in range(30):
                c, t1, t2 = rng.choice(np.arange(1, n + 1), size=3, replace=False)
                gates.append(C3(int(c), int(t1), int(t2)))
                gates.append(T(int(rng.integers(1, n + 1))))
            tab.apply_program(OperatorProgram(n, tuple(gates)))
            tab.apply_program(OperatorProgram(n, tuple(reversed(gates))))
            assert tab.dumps() == SuperStabilizerTableau.new_all_x(n).dumps()

    def test_dimension_mismatch(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        with pytest.raises(TableauError):
            tab.apply_program(OperatorProgram(4, ()))

    def test_per_gate_invariant_checking(self):
        tab = SuperStabilizerTableau.new_all_x(5)
        tab.apply_program(
            OperatorProgram(5, (T(1), C3(1, 2, 3), Swap(4, 5))), check="gate"
        )
        tab.check_invariants()


class TestEntropy:
    def test_product_state_any_region(self):
        tab = SuperStabilizerTableau.new_all_x(8)
        for region in (Region.prefix(3), Region({2, 5, 7}), Region.prefix(4)):
            assert tab.entropy(region) == 0

    def test_ghz_single_site(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        tab.apply_program(OperatorProgram(3, (T(1), C3(1, 2, 3))))
        assert tab.entropy(Region({1})) == 1

    def test_complement_symmetry(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(4, 12))
            tab = random_evolved(rng, n, 80)
            size = int(rng.integers(1, n))
            sites = set(
                int(s) for s in rng.choice(np.arange(1, n + 1), size=size, replace=False)
            )
            region = Region(sites)
            assert tab.entropy(region) == tab.entropy(region.complement(n))

    def test_bounds(self):
        rng = np.random.default_rng(23)
        tab = random_evolved(rng, 10, 120)
        for p in range(11):
            s = tab.entropy(Region.prefix(p))
            assert 0 <= s <= min(p, 10 - p)

    def test_gate_locality_entropy_change(self):
        # T moves entropy by at most 1 across any cut, C3 by at most 2
        rng = np.random.default_rng(29)
        for _ in range(5):
            n = 8
            tab = random_evolved(rng, n, 50)
            cuts = [Region.prefix(p) for p in range(1, n)]
            before = [tab.entropy(c) for c in cuts]
            tab.apply_t(int(rng.integers(1, n + 1)))
            after = [tab.entropy(c) for c in cuts]
            assert all(abs(a - b) <= 1 for a, b in zip(after, before))
            c, t1, t2 = rng.choice(np.arange(1, n + 1), size=3, replace=False)
            tab.apply_c3(int(c), int(t1), int(t2))
            final = [tab.entropy(cut) for cut in cuts]
            assert all(abs(f - a) <= 2 for f, a in zip(final, after))

    def test_invalid_region(self):
        tab = SuperStabilizerTableau.new_all_x(3)
        with pytest.raises(ValueError):
            tab.entropy(Region({4}))


class TestInvariants:
    def test_hold_after_random_evolution(self):
        rng = np.random.default_rng(31)
        for n in (3, 7, 16, 65):
            tab = random_evolved(rng, n, 100)
            tab.check_invariants()

    def test_commutation_violation_detected(self):
        # X1 and Z1 anticommute
        tab = SuperStabilizerTableau(
            2,
            np.array([[1], [0]], dtype=np.uint64),
            np.array([[1 ^ 1], [1]], dtype=np.uint64),
        )
        with pytest.raises(TableauError, match="anticommute"):
            tab.check_invariants()


class TestSerialization:
    def test_round_trip_after_evolution(self):
        rng = np.random.default_rng(37)
        tab = random_evolved(rng, 70, 200)
        again = SuperStabilizerTableau.loads(tab.dumps())
        assert again.dumps() == tab.dumps()

    def test_duplicate_lines_rejected(self):
        with pytest.raises(TableauError, match="dependent"):
            SuperStabilizerTableau.loads("ZII\nZII\nIIZ\n")

    def test_bad_character(self):
        with pytest.raises(TableauError, match="line 2"):
            SuperStabilizerTableau.loads("ZII\nIQI\nIIZ\n")

    def test_wrong_line_length(self):
        with pytest.raises(TableauError, match="length"):
            SuperStabilizerTableau.loads("ZII\nIZ\nIIZ\n")

    def test_wrong_line_count(self):
        with pytest.raises(TableauError, match="expected 3 lines"):
            SuperStabilizerTableau.loads("ZII\nIZI\n")

    def test_non_commuting_set_rejected(self):
        with pytest.raises(TableauError, match="anticommute"):
            SuperStabilizerTableau.loads("XII\nZII\nIIZ\n")
