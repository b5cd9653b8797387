#!/usr/bin/env python3
"""
sandmonoid Monoid Tests
- Exhaustive enumeration and caps
- Cayley table queries and invariant factors
- Idempotents, maximal subgroups, two-idempotent checks
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest


# ============================================================
# ENUMERATION
# ============================================================

class TestEnumeration:
    """enumerate_monoid and the group inside it"""

    @pytest.fixture(autouse=True)
    def setup(self):
        from sandmonoid.core.monoid import (
            enumerate_monoid, recurrent_elements, config_index, invariant_factors, element_orders,
        )
        from sandmonoid.engine.sandpile import oplus
        from sandmonoid.engine.settings import Settings
        from sandmonoid.engine.errors import SizeCapError, PreconditionError
        from sandmonoid.families import example_graph, layered_graph, star_of_cyclic, undirected_cycle
        self.enumerate = enumerate_monoid
        self.recurrent = recurrent_elements
        self.index_of = config_index
        self.factors = invariant_factors
        self.orders = element_orders
        self.oplus = oplus
        self.Settings = Settings
        self.CapError = SizeCapError
        self.Precondition = PreconditionError
        self.example = example_graph()
        self.layered = layered_graph()
        self.star = star_of_cyclic
        self.cycle = undirected_cycle

    def test_star_is_a_group(self):
        """Parallel sink edges only: M = G = Z_2 x Z_3"""
        enum = self.enumerate(self.star([2, 3]))
        assert enum.order == 6
        assert enum.group_order == 6
        assert self.factors(enum) == [6]

    def test_klein_four(self):
        """Two degree-2 leaves give Z_2 x Z_2"""
        assert self.factors(self.enumerate(self.star([2, 2]))) == [2, 2]

    def test_cyclic_four(self):
        """One degree-4 leaf gives Z_4"""
        enum = self.enumerate(self.star([4]))
        assert self.factors(enum) == [4]
        assert sorted(self.orders(enum).values()) == [1, 2, 4, 4]

    def test_cycle_group(self):
        """C_5 with a sink has sandpile group Z_5 inside 16 stable configs"""
        enum = self.enumerate(self.cycle(5))
        assert enum.order == 16
        assert enum.group_order == 5
        assert self.factors(enum) == [5]

    def test_elements_lexicographic(self):
        """Index 0 is zero and indices follow the mixed-radix counter"""
        enum = self.enumerate(self.layered)
        assert enum.elements[0].is_zero()
        grains = [c.grains for c in enum.elements]
        assert grains == sorted(grains)
        degrees = self.layered.degrees()
        for i in (0, 1, 57, 399):
            assert self.index_of(degrees, enum.elements[i]) == i

    def test_table_matches_oplus(self):
        """Cayley table entries agree with direct ⊕"""
        enum = self.enumerate(self.layered)
        assert enum.op_table is not None, "400 elements fit the default table cap"
        rng = random.Random(3)
        for _ in range(200):
            i, j = rng.randrange(enum.order), rng.randrange(enum.order)
            direct = self.oplus(self.layered, enum.elements[i], enum.elements[j])
            assert enum.op_table[i, j] == enum.index(direct), f"Mismatch at ({i}, {j})"

    def test_identity_index(self):
        """The identity is the MAX configuration on the layered fixture"""
        enum = self.enumerate(self.layered)
        assert enum.elements[enum.identity_index].grains == (4, 4, 1, 1, 1, 1)

    def test_recurrent_elements_match_mask(self):
        """Breadth-first growth from the identity finds exactly the recurrent set"""
        enum = self.enumerate(self.layered)
        expected = [enum.elements[i] for i in enum.recurrent_indices]
        assert self.recurrent(self.layered) == expected

    def test_element_cap(self):
        """82944 elements exceed a cap of 1000"""
        with pytest.raises(self.CapError) as info:
            self.enumerate(self.example, self.Settings(cap_elements=1000))
        assert info.value.size == 82944
        assert info.value.cap == 1000

    def test_forced_table_over_cap(self):
        """Asking for a table past cap_table raises"""
        with pytest.raises(self.CapError):
            self.enumerate(self.layered, self.Settings(cap_table=100), with_table=True)

    def test_table_skipped_over_cap(self):
        """Without a forced table, large monoids enumerate without one"""
        enum = self.enumerate(self.layered, self.Settings(cap_table=100))
        assert enum.op_table is None
        with pytest.raises(self.Precondition):
            enum.require_table()
        assert enum.group_order > 0


# ============================================================
# TABLE QUERIES
# ============================================================

class TestTableQueries:
    """Accessibility and idempotents on the Cayley table"""

    @pytest.fixture(autouse=True)
    def setup(self):
        from sandmonoid.core.monoid import (
            enumerate_monoid, accessible, mutually_accessible, mutual_accessibility_class,
            idempotent_table_search, idempotents,
        )
        from sandmonoid.families import layered_graph, undirected_path
        self.accessible = accessible
        self.mutual = mutually_accessible
        self.mutual_class = mutual_accessibility_class
        self.table_search = idempotent_table_search
        self.idempotents = idempotents
        self.enumerate = enumerate_monoid
        self.g = layered_graph()
        self.enum = enumerate_monoid(self.g)
        self.path = undirected_path

    def test_everything_reaches_identity(self):
        """The identity is accessible from every element"""
        e = self.enum.identity_index
        assert all(self.accessible(self.enum, a, e) for a in range(0, self.enum.order, 17))

    def test_zero_not_accessible_from_identity(self):
        """Grains never disappear from a recurrent configuration"""
        assert not self.accessible(self.enum, self.enum.identity_index, 0)
        assert not self.mutual(self.enum, 0, self.enum.identity_index)

    def test_class_of_identity_is_group(self):
        """The mutual-accessibility class of the identity is the sandpile group"""
        assert self.mutual_class(self.enum, self.enum.identity_index) == self.enum.recurrent_indices

    def test_table_search_matches_filters(self):
        """Diagonal search and the filter construction give the same idempotents"""
        found = self.table_search(self.enum)
        from_filters = sorted(self.enum.index(r.config) for r in self.idempotents(self.g))
        assert found == from_filters, f"{found} vs {from_filters}"
        assert found == [0, self.enum.identity_index]

    def test_path_idempotents(self):
        """A path has 0 and the group identity as its idempotents"""
        enum = self.enumerate(self.path(3))
        assert len(self.table_search(enum)) == 2


# ============================================================
# IDEMPOTENTS
# ============================================================

class TestIdempotents:
    """One idempotent per filter, with subgroup data"""

    @pytest.fixture(autouse=True)
    def setup(self):
        from sandmonoid.core.monoid import (
            idempotents, maximal_subgroup, alternate_subgroup_build,
            enumerate_monoid, mutual_accessibility_class,
        )
        from sandmonoid.engine.sandpile import from_mapping, oplus
        from sandmonoid.engine.errors import PreconditionError
        from sandmonoid.families import example_graph, layered_graph, star_of_cyclic, undirected_path
        self.idempotents = idempotents
        self.subgroup = maximal_subgroup
        self.alternate = alternate_subgroup_build
        self.enumerate = enumerate_monoid
        self.mutual_class = mutual_accessibility_class
        self.from_mapping = from_mapping
        self.oplus = oplus
        self.Precondition = PreconditionError
        self.example = example_graph()
        self.layered = layered_graph()
        self.star = star_of_cyclic
        self.path = undirected_path

    def test_example_six_idempotents(self):
        """The fifteen-vertex example has the six expected idempotents"""
        g = self.example
        records = self.idempotents(g)
        assert len(records) == 6
        e1 = self.from_mapping(g, {"b1": 1, "b2": 2, "b3": 1})
        e2 = self.from_mapping(g, {"d1": 1, "d3": 2})
        e4 = self.from_mapping(g, {"c1": 1, "c2": 2, "c3": 1, "d1": 1, "d3": 2})
        expected = [
            self.from_mapping(g, {}),
            e1,
            e2,
            self.oplus(g, e1, e2),
            e4,
            self.oplus(g, e1, e4),
        ]
        got = [r.config for r in records]
        assert got == expected, f"Got {[str(c) for c in got]}"

    def test_example_a_sets(self):
        """A(e) for the zero idempotent and for the D idempotent"""
        g = self.example
        records = self.idempotents(g)
        names = lambda vs: {g.label(v) for v in vs}
        assert names(records[0].a_set) == {"a2", "d1", "d2", "d4"}
        assert names(records[2].a_set) == {"a2", "d4"}

    def test_example_subgroup_orders(self):
        """|G_0| is the product of degrees over A(0); |G_e2| is |G(ι(d3))| * 2 * 2"""
        records = self.idempotents(self.example)
        assert records[0].max_subgroup_order == 2 * 2 * 1 * 2
        # reduced Laplacian of ι(d3) has determinant 4; A(e2) = {a2, d4}
        assert records[2].max_subgroup_order == 4 * 2 * 2

    def test_dag_single_idempotent(self):
        """An acyclic graph has only 0, whose subgroup is the whole monoid"""
        records = self.idempotents(self.star([2, 3]))
        assert len(records) == 1
        assert records[0].config.is_zero()
        assert records[0].max_subgroup_order == 6

    def test_subgroup_constructions_agree(self):
        """S(e) recurrent set, h ⊕ j build, and mutual accessibility coincide"""
        g = self.layered
        enum = self.enumerate(g)
        for rec in self.idempotents(g):
            direct = self.subgroup(g, rec)
            by_table = [enum.elements[i] for i in self.mutual_class(enum, enum.index(rec.config))]
            assert direct == by_table, f"Subgroup at {rec.config} differs from table class"
            assert len(direct) == rec.max_subgroup_order
            if not rec.config.is_zero():
                assert self.alternate(g, rec) == direct

    def test_alternate_rejects_zero(self):
        """The h ⊕ j construction needs a nonzero idempotent"""
        rec = self.idempotents(self.path(2))[0]
        assert rec.config.is_zero()
        with pytest.raises(self.Precondition):
            self.alternate(self.path(2), rec)


# ============================================================
# TWO-IDEMPOTENT CHECKS
# ============================================================

class TestTwoIdempotentChecks:
    """Classical count, recurrence equivalence, eventual recurrence"""

    @pytest.fixture(autouse=True)
    def setup(self):
        from sandmonoid.core.monoid import (
            classical_idempotent_count, two_idempotent_recurrence_check, eventually_recurrent_check,
        )
        from sandmonoid.engine.sandpile import max_config, unit, zero
        from sandmonoid.engine.errors import PreconditionError
        from sandmonoid.families import (
            example_graph, layered_graph, star_of_cyclic, undirected_cycle, undirected_path,
        )
        self.classical = classical_idempotent_count
        self.recurrence_check = two_idempotent_recurrence_check
        self.eventual = eventually_recurrent_check
        self.max_config = max_config
        self.unit = unit
        self.zero = zero
        self.Precondition = PreconditionError
        self.example = example_graph()
        self.layered = layered_graph()
        self.star = star_of_cyclic
        self.cycle = undirected_cycle
        self.path = undirected_path

    def test_classical_counts(self):
        """One loopless vertex gives 1, anything larger gives 2"""
        assert self.classical(self.star([4])) == 1
        assert self.classical(self.path(3)) == 2
        assert self.classical(self.cycle(5)) == 2

    def test_classical_needs_undirected(self):
        """Directed input is refused"""
        with pytest.raises(self.Precondition):
            self.classical(self.layered)

    def test_recurrence_equivalence(self):
        """u ⊕ a = u for some a ≠ 0 exactly on recurrent u"""
        assert self.recurrence_check(self.cycle(4))
        assert self.recurrence_check(self.layered)

    def test_recurrence_check_needs_two(self):
        """A DAG has one idempotent"""
        with pytest.raises(self.Precondition):
            self.recurrence_check(self.star([3]))

    def test_eventual_recurrence(self):
        """Support closure must contain every cycle"""
        g = self.example
        assert self.eventual(g, self.max_config(g))
        assert not self.eventual(g, self.unit(g, g.vertex_by_label("b1")))
        assert not self.eventual(g, self.zero(g))
        assert self.eventual(self.layered, self.unit(self.layered, 3))
