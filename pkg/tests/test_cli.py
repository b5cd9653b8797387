#!/usr/bin/env python3
"""
sandmonoid CLI Tests
- Every subcommand end to end
- Exit codes
- Records output
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest


class TestCli:
    """main(argv) with files under tmp_path"""

    @pytest.fixture(autouse=True)
    def setup(self, tmp_path, monkeypatch):
        from sandmonoid.main import main
        from sandmonoid.connectors.formats import write_graph, serialize_table, parse_graph
        from sandmonoid.engine.graph import MultiDigraph
        from sandmonoid.core.checker import make_cyclic_group, make_group_plus_infinity
        from sandmonoid.families import example_graph, layered_graph, star_of_cyclic, undirected_cycle
        for key in ("SANDMONOID_CONFIG", "SANDMONOID_CAP_ELEMENTS", "SANDMONOID_CAP_TABLE", "SANDMONOID_LOG_LEVEL"):
            monkeypatch.delenv(key, raising=False)
        monkeypatch.setattr("sandmonoid.engine.settings.DEFAULT_CONFIG_FILE", tmp_path / "missing.yaml")
        self.main = main
        self.parse_graph = parse_graph
        self.tmp = tmp_path

        self.layered = tmp_path / "layered.graph"
        write_graph(self.layered, layered_graph())
        self.example = tmp_path / "example.graph"
        write_graph(self.example, example_graph())
        self.star = tmp_path / "star.graph"
        write_graph(self.star, star_of_cyclic([2, 3]))
        self.cycle = tmp_path / "cycle.graph"
        write_graph(self.cycle, undirected_cycle(5))
        self.group_table = tmp_path / "z6.table"
        self.group_table.write_text(serialize_table(make_cyclic_group(6)))
        self.obstructed_table = tmp_path / "z4inf.table"
        self.obstructed_table.write_text(serialize_table(make_group_plus_infinity(5)))
        self.overflow = tmp_path / "overflow.graph"
        write_graph(self.overflow, MultiDigraph(3, 0, [(1, 2, 2), (1, 0, 1), (2, 0, 1)]))

    def _records(self, out):
        return [json.loads(line) for line in out.strip().splitlines()]

    def test_identity(self, capsys):
        """Identity of the layered fixture with the closed-form comparison"""
        code = self.main(["identity", str(self.layered), "--sdr"])
        out = capsys.readouterr().out
        assert code == 0
        assert "identity: 4 4 1 1 1 1" in out
        assert "SDR: agree" in out

    def test_identity_not_sdr(self, capsys):
        """--sdr on an irregular graph exits 1"""
        code = self.main(["identity", str(self.example), "--sdr"])
        assert code == 1
        assert "SDR: not sdr" in capsys.readouterr().out

    def test_identity_records(self, capsys):
        """Records mode prints one JSON object"""
        code = self.main(["identity", str(self.star), "--format", "records"])
        records = self._records(capsys.readouterr().out)
        assert code == 0
        assert records == [{"kind": "identity", "config": [0, 0], "sdr": None}]

    def test_idempotents(self, capsys):
        """Six idempotents on the fifteen-vertex example"""
        code = self.main(["idempotents", str(self.example), "--format", "records"])
        records = self._records(capsys.readouterr().out)
        assert code == 0
        assert len(records) == 6
        assert records[2]["a_set"] == ["a2", "d4"]
        assert records[2]["support"] == ["d1", "d3"]
        assert records[0]["filter"] == []

    def test_idempotent_record_fields(self, capsys):
        """The idempotent record carries exactly the documented fields"""
        assert self.main(["idempotents", str(self.example), "--format", "records"]) == 0
        record = self._records(capsys.readouterr().out)[2]
        assert set(record) == {
            "kind", "filter", "config", "support", "iota_support", "a_set", "s_vertices", "subgroup_order",
        }
        assert record["filter"] == [["d3"]]
        assert record["iota_support"] == ["d1", "d2", "d3"]
        assert record["s_vertices"] == ["a2", "d1", "d2", "d3", "d4"]
        assert record["subgroup_order"] == 16

    def test_monoid(self, capsys):
        """C_5: sixteen elements, group Z_5"""
        code = self.main(["monoid", str(self.cycle)])
        out = capsys.readouterr().out
        assert code == 0
        assert "|M| = 16" in out
        assert "|G| = 5" in out
        assert "invariant factors = [5]" in out

    def test_monoid_table_out(self, capsys):
        """--table-out writes a table check-monoid accepts"""
        table = self.tmp / "cycle.table"
        assert self.main(["monoid", str(self.cycle), "--table-out", str(table)]) == 0
        assert table.read_text().startswith("m 16 0\n")
        assert self.main(["check-monoid", str(table)]) == 0

    def test_monoid_table_records(self, capsys):
        """With --table-out, the records line carries the table too"""
        table = self.tmp / "cycle.table"
        code = self.main(["monoid", str(self.cycle), "--table-out", str(table), "--format", "records"])
        records = self._records(capsys.readouterr().out)
        assert code == 0
        assert records[0]["order"] == 16
        assert len(records[0]["table"]) == 16
        assert records[0]["table"][0] == list(range(16)), "row of the zero config is the identity row"

    def test_monoid_records_without_table(self, capsys):
        """Without --table-out the table field stays empty"""
        assert self.main(["monoid", str(self.cycle), "--format", "records"]) == 0
        assert self._records(capsys.readouterr().out)[0]["table"] is None

    def test_monoid_cap(self, capsys):
        """Over the element cap exits 3"""
        code = self.main(["monoid", str(self.example), "--cap-elements", "1000"])
        assert code == 3
        assert "SizeCapError" in capsys.readouterr().err

    def test_monoid_cap_records(self, capsys):
        """Errors in records mode print an error record"""
        code = self.main(["monoid", str(self.example), "--cap-elements", "1000", "--format", "records"])
        records = self._records(capsys.readouterr().out)
        assert code == 3
        assert records[0]["kind"] == "error"
        assert records[0]["exit_code"] == 3

    def test_check_monoid(self, capsys):
        """Z_6 passes, Z_4 plus infinity is obstructed"""
        assert self.main(["check-monoid", str(self.group_table)]) == 0
        assert "no known obstruction" in capsys.readouterr().out
        assert self.main(["check-monoid", str(self.obstructed_table)]) == 1
        assert "witness (u, a, k) = (4, 1, 3)" in capsys.readouterr().out

    def test_check_monoid_invalid(self, capsys):
        """Malformed and non-associative tables exit 2"""
        broken = self.tmp / "broken.table"
        broken.write_text("m 2 0\n0 1\n")
        assert self.main(["check-monoid", str(broken)]) == 2
        lopsided = self.tmp / "lopsided.table"
        lopsided.write_text("m 3 0\n0 1 2\n1 1 0\n2 0 2\n")
        assert self.main(["check-monoid", str(lopsided)]) == 2
        assert "associativity" in capsys.readouterr().out

    def test_stabilize(self, capsys):
        """Every policy prints the same stable result"""
        config = self.tmp / "double.config"
        config.write_text("8 8 2 2 2 2\n")
        outputs = []
        for policy in ("fifo", "priority", "parallel"):
            assert self.main(["stabilize", str(self.layered), str(config), "--policy", policy]) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1] == outputs[2]
        assert "stable:  4 4 1 1 1 1" in outputs[0]
        assert "topples: 3 3 4 4 4 4" in outputs[0]

    def test_stabilize_overflow_exit(self, capsys):
        """Grains near 2^63 that overflow while toppling exit 4"""
        config = self.tmp / "huge.config"
        config.write_text("9223372036854775807 9223372036854775807\n")
        assert self.main(["stabilize", str(self.overflow), str(config)]) == 4
        assert "GrainOverflowError" in capsys.readouterr().err

    def test_stabilize_overflow_records(self, capsys):
        """Records mode reports the overflow as an error record"""
        config = self.tmp / "huge.config"
        config.write_text("9223372036854775807 9223372036854775807\n")
        code = self.main(["stabilize", str(self.overflow), str(config), "--policy", "parallel", "--format", "records"])
        records = self._records(capsys.readouterr().out)
        assert code == 4
        assert len(records) == 1 and records[0]["kind"] == "error"
        assert records[0]["error"] == "GrainOverflowError"

    def test_stabilize_bad_config(self, capsys):
        """Wrong slot count exits 2"""
        config = self.tmp / "short.config"
        config.write_text("1 2\n")
        assert self.main(["stabilize", str(self.layered), str(config)]) == 2

    def test_sdr(self, capsys):
        """Profile text for the layered fixture, exit 1 on the example"""
        assert self.main(["sdr", str(self.layered)]) == 0
        assert capsys.readouterr().out == "d 2\n1 1 2 2 3\n2 1 0 1 1\n"
        assert self.main(["sdr", str(self.example)]) == 1

    def test_generate(self, capsys):
        """Generated text parses back to the family member"""
        assert self.main(["generate", "wheel", "5", "3"]) == 0
        g = self.parse_graph(capsys.readouterr().out)
        assert g.vertex_count == 16

    def test_generate_seeded(self, capsys):
        """A seed is echoed as a comment"""
        assert self.main(["generate", "tournament", "2", "1", "--seed", "4"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# seed 4\n")
        assert self.parse_graph(out).vertex_count == 6

    def test_generate_unknown(self, capsys):
        """Unknown families exit 2"""
        assert self.main(["generate", "petersen"]) == 2

    def test_missing_graph_file(self, capsys):
        """Unreadable input exits 2"""
        assert self.main(["identity", str(self.tmp / "absent.graph")]) == 2
