import pytest

from pparg.evaluation import (
    RegressionReport,
    ablation_sweep,
    render_table,
    table_to_tsv,
)


def _report(r):
    return RegressionReport(pearson_r=r, r2=r * r, r2_adj=r * r - 0.01, n=100, p=5)


class TestAblationSweep:
    def test_runs_each_config_once(self):
        seen = []

        def evaluate(config):
            seen.append(config)
            return _report(config["r"])

        rows = ablation_sweep(
            [("full", {"r": 0.9}), ("no-mi", {"r": 0.7})], evaluate
        )
        assert [name for name, _ in rows] == ["full", "no-mi"]
        assert seen == [{"r": 0.9}, {"r": 0.7}]
        assert rows[1][1].pearson_r == 0.7

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            ablation_sweep([("a", {}), ("a", {})], lambda c: _report(0.5))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ablation_sweep([], lambda c: _report(0.5))


class TestRendering:
    def test_table_contains_rows_and_values(self):
        rows = [("full", _report(0.9)), ("lexical-only", _report(0.5))]
        text = render_table(rows)
        lines = text.splitlines()
        assert "features" in lines[0]
        assert any("full" in ln and "0.9000" in ln for ln in lines)
        assert any("lexical-only" in ln and "0.5000" in ln for ln in lines)

    def test_tsv_round_trip(self):
        rows = [("full", _report(0.875))]
        tsv = table_to_tsv(rows)
        lines = tsv.splitlines()
        assert lines[0].split("\t") == ["features", "pearson_r", "r2", "r2_adj"]
        cells = lines[1].split("\t")
        assert cells[0] == "full"
        assert float(cells[1]) == 0.875
