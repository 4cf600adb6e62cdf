"""The benchmark runs both implementations and reports agreement."""

from gsrepeater import benchmark


def test_benchmark_runs(capsys):
    assert benchmark.main(["--repeat", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("workload")
    assert "tree_best_m" in out
    assert "rgs_best_m" in out


def test_flatten_handles_nesting():
    out = []
    benchmark._flatten((1.0, (2, None), [3.5]), out)
    assert out[0] == 1.0 and out[2] != out[2]  # None maps to NaN
    assert benchmark._max_rel((1.0, None), (1.0, None)) == 0.0
    assert benchmark._max_rel(2.0, 1.0) == 0.5
