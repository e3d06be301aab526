import pytest

from rnldpc.complexity import complexity_report, table_counts
from rnldpc.qc_code import BaseMatrix, builtin_code, expand


def test_closed_forms_real():
    c = table_counts(3, 6, d_v=2, d_c=3, variant="real")
    assert (c.syndrome_ops, c.syndrome_op) == (9, "ADD")
    assert c.energy_ops == 24
    assert c.maxfinder_comparisons == 30
    assert (c.update_ops_per_symbol, c.update_op) == (1, "ADD")


def test_closed_forms_binary():
    c = table_counts(3, 6, d_v=2, d_c=3, variant="binary")
    assert (c.syndrome_ops, c.syndrome_op) == (9, "XOR")
    assert c.energy_ops == 12
    assert c.update_op == "XOR"


@pytest.mark.parametrize("variant", ["real", "binary"])
def test_regular_code_agrees_with_exact(variant):
    h = expand(BaseMatrix(5, [[0, 1, 2, 3], [4, 0, 1, 2]]), "binary")
    r = complexity_report(h, variant)
    assert (r.m, r.n, r.d_v, r.d_c) == (10, 20, 2, 4)
    assert r.is_regular
    assert r.regular.syndrome_ops == 40
    assert r.regular.energy_ops == (2 if variant == "real" else 1) * 40


def test_r23_exact_nnz(r23):
    base = builtin_code("wifi-r23")
    blocks = sum(v >= 0 for row in base.entries for v in row)
    r = complexity_report(r23)
    assert r.exact_nnz.syndrome_ops == 27 * blocks == r23.nnz == 2403
    assert r.exact_nnz.energy_ops == 2 * 2403
    assert not r.is_regular
    assert r.regular.syndrome_ops == r23.m * 12
    assert r.linear_scan_comparisons == r23.n - 1
    assert "2403" in r.format()
