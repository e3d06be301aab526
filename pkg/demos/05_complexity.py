"""
Per-iteration operation counts
==============================

Closed forms for a regular code next to exact counts from the nonzeros.
"""

# %%
from rnldpc import builtin_code, expand
from rnldpc.complexity import complexity_report, table_counts

print(table_counts(3, 6, d_v=2, d_c=3, variant="real"))
print(table_counts(3, 6, d_v=2, d_c=3, variant="binary"))

# %%
for variant in ("binary", "real"):
    h = expand(builtin_code("wifi-r23"), variant)
    print(complexity_report(h).format())
    print()
