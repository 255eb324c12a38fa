"""
The built-in statistics, poked with small samples
=================================================
"""

# Everything here is self-contained: exact rank-sum tails come from a
# subset-sum table, KS distances from an integer ECDF walk, correlation
# p-values from the regularized incomplete beta function.

from homedest.stats import (
    ks_two_sample,
    pearson,
    spearman,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)

# Two tiny samples with complete separation. With 3 + 3 values there are
# C(6,3) = 20 rank assignments; the two most extreme give p = 2/20.
a, b = [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]
t = wilcoxon_rank_sum(a, b)
print(f"rank-sum {a} vs {b}: U={t.statistic:.0f} p={t.p_value} ({t.method}, exact)")

# Larger tied samples switch to the tie-corrected normal approximation.
x = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0] * 4
y = [3.0, 4.0, 4.0, 5.0, 6.0, 6.0, 7.0, 8.0] * 4
t = wilcoxon_rank_sum(x, y)
print(f"rank-sum with ties (n={len(x)},{len(y)}): p={t.p_value:.4g} {t.stars}")

# Paired version: before/after with one unchanged pair (dropped).
before = [10.0, 12.0, 9.0, 14.0, 11.0, 13.0]
after = [12.0, 15.0, 9.0, 18.0, 12.0, 17.0]
t = wilcoxon_signed_rank(before, after)
print(f"signed-rank before/after: W+={t.statistic:.0f} p={t.p_value:.4g}")

# KS compares whole distributions, not just locations.
import numpy as np

rng = np.random.default_rng(0)
narrow = list(rng.normal(0, 1, 80))
wide = list(rng.normal(0, 3, 80))
t = ks_two_sample(narrow, wide)
print(f"KS same-mean different-spread: D={t.statistic:.3f} p={t.p_value:.3g} {t.stars}")

# Correlations carry their p-values (and log-p for the deep tail).
xs = list(rng.uniform(0, 1, 50))
ys = [0.4 * v + float(rng.normal(0, 0.1)) for v in xs]
for t in (pearson(xs, ys), spearman(xs, ys)):
    print(f"{t.method}: r={t.statistic:+.3f} p={t.p_value:.2g} log_p={t.log_p:.1f} {t.stars}")
