"""Edge splitting, low-rank completion, and spectral clustering.

The selection pipeline never sees the full adjacency matrix at fit time:
node pairs are split into a training set and a held-out evaluation set, the
training-only matrix Y is completed at low rank (rescaled by 1/w to debias
the missingness), and communities are read off the completed matrix.
"""

import numpy as np

import netcv

spec, _ = netcv.make_scenario("sbm-3", 600, seed=0)
a = netcv.sample_adjacency(netcv.build_prob(spec), seed=1)

# hold out 10% of the pairs
split = netcv.sample_split(a.n, w=0.9, seed=2)
print("training pairs:", split.training_mask.sum() // 2,
      "  evaluation pairs:", split.n_eval_pairs())

y = netcv.partial_matrix(a, split)
completed = netcv.complete_lowrank(y, k=3, w=split.w)
print("completion rank:", completed.rank_used)

# cluster the completed matrix and compare against the planted communities
est = netcv.spectral_cluster(completed, 3)
truth = netcv.Labels(spec.labels, 3)
_, err = netcv.align_labels(est, truth)
print(f"misclassification rate: {err:.3f}")

# V-fold splitting covers every pair exactly once
folds = netcv.v_fold_splits(a.n, 10, seed=3)
covered = sum(s.eval_mask().astype(int) for s in folds)
print("10-fold: every pair evaluated once:",
      np.array_equal(covered, np.ones((a.n, a.n), int) - np.eye(a.n, dtype=int)))
