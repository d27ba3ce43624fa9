"""Build each model family, turn it into edge probabilities, sample a graph.

The four families are nested: affiliation within SBM within DCBM, and every
block model is a step-function graphon.
"""

import numpy as np

import netcv

n = 60
rng = np.random.default_rng(0)
labels = rng.integers(0, 3, size=n)
labels[:3] = [0, 1, 2]

# affiliation model: one within- and one between-community probability
am = netcv.AffiliationParams(3, 0.10, 0.04, labels)

# general SBM: full symmetric block matrix
b = np.array([[0.09, 0.02, 0.03],
              [0.02, 0.08, 0.02],
              [0.03, 0.02, 0.07]])
sbm = netcv.SbmParams(3, b, labels)

# DCBM: per-node degree weights, normalized so each community's
# sum of squared weights equals its size
theta = netcv.normalize_theta(rng.uniform(0.2, 1.0, size=n), labels)
dcbm = netcv.DcbmParams(3, b, labels, theta)

# graphon: smooth symmetric function of latent uniform positions
xi = rng.uniform(0, 1, size=n)
graphon = netcv.GraphonSpec(lambda x, y: 0.1 * (x + y) / 2 + 0.02, xi)

for name, spec in [("affiliation", am), ("sbm", sbm),
                   ("dcbm", dcbm), ("graphon", graphon)]:
    p = netcv.build_prob(spec)
    a = netcv.sample_adjacency(p, seed=1)
    print(f"{name:12s} mean prob {p.p.mean():.4f}  "
          f"edges {a.adj.sum() // 2}  density {netcv.edge_density(a):.4f}")

# nesting in action: a DCBM with unit weights is exactly its SBM
p_sbm = netcv.build_prob(sbm).p
p_flat = netcv.build_prob(netcv.DcbmParams(3, b, labels, np.ones(n))).p
print("dcbm(theta=1) equals sbm:", np.allclose(p_flat, p_sbm))
