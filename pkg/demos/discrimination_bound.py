"""Half-order entropies, guessing odds, and where the claimed bound breaks.

The half-order reduced entropy of a pure state equals its log-robustness,
a closed form on Schmidt coefficients. Discrimination success for two
members has the Helstrom closed form. Both give the optimizer something
exact to be measured against.

The last section evaluates slack = S_half(average) + log2 P_success on
ensembles where the arithmetic can be done by hand. An ensemble of
identical pure members has zero average entropy but success probability
max_x p_x < 1, so the slack is log2(max_x p_x) < 0. The sign is not a
solver artifact.
"""
import math

import numpy as np

from renyikw.entropy import Ensemble
from renyikw.optimize import OptimizerConfig
from renyikw.robustness import check_half_lemma, check_psuc_bound, p_success, robustness_pure
from renyikw.states import PureState, random_state

cfg = OptimizerConfig(restarts=8, max_iters=4000, master_seed=0)

print("half-order entropy vs log-robustness")
cases = {
    "Bell": PureState(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0), (2, 2)),
    "sqrt(.9)|00> + sqrt(.1)|11>": PureState(
        np.array([math.sqrt(0.9), 0.0, 0.0, math.sqrt(0.1)]), (2, 2)),
    "Haar 3x3 seed 2": random_state("haar_pure", (3, 3), seed=2),
}
for name, psi in cases.items():
    s_half, lr_g, diff = check_half_lemma(psi)
    r_g = robustness_pure(psi).r_g
    print(f"  {name:<28} S_half {s_half:.6f}  LR {lr_g:.6f}  "
          f"R {r_g:.6f}  diff {diff:+.1e}")

print("\ntwo-member discrimination vs the closed form")
rho0 = random_state("ginibre_mixed", (2,), rank=1, seed=40)
rho1 = random_state("ginibre_mixed", (2,), rank=2, seed=41)
xi = Ensemble(np.array([0.35, 0.65]), (rho0, rho1))
res = p_success(xi, cfg)
print(f"  search {res.p_success:.9f}  closed form {res.helstrom_value:.9f}  "
      f"diff {res.p_success - res.helstrom_value:+.1e}")

print("\nslack = S_half(average) + log2 P_success")
rng = np.random.default_rng(7)
v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
v /= np.linalg.norm(v)
same = PureState(v, (2,)).density()
ensembles = {
    "orthogonal pair, equal":
        Ensemble(np.array([0.5, 0.5]),
                 (PureState(np.array([1.0, 0.0]), (2,)).density(),
                  PureState(np.array([0.0, 1.0]), (2,)).density())),
    "identical members, 0.7/0.3": Ensemble(np.array([0.7, 0.3]), (same, same)),
    "random pair, seed 9": Ensemble(
        np.array([0.5, 0.5]),
        (random_state("ginibre_mixed", (2,), rank=1, seed=9),
         random_state("ginibre_mixed", (2,), rank=1, seed=10))),
}
for name, xi in ensembles.items():
    s_half, neg_log, slack = check_psuc_bound(xi, cfg)
    print(f"  {name:<28} S_half {s_half:.4f}  -log2 Ps {neg_log:.4f}  "
          f"slack {slack:+.4f}")
print("  identical members land at log2(0.7) = "
      f"{math.log2(0.7):+.4f} exactly, below zero as promised")
