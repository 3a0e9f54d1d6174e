"""Release gate: twelve numbered end-to-end checks at fixed tolerances.

Each check prints one summary line (run pytest with -s to see them all;
failing checks show theirs in the failure report). Budgets are wall-clock
ceilings measured on a single core.
"""
import io
import json
import math
import re
import subprocess
import sys
import time
from contextlib import redirect_stdout

import numpy as np

from renyikw.cli import main as cli_main
from renyikw.correlations import (
    c_alpha,
    check_monotonicity,
    eof_alpha,
    kw_verify,
    mutual_information,
    quantum_discord,
)
from renyikw.entropy import Ensemble, renyi_quantum
from renyikw.measurements import (
    IsometryParams,
    isometry_param_count,
    measure_local,
    povm_from_isometry,
)
from renyikw.optimize import OptimizerConfig, optimize_scalar
from renyikw.robustness import (
    check_half_lemma,
    check_psuc_bound,
    check_single_copy_capacity_bound,
    p_success,
    robustness_pure,
)
from renyikw.serialize import state_to_json
from renyikw.states import (
    DensityMatrix,
    PureState,
    haar_unitary,
    partial_trace,
    random_channel,
    random_state,
    tensor_states,
    unitary_channel,
)

# the heavy searches run under this budget; validated on the full grid
DEEP = OptimizerConfig(restarts=16, max_iters=25600, master_seed=0)
MID = OptimizerConfig(restarts=8, max_iters=12800, master_seed=0)
LIGHT = OptimizerConfig(restarts=8, max_iters=6400, master_seed=0)
QUICK = OptimizerConfig(restarts=8, max_iters=4000, master_seed=0)


def _line(n: int, ok: bool, detail: str) -> None:
    tag = "PASS" if ok else "FAIL"
    print(f"[criterion {n:2d}] {tag}  {detail}", flush=True)


def test_criterion_01_closed_form_entropies():
    t0 = time.perf_counter()
    alphas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    worst = 0.0
    for d in (2, 3, 4):
        flat = DensityMatrix(np.eye(d) / d, (d,))
        for a in alphas:
            worst = max(worst, abs(renyi_quantum(flat, a) - math.log2(d)))
    for d in (2, 3, 4):
        psi = random_state("haar_pure", (d,), seed=d)
        for a in alphas:
            worst = max(worst, abs(renyi_quantum(psi.density(), a)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 1.0
    _line(1, ok, f"flat and pure closed forms, worst err {worst:.2e}, {dt:.2f}s")
    assert worst <= 1e-10
    assert dt < 1.0


def test_criterion_02_mixing_never_loses_entropy():
    t0 = time.perf_counter()
    alphas = [0.1, 0.3, 0.5, 0.7, 1.0]
    least = math.inf
    for i in range(200):
        rng = np.random.default_rng(5000 + i)
        d = 2 + i % 3
        m = 2 + (i // 3) % 3
        probs = rng.dirichlet(np.ones(m))
        members = tuple(
            random_state("ginibre_mixed", (d,), rank=int(rng.integers(1, d + 1)),
                         seed=6000 + 7 * i + k)
            for k in range(m)
        )
        xi = Ensemble(probs, members)
        avg = xi.average()
        for a in alphas:
            gain = renyi_quantum(avg, a) - sum(
                p * renyi_quantum(s, a) for p, s in zip(xi.probabilities, xi.states)
            )
            least = min(least, gain)
    dt = time.perf_counter() - t0
    ok = least >= -1e-9 and dt < 10.0
    _line(2, ok, f"200 mixtures x 5 orders, least entropy gain {least:+.2e}, {dt:.1f}s")
    assert least >= -1e-9
    assert dt < 10.0


def test_criterion_03_pure_state_roof_matches_reduced_entropy():
    t0 = time.perf_counter()
    dims_cycle = [(2, 2), (2, 3), (3, 2), (3, 3)]
    alphas = [0.3, 0.5, 0.7, 0.9, 1.0]
    worst = 0.0
    for i in range(50):
        psi = random_state("haar_pure", dims_cycle[i % 4], seed=100 + i)
        a = alphas[i % 5]
        res = eof_alpha(psi.density(), a)
        target = renyi_quantum(partial_trace(psi.density(), (0,)), a)
        worst = max(worst, abs(res.value - target))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 120.0
    _line(3, ok, f"50 pure states, default budget, worst |roof - S_a| {worst:.2e}, {dt:.1f}s")
    assert worst <= 1e-6
    assert dt < 120.0


def test_criterion_04_product_states_carry_no_correlation():
    t0 = time.perf_counter()
    worst_product = 0.0
    for i in range(20):
        rho = tensor_states(
            random_state("ginibre_mixed", (2,), seed=200 + i),
            random_state("ginibre_mixed", (2,), seed=300 + i),
        )
        worst_product = max(worst_product, c_alpha(rho, "B", 0.5, LIGHT).value)
    least_correlated = math.inf
    for i in range(20):
        rho = random_state("ginibre_mixed", (2, 2), rank=2, seed=400 + i)
        least_correlated = min(least_correlated, c_alpha(rho, "B", 0.5, LIGHT).value)
    dt = time.perf_counter() - t0
    ok = worst_product <= 1e-6 and least_correlated >= 1e-3 and dt < 120.0
    _line(4, ok,
          f"product worst {worst_product:.2e}, correlated least {least_correlated:.2e}, {dt:.1f}s")
    assert worst_product <= 1e-6
    assert least_correlated >= 1e-3
    assert dt < 120.0


def test_criterion_05_entropy_balance_on_purifications():
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    for a in (0.3, 0.5, 0.7):
        for seed in range(20):
            psi = random_state("haar_pure", (2, 2, 4), seed=seed)
            rep = kw_verify(psi, alpha=a, config=DEEP, n_outcomes=4)
            worst = max(worst, abs(rep.gap))
            if abs(rep.gap) > 5e-3:
                failures.append((a, seed, rep.gap))
    retried = []
    for a, seed, gap in failures[:3]:
        psi = random_state("haar_pure", (2, 2, 4), seed=seed)
        wide = OptimizerConfig(restarts=128, max_iters=25600, master_seed=0)
        rep = kw_verify(psi, alpha=a, config=wide, n_outcomes=4)
        retried.append((a, seed, gap, rep.gap, abs(rep.gap) <= 5e-3))
    dt = time.perf_counter() - t0
    detail = f"60 instances, worst |gap| {worst:.2e}, {dt:.1f}s"
    for a, seed, gap, gap128, closed in retried:
        verdict = "closes at 128 restarts" if closed else "persists at 128 restarts"
        detail += f"; a={a} seed={seed} gap {gap:+.2e} -> {gap128:+.2e}, {verdict}"
    ok = not failures and dt < 600.0
    _line(5, ok, detail)
    assert not failures, detail
    assert dt < 600.0


def test_criterion_06_measured_correlation_agrees_at_order_one():
    t0 = time.perf_counter()
    direct_cfg = OptimizerConfig(restarts=8, max_iters=4000, master_seed=1)
    worst_route = 0.0
    worst_discord = 0.0
    for i in range(10):
        rho = random_state("ginibre_mixed", (2, 2), rank=[2, 3, 4][i % 3], seed=500 + i)
        j = c_alpha(rho, "B", 1.0, MID).value
        s_a = renyi_quantum(partial_trace(rho, (0,)), 1.0)

        # independent route: minimize the average post-measurement entropy
        # through the public measurement path, then subtract from S(A)
        def avg_conditional(angles, rho=rho):
            povm = povm_from_isometry(IsometryParams(4, 2, angles))
            ens, _ = measure_local(rho, "B", povm)
            return sum(
                p * renyi_quantum(s, 1.0)
                for p, s in zip(ens.probabilities, ens.states)
            )

        rep = optimize_scalar(avg_conditional, isometry_param_count(4, 2), "min", direct_cfg)
        worst_route = max(worst_route, abs(j - (s_a - rep.best_value)))

        d = quantum_discord(rho, "B", MID)
        worst_discord = max(worst_discord, abs(d - (mutual_information(rho) - j)))
    dt = time.perf_counter() - t0
    ok = worst_route <= 1e-6 and worst_discord <= 1e-6 and dt < 120.0
    _line(6, ok,
          f"route diff {worst_route:.2e}, discord identity {worst_discord:.2e}, {dt:.1f}s")
    assert worst_route <= 1e-6
    assert worst_discord <= 1e-6
    assert dt < 120.0


def test_criterion_07_half_order_entropy_equals_log_robustness():
    t0 = time.perf_counter()
    dims_cycle = [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (4, 4)]
    worst = 0.0
    for i in range(50):
        psi = random_state("haar_pure", dims_cycle[i % 6], seed=1600 + i)
        _, _, diff = check_half_lemma(psi)
        worst = max(worst, abs(diff))

    bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0), (2, 2))
    s_bell, lr_bell, _ = check_half_lemma(bell)
    lop = PureState(np.array([math.sqrt(0.9), 0.0, 0.0, math.sqrt(0.1)]), (2, 2))
    r_lop = robustness_pure(lop).r_g
    spot_ok = (
        abs(s_bell - 1.0) <= 1e-12
        and abs(lr_bell - 1.0) <= 1e-12
        and abs(r_lop - 0.6) <= 1e-12
    )
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and spot_ok and dt < 5.0
    _line(7, ok, f"50 pure states, worst |S_half - LR| {worst:.2e}, spot values exact, {dt:.1f}s")
    assert worst <= 1e-9
    assert spot_ok
    assert dt < 5.0


def test_criterion_08_discrimination_matches_two_state_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(50):
        d = 2 if i % 2 == 0 else 3
        rng = np.random.default_rng(600 + i)
        p0 = float(rng.uniform(0.2, 0.8))
        rho0 = random_state("ginibre_mixed", (d,), rank=int(rng.integers(1, d + 1)),
                            seed=700 + i)
        rho1 = random_state("ginibre_mixed", (d,), rank=int(rng.integers(1, d + 1)),
                            seed=800 + i)
        xi = Ensemble(np.array([p0, 1.0 - p0]), (rho0, rho1))
        res = p_success(xi, QUICK)
        gap_matrix = p0 * rho0.matrix - (1.0 - p0) * rho1.matrix
        closed = 0.5 * (1.0 + float(np.abs(np.linalg.eigvalsh(gap_matrix)).sum()))
        worst = max(worst, abs(res.p_success - closed))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-5 and dt < 300.0
    _line(8, ok, f"50 two-member ensembles, worst |p_succ - closed form| {worst:.2e}, {dt:.1f}s")
    assert worst <= 1e-5
    assert dt < 300.0


def test_criterion_09_average_entropy_against_guessing_odds():
    t0 = time.perf_counter()
    least = math.inf
    violations = []
    for i in range(30):
        rng = np.random.default_rng(900 + i)
        m = 2 + i % 3
        vecs = rng.standard_normal((m, 2)) + 1j * rng.standard_normal((m, 2))
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        probs = rng.dirichlet(np.ones(m))
        xi = Ensemble(probs, tuple(PureState(v, (2,)).density() for v in vecs))
        _, _, slack = check_psuc_bound(xi, QUICK)
        least = min(least, slack)
        if slack < -1e-5:
            violations.append((i, slack))
    dt = time.perf_counter() - t0
    ok = least >= -1e-5 and dt < 300.0
    _line(9, ok,
          f"{len(violations)}/30 ensembles break slack >= -1e-5, worst {least:+.4f}, {dt:.1f}s; "
          "the direction fails on near-identical members (average entropy -> 0 while the "
          "guessing penalty stays positive), so this is a property of the formula, not the solver")
    assert least >= -1e-5, (
        f"worst slack {least:+.4f} across {len(violations)} violating ensembles; "
        "an ensemble of identical pure members gives slack = log2(max p) < 0 by direct "
        "arithmetic, so the inequality as stated cannot hold for arbitrary ensembles"
    )
    assert dt < 300.0


def test_criterion_10_single_copy_capacity_bound():
    t0 = time.perf_counter()
    least = math.inf
    violations = []
    rows = []
    for i in range(10):
        psi = random_state("haar_pure", (2, 2, 4), seed=1000 + i)
        c, rhs, slack = check_single_copy_capacity_bound(psi, DEEP, n_outcomes=4)
        rows.append(f"seed {1000 + i}: slack {slack:+.4f}")
        least = min(least, slack)
        if slack < -2e-3:
            violations.append(i)
    dt = time.perf_counter() - t0
    ok = least >= -2e-3 and dt < 600.0
    _line(10, ok,
          f"{len(violations)}/10 purifications break slack >= -2e-3, worst {least:+.4f}, "
          f"{dt:.1f}s; the violating magnitudes sit orders above the search shortfall "
          "(solver error here is under 2e-3 and pushes the other way for the roof term)")
    assert least >= -2e-3, (
        f"worst slack {least:+.4f}; " + "; ".join(rows)
    )
    assert dt < 600.0


def test_criterion_11_channels_cannot_create_correlation():
    t0 = time.perf_counter()
    worst_gain = -math.inf
    worst_unitary = 0.0
    for i in range(20):
        rho = random_state("ginibre_mixed", (2, 2), rank=1 + i % 4, seed=1100 + i)
        if i % 2 == 0:
            ch_a = random_channel(2, 2, seed=1200 + i)
            ch_b = random_channel(2, 2, seed=1300 + i)
            before, after = check_monotonicity(rho, 0.5, ch_a, ch_b, MID)
        else:
            ch_a = unitary_channel(haar_unitary(2, seed=1400 + i))
            ch_b = unitary_channel(haar_unitary(2, seed=1500 + i))
            before, after = check_monotonicity(rho, 0.5, ch_a, ch_b, MID)
            worst_unitary = max(worst_unitary, abs(after - before))
        worst_gain = max(worst_gain, after - before)
    dt = time.perf_counter() - t0
    ok = worst_gain <= 2e-3 and worst_unitary <= 2e-3 and dt < 600.0
    _line(11, ok,
          f"20 states, worst channel gain {worst_gain:+.2e}, "
          f"worst unitary drift {worst_unitary:.2e}, {dt:.1f}s")
    assert worst_gain <= 2e-3
    assert worst_unitary <= 2e-3
    assert dt < 600.0


def _strip_duration(text: str) -> str:
    return re.sub(r'"duration_seconds":[^,}]+', '"duration_seconds":X', text)


def _run_cli(argv) -> tuple[int, str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = cli_main(argv)
    return rc, buf.getvalue()


def test_criterion_12_reports_are_reproducible(tmp_path):
    t0 = time.perf_counter()
    bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0), (2, 2))
    bell_path = tmp_path / "bell.json"
    bell_path.write_text(json.dumps(state_to_json(bell)), encoding="utf-8")
    flat_path = tmp_path / "flat.json"
    flat_path.write_text(
        json.dumps(state_to_json(DensityMatrix(np.eye(2) / 2.0, (2,)))), encoding="utf-8"
    )
    pair_path = tmp_path / "pair.json"
    pair_path.write_text(json.dumps({
        "members": [
            {"p": 0.5, "state": {"dims": [2], "vector": [[1.0, 0.0], [0.0, 0.0]]}},
            {"p": 0.5, "state": {"dims": [2],
                                 "vector": [[1.0 / math.sqrt(2), 0.0],
                                            [1.0 / math.sqrt(2), 0.0]]}},
        ]
    }), encoding="utf-8")

    commands = [
        ["entropy", "--alpha", "0.5", "--state", str(flat_path)],
        ["calpha", "--alpha", "0.5", "--state", str(bell_path),
         "--seed", "7", "--restarts", "2", "--max-iters", "800"],
        ["discriminate", "--ensemble", str(pair_path), "--seed", "1", "--restarts", "4"],
        ["sweep", "--grid", "0.1:0.9:0.1", "--quantity", "entropy",
         "--state", str(flat_path), "--out", str(tmp_path / "grid.csv")],
        ["random", "--kind", "ginibre_mixed", "--dims", "2,2", "--rank", "2",
         "--seed", "5", "--out", str(tmp_path / "drawn.json")],
    ]
    all_match = True
    for argv in commands:
        rc1, out1 = _run_cli(list(argv))
        rc2, out2 = _run_cli(list(argv))
        if rc1 != 0 or rc2 != 0 or _strip_duration(out1) != _strip_duration(out2):
            all_match = False

    sub_argv = [sys.executable, "-m", "renyikw", "entropy",
                "--alpha", "0.5", "--state", str(flat_path)]
    r1 = subprocess.run(sub_argv, capture_output=True, text=True)
    r2 = subprocess.run(sub_argv, capture_output=True, text=True)
    sub_match = (
        r1.returncode == 0
        and r2.returncode == 0
        and _strip_duration(r1.stdout) == _strip_duration(r2.stdout)
    )
    dt = time.perf_counter() - t0
    ok = all_match and sub_match and dt < 60.0
    _line(12, ok,
          f"{len(commands)} commands twice in process plus one subprocess pair, "
          f"byte-identical after dropping duration, {dt:.1f}s")
    assert all_match
    assert sub_match
    assert dt < 60.0
