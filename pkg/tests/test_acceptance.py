"""Acceptance gate: six go/no-go checks over the whole pipeline.

Each test prints exactly one CRITERION line, PASS or FAIL, and enforces
its runtime budget. These deliberately re-derive expectations instead of
importing them from the library under test.
"""

import functools
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import oracles
from roughrisk import (
    MethodEval,
    attribute_weights,
    beta_bound,
    classification_quality,
    classify_batch,
    compare_models,
    extract_rules,
    find_all_reducts,
    find_reduct_greedy,
    generate,
    load_sim_config,
    lower_approx,
    quantize_event,
    records_to_table,
    train_model,
    ttc_baseline_classify,
    upper_approx,
)
from roughrisk.cli import main as cli_main
from roughrisk.datagen import RELEVANT_ATTRS
from roughrisk.decision_table import DecisionTable, inclusion_degree, partition
from roughrisk.kinematics import NOT_CLOSING
from roughrisk.rules import similarity
from roughrisk.vprs import VprsParams
from roughrisk.weights import conditional_entropy, mutual_information


def criterion(n, budget_s):
    def deco(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            try:
                detail = fn()
                elapsed = time.perf_counter() - t0
                if elapsed >= budget_s:
                    raise AssertionError(
                        f"runtime {elapsed:.1f}s exceeds the {budget_s}s budget"
                    )
            except BaseException as exc:
                print(f"CRITERION {n} FAIL: {exc}")
                raise
            print(f"CRITERION {n} PASS ({elapsed:.2f}s): {detail}")
        return run
    return deco


def t8_table() -> DecisionTable:
    return DecisionTable(
        objects=tuple(f"u{i}" for i in range(1, 9)),
        condition_attrs=("a", "b"),
        decision_attr="d",
        condition_values=np.array(
            [[0, 0], [0, 0], [0, 0], [0, 1], [1, 0], [1, 1], [1, 1], [1, 1]]
        ),
        decision_values=np.array([0, 0, 1, 1, 0, 1, 1, 0]),
    )


def split_indices(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    perm = np.random.default_rng(seed).permutation(n)
    cut = int(round(n * 0.8))
    return perm[:cut], perm[cut:]


def ocr_auc(preds, raw_holdout, labels) -> tuple[float, float, float]:
    vprs = MethodEval(
        name="vprs",
        decisions=tuple(p.decision for p in preds),
        scores=tuple(p.risk_score for p in preds),
    )
    verdicts = [
        ttc_baseline_classify(
            NOT_CLOSING if e.ttc_occupied is None else e.ttc_occupied
        )
        for e in raw_holdout
    ]
    ttc = MethodEval(
        name="ttc",
        decisions=tuple(1 if v.positive else 0 for v in verdicts),
        scores=tuple(v.score for v in verdicts),
    )
    report = compare_models([vprs, ttc], labels)
    return (
        report.rows[0].rates.ocr,
        report.rows[0].curve.auc,
        report.rows[1].curve.auc,
    )


@criterion(1, budget_s=1.0)
def test_criterion_1_t8_exact_values():
    dt = t8_table()
    ab = ("a", "b")
    assert classification_quality(dt, ab, VprsParams(Fraction(3, 5))) == 1
    assert classification_quality(dt, ab, VprsParams(Fraction(4, 5))) == \
        Fraction(1, 4)
    assert beta_bound(dt, ab) == Fraction(2, 3)
    assert find_all_reducts(dt, VprsParams(Fraction(3, 5))) == (("b",),)
    w = attribute_weights(dt, ab)
    assert abs(w.epsilon[0] - 0.28250) < 1e-4
    assert abs(w.epsilon[1] - 0.71750) < 1e-4
    rules = extract_rules(dt.restrict(("b",)))
    assert sorted(sorted(dict(r.beliefs).values()) for r in rules) == \
        [[Fraction(1, 4), Fraction(3, 4)]] * 2
    assert all(r.theta == Fraction(1, 2) for r in rules)
    return "gamma/bound/reduct/weights/beliefs all match on T8"


@criterion(2, budget_s=30.0)
def test_criterion_2_pawlak_and_greedy_oracles():
    rng = np.random.default_rng(920)
    one = VprsParams(Fraction(1))
    for _ in range(200):
        dt = oracles.random_table(rng)
        pawlak_gamma = Fraction(0)
        for d in sorted({int(v) for v in dt.decision_values}):
            low = oracles.pawlak_lower(dt, dt.condition_attrs, d)
            up = oracles.pawlak_upper(dt, dt.condition_attrs, d)
            assert set(lower_approx(dt, dt.condition_attrs, d, one)) == low
            assert set(upper_approx(dt, dt.condition_attrs, d, one)) == up
            pawlak_gamma += Fraction(len(low), dt.n_objects)
        assert classification_quality(dt, dt.condition_attrs, one) == pawlak_gamma

        beta = VprsParams(Fraction(int(rng.integers(51, 101)), 100))
        greedy = find_reduct_greedy(dt, beta).attrs
        exact = find_all_reducts(dt, beta)
        target_q = classification_quality(dt, dt.condition_attrs, beta)
        assert classification_quality(dt, greedy, beta) == target_q
        if exact:
            assert classification_quality(dt, exact[0], beta) == target_q
    return "200 tables: beta=1 equals Pawlak exactly; greedy quality = exhaustive"


@criterion(3, budget_s=60.0)
def test_criterion_3_property_suites():
    rng = np.random.default_rng(930)
    for _ in range(1000):
        dt = oracles.random_table(rng)
        n_attrs = len(dt.condition_attrs)
        k = int(rng.integers(1, n_attrs + 1))
        attrs = tuple(
            sorted(rng.choice(n_attrs, size=k, replace=False))
        )
        names = tuple(dt.condition_attrs[i] for i in attrs)

        # partition: pairwise-disjoint cover of the universe
        p = partition(dt, names)
        seen = [o for b in p.blocks for o in b]
        assert sorted(seen) == sorted(dt.objects)

        # inclusion degrees over all decision classes sum to 1 per block
        classes = sorted({int(v) for v in dt.decision_values})
        for block in p.blocks:
            assert sum(
                inclusion_degree(block, oracles.decision_set(dt, d))
                for d in classes
            ) == 1

        # gamma anti-monotone in beta; lower contained in upper
        b_lo, b_hi = sorted(
            Fraction(int(v), 100) for v in rng.integers(51, 101, size=2)
        )
        assert classification_quality(dt, names, VprsParams(b_lo)) >= \
            classification_quality(dt, names, VprsParams(b_hi))
        d = int(rng.choice(classes))
        assert set(lower_approx(dt, names, d, VprsParams(b_hi))) <= \
            set(upper_approx(dt, names, d, VprsParams(b_hi)))

        # entropy bounds and information positivity
        h_d = conditional_entropy(dt, ())
        h_dx = conditional_entropy(dt, names)
        assert -1e-12 <= h_dx <= h_d + 1e-12
        assert mutual_information(dt, names) >= -1e-12

        # adding an attribute never increases conditional entropy
        extra = dt.condition_attrs[int(rng.integers(0, n_attrs))]
        assert conditional_entropy(dt, set(names) | {extra}) <= h_dx + 1e-12

        # weights normalize
        w = attribute_weights(dt, dt.condition_attrs)
        assert abs(sum(w.epsilon) - 1.0) <= 1e-12

        # similarity symmetry and reflexivity
        lo = int(rng.integers(0, 3))
        hi = lo + int(rng.integers(0, 4))
        li = int(rng.integers(lo, hi + 1))
        lj = int(rng.integers(lo, hi + 1))
        assert similarity(li, lj, (lo, hi)) == similarity(lj, li, (lo, hi))
        assert similarity(li, li, (lo, hi)) == 1.0

    # AUC equals the brute-force pair-ordering probability
    from roughrisk import roc_auc
    rng = np.random.default_rng(931)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(100, 501)) if checked % 100 == 0 else \
            int(rng.integers(2, 41))
        labs = [int(v) for v in rng.integers(0, 3, size=n)]
        if len({l >= 1 for l in labs}) < 2:
            continue
        scores = [float(v) for v in np.round(rng.random(n), 2)]
        got = roc_auc(scores, labs).auc
        want = oracles.auc_pairs(scores, [l >= 1 for l in labs])
        assert abs(got - want) <= 1e-12
        checked += 1
    return "1000-instance suites: partitions, VPRS, entropy, weights, AUC"


@criterion(4, budget_s=120.0)
def test_criterion_4_planted_structure_recovery():
    cfg = load_sim_config("configs/sim_default.toml")
    cfg = type(cfg)(seed=cfg.seed, count=None, exhaustive=True,
                    label_noise=0.0, marginals=(), rules=cfg.rules)
    events = generate(cfg)
    assert len(events) == 82944
    records = [quantize_event(e) for e in events]
    train_idx, test_idx = split_indices(len(records), seed=11)
    table = records_to_table([records[i] for i in train_idx])
    model = train_model(table)

    assert set(model.reduct) <= set(RELEVANT_ATTRS), \
        f"reduct {model.reduct} exceeds the planted attributes"
    assert model.reduct == RELEVANT_ATTRS  # exact recovery, frozen

    full = records_to_table(records)
    for attr in ("c2", "c3", "c7", "c8"):
        assert mutual_information(full, (attr,)) == 0.0

    holdout = [records[i] for i in test_idx]
    preds = classify_batch(model, [r.as_levels() for r in holdout])
    hits = sum(p.decision == int(r.risk) for p, r in zip(preds, holdout))
    assert hits == len(holdout), f"holdout accuracy {hits}/{len(holdout)}"
    return (f"reduct {','.join(model.reduct)}; irrelevant MI all 0.0; "
            f"holdout {hits}/{len(holdout)}")


@criterion(5, budget_s=120.0)
def test_criterion_5_directional_table3():
    cfg = load_sim_config("configs/sim_default.toml")
    assert (cfg.count, cfg.seed, cfg.label_noise) == (5000, 42, 0.05)
    events = generate(cfg)
    records = [quantize_event(e) for e in events]
    train_idx, test_idx = split_indices(len(records), seed=7)
    model = train_model(records_to_table([records[i] for i in train_idx]))

    holdout = [records[i] for i in test_idx]
    raw_holdout = [events[i] for i in test_idx]
    labels = [int(r.risk) for r in holdout]
    preds = classify_batch(model, [r.as_levels() for r in holdout])
    ocr, auc_vprs, auc_ttc = ocr_auc(preds, raw_holdout, labels)

    assert ocr >= 0.90, f"OCR {ocr:.4f} below the 90% band"
    assert auc_vprs > auc_ttc, \
        f"AUC ordering lost: vprs {auc_vprs:.4f} vs ttc {auc_ttc:.4f}"
    return f"OCR {ocr:.4f}; AUC vprs {auc_vprs:.4f} > ttc {auc_ttc:.4f}"


@criterion(6, budget_s=120.0)
def test_criterion_6_cli_determinism():
    outputs = ("raw.csv", "q.csv", "model.json", "pred.csv",
               "eval/report.txt", "eval/report.csv",
               "eval/roc_vprs.csv", "eval/roc_ttc.csv")
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        for tag in ("one", "two"):
            d = root / tag
            (d / "eval").mkdir(parents=True)
            argsets = (
                ("simulate", "--config", "configs/sim_default.toml",
                 "--out", d / "raw.csv"),
                ("quantize", "--data", d / "raw.csv", "--out", d / "q.csv"),
                ("train", "--data", d / "q.csv", "--out", d / "model.json"),
                ("classify", "--model", d / "model.json", "--data", d / "q.csv",
                 "--out", d / "pred.csv"),
                ("evaluate", "--model", d / "model.json", "--data", d / "raw.csv",
                 "--out-dir", d / "eval"),
            )
            for argv in argsets:
                assert cli_main([str(a) for a in argv]) == 0
        for name in outputs:
            a = (root / "one" / name).read_bytes()
            b = (root / "two" / name).read_bytes()
            assert a == b, f"{name} differs between identical runs"
    return f"{len(outputs)} pipeline outputs byte-identical across reruns"
