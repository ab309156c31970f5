"""Benchmark harness: repeated split/rebalance/tune/fit/evaluate runs.

Run r uses seed base_seed + r. Within a run the same train/test split is
shared by every family and dataset variant, SMOTE (when a variant asks
for it) touches the training side only, and each (variant, family) pair
is tuned and fitted fresh. Metric samples are collected per (family,
variant); SMOTE variants are compared against the original variant with
a two-sample t-test per metric.

Also home to the planted-rule synthetic dataset generator that stands in
for curated occurrence data (which is not redistributable) in tests and
demos.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import (
    Dataset,
    Label,
    LabeledRecord,
    class_counts,
    random_split,
    stratified_split,
)
from .errors import ConfigError, ExperimentError
from .metrics import (
    MetricSample,
    TTestResult,
    confusion,
    metric_sample,
    paired_t_test,
    welch_t_test,
)
from .models import FAMILIES, FAMILY_DISPLAY, fit, validate_hyperparams
from .models.tune import MIN_PER_CLASS, tune
from .resample import SmoteConfig, smote
from .rng import SplitMix64, derive_seed
from .schema import FeatureSchema, load_schema

METRIC_NAMES = ("accuracy", "f1", "mcc")

VARIANT_NAMES = ("original", "smote_k1", "smote_k5")

_VARIANT_DISPLAY = {
    "original": "(orig)",
    "smote_k1": "SMOTE k=1",
    "smote_k5": "SMOTE k=5",
}


@dataclass(frozen=True)
class Variant:
    """A dataset variant: the training side is left alone (smote_k None)
    or rebalanced with SMOTE at the given k."""

    name: str
    smote_k: int | None = None


def resolve_variants(names: Sequence[str | Variant]) -> tuple[Variant, ...]:
    out = []
    for entry in names:
        if isinstance(entry, Variant):
            out.append(entry)
        elif entry == "original":
            out.append(Variant("original"))
        elif entry == "smote_k1":
            out.append(Variant("smote_k1", smote_k=1))
        elif entry == "smote_k5":
            out.append(Variant("smote_k5", smote_k=5))
        else:
            raise ConfigError(
                f"unknown variant {entry!r}, expected one of {VARIANT_NAMES}"
            )
    if len({v.name for v in out}) != len(out):
        raise ConfigError("variant names must be unique")
    return tuple(out)


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    n_runs: int = 100
    ratio: float = 0.8
    base_seed: int = 0
    families: tuple[str, ...] = FAMILIES
    variants: tuple = tuple(VARIANT_NAMES)
    significance_alpha: float = 0.005
    stratify: bool = True
    paired_ttest: bool = False
    schema_path: str | None = None

    def __post_init__(self):
        if self.n_runs < 2:
            raise ConfigError(f"n_runs must be >= 2, got {self.n_runs}")
        if not 0.0 < self.ratio < 1.0:
            raise ConfigError(f"ratio must be in (0, 1), got {self.ratio}")
        if not 0.0 < self.significance_alpha < 1.0:
            raise ConfigError(
                f"significance_alpha must be in (0, 1), got {self.significance_alpha}"
            )
        if not self.families:
            raise ConfigError("families must be non-empty")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(
                    f"unknown family {fam!r}, expected one of {FAMILIES}"
                )
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "variants", resolve_variants(self.variants))

    @classmethod
    def from_file(cls, path: str, **overrides) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        return cls.from_dict(doc, **overrides)

    @classmethod
    def from_dict(cls, doc: dict, **overrides) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be an object")
        known = {
            "dataset_path",
            "n_runs",
            "ratio",
            "base_seed",
            "families",
            "variants",
            "significance_alpha",
            "stratify",
            "paired_ttest",
            "schema_path",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config field {sorted(unknown)[0]!r}")
        merged = {**doc, **{k: v for k, v in overrides.items() if v is not None}}
        if "dataset_path" not in merged:
            raise ConfigError("config needs a 'dataset_path'")
        for key in ("families", "variants"):
            if key in merged:
                merged[key] = tuple(merged[key])
        return cls(**merged)

    def echo(self) -> dict:
        return {
            "dataset_path": self.dataset_path,
            "n_runs": self.n_runs,
            "ratio": self.ratio,
            "base_seed": self.base_seed,
            "families": list(self.families),
            "variants": [v.name for v in self.variants],
            "significance_alpha": self.significance_alpha,
            "stratify": self.stratify,
            "paired_ttest": self.paired_ttest,
        }


@dataclass
class BenchmarkReport:
    config: dict
    run_seeds: list[int]
    samples: dict  # family -> variant name -> list[MetricSample]
    averages: dict  # family -> variant name -> MetricSample
    ttests: dict  # family -> variant name -> metric -> TTestResult
    variant_names: list[str] = field(default_factory=list)


def run_benchmark(cfg: ExperimentConfig, dataset: Dataset | None = None) -> BenchmarkReport:
    """Execute the full protocol and assemble the report.

    Deterministic given (cfg, dataset). When the training side of a run is
    too small for 3-fold tuning (< 10 records in a class), the family's
    default hyperparameters are used for that fit instead.
    """
    schema = load_schema(cfg.schema_path)
    if dataset is None:
        from .dataset import load_dataset

        dataset = load_dataset(cfg.dataset_path, schema)
    n_inc, n_ser = class_counts(dataset)
    if n_inc < 2 or n_ser < 2:
        raise ConfigError(
            f"benchmark needs >= 2 records per class, got ({n_inc}, {n_ser})"
        )

    variants = cfg.variants
    samples: dict = {
        fam: {v.name: [] for v in variants} for fam in cfg.families
    }
    run_seeds: list[int] = []

    for r in range(cfg.n_runs):
        seed = cfg.base_seed + r
        run_seeds.append(seed)

        split = _stage(r, "split", lambda: (
            stratified_split(dataset, cfg.ratio, seed)
            if cfg.stratify
            else random_split(dataset, cfg.ratio, seed)
        ))
        test = split.test
        test_ids = test.record_ids()
        test_matrix = test.X.copy()
        truth = [rec.label for rec in test.records]

        for variant in variants:
            # seed streams key on the variant's transform and the family,
            # never on list positions or display names, so identical
            # transforms under different names yield identical samples
            vcode = 0 if variant.smote_k is None else variant.smote_k
            if variant.smote_k is None:
                train_v = split.train
            else:
                train_v = _stage(r, f"smote[{variant.name}]", lambda: smote(
                    split.train,
                    SmoteConfig(k=variant.smote_k, seed=derive_seed(seed, 200, vcode)),
                ))
            for family in cfg.families:
                fcode = FAMILIES.index(family)
                hp = _stage(r, f"tune[{variant.name}/{family}]", lambda: (
                    _tune_or_default(family, train_v, derive_seed(seed, vcode, fcode, 0))
                ))
                model = _stage(r, f"fit[{variant.name}/{family}]", lambda: fit(
                    family, hp, train_v, seed=derive_seed(seed, vcode, fcode, 1)
                ))
                sample = _stage(r, f"evaluate[{variant.name}/{family}]", lambda: (
                    metric_sample(confusion(truth, model.predict_labels(test.X)))
                ))
                samples[family][variant.name].append(sample)

            # SMOTE must never leak into the evaluation side
            if test.record_ids() != test_ids or not np.array_equal(test.X, test_matrix):
                raise ExperimentError(
                    f"run {r}: test split was modified by variant {variant.name!r}"
                )

    averages = {
        fam: {
            vname: _mean_sample(slist)
            for vname, slist in per_variant.items()
        }
        for fam, per_variant in samples.items()
    }

    ttests: dict = {fam: {} for fam in cfg.families}
    variant_names = [v.name for v in variants]
    if "original" in variant_names:
        for fam in cfg.families:
            base = samples[fam]["original"]
            for vname in variant_names:
                if vname == "original":
                    continue
                ttests[fam][vname] = {
                    metric: _compare(
                        [getattr(s, metric) for s in base],
                        [getattr(s, metric) for s in samples[fam][vname]],
                        cfg.paired_ttest,
                    )
                    for metric in METRIC_NAMES
                }

    return BenchmarkReport(
        config=cfg.echo(),
        run_seeds=run_seeds,
        samples=samples,
        averages=averages,
        ttests=ttests,
        variant_names=variant_names,
    )


def _stage(run_index: int, stage: str, thunk):
    try:
        return thunk()
    except ExperimentError:
        raise
    except Exception as exc:
        raise ExperimentError(f"run {run_index} ({stage}): {exc}") from exc


def _tune_or_default(family: str, train: Dataset, seed: int) -> dict:
    n_inc, n_ser = class_counts(train)
    if min(n_inc, n_ser) >= MIN_PER_CLASS:
        return tune(family, train, seed)
    return validate_hyperparams(family, {})


def _mean_sample(slist: list[MetricSample]) -> MetricSample:
    return MetricSample(
        accuracy=float(np.mean([s.accuracy for s in slist])),
        f1=float(np.mean([s.f1 for s in slist])),
        mcc=float(np.mean([s.mcc for s in slist])),
    )


def _compare(a: list[float], b: list[float], paired: bool) -> TTestResult:
    """t-test with a convention for degenerate zero-variance inputs:
    identical constant samples compare as t=0, p=1."""
    spread = (max(a) - min(a)) + (max(b) - min(b))
    if spread == 0.0:
        if a == b:
            return TTestResult(t=0.0, p=1.0, df=float(len(a) + len(b) - 2))
        return TTestResult(
            t=float("inf") if (sum(a) > sum(b)) else float("-inf"),
            p=0.0,
            df=float(len(a) + len(b) - 2),
        )
    if paired:
        return paired_t_test(a, b)
    return welch_t_test(a, b)


# ---------------------------------------------------------------------------
# planted-rule synthetic dataset


#: Severity features and their rule weights. A record is rule-serious when
#: the weighted sum of these (0/1) features reaches RULE_THRESHOLD.
SEVERITY_WEIGHTS: dict[str, int] = {
    "collision": 3,
    "loss_of_control_inflight": 3,
    "engine_fire": 3,
    "near_collision": 2,
    "engine_failure_or_not_usable": 2,
    "fire_indication_persist": 2,
    "runway_overrun": 2,
    "loss_of_separation": 2,
    "incursion": 2,
    "excursion": 2,
    "minimal_safe_altitude_breached": 2,
    "injuries": 1,
}

RULE_THRESHOLD = 3

_SEVERITY_RATE = 0.25
_NOISE_FEATURE_RATE_RANGE = (0.01, 0.08)


def planted_rule_fires(schema: FeatureSchema, vec: np.ndarray) -> bool:
    """Ground-truth severity rule used by the synthetic generator."""
    total = 0
    for fid, weight in SEVERITY_WEIGHTS.items():
        if vec[schema.feature_by_id(fid).vector_index] >= 0.5:
            total += weight
    return total >= RULE_THRESHOLD


def generate_synthetic_dataset(
    n: int = 475,
    imbalance: float = 0.6,
    noise: float = 0.15,
    seed: int = 0,
    schema: FeatureSchema | None = None,
) -> Dataset:
    """Synthetic occurrence dataset with labels planted by the severity rule.

    ``imbalance`` is the incident (majority) fraction. Records are
    generated so that, after flipping round(noise * group size) labels in
    each rule group, the final class ratio lands within two records of
    the target. Deterministic given seed.

    Raises:
        ConfigError: parameter out of range, or an imbalance/noise pair
            that no amount of flipping can reach.
    """
    if n < 10:
        raise ConfigError(f"n must be >= 10, got {n}")
    if not 0.0 < imbalance < 1.0:
        raise ConfigError(f"imbalance must be in (0, 1), got {imbalance}")
    if not 0.0 <= noise < 0.5:
        raise ConfigError(f"noise must be in [0, 0.5), got {noise}")
    schema = schema or load_schema()
    target_serious = 1.0 - imbalance
    p0 = (target_serious - noise) / (1.0 - 2.0 * noise)
    if not 0.0 < p0 < 1.0:
        raise ConfigError(
            f"imbalance {imbalance} is unreachable with noise {noise}"
        )

    rng = SplitMix64(seed)
    rates = np.empty(len(schema.features), dtype=np.float64)
    lo, hi = _NOISE_FEATURE_RATE_RANGE
    severity_index = {
        schema.feature_by_id(fid).vector_index for fid in SEVERITY_WEIGHTS
    }
    for i in range(rates.shape[0]):
        draw = rng.next_float()
        rates[i] = _SEVERITY_RATE if i in severity_index else lo + draw * (hi - lo)

    n_rule_serious = int(np.floor(p0 * n + 0.5))
    plan = [True] * n_rule_serious + [False] * (n - n_rule_serious)
    vectors = [_draw_matching(schema, rates, rng, want) for want in plan]
    labels = [
        Label.SERIOUS_INCIDENT if want else Label.INCIDENT for want in plan
    ]

    for group_start, group_len in ((0, n_rule_serious), (n_rule_serious, n - n_rule_serious)):
        n_flips = int(np.floor(noise * group_len + 0.5))
        positions = list(range(group_start, group_start + group_len))
        rng.shuffle(positions)
        for pos in positions[:n_flips]:
            labels[pos] = (
                Label.INCIDENT
                if labels[pos] is Label.SERIOUS_INCIDENT
                else Label.SERIOUS_INCIDENT
            )

    order = list(range(n))
    rng.shuffle(order)
    records = [
        LabeledRecord(f"syn-{i:04d}", vectors[order[i]], labels[order[i]])
        for i in range(n)
    ]
    return Dataset(records, schema.version)


def _draw_matching(schema, rates, rng, want_serious: bool) -> np.ndarray:
    while True:
        vec = np.empty(rates.shape[0], dtype=np.float64)
        for i in range(rates.shape[0]):
            vec[i] = 1.0 if rng.next_float() < rates[i] else 0.0
        if planted_rule_fires(schema, vec) == want_serious:
            return vec


# ---------------------------------------------------------------------------
# report emission


def report_to_document(rep: BenchmarkReport) -> dict:
    results: dict = {}
    for fam, per_variant in rep.samples.items():
        results[fam] = {}
        for vname, slist in per_variant.items():
            avg = rep.averages[fam][vname]
            entry = {
                "samples": [
                    {"accuracy": s.accuracy, "f1": s.f1, "mcc": s.mcc}
                    for s in slist
                ],
                "averages": {
                    "accuracy": avg.accuracy,
                    "f1": avg.f1,
                    "mcc": avg.mcc,
                },
            }
            tt = rep.ttests.get(fam, {}).get(vname)
            entry["ttests"] = (
                {
                    metric: {"t": res.t, "p": res.p, "df": res.df}
                    for metric, res in tt.items()
                }
                if tt
                else None
            )
            results[fam][vname] = entry
    return {
        "config": rep.config,
        "run_seeds": rep.run_seeds,
        "variant_order": rep.variant_names,
        "results": results,
    }


def report_from_document(doc: dict) -> BenchmarkReport:
    try:
        samples = {}
        averages = {}
        ttests = {}
        for fam, per_variant in doc["results"].items():
            samples[fam] = {}
            averages[fam] = {}
            ttests[fam] = {}
            for vname, entry in per_variant.items():
                samples[fam][vname] = [
                    MetricSample(s["accuracy"], s["f1"], s["mcc"])
                    for s in entry["samples"]
                ]
                avg = entry["averages"]
                averages[fam][vname] = MetricSample(
                    avg["accuracy"], avg["f1"], avg["mcc"]
                )
                if entry.get("ttests"):
                    ttests[fam][vname] = {
                        metric: TTestResult(res["t"], res["p"], res["df"])
                        for metric, res in entry["ttests"].items()
                    }
        return BenchmarkReport(
            config=doc["config"],
            run_seeds=list(doc["run_seeds"]),
            samples=samples,
            averages=averages,
            ttests=ttests,
            variant_names=list(doc["variant_order"]),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed benchmark report document: {exc}") from exc


def emit_report(rep: BenchmarkReport, format: str = "table") -> str:
    """Render a report as a comparison table or as canonical JSON."""
    if format == "machine":
        return json.dumps(
            report_to_document(rep), sort_keys=True, separators=(",", ":")
        ) + "\n"
    if format != "table":
        raise ConfigError(f"unknown report format {format!r}")

    alpha = rep.config.get("significance_alpha", 0.005)
    n_runs = rep.config.get("n_runs", len(rep.run_seeds))
    label_w = 18
    col_w = 9

    def fmt_row(label, cells):
        row = label.ljust(label_w)
        for group in cells:
            for cell in group:
                row += cell.rjust(col_w)
            row += "  "
        return row.rstrip()

    header_metrics = ("Accuracy", "F1 Score", "MCC")
    lines = [f"Model comparison (sample runs n={n_runs})", ""]
    top = " " * label_w
    for name in header_metrics:
        top += name.center(3 * col_w) + "  "
    lines.append(top.rstrip())
    lines.append(
        fmt_row("Model", [("Average", "t", "p-value")] * 3)
    )

    families = [f for f in rep.config.get("families", []) if f in rep.samples]
    families += [f for f in rep.samples if f not in families]
    for fam in families:
        for vname in rep.variant_names:
            avg = rep.averages[fam][vname]
            tt = rep.ttests.get(fam, {}).get(vname)
            groups = []
            for metric in METRIC_NAMES:
                avg_cell = f"{getattr(avg, metric):.4f}"
                if tt is None:
                    groups.append((avg_cell, "", ""))
                else:
                    res = tt[metric]
                    p_cell = "*" if res.p < alpha else f"{res.p:.4f}"
                    groups.append((avg_cell, f"{res.t:.4f}", p_cell))
            display = f"{FAMILY_DISPLAY.get(fam, fam)} {_VARIANT_DISPLAY.get(vname, vname)}"
            lines.append(fmt_row(display, groups))
        lines.append("")
    lines.append(f"* p < {alpha}")
    return "\n".join(lines) + "\n"
