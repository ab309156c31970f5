"""Command-line interface.

Subcommands: schema validate, dataset validate, generate-synthetic,
benchmark, report, train-final, predict, serve. Exit codes: 0 on
success, 2 on any validation or input failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AvSafetyError


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except AvSafetyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avsafety",
        description="Aviation occurrence classification: train, benchmark, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_schema = sub.add_parser("schema", help="schema utilities")
    schema_sub = p_schema.add_subparsers(dest="schema_command", required=True)
    p_sv = schema_sub.add_parser("validate", help="validate a schema document")
    p_sv.add_argument("--schema", default=None, help="schema JSON path (default: bundled)")
    p_sv.set_defaults(handler=cmd_schema_validate)

    p_data = sub.add_parser("dataset", help="dataset utilities")
    data_sub = p_data.add_subparsers(dest="dataset_command", required=True)
    p_dv = data_sub.add_parser("validate", help="validate a dataset CSV")
    p_dv.add_argument("--data", required=True, help="dataset CSV path")
    p_dv.add_argument("--schema", default=None)
    p_dv.set_defaults(handler=cmd_dataset_validate)

    p_gen = sub.add_parser(
        "generate-synthetic", help="write a planted-rule synthetic dataset CSV"
    )
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--n", type=int, default=475)
    p_gen.add_argument("--imbalance", type=float, default=0.6)
    p_gen.add_argument("--noise", type=float, default=0.15)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--schema", default=None)
    p_gen.set_defaults(handler=cmd_generate_synthetic)

    p_bench = sub.add_parser("benchmark", help="run the benchmark protocol")
    p_bench.add_argument("--config", default=None, help="config JSON path")
    p_bench.add_argument("--out", required=True, help="machine report output path")
    p_bench.add_argument("--dataset", default=None, help="override dataset path")
    p_bench.add_argument("--n-runs", type=int, default=None)
    p_bench.add_argument("--ratio", type=float, default=None)
    p_bench.add_argument("--base-seed", type=int, default=None)
    p_bench.add_argument("--alpha", type=float, default=None)
    p_bench.add_argument(
        "--families", default=None, help="comma-separated subset of rfc,xgb,logr,svm,knn"
    )
    p_bench.add_argument(
        "--variants", default=None, help="comma-separated subset of original,smote_k1,smote_k5"
    )
    p_bench.add_argument(
        "--no-stratify", action="store_true", help="use plain random splits"
    )
    p_bench.add_argument(
        "--paired", action="store_true", help="paired t-test (sensitivity mode)"
    )
    p_bench.add_argument("--schema", default=None)
    p_bench.set_defaults(handler=cmd_benchmark)

    p_rep = sub.add_parser("report", help="render a benchmark report")
    p_rep.add_argument("--report", required=True, help="machine report path")
    p_rep.add_argument("--format", choices=("table", "machine"), default="table")
    p_rep.set_defaults(handler=cmd_report)

    p_train = sub.add_parser("train-final", help="tune + fit on 100%% of a dataset")
    p_train.add_argument("--family", required=True)
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--schema", default=None)
    p_train.set_defaults(handler=cmd_train_final)

    p_pred = sub.add_parser("predict", help="predict for a feature selection")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument(
        "--features", default="", help="comma-separated feature ids (may be empty)"
    )
    p_pred.add_argument("--schema", default=None)
    p_pred.set_defaults(handler=cmd_predict)

    p_serve = sub.add_parser("serve", help="serve predictions over HTTP")
    p_serve.add_argument("--model", required=True)
    p_serve.add_argument("--addr", default="127.0.0.1:8000")
    p_serve.add_argument("--schema", default=None)
    p_serve.add_argument("--ui", default=None, help="static UI directory to mount")
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def cmd_schema_validate(args) -> int:
    from .schema import load_schema

    schema = load_schema(args.schema)
    n_features = len(schema.features)
    print(
        f"schema {schema.version}: {len(schema.classes)} data classes, "
        f"{n_features} features"
    )
    return 0


def cmd_dataset_validate(args) -> int:
    from .dataset import class_counts, load_dataset
    from .schema import load_schema

    schema = load_schema(args.schema)
    ds = load_dataset(args.data, schema)
    n_inc, n_ser = class_counts(ds)
    print(
        f"dataset ok: {len(ds)} records ({n_inc} incident / {n_ser} serious), "
        f"schema {ds.schema_version}"
    )
    return 0


def cmd_generate_synthetic(args) -> int:
    from .dataset import class_counts, save_dataset
    from .experiment import generate_synthetic_dataset
    from .schema import load_schema

    schema = load_schema(args.schema)
    ds = generate_synthetic_dataset(
        n=args.n,
        imbalance=args.imbalance,
        noise=args.noise,
        seed=args.seed,
        schema=schema,
    )
    save_dataset(ds, schema, args.out)
    n_inc, n_ser = class_counts(ds)
    print(f"wrote {args.out}: {len(ds)} records ({n_inc} incident / {n_ser} serious)")
    return 0


def cmd_benchmark(args) -> int:
    from .experiment import ExperimentConfig, emit_report, run_benchmark

    overrides = {
        "dataset_path": args.dataset,
        "n_runs": args.n_runs,
        "ratio": args.ratio,
        "base_seed": args.base_seed,
        "significance_alpha": args.alpha,
        "families": args.families.split(",") if args.families else None,
        "variants": args.variants.split(",") if args.variants else None,
        "schema_path": args.schema,
    }
    if args.no_stratify:
        overrides["stratify"] = False
    if args.paired:
        overrides["paired_ttest"] = True
    if args.config:
        cfg = ExperimentConfig.from_file(args.config, **overrides)
    else:
        cfg = ExperimentConfig.from_dict({}, **overrides)
    report = run_benchmark(cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(emit_report(report, "machine"))
    print(f"wrote {args.out}")
    return 0


def cmd_report(args) -> int:
    from .errors import ConfigError
    from .experiment import emit_report, report_from_document

    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read report: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report is not valid JSON: {exc}") from exc
    rep = report_from_document(doc)
    sys.stdout.write(emit_report(rep, args.format))
    return 0


def cmd_train_final(args) -> int:
    from .dataset import load_dataset
    from .schema import load_schema
    from .service import train_final, training_metrics

    schema = load_schema(args.schema)
    ds = load_dataset(args.data, schema)
    model = train_final(ds, args.family, args.seed, out_path=args.out)
    metrics = training_metrics(model, ds)
    print(
        f"wrote {args.out}: family={model.family} "
        f"hyperparams={json.dumps(model.hyperparams, sort_keys=True)} "
        f"train_accuracy={metrics.accuracy:.4f}"
    )
    return 0


def cmd_predict(args) -> int:
    from .models import load_model, model_version
    from .schema import encode, load_schema

    model = load_model(args.model)
    schema = load_schema(args.schema)
    if model.schema_version != schema.version:
        from .errors import ConfigError

        raise ConfigError(
            f"model schema version {model.schema_version!r} does not match "
            f"schema {schema.version!r}"
        )
    selected = {f for f in args.features.split(",") if f}
    vec = encode(schema, selected)
    print(
        json.dumps(
            {
                "label": model.predict(vec).value,
                "score": model.predict_score(vec),
                "model_family": model.family,
                "model_version": model_version(model),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.model, args.schema, args.addr, ui_dir=args.ui)
    return 0


if __name__ == "__main__":
    sys.exit(main())
