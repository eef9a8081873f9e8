"""Command-line interface: ingest, stats, preprocess, featurize, crossval,
transfer, predict, sweep, kappa.

Every subcommand honors the global --seed (default 42) and is end-to-end
deterministic given it; reports embed the fully resolved run configuration.
Config files are TOML, with command-line flags taking precedence.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import click
import numpy as np

try:
    import tomllib
except ImportError:  # python 3.10
    import tomli as tomllib

from . import __version__
from .corpus import (
    compute_stats,
    filter_labeled,
    format_label,
    load_corpus,
    load_posts,
    save_corpus,
)
from .errors import ConfigError, DataError, NumericError
from .evaluate import (
    LEARNERS,
    REGRESSION_ONLY,
    CvResult,
    FeatureSpec,
    LearnerSpec,
    binarize_labels,
    calibration_curve,
    cross_validate,
    fit_learner,
    predict_learner,
    sweep_thresholds,
    weighted_kappa_linear,
)
from .featurize import (
    FeaturizerConfig,
    align_embeddings,
    build_vocabulary,
    load_embeddings,
    vectorize,
)
from .persist import (
    FeaturizerState,
    dataset_provenance,
    load_model,
    save_model,
)
from .preprocess import STOPWORDS, STOPWORDS_VERSION, preprocess_texts
from .report import (
    atomic_write_text,
    calibration_rows,
    fmt,
    metrics_rows,
    report_summary,
    svg_figure,
    write_csv,
)

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


@dataclass
class RunConfig:
    dataset: str
    dataset_format: str
    column_map: dict
    features: str  # "bow" | "tfidf" | "embeddings"
    embeddings_path: str | None
    featurizer: dict | None
    learner: str
    params: dict
    task: str
    k_folds: int
    seed: int
    jobs: int
    out_dir: str | None
    test_dataset: str | None = None
    test_format: str | None = None
    test_column_map: dict = field(default_factory=dict)
    test_embeddings_path: str | None = None

    def validate(self):
        if self.learner not in LEARNERS:
            raise ConfigError(f"unknown learner {self.learner!r}; choose from {LEARNERS}")
        if self.task not in ("multiclass", "binary"):
            raise ConfigError(f"task must be multiclass or binary, got {self.task!r}")
        if self.task == "binary" and self.learner in REGRESSION_ONLY:
            raise ConfigError(
                f"learner {self.learner!r} is regression-only and cannot run task=binary"
            )
        if self.features == "embeddings" and not self.embeddings_path:
            raise ConfigError("features=embeddings requires --embeddings FILE")
        if self.features not in ("bow", "tfidf", "embeddings"):
            raise ConfigError(f"features must be bow, tfidf or embeddings, got {self.features!r}")


def _parse_column_map(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--column-map expects role=name, got {pair!r}")
        role, name = pair.split("=", 1)
        out[role.strip()] = name.strip()
    return out


def _parse_param_value(raw: str):
    lowered = raw.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("none", "null"):
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def _parse_params(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = _parse_param_value(value.strip())
    return out


def _read_config(path) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc


def _resolve(ctx, config: dict, name: str):
    """Config-file values override click defaults; explicit flags override both."""
    source = ctx.get_parameter_source(name)
    if source is not None and source.name == "COMMANDLINE":
        return ctx.params[name]
    if name in config:
        return config[name]
    return ctx.params[name]


@click.group()
@click.version_option(version=__version__, prog_name="urgency")
@click.option("--seed", default=42, show_default=True, help="Master seed for every run.")
@click.option("--jobs", default=1, show_default=True, help="Parallel fold workers.")
@click.pass_context
def cli(ctx, seed, jobs):
    """Urgency predictors for discussion-forum posts (1-7 ordinal scale)."""
    ctx.obj = {"seed": seed, "jobs": jobs}


def corpus_options(fn):
    fn = click.option(
        "--column-map",
        multiple=True,
        metavar="ROLE=NAME",
        help="Map a column role (post_id, student_id, timestamp, text, label) to a header name.",
    )(fn)
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["upenn", "stanford"]),
        default="upenn",
        show_default=True,
        help="Corpus CSV dialect.",
    )(fn)
    return fn


def feature_options(fn):
    fn = click.option("--unitize", is_flag=True, help="L2-normalize bow rows.")(fn)
    fn = click.option("--max-df", default=1.0, show_default=True)(fn)
    fn = click.option("--min-df", default=0.0, show_default=True)(fn)
    fn = click.option("--ngram-max", default=1, show_default=True)(fn)
    fn = click.option("--ngram-min", default=1, show_default=True)(fn)
    return fn


def run_options(fn):
    fn = click.option("--cache-mb", default=512.0, show_default=True,
                      help="SVR kernel-row LRU cache size.")(fn)
    fn = click.option("--param", "params", multiple=True, metavar="KEY=VALUE",
                      help="Learner hyperparameter override (repeatable).")(fn)
    fn = click.option("--embeddings", "embeddings_path", type=click.Path(), default=None,
                      help="Precomputed embedding file (selects embedding features).")(fn)
    fn = click.option("--features", type=click.Choice(["bow", "tfidf"]), default="tfidf",
                      show_default=True)(fn)
    fn = click.option("--task", type=click.Choice(["multiclass", "binary"]),
                      default="multiclass", show_default=True)(fn)
    fn = click.option("--learner", type=click.Choice(list(LEARNERS)), default="svr",
                      show_default=True)(fn)
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="TOML config; flags override its values.")(fn)
    fn = feature_options(fn)
    return fn


def _build_run_config(ctx, dataset, out_dir, k) -> RunConfig:
    config = _read_config(ctx.params.get("config_path"))
    get = lambda name: _resolve(ctx, config, name)  # noqa: E731
    features = get("features")
    embeddings_path = get("embeddings_path")
    if embeddings_path:
        if ctx.get_parameter_source("features") is not None and \
                ctx.get_parameter_source("features").name == "COMMANDLINE":
            raise ConfigError("choose one feature source: --features or --embeddings")
        features = "embeddings"
    params = dict(config.get("params", {}))
    params.update(_parse_params(ctx.params.get("params", ())))
    learner = get("learner")
    if learner == "svr" and "cache_mb" not in params:
        params["cache_mb"] = get("cache_mb")
    featurizer = None
    if features != "embeddings":
        featurizer = {
            "mode": features,
            "ngram_min": get("ngram_min"),
            "ngram_max": get("ngram_max"),
            "min_df": get("min_df"),
            "max_df": get("max_df"),
            "unitize": get("unitize"),
        }
    cfg = RunConfig(
        dataset=str(dataset),
        dataset_format=get("fmt"),
        column_map=_parse_column_map(ctx.params.get("column_map", ())),
        features=features,
        embeddings_path=str(embeddings_path) if embeddings_path else None,
        featurizer=featurizer,
        learner=learner,
        params=params,
        task=get("task"),
        k_folds=k,
        seed=ctx.obj["seed"],
        jobs=ctx.obj["jobs"],
        out_dir=str(out_dir) if out_dir else None,
    )
    cfg.validate()
    return cfg


def _load_features(cfg: RunConfig, posts, docs) -> FeatureSpec:
    if cfg.features == "embeddings":
        emb = load_embeddings(cfg.embeddings_path)
        matrix = align_embeddings(emb, [lp.post.post_id for lp in posts])
        return FeatureSpec(kind="embeddings", matrix=matrix)
    return FeatureSpec(kind="text", docs=tuple(docs),
                       config=FeaturizerConfig(**cfg.featurizer))


def _predictions_rows(posts, result: CvResult, task: str):
    header = ["post_id", "student_id", "fold", "label", "prediction"]
    if task == "binary":
        header += ["binary_label", "score"]
    rows = []
    binary = binarize_labels([lp.label for lp in posts]) if task == "binary" else None
    for i, lp in enumerate(posts):
        row = [
            lp.post.post_id,
            lp.post.student_id,
            int(result.fold_of_post[i]),
            format_label(lp.label),
            fmt(result.predictions[i]),
        ]
        if task == "binary":
            row += [int(binary[i]), fmt(result.scores[i])]
        rows.append(row)
    return header, rows


def _report_doc(report):
    return {k: v for k, v in asdict(report).items()}


def _write_run_reports(out_dir, cfg: RunConfig, posts, result: CvResult, provenance):
    os.makedirs(out_dir, exist_ok=True)
    header, rows = metrics_rows(result.report, result.fold_reports)
    write_csv(os.path.join(out_dir, "metrics.csv"), header, rows)
    header, rows = _predictions_rows(posts, result, cfg.task)
    write_csv(os.path.join(out_dir, "predictions.csv"), header, rows)
    labels = np.array([lp.label for lp in posts])
    if cfg.task == "binary":
        curve = calibration_curve(result.scores, binarize_labels(labels).astype(float))
        title = f"{cfg.learner} urgent-class score by true class"
    else:
        curve = calibration_curve(result.predictions, labels)
        title = f"{cfg.learner} predictions by true label"
    header, rows = calibration_rows(curve)
    write_csv(os.path.join(out_dir, "calibration.csv"), header, rows)
    atomic_write_text(os.path.join(out_dir, "figure.svg"), svg_figure(curve, title))
    doc = {
        "config": asdict(cfg),
        "report": _report_doc(result.report),
        "provenance": provenance,
    }
    atomic_write_text(os.path.join(out_dir, "run.json"),
                      json.dumps(doc, indent=1, sort_keys=True) + "\n")


# --- subcommands -------------------------------------------------------------


@cli.command()
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Normalized corpus CSV.")
@click.option("--drops", "drops_path", type=click.Path(), default=None,
              help="CSV of dropped posts with reasons.")
def ingest(dataset, fmt, column_map, out_path, drops_path):
    """Load a corpus, apply the four filtering rules, write the kept posts."""
    posts = load_corpus(dataset, format=fmt, column_map=_parse_column_map(column_map))
    kept, dropped = filter_labeled(posts)
    save_corpus(kept, out_path)
    if drops_path:
        write_csv(
            drops_path,
            ["post_id", "reason_heuristic", "text"],
            [[lp.post.post_id, reason, lp.post.text] for lp, reason in dropped],
        )
    click.echo(f"kept {len(kept)} posts, dropped {len(dropped)}")
    for reason in ("non-english", "symbols-only", "math-only", "links-only"):
        count = sum(1 for _, r in dropped if r == reason)
        if count:
            click.echo(f"  {reason}: {count}")


@cli.command()
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Also write the stats as CSV.")
def stats(dataset, fmt, column_map, out_path):
    """Label histogram and token-count statistics."""
    posts = load_corpus(dataset, format=fmt, column_map=_parse_column_map(column_map))
    docs = preprocess_texts([lp.post for lp in posts])
    counts = [len(d.tokens) for d in docs]
    st = compute_stats(posts, counts)
    click.echo(f"posts      {st.n_posts}")
    click.echo(f"students   {st.n_students}")
    click.echo(
        f"tokens     mean {st.word_count_mean:.2f}  stdev {st.word_count_stdev:.2f}  "
        f"min {st.word_count_min}  max {st.word_count_max}"
    )
    click.echo("label histogram:")
    for label, count in st.label_histogram.items():
        click.echo(f"  {format_label(label):>4} {count}")
    if out_path:
        rows = [
            ["n_posts", st.n_posts],
            ["n_students", st.n_students],
            ["word_count_mean", fmt(st.word_count_mean)],
            ["word_count_stdev", fmt(st.word_count_stdev)],
            ["word_count_min", st.word_count_min],
            ["word_count_max", st.word_count_max],
        ]
        rows += [[f"label_{format_label(k)}", v] for k, v in st.label_histogram.items()]
        write_csv(out_path, ["key", "value"], rows)


@cli.command()
@click.argument("dataset", type=click.Path(exists=True), required=False)
@corpus_options
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Token CSV (post_id, tokens).")
@click.option("--show-stopwords", is_flag=True, help="Print the pinned stopword list.")
def preprocess(dataset, fmt, column_map, out_path, show_stopwords):
    """Run the cleaning pipeline and emit (post_id, tokens) for audit."""
    if show_stopwords:
        click.echo(f"stopword list v{STOPWORDS_VERSION} ({len(STOPWORDS)} words):")
        click.echo("\n".join(sorted(STOPWORDS)))
        return
    if not dataset:
        raise ConfigError("preprocess needs a DATASET (or --show-stopwords)")
    posts = load_corpus(dataset, format=fmt, column_map=_parse_column_map(column_map))
    docs = preprocess_texts([lp.post for lp in posts])
    if out_path:
        write_csv(out_path, ["post_id", "tokens"],
                  [[d.post_id, " ".join(d.tokens)] for d in docs])
    else:
        for d in docs:
            click.echo(f"{d.post_id},{' '.join(d.tokens)}")


@cli.command()
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@feature_options
@click.option("--mode", type=click.Choice(["bow", "tfidf"]), default="tfidf",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Vocabulary CSV (term, doc_freq).")
def featurize(dataset, fmt, column_map, mode, ngram_min, ngram_max, min_df, max_df,
              unitize, out_path):
    """Build the vocabulary under the given document-frequency cutoffs."""
    posts = load_corpus(dataset, format=fmt, column_map=_parse_column_map(column_map))
    docs = preprocess_texts([lp.post for lp in posts])
    config = FeaturizerConfig(mode=mode, ngram_min=ngram_min, ngram_max=ngram_max,
                              min_df=min_df, max_df=max_df, unitize=unitize)
    vocab = build_vocabulary(docs, config)
    write_csv(out_path, ["term", "doc_freq"],
              [[t, vocab.doc_freq[t]] for t in vocab.terms])
    click.echo(f"{len(vocab)} terms over {vocab.n_docs} documents -> {out_path}")


@cli.command()
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@run_options
@click.option("--k", default=10, show_default=True, help="Number of folds.")
@click.option("--out-dir", type=click.Path(), required=True)
@click.pass_context
def crossval(ctx, dataset, fmt, column_map, k, out_dir, **_):
    """Student-grouped k-fold cross-validation with full report emission."""
    cfg = _build_run_config(ctx, dataset, out_dir, k)
    posts = load_corpus(dataset, format=cfg.dataset_format, column_map=cfg.column_map)
    docs = preprocess_texts([lp.post for lp in posts])
    features = _load_features(cfg, posts, docs)
    result = cross_validate(
        posts, features, LearnerSpec(cfg.learner, cfg.params),
        task=cfg.task, k=cfg.k_folds, seed=cfg.seed, jobs=cfg.jobs,
    )
    _write_run_reports(out_dir, cfg, posts, result, dataset_provenance(dataset))
    click.echo(report_summary(result.report), nl=False)
    click.echo(f"reports -> {out_dir}")


@cli.command()
@click.argument("train", type=click.Path(exists=True))
@click.argument("test", type=click.Path(exists=True))
@corpus_options
@run_options
@click.option("--test-format", type=click.Choice(["upenn", "stanford"]), default="stanford",
              show_default=True)
@click.option("--test-column-map", multiple=True, metavar="ROLE=NAME")
@click.option("--test-embeddings", "test_embeddings_path", type=click.Path(), default=None)
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--save-model", "model_path", type=click.Path(), default=None,
              help="Model file destination (default OUT_DIR/model.json).")
@click.pass_context
def transfer(ctx, train, test, fmt, column_map, test_format, test_column_map,
             test_embeddings_path, out_dir, model_path, **_):
    """Fit on the full training corpus, evaluate on a held-out test corpus."""
    cfg = _build_run_config(ctx, train, out_dir, k=0)
    cfg.test_dataset = str(test)
    cfg.test_format = test_format
    cfg.test_column_map = _parse_column_map(test_column_map)
    cfg.test_embeddings_path = str(test_embeddings_path) if test_embeddings_path else None
    if cfg.features == "embeddings" and not cfg.test_embeddings_path:
        raise ConfigError("embedding features need --test-embeddings for the test corpus")

    train_posts = load_corpus(train, format=cfg.dataset_format, column_map=cfg.column_map)
    test_posts = load_corpus(test, format=test_format, column_map=cfg.test_column_map)
    y_train = np.array([lp.label for lp in train_posts])
    y_test = np.array([lp.label for lp in test_posts])
    if cfg.task == "binary":
        y_train = binarize_labels(y_train).astype(float)
        y_test_eval = binarize_labels(y_test).astype(float)
    else:
        y_test_eval = y_test

    if cfg.features == "embeddings":
        emb_train = load_embeddings(cfg.embeddings_path)
        X_train = align_embeddings(emb_train, [lp.post.post_id for lp in train_posts])
        emb_test = load_embeddings(cfg.test_embeddings_path)
        X_test = align_embeddings(emb_test, [lp.post.post_id for lp in test_posts])
        state = FeaturizerState(kind="embeddings", dim=emb_train.dim)
    else:
        fz = FeaturizerConfig(**cfg.featurizer)
        train_docs = preprocess_texts([lp.post for lp in train_posts])
        test_docs = preprocess_texts([lp.post for lp in test_posts])
        vocab = build_vocabulary(train_docs, fz)
        X_train = vectorize(train_docs, vocab, fz)
        X_test = vectorize(test_docs, vocab, fz)
        state = FeaturizerState(kind=fz.mode, config=fz, vocab=vocab)

    model = fit_learner(cfg.learner, cfg.params, X_train, y_train, cfg.task, cfg.seed)
    values, scores = predict_learner(cfg.learner, model, X_test, cfg.task)

    from .evaluate import _pooled_report  # single source for report assembly

    report = _pooled_report(cfg.task, y_test_eval, values, scores)
    result = CvResult(
        predictions=values,
        scores=scores,
        fold_of_post=np.zeros(len(test_posts), dtype=int),
        report=report,
        fold_reports=[],
        trace=[],
        assignment=None,
    )
    provenance = {
        "train": dataset_provenance(train),
        "test": dataset_provenance(test),
        "test_label_histogram": {
            format_label(k): int(v)
            for k, v in zip(*np.unique(y_test, return_counts=True))
        },
    }
    _write_run_reports(out_dir, cfg, test_posts, result, provenance)
    save_model(
        model_path or os.path.join(out_dir, "model.json"),
        cfg.learner, cfg.task, model, state, cfg.params, cfg.seed,
        provenance["train"],
    )
    click.echo(report_summary(report), nl=False)
    click.echo(f"reports -> {out_dir}")


@cli.command()
@click.argument("model_file", type=click.Path(exists=True))
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@click.option("--embeddings", "embeddings_path", type=click.Path(), default=None,
              help="Embedding file for embedding-feature models.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def predict(model_file, dataset, fmt, column_map, embeddings_path, out_path):
    """Score new posts with a saved model; output sorted by urgency."""
    learner, task, model, state, _doc = load_model(model_file)
    posts, labels = load_posts(dataset, format=fmt,
                               column_map=_parse_column_map(column_map),
                               require_label=False)
    if state.kind == "embeddings":
        if not embeddings_path:
            raise ConfigError("this model consumes embeddings; pass --embeddings FILE")
        emb = load_embeddings(embeddings_path)
        if emb.dim != state.dim:
            raise DataError(f"model expects dim={state.dim}, file has dim={emb.dim}")
        X = align_embeddings(emb, [p.post_id for p in posts])
    else:
        docs = preprocess_texts(posts)
        X = vectorize(docs, state.vocab, state.config)
    values, scores = predict_learner(learner, model, X, task)
    sort_key = scores if scores is not None else values
    order = np.argsort(-np.asarray(sort_key), kind="mergesort")
    header = ["post_id", "student_id", "prediction"]
    if scores is not None:
        header.append("probability")
    rows = []
    for i in order:
        row = [posts[i].post_id, posts[i].student_id, fmt(values[i])]
        if scores is not None:
            row.append(fmt(scores[i]))
        rows.append(row)
    write_csv(out_path, header, rows)
    click.echo(f"scored {len(posts)} posts -> {out_path}")


@cli.command()
@click.argument("dataset", type=click.Path(exists=True))
@corpus_options
@run_options
@click.option("--k", default=10, show_default=True)
@click.option("--out-dir", type=click.Path(), required=True)
@click.pass_context
def sweep(ctx, dataset, fmt, column_map, k, out_dir, **_):
    """Decision-threshold sweep over binary cross-validation scores."""
    cfg = _build_run_config(ctx, dataset, out_dir, k)
    if cfg.task != "binary":
        cfg.task = "binary"
        cfg.validate()
    posts = load_corpus(dataset, format=cfg.dataset_format, column_map=cfg.column_map)
    docs = preprocess_texts([lp.post for lp in posts])
    features = _load_features(cfg, posts, docs)
    result = cross_validate(
        posts, features, LearnerSpec(cfg.learner, cfg.params),
        task="binary", k=cfg.k_folds, seed=cfg.seed, jobs=cfg.jobs,
    )
    truth = binarize_labels([lp.label for lp in posts])
    table = sweep_thresholds(result.scores, truth)
    os.makedirs(out_dir, exist_ok=True)
    write_csv(
        os.path.join(out_dir, "sweep.csv"),
        ["threshold", "auc_macro", "f1_weighted", "f1_class0", "f1_class1"],
        [
            [fmt(t), fmt(r.auc_macro), fmt(r.f1_weighted), fmt(r.f1_class0), fmt(r.f1_class1)]
            for t, r in table
        ],
    )
    best_t, best_r = max(table, key=lambda tr: tr[1].f1_weighted)
    click.echo(f"best weighted F1 {best_r.f1_weighted:.4f} at threshold {best_t:.2f}")
    click.echo(f"sweep table -> {os.path.join(out_dir, 'sweep.csv')}")


@cli.command()
@click.argument("ratings", type=click.Path(exists=True))
@click.option("--col-a", default="rater_a", show_default=True)
@click.option("--col-b", default="rater_b", show_default=True)
@click.option("--categories", default=None,
              help="Comma-separated ordered categories (default: observed values).")
def kappa(ratings, col_a, col_b, categories):
    """Linearly weighted Cohen's kappa between two label columns."""
    with open(ratings, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or col_a not in reader.fieldnames \
                or col_b not in reader.fieldnames:
            raise ConfigError(
                f"ratings file needs columns {col_a!r} and {col_b!r}; "
                f"found {reader.fieldnames}"
            )
        a, b = [], []
        for row in reader:
            try:
                a.append(float(row[col_a]))
                b.append(float(row[col_b]))
            except ValueError:
                raise DataError(f"unparseable rating in row {reader.line_num}")
    if categories:
        cats = [float(c) for c in categories.split(",")]
    else:
        cats = sorted(set(a) | set(b))
    result = weighted_kappa_linear(a, b, cats)
    click.echo(f"kappa      {result.kappa:.4f}")
    click.echo(f"weighting  {result.weighting}")
    click.echo(f"n          {result.n_items}")


def main(argv=None):
    try:
        cli(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.exceptions.ClickException as exc:
        exc.show()
        sys.exit(EXIT_CONFIG)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except NumericError as exc:
        click.echo(f"numeric error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    sys.exit(0)


if __name__ == "__main__":
    main()
