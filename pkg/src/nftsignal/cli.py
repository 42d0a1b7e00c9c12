"""Pipeline orchestration and command-line entry point.

One JSON config describes a run: global seed, output directory, analysis
settings, and one manifest per project with its tweet/transaction files.
Stages execute in dependency order (ingest -> bucketize -> {granger |
extract -> train -> importance} -> report); artifacts are written atomically
and a run manifest records config and input digests.  All randomness derives
from the single global seed, so reruns with equal config and inputs produce
byte-identical artifacts.

Exit codes: 0 success, 1 stage failure, 2 config error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date, timedelta, timezone, datetime
from pathlib import Path

from . import granger as granger_mod
from . import importance as importance_mod
from . import model as model_mod
from . import report as report_mod
from . import synth as synth_mod
from . import textfeat
from . import timeseries
from .ingest import (
    ProjectManifest,
    load_transactions,
    load_tweets,
    split_multi_nft_values,
    transactions_to_csv,
    tweets_to_jsonl,
)
from .postag import LexiconTagger, lexicon_words
from .rng import SplitMix64, derive_seed

STAGES = ("ingest", "granger", "extract", "train", "importance", "report")

EXIT_OK = 0
EXIT_STAGE_FAILURE = 1
EXIT_CONFIG_ERROR = 2

DEFAULT_CONFIG = {
    "seed": 0,
    "out_dir": "out",
    "workers": 1,
    "lags": [1, 2, 3],
    "granger": {"first_difference": False},
    "tfidf": {"p": 0.01, "k": 10},
    "mlp": {
        "hidden_units": [64, 256],
        "learning_rate": 0.001,
        "epochs": 200,
        "runs": 3,
    },
    "importance": {"repeats": 5, "metric": "accuracy", "top_k": 20},
    "projects": [
        {
            "name": "example",
            "contract_address": "0x0",
            "twitter_handle": "@example",
            "originality": "authentic",
            "frame_len_days": 1,
            "markov_window": 3,
            "tweets": "tweets.jsonl",
            "transactions": "transactions.csv",
        }
    ],
}


class ConfigError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}' failed: {message}")
        self.stage = stage


@dataclass(frozen=True)
class ProjectInputs:
    manifest: ProjectManifest
    tweets_path: Path
    transactions_path: Path


@dataclass
class RunConfig:
    seed: int
    out_dir: Path
    workers: int
    lags: list[int]
    first_difference: bool
    tfidf: textfeat.TfidfConfig
    mlp_settings: dict
    repeats: int
    metric: str
    top_k: int
    projects: list[ProjectInputs]
    config_digest: str = ""


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-") or "project"


def _digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _digest_file(path: Path) -> str:
    return _digest_bytes(path.read_bytes())


def atomic_write_text(path: Path, text: str) -> None:
    """Write via temp file + rename so a failed run never leaves half a file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.parent / f".{path.name}.tmp"
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def load_config(path) -> RunConfig:
    """Parse and validate a run config; all referenced inputs must exist."""
    path = Path(path)
    try:
        raw_bytes = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(raw_bytes)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")

    base = path.parent

    def section(name):
        merged = dict(DEFAULT_CONFIG[name])
        merged.update(doc.get(name) or {})
        return merged

    try:
        tfidf_cfg = textfeat.TfidfConfig(**{k: section("tfidf")[k] for k in ("p", "k")})
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad tfidf settings: {exc}") from exc

    imp = section("importance")
    if imp.get("metric") not in ("accuracy", "mae"):
        raise ConfigError(f"importance.metric must be 'accuracy' or 'mae', got {imp.get('metric')!r}")

    lags = doc.get("lags", DEFAULT_CONFIG["lags"])
    if not isinstance(lags, list) or not lags or any(not isinstance(l, int) or l < 1 for l in lags):
        raise ConfigError("lags must be a non-empty list of positive integers")

    raw_projects = doc.get("projects")
    if not isinstance(raw_projects, list) or not raw_projects:
        raise ConfigError("config must list at least one project")
    projects = []
    names = set()
    for entry in raw_projects:
        if not isinstance(entry, dict):
            raise ConfigError("each project must be an object")
        try:
            manifest = ProjectManifest(
                name=entry["name"],
                contract_address=entry.get("contract_address", ""),
                twitter_handle=entry.get("twitter_handle", ""),
                originality=entry.get("originality", "authentic"),
                like_threshold=entry.get("like_threshold"),
                frame_len_days=entry.get("frame_len_days", 3),
                markov_window=entry.get("markov_window", 3),
                window_start=date.fromisoformat(entry["window_start"]) if "window_start" in entry else None,
                window_end=date.fromisoformat(entry["window_end"]) if "window_end" in entry else None,
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad project entry: {exc}") from exc
        if manifest.name in names:
            raise ConfigError(f"duplicate project name {manifest.name!r}")
        names.add(manifest.name)
        try:
            tweets_path = base / entry["tweets"]
            tx_path = base / entry["transactions"]
        except KeyError as exc:
            raise ConfigError(f"project {manifest.name!r} missing {exc.args[0]!r} path") from exc
        for p in (tweets_path, tx_path):
            if not p.is_file():
                raise ConfigError(f"project {manifest.name!r}: input file not found: {p}")
        projects.append(ProjectInputs(manifest, tweets_path, tx_path))

    out_dir = base / doc.get("out_dir", DEFAULT_CONFIG["out_dir"])
    return RunConfig(
        seed=int(doc.get("seed", DEFAULT_CONFIG["seed"])),
        out_dir=out_dir,
        workers=int(doc.get("workers", DEFAULT_CONFIG["workers"])),
        lags=lags,
        first_difference=bool(section("granger")["first_difference"]),
        tfidf=tfidf_cfg,
        mlp_settings=section("mlp"),
        repeats=int(imp["repeats"]),
        metric=imp["metric"],
        top_k=int(imp["top_k"]),
        projects=projects,
        config_digest=_digest_bytes(raw_bytes),
    )


def _mlp_config(run: RunConfig) -> model_mod.MlpConfig:
    s = run.mlp_settings
    return model_mod.MlpConfig(
        hidden_units=tuple(s["hidden_units"]),
        seed=derive_seed(run.seed, 1),
        learning_rate=float(s["learning_rate"]),
        epochs=int(s["epochs"]),
        runs=int(s["runs"]),
    )


class _StageWriter:
    """Tracks files written by one stage so a failure can remove partial output."""

    def __init__(self, project_dir: Path):
        self.project_dir = project_dir
        self.written: list[Path] = []

    def write(self, filename: str, text: str) -> Path:
        path = self.project_dir / filename
        atomic_write_text(path, text)
        self.written.append(path)
        return path

    def cleanup(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass


def _run_stage(stage: str, project_dir: Path, body) -> list[Path]:
    writer = _StageWriter(project_dir)
    try:
        body(writer)
    except StageError:
        writer.cleanup()
        raise
    except Exception as exc:
        writer.cleanup()
        raise StageError(stage, str(exc)) from exc
    return writer.written


def _run_project(run: RunConfig, proj: ProjectInputs, stages: set[str]) -> list[Path]:
    manifest = proj.manifest
    project_dir = run.out_dir / _slug(manifest.name)
    written: list[Path] = []
    tagger = LexiconTagger()

    # data preparation (dependency of every stage)
    try:
        tweets = load_tweets(proj.tweets_path, manifest)
        txs = split_multi_nft_values(load_transactions(proj.transactions_path, manifest))
        series = timeseries.bucketize(tweets, txs, manifest.frame_len_days)
    except Exception as exc:
        raise StageError("ingest", f"{manifest.name}: {exc}") from exc

    if "ingest" in stages:
        def ingest_body(w):
            w.write("tweets.jsonl", tweets_to_jsonl(tweets))
            w.write("transactions.csv", transactions_to_csv(txs))
        written += _run_stage("ingest", project_dir, ingest_body)

    if "granger" in stages:
        def granger_body(w):
            cells = granger_mod.run_bidirectional(
                series,
                [granger_mod.LagSpec(l) for l in run.lags],
                first_difference=run.first_difference,
            )
            w.write("series.csv", timeseries.series_to_csv(series))
            w.write("granger.csv", report_mod.granger_cells_to_csv(cells))
        written += _run_stage("granger", project_dir, granger_body)

    needs_features = stages & {"extract", "train", "importance"}
    if not needs_features:
        return written

    try:
        filtered = timeseries.drop_frames_without_sales(series)
        kept_original = [f.index for f in series.frames if f.n_sales > 0]
        if not kept_original:
            raise ValueError(f"{manifest.name}: no frames with sales")
        origin = series.frames[0].start
        texts_by_position: list[list[str]] = [[] for _ in kept_original]
        position_of = {orig: pos for pos, orig in enumerate(kept_original)}
        for tw in tweets:
            orig = timeseries.frame_index_of(tw.timestamp, origin, manifest.frame_len_days)
            pos = position_of.get(orig)
            if pos is not None:
                texts_by_position[pos].append(tw.text)
        corpus = [
            textfeat.tokenize_frame(pos, texts, tagger)
            for pos, texts in enumerate(texts_by_position)
        ]
        matrix = textfeat.build_feature_matrix(corpus, run.tfidf)
        prices = [f.avg_price for f in filtered.frames]
        target = timeseries.markov_normalize(prices, manifest.markov_window)
    except StageError:
        raise
    except Exception as exc:
        raise StageError("extract", f"{manifest.name}: {exc}") from exc

    if "extract" in stages:
        def extract_body(w):
            w.write("features.csv", textfeat.matrix_to_csv(matrix))
            w.write(
                "features.json",
                textfeat.matrix_sidecar(matrix, run.tfidf, [f.start for f in filtered.frames]),
            )
            w.write("targets.csv", timeseries.target_to_csv(target))
        written += _run_stage("extract", project_dir, extract_body)

    if not (stages & {"train", "importance"}):
        return written

    try:
        mlp_config = _mlp_config(run)
        trained, metrics = model_mod.train(matrix, target, mlp_config, model_mod.SplitSpec())
    except Exception as exc:
        raise StageError("train", f"{manifest.name}: {exc}") from exc

    if "train" in stages:
        def train_body(w):
            w.write("model.json", model_mod.model_to_json(trained))
            w.write("metrics.csv", report_mod.metrics_to_csv(metrics, manifest.markov_window))
        written += _run_stage("train", project_dir, train_body)

    if "importance" in stages:
        def importance_body(w):
            rows, _, _ = model_mod.align_features_to_target(matrix, target)
            test_rows = rows[metrics.n_train :]
            eval_matrix = matrix.subset(test_rows)
            eval_target = timeseries.NormalizedTarget(
                target.markov_window, target.values[metrics.n_train :]
            )
            scores = importance_mod.mda(
                trained,
                eval_matrix,
                eval_target,
                repeats=run.repeats,
                seed=derive_seed(run.seed, 2),
                metric=run.metric,
            )
            w.write("importance.csv", report_mod.importance_to_csv(scores, run.top_k))
            if scores:
                top, bottom = importance_mod.top_bottom(scores, run.top_k)
                plotted, seen = [], set()
                for s in top + bottom:
                    if s.word not in seen:
                        seen.add(s.word)
                        plotted.append(s.word)
                profiles = [importance_mod.kde_profile(word, matrix) for word in plotted]
                w.write("densities.csv", report_mod.densities_to_csv(profiles))
        written += _run_stage("importance", project_dir, importance_body)

    return written


def _require_artifact(project_dir: Path, filename: str, producer_stage: str, project: str) -> str:
    path = project_dir / filename
    if not path.is_file():
        raise StageError(
            "report",
            f"missing artifact {filename} for project {project!r}; run stage '{producer_stage}' first",
        )
    return path.read_text(encoding="utf-8")


def emit_report(run: RunConfig) -> list[Path]:
    """Assemble the global Markdown report and summary CSVs from stage artifacts."""
    granger_results: dict[str, list] = {}
    metrics_rows: dict[str, tuple] = {}
    vocabs: dict[str, set] = {}
    importance_scores: dict[str, list] = {}

    for proj in run.projects:
        name = proj.manifest.name
        project_dir = run.out_dir / _slug(name)
        granger_results[name] = report_mod.granger_cells_from_csv(
            _require_artifact(project_dir, "granger.csv", "granger", name)
        )
        metrics_rows[name] = report_mod.metrics_from_csv(
            _require_artifact(project_dir, "metrics.csv", "train", name)
        )
        sidecar = json.loads(_require_artifact(project_dir, "features.json", "extract", name))
        vocabs[name] = set(sidecar["vocab"])
        imp_text = _require_artifact(project_dir, "importance.csv", "importance", name)
        rows: dict[str, importance_mod.ImportanceScore] = {}
        for line in imp_text.splitlines()[1:]:
            word, mean, var = line.split(",")
            if word not in rows:
                rows[word] = importance_mod.ImportanceScore(
                    word=word, mean=float(mean), variance=float(var), repeats=run.repeats
                )
        importance_scores[name] = list(rows.values())

    sections = ["# Analysis report", ""]
    sections += ["## Granger causality (SSR F-test)", ""]
    sections += ["Null hypotheses. A: tweet count does not Granger-cause price. "
                 "B: price does not Granger-cause tweet count. "
                 "**Bold**: p < 0.05. \"-\": insufficient data.", ""]
    sections.append(report_mod.render_granger_table(granger_results, run.lags))
    sections += ["## Price-move prediction", ""]
    sections.append(report_mod.render_metrics_table(metrics_rows))

    sections += ["## Vocabulary overlap", ""]
    overlap = None
    if len(vocabs) >= 2:
        overlap = textfeat.overlap_distribution([vocabs[n] for n in sorted(vocabs)])
        sections.append(report_mod.render_overlap_table(overlap))
    else:
        sections.append("Overlap analysis requires at least 2 projects.\n")

    sections += ["## Feature importance", ""]
    for name in sorted(importance_scores):
        sections.append(f"### {name}")
        sections.append("")
        scores = importance_scores[name]
        if scores:
            sections.append(report_mod.render_importance_table(scores, run.top_k))
        else:
            sections.append("no features\n")

    written = []

    def report_body(w):
        w.write("report.md", "\n".join(sections))
        w.write("granger_table.csv", report_mod.granger_summary_csv(granger_results))
        w.write("metrics_table.csv", report_mod.metrics_summary_csv(metrics_rows))
        if overlap is not None:
            w.write("overlap.csv", report_mod.overlap_to_csv(overlap))

    written += _run_stage("report", run.out_dir, report_body)
    return written


def run_pipeline(run: RunConfig, stages: set[str]) -> list[Path]:
    """Execute the selected stages for every project; raises StageError on failure."""
    unknown = stages - set(STAGES)
    if unknown:
        raise ConfigError(f"unknown stages: {sorted(unknown)}")
    run.out_dir.mkdir(parents=True, exist_ok=True)

    project_stages = stages & {"ingest", "granger", "extract", "train", "importance"}
    written: list[Path] = []
    if project_stages:
        if run.workers > 1 and len(run.projects) > 1:
            with ThreadPoolExecutor(max_workers=run.workers) as pool:
                futures = [
                    pool.submit(_run_project, run, proj, project_stages)
                    for proj in run.projects
                ]
                errors = []
                for fut in futures:
                    try:
                        written += fut.result()
                    except StageError as exc:
                        errors.append(exc)
                if errors:
                    raise errors[0]
        else:
            for proj in run.projects:
                written += _run_project(run, proj, project_stages)

    if "report" in stages:
        written += emit_report(run)

    inputs = {}
    for proj in run.projects:
        inputs[proj.manifest.name] = {
            "tweets": _digest_file(proj.tweets_path),
            "transactions": _digest_file(proj.transactions_path),
        }
    manifest_doc = {
        "config_digest": run.config_digest,
        "seed": run.seed,
        "stages": sorted(stages),
        "inputs": inputs,
        "artifacts": {
            str(p.relative_to(run.out_dir)): _digest_file(p) for p in sorted(set(written))
        },
    }
    atomic_write_text(run.out_dir / "run_manifest.json", json.dumps(manifest_doc, sort_keys=True, indent=2) + "\n")
    return written


# ---------------------------------------------------------------------------
# synthetic fixture generation


def synth_var_files(
    out_dir: Path,
    seed: int = 0,
    frames: int = 120,
    coupling: float = 0.9,
    true_lag: int = 1,
    noise_sd: float = 0.1,
    name: str = "synth-var",
) -> Path:
    """Realize a lag-coupled pair as tweet/transaction files plus a run config.

    Tweet counts per day follow an affine map of x; sale prices follow
    exp(y / 2).  The written config can be fed straight to the `all` command.
    """
    spec = synth_mod.VarSpec(coupling=coupling, true_lag=true_lag, length=frames, noise_sd=noise_sd, seed=seed)
    x, y = synth_mod.gen_var_pair(spec)
    rng = SplitMix64(derive_seed(seed, 7))
    pool = lexicon_words()
    start = date(2022, 1, 1)

    tweet_lines = []
    tx_lines = [",".join(
        ("address_from", "address_to", "token_id", "transaction_hash", "value_eth", "block_timestamp")
    )]
    token_counter = 0
    for i in range(frames):
        day = start + timedelta(days=i)
        count = max(1, round(30.0 + 8.0 * x[i]))
        for j in range(count):
            ts = datetime(day.year, day.month, day.day, j % 24, (j * 13) % 60, tzinfo=timezone.utc)
            words = " ".join(pool[rng.randint_below(len(pool))] for _ in range(5))
            tweet_lines.append(
                json.dumps(
                    {
                        "id": f"t{i}-{j}",
                        "created_at": ts.isoformat(),
                        "text": words,
                        "like_count": 5 + j % 9,
                    },
                    sort_keys=True,
                )
            )
        price = math.exp(0.5 * y[i])
        for j in range(3):
            ts = datetime(day.year, day.month, day.day, 12, j, tzinfo=timezone.utc)
            value = price * (0.95 + 0.05 * j)
            tx_lines.append(
                f"0xseller{i},0xbuyer{i}_{j},{token_counter},0xhash{i}_{j},{value:.8f},{ts.isoformat()}"
            )
            token_counter += 1
        if i % 5 == 0:  # a transfer, excluded from averages
            ts = datetime(day.year, day.month, day.day, 13, 0, tzinfo=timezone.utc)
            tx_lines.append(f"0xseller{i},0xbuyer{i}_t,{token_counter},0xhash{i}_t,0,{ts.isoformat()}")
            token_counter += 1
        if i % 7 == 0:  # a two-token exchange, exercising the value split
            ts = datetime(day.year, day.month, day.day, 14, 0, tzinfo=timezone.utc)
            for j in range(2):
                tx_lines.append(
                    f"0xseller{i},0xbuyer{i}_m,{token_counter},0xhashm{i},{price / 2:.8f},{ts.isoformat()}"
                )
                token_counter += 1

    out_dir = Path(out_dir)
    atomic_write_text(out_dir / "tweets.jsonl", "\n".join(tweet_lines) + "\n")
    atomic_write_text(out_dir / "transactions.csv", "\n".join(tx_lines) + "\n")
    config = {
        "seed": seed,
        "out_dir": "out",
        "lags": [1, 2, 3],
        "tfidf": {"p": 0.01, "k": 8},
        "mlp": {"hidden_units": [64, 256], "learning_rate": 0.01, "epochs": 300, "runs": 3},
        "importance": {"repeats": 5, "metric": "accuracy", "top_k": 20},
        "projects": [
            {
                "name": name,
                "contract_address": "0xsynthetic",
                "twitter_handle": "@synthetic",
                "originality": "authentic",
                "frame_len_days": 1,
                "markov_window": 3,
                "tweets": "tweets.jsonl",
                "transactions": "transactions.csv",
            }
        ],
    }
    config_path = out_dir / "config.json"
    atomic_write_text(config_path, json.dumps(config, sort_keys=True, indent=2) + "\n")
    return config_path


def synth_corpus_files(
    out_dir: Path,
    seed: int = 0,
    frames: int = 120,
    vocab_size: int = 40,
    planted_word: str = "moon",
    effect_size: float = 0.5,
) -> Path:
    """Write a planted feature matrix and target in the extract-stage formats."""
    spec = synth_mod.PlantedCorpusSpec(
        n_frames=frames,
        vocab_size=vocab_size,
        planted_word=planted_word,
        effect_size=effect_size,
        seed=seed,
    )
    matrix, target = synth_mod.gen_planted_corpus(spec)
    out_dir = Path(out_dir)
    atomic_write_text(out_dir / "features.csv", textfeat.matrix_to_csv(matrix))
    sidecar = {
        "generator": "planted_corpus",
        "vocab": list(matrix.vocab),
        "frame_indices": list(matrix.frame_indices),
        "planted_word": planted_word,
        "effect_size": effect_size,
        "seed": seed,
    }
    atomic_write_text(out_dir / "features.json", json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
    atomic_write_text(out_dir / "targets.csv", timeseries.target_to_csv(target))
    return out_dir / "features.csv"


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nftsignal",
        description="Social-media activity vs. NFT price analysis pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("defaults", help="print the default run config as JSON")

    for stage_cmd in ("ingest", "granger", "extract", "train", "importance", "report", "all"):
        p = sub.add_parser(stage_cmd, help=f"run the {stage_cmd} stage(s)")
        p.add_argument("--config", required=True, help="path to the run config JSON")
        p.add_argument("--out-dir", help="override the config's output directory")
        p.add_argument("--seed", type=int, help="override the config's global seed")
        p.add_argument("--workers", type=int, help="number of projects processed concurrently")

    synth = sub.add_parser("synth", help="generate synthetic fixtures")
    synth_sub = synth.add_subparsers(dest="synth_command", required=True)
    var = synth_sub.add_parser("var", help="lag-coupled tweet/price project fixture")
    var.add_argument("--out-dir", required=True)
    var.add_argument("--seed", type=int, default=0)
    var.add_argument("--frames", type=int, default=120)
    var.add_argument("--coupling", type=float, default=0.9)
    var.add_argument("--lag", type=int, default=1)
    var.add_argument("--noise", type=float, default=0.1)
    var.add_argument("--name", default="synth-var")
    corpus = synth_sub.add_parser("corpus", help="planted feature matrix fixture")
    corpus.add_argument("--out-dir", required=True)
    corpus.add_argument("--seed", type=int, default=0)
    corpus.add_argument("--frames", type=int, default=120)
    corpus.add_argument("--vocab-size", type=int, default=40)
    corpus.add_argument("--planted-word", default="moon")
    corpus.add_argument("--effect-size", type=float, default=0.5)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "defaults":
            print(json.dumps(DEFAULT_CONFIG, sort_keys=True, indent=2))
            return EXIT_OK
        if args.command == "synth":
            if args.synth_command == "var":
                path = synth_var_files(
                    Path(args.out_dir),
                    seed=args.seed,
                    frames=args.frames,
                    coupling=args.coupling,
                    true_lag=args.lag,
                    noise_sd=args.noise,
                    name=args.name,
                )
                print(f"wrote fixture config: {path}")
            else:
                path = synth_corpus_files(
                    Path(args.out_dir),
                    seed=args.seed,
                    frames=args.frames,
                    vocab_size=args.vocab_size,
                    planted_word=args.planted_word,
                    effect_size=args.effect_size,
                )
                print(f"wrote fixture matrix: {path}")
            return EXIT_OK

        run = load_config(args.config)
        if args.out_dir:
            run.out_dir = Path(args.out_dir)
        if args.seed is not None:
            run.seed = args.seed
        if args.workers is not None:
            run.workers = args.workers
        stages = set(STAGES) if args.command == "all" else {args.command}
        run_pipeline(run, stages)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_STAGE_FAILURE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILURE


if __name__ == "__main__":
    sys.exit(main())
