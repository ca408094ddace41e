"""Command line entry points for the pipeline.

Exit codes: 0 success, 1 when some documents failed but the batch finished,
2 for configuration-level problems (bad config, missing prior stage, held
lock, unusable tagger).
"""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path

import click

from .config import PipelineConfig
from .errors import (
    ConfigError,
    InvalidCategory,
    LockHeld,
    MissingPriorStage,
    RuleCompileError,
    TaggerUnavailable,
    UnknownVerb,
)
from .pipeline import STAGES, corpus_lock, read_sentences, run_stage
from .verblex import CATEGORIES, VerbDictionary, harvest_verbs, sample_sentences

CONFIG_ERRORS = (ConfigError, MissingPriorStage, RuleCompileError, TaggerUnavailable, LockHeld)

KEY_TO_CATEGORY = {
    "p": "positive",
    "n": "negative",
    "u": "neutral",
    "d": "depend",
    "x": "none",
}


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Pipeline config file (YAML).")
@click.option("--corpus", "corpus_dir", type=click.Path(path_type=Path), default=None,
              help="Corpus directory; overrides the config file value.")
@click.option("--seed-sample", type=int, default=None,
              help="Seed for sentence and article sampling.")
@click.option("--seed-cluster", type=int, default=None,
              help="Seed recorded for the clustering step.")
@click.pass_context
def main(ctx, config_path, corpus_dir, seed_sample, seed_cluster):
    """Build and explore a findings network from a folder of article PDFs."""
    ctx.obj = {
        "config_path": config_path,
        "corpus_dir": corpus_dir,
        "seed_sample": seed_sample,
        "seed_cluster": seed_cluster,
    }


def _load_config(opts: dict) -> PipelineConfig:
    if opts["config_path"] is not None:
        cfg = PipelineConfig.load(opts["config_path"])
    elif opts["corpus_dir"] is not None:
        cfg = PipelineConfig(corpus_dir=Path(opts["corpus_dir"]))
    else:
        raise ConfigError("pass --config FILE or --corpus DIR")
    replacements = {}
    if opts["corpus_dir"] is not None:
        replacements["corpus_dir"] = Path(opts["corpus_dir"])
    if opts["seed_sample"] is not None:
        replacements["sample_seed"] = opts["seed_sample"]
    if opts["seed_cluster"] is not None:
        replacements["cluster_seed"] = opts["seed_cluster"]
    if replacements:
        cfg = dataclasses.replace(cfg, **replacements)
    cfg.validate()
    return cfg


def _run_stages(opts: dict, stages: list[str], force: bool) -> None:
    try:
        cfg = _load_config(opts)
        with corpus_lock(cfg.corpus_dir):
            results = [run_stage(stage, cfg, force=force) for stage in stages]
    except CONFIG_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    failures: list[str] = []
    for res in results:
        click.echo(f"{res.stage}: {'skipped (inputs unchanged)' if res.skipped else res.message}")
        failures.extend(res.failures)
    for failure in failures:
        click.echo(f"  failed: {failure}", err=True)
    sys.exit(1 if failures else 0)


def _stage_command(stage: str, description: str):
    @click.option("--force", is_flag=True, help="Run even when inputs are unchanged.")
    @click.pass_context
    def cmd(ctx, force):
        _run_stages(ctx.obj, [stage], force)

    cmd.__doc__ = description
    return main.command(name=stage)(cmd)


_stage_command("ingest", "Extract text from PDFs and merge article metadata.")
_stage_command("normalize", "Clean extracted text with the removal rules.")
_stage_command("sectionize", "Split each document into IMRAD sections.")
_stage_command("tagsents", "Split, tokenize, and part-of-speech tag finding sections.")
_stage_command("harvest", "Collect verb lemmas for classification.")
_stage_command("extract", "Extract directed relation triples from tagged sentences.")
_stage_command("graph", "Build the weighted signed network and export it.")
_stage_command("render", "Render the network to SVG.")


@main.command(name="all")
@click.option("--force", is_flag=True, help="Run every stage even when inputs are unchanged.")
@click.pass_context
def run_all_cmd(ctx, force):
    """Run every pipeline stage in order."""
    _run_stages(ctx.obj, list(STAGES), force)


def _highlight(record, lemma: str) -> str:
    for tok in record.tokens:
        if tok.upos == "VERB" and tok.lemma == lemma:
            return record.text[: tok.start] + "[" + tok.surface + "]" + record.text[tok.end :]
    return record.text


@main.command()
@click.option("-n", "--samples", type=int, default=10, show_default=True,
              help="Sentences shown per verb.")
@click.pass_context
def annotate(ctx, samples):
    """Classify harvested verbs interactively (p/n/u/d/x, skip, quit)."""
    try:
        cfg = _load_config(ctx.obj)
        sentences = read_sentences(cfg.corpus_dir)
        if not cfg.verbs_path.exists():
            raise MissingPriorStage(f"{cfg.verbs_path} missing; run harvest first")
        dictionary = VerbDictionary.load(cfg.verbs_path)
    except CONFIG_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    counts = dict(harvest_verbs(sentences))
    skipped: set[str] = set()
    decided = 0
    while True:
        queue = [v for v in dictionary.pending() if v not in skipped]
        queue.sort(key=lambda v: (-counts.get(v, 0), v))
        if not queue:
            remaining = len([v for v in dictionary.pending()])
            if remaining:
                click.echo(f"done for now: {decided} classified, {remaining} skipped")
            else:
                click.echo(f"all verbs classified ({decided} this session)")
            break
        lemma = queue[0]
        click.echo(f"\nverb: {lemma}  ({counts.get(lemma, 0)} occurrences, {len(queue)} pending)")
        if counts.get(lemma, 0) == 0:
            # stale dictionary entry; the corpus no longer uses this verb
            click.echo("  (no sentences available)")
        else:
            for rec in sample_sentences(lemma, sentences, n=samples, seed=cfg.sample_seed):
                click.echo(f"  - {_highlight(rec, lemma)}")
        choice = click.prompt(
            "category [p]ositive [n]egative ne[u]tral [d]epend [x]none / skip / quit",
            type=click.Choice([*KEY_TO_CATEGORY, "skip", "quit"]),
            show_choices=False,
        )
        if choice == "quit":
            click.echo(f"stopped: {decided} classified this session")
            break
        if choice == "skip":
            skipped.add(lemma)
            continue
        try:
            dictionary.classify(lemma, KEY_TO_CATEGORY[choice])
        except (InvalidCategory, UnknownVerb) as exc:
            click.echo(f"error: {exc}", err=True)
            continue
        decided += 1
    sys.exit(0)


@main.command()
@click.option("--host", default=None, help="Bind address; defaults to the config value.")
@click.option("--port", type=int, default=None, help="Port; defaults to the config value.")
@click.pass_context
def serve(ctx, host, port):
    """Serve the HTTP API (and web UI, when built) over the corpus."""
    try:
        cfg = _load_config(ctx.obj)
    except CONFIG_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    import uvicorn

    from .server import create_app

    app = create_app(cfg)
    uvicorn.run(app, host=host or cfg.host, port=port or cfg.port, log_level="warning")


if __name__ == "__main__":
    main()
