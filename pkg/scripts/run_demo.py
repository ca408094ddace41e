#!/usr/bin/env python3
"""Generate the demo corpus, run the whole pipeline, and print a summary."""

import argparse
import json
from pathlib import Path

from litnet.config import PipelineConfig
from litnet.pipeline import run_all
from litnet.synth import generate_corpus, write_config


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dest", nargs="?", default="demo-corpus", type=Path)
    args = parser.parse_args()

    generate_corpus(args.dest)
    config = PipelineConfig.load(write_config(args.dest))
    config.validate()
    for result in run_all(config):
        status = "skipped" if result.skipped else result.message
        print(f"{result.stage:10s} {status}")
        for failure in result.failures:
            print(f"           failed: {failure}")

    graph = json.loads((args.dest / "graph.json").read_text(encoding="utf-8"))
    print(f"\n{graph['n_articles']} articles, {len(graph['nodes'])} words, "
          f"{len(graph['edges'])} directed edges")
    print(f"artifacts in {args.dest}/ (graph.json, graph.graphml, graph.dot, graph.svg)")
    print(f"explore: litnet --config {args.dest / 'config.yaml'} serve")


if __name__ == "__main__":
    main()
