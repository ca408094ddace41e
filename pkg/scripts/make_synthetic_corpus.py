#!/usr/bin/env python3
"""Generate the synthetic demo corpus (PDFs + metadata + config)."""

import argparse
from pathlib import Path

from litnet.synth import generate_corpus, write_config


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dest", nargs="?", default="demo-corpus", type=Path,
                        help="target directory (default: ./demo-corpus)")
    parser.add_argument("--no-broken", action="store_true",
                        help="skip the deliberately corrupt PDF")
    args = parser.parse_args()
    generate_corpus(args.dest, include_broken=not args.no_broken)
    config = write_config(args.dest)
    print(f"corpus written to {args.dest}")
    print(f"run: litnet --config {config} all")


if __name__ == "__main__":
    main()
