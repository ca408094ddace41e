#!/usr/bin/env python3
"""External tagger fixture speaking the adapter protocol.

Reads one JSON array of surface strings per line and answers with one JSON
array of {surface, lemma, upos} objects. Sentences present in gold_tags.json
are answered from the gold file; anything else falls back to lowercased
lemmas and a NOUN default so the reply always satisfies the schema.

Flags (for failure-mode tests):
  --garbage      reply with non-JSON text
  --short        reply with one object fewer than requested
  --exit-early   exit before answering anything
"""

import json
import sys
from pathlib import Path

GOLD = json.loads((Path(__file__).parent / "gold_tags.json").read_text("utf-8"))
BY_SURFACES = {
    tuple(t["surface"] for t in sent["tokens"]): sent["tokens"]
    for sent in GOLD["sentences"]
}


def main() -> None:
    mode = sys.argv[1] if len(sys.argv) > 1 else ""
    if mode == "--exit-early":
        return
    for line in sys.stdin:
        if not line.strip():
            continue
        surfaces = json.loads(line)
        if mode == "--garbage":
            sys.stdout.write("this is not json\n")
            sys.stdout.flush()
            continue
        gold = BY_SURFACES.get(tuple(surfaces))
        if gold is not None:
            rows = [dict(t) for t in gold]
        else:
            rows = [
                {"surface": s, "lemma": s.lower(), "upos": "PUNCT" if not s[:1].isalnum() else "NOUN"}
                for s in surfaces
            ]
        if mode == "--short" and rows:
            rows = rows[:-1]
        sys.stdout.write(json.dumps(rows, ensure_ascii=False) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
