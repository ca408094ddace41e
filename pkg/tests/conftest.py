import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from litnet.config import PipelineConfig
from litnet.pipeline import run_all
from litnet.relex import RelationTriple
from litnet.synth import generate_corpus, write_config

FIXTURES = Path(__file__).parent / "fixtures"


def make_triples(corpus: dict) -> list[RelationTriple]:
    """Bridge plain (source, sign, target) corpora into relation records."""
    out = []
    for doc_id in sorted(corpus):
        for k, (source, sign, target) in enumerate(sorted(corpus[doc_id])):
            out.append(
                RelationTriple(
                    doc_id=doc_id,
                    sentence_key=("results", k),
                    source_label=source,
                    target_label=target,
                    verb_lemma="affect",
                    sign=sign,
                    sentence_text=f"{source} affects {target}.",
                )
            )
    return out


def load_corpus_config(dest: Path) -> PipelineConfig:
    config = PipelineConfig.load(write_config(dest))
    config.validate()
    return config


@pytest.fixture(scope="session")
def built_corpus(tmp_path_factory) -> Path:
    """The synthetic demo corpus with every pipeline stage completed."""
    dest = tmp_path_factory.mktemp("corpus")
    generate_corpus(dest)
    run_all(load_corpus_config(dest))
    return dest


@pytest.fixture
def corpus_copy(built_corpus, tmp_path) -> Path:
    """Private mutable copy of the built corpus (config rewritten in place)."""
    dest = tmp_path / "corpus"
    shutil.copytree(built_corpus, dest)
    write_config(dest)
    return dest
