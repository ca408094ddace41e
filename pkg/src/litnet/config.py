"""Pipeline configuration: a YAML file mapped onto one dataclass.

Every knob has an explicit default; seeds are fixed integers, never
wall-clock derived, so reruns reproduce byte-identical artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .storage import sha256_text, canonical_json

TAGGERS = ("builtin", "adapter")
SIGN_BASES = ("eq3", "raw")
DEPEND_POLICIES = ("neutral", "drop")


@dataclass
class PipelineConfig:
    corpus_dir: Path = Path("corpus")
    metadata_file: Path | None = None
    column_map: dict[str, str] = field(
        default_factory=lambda: {"id": "id", "title": "title", "abstract": "abstract",
                                 "year": "year", "areas": "areas"}
    )
    keywords: list[str] = field(default_factory=list)
    keyword_fields: list[str] = field(default_factory=lambda: ["title", "abstract"])
    cleaning_rules_file: Path | None = None
    heading_lexicon_file: Path | None = None
    tagger: str = "builtin"
    adapter_command: list[str] = field(default_factory=list)
    verbs_file: Path | None = None  # default: <corpus_dir>/verbs.tsv
    positive_cues: list[str] = field(default_factory=lambda: ["positive", "positively"])
    negative_cues: list[str] = field(default_factory=lambda: ["negative", "negatively"])
    cue_window: int = 6
    phrase_gap: int = 5
    max_phrase_len: int = 4
    depend_no_cue: str = "neutral"
    negation_flip: bool = False
    rings: int = 4
    sign_basis: str = "eq3"
    sample_seed: int = 13
    cluster_seed: int = 0
    host: str = "127.0.0.1"
    port: int = 8765

    # ------------------------------------------------------------- loading

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        try:
            raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a mapping")
        cfg = cls.from_mapping(raw, base=Path(path).parent)
        cfg.validate()
        return cfg

    @classmethod
    def from_mapping(cls, raw: dict, base: Path = Path(".")) -> "PipelineConfig":
        def path_of(value) -> Path | None:
            if value in (None, ""):
                return None
            p = Path(str(value))
            return p if p.is_absolute() else base / p

        cfg = cls()
        if "corpus_dir" in raw:
            cfg.corpus_dir = path_of(raw["corpus_dir"]) or cfg.corpus_dir
        cfg.metadata_file = path_of(raw.get("metadata_file"))
        if "column_map" in raw:
            cfg.column_map = {str(k): str(v) for k, v in (raw["column_map"] or {}).items()}
        if "keywords" in raw:
            cfg.keywords = [str(k) for k in (raw["keywords"] or [])]
        if "keywords_file" in raw and raw["keywords_file"]:
            kw_path = path_of(raw["keywords_file"])
            try:
                lines = kw_path.read_text(encoding="utf-8").splitlines()
            except OSError as exc:
                raise ConfigError(f"cannot read keywords_file: {exc}") from exc
            cfg.keywords.extend(w.strip() for w in lines if w.strip() and not w.startswith("#"))
        if "keyword_fields" in raw:
            cfg.keyword_fields = [str(f) for f in (raw["keyword_fields"] or [])]
        cfg.cleaning_rules_file = path_of(raw.get("cleaning_rules_file"))
        cfg.heading_lexicon_file = path_of(raw.get("heading_lexicon_file"))
        if "tagger" in raw:
            cfg.tagger = str(raw["tagger"])
        if "adapter_command" in raw and raw["adapter_command"]:
            cmd = raw["adapter_command"]
            cfg.adapter_command = [str(c) for c in (cmd if isinstance(cmd, list) else [cmd])]
        if "verbs_file" in raw:
            cfg.verbs_file = path_of(raw["verbs_file"])
        cues = raw.get("cues") or {}
        if "positive" in cues:
            cfg.positive_cues = [str(c) for c in cues["positive"]]
        if "negative" in cues:
            cfg.negative_cues = [str(c) for c in cues["negative"]]
        if "window" in cues:
            cfg.cue_window = int(cues["window"])
        phrase = raw.get("phrase_rule") or {}
        if "gap" in phrase:
            cfg.phrase_gap = int(phrase["gap"])
        if "max_phrase_len" in phrase:
            cfg.max_phrase_len = int(phrase["max_phrase_len"])
        if "depend_no_cue" in raw:
            cfg.depend_no_cue = str(raw["depend_no_cue"])
        if "negation_flip" in raw:
            cfg.negation_flip = bool(raw["negation_flip"])
        if "rings" in raw:
            cfg.rings = int(raw["rings"])
        if "sign_basis" in raw:
            cfg.sign_basis = str(raw["sign_basis"])
        seeds = raw.get("seeds") or {}
        if "sample" in seeds:
            cfg.sample_seed = int(seeds["sample"])
        if "cluster" in seeds:
            cfg.cluster_seed = int(seeds["cluster"])
        server = raw.get("server") or {}
        if "host" in server:
            cfg.host = str(server["host"])
        if "port" in server:
            cfg.port = int(server["port"])
        return cfg

    def validate(self) -> None:
        if self.tagger not in TAGGERS:
            raise ConfigError(f"tagger must be one of {TAGGERS}, got {self.tagger!r}")
        if self.tagger == "adapter" and not self.adapter_command:
            raise ConfigError("tagger=adapter requires adapter_command")
        if self.sign_basis not in SIGN_BASES:
            raise ConfigError(f"sign_basis must be one of {SIGN_BASES}")
        if self.depend_no_cue not in DEPEND_POLICIES:
            raise ConfigError(f"depend_no_cue must be one of {DEPEND_POLICIES}")
        if self.rings < 1:
            raise ConfigError("rings must be >= 1")
        if self.cue_window < 1:
            raise ConfigError("cue window must be >= 1")
        if self.phrase_gap < 0 or self.max_phrase_len < 1:
            raise ConfigError("phrase_rule: gap >= 0, max_phrase_len >= 1 required")
        if not isinstance(self.sample_seed, int) or not isinstance(self.cluster_seed, int):
            raise ConfigError("seeds must be integers")
        if set(self.keyword_fields) - {"title", "abstract"}:
            raise ConfigError("keyword_fields may only contain title and abstract")
        for name in ("metadata_file", "cleaning_rules_file", "heading_lexicon_file"):
            p = getattr(self, name)
            if p is not None and not Path(p).exists():
                raise ConfigError(f"{name} does not exist: {p}")

    # ------------------------------------------------------------ derived

    @property
    def verbs_path(self) -> Path:
        return self.verbs_file if self.verbs_file else self.corpus_dir / "verbs.tsv"

    def pdf_dir(self) -> Path:
        return Path(self.corpus_dir) / "pdfs"

    _STAGE_KEYS = {
        "ingest": ("column_map", "keywords", "keyword_fields"),
        "normalize": (),
        "sectionize": (),
        "tagsents": ("tagger", "adapter_command"),
        "harvest": (),
        "extract": (
            "positive_cues", "negative_cues", "cue_window",
            "phrase_gap", "max_phrase_len", "depend_no_cue", "negation_flip",
        ),
        "graph": ("rings", "sign_basis", "cluster_seed"),
        "render": (),
    }

    def stage_digest(self, stage: str) -> str:
        """Digest of the config subset a stage depends on."""
        payload = {k: _plain(getattr(self, k)) for k in self._STAGE_KEYS.get(stage, ())}
        for name in ("cleaning_rules_file", "heading_lexicon_file"):
            if stage in ("normalize", "sectionize"):
                p = getattr(self, name)
                if p is not None and Path(p).exists():
                    payload[name] = Path(p).read_text(encoding="utf-8")
                else:
                    payload[name] = None
        return sha256_text(canonical_json(payload))


def _plain(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
