"""Exception types shared across the pipeline."""


class LitnetError(Exception):
    """Base class for all pipeline errors."""


class UnreadablePdf(LitnetError):
    """The file is not a parseable PDF (corrupt, encrypted, or not a PDF at all)."""


class EmptyDocument(LitnetError):
    """A PDF parsed fine but yielded zero extractable characters."""


class AmbiguousMatch(LitnetError):
    """Two metadata rows map onto the same document record."""


class RuleCompileError(LitnetError):
    """A user-supplied cleaning rule pattern does not compile."""


class NoFindingsText(LitnetError):
    """Results, discussion and conclusions sections are all empty."""


class TaggerUnavailable(LitnetError):
    """An external tagger process cannot start or violates the message schema."""


class UnknownVerb(LitnetError):
    """Lemma is not present in the verb dictionary / harvest."""


class InvalidCategory(LitnetError):
    """Verb category outside the five annotation categories."""


class UnknownWord(LitnetError):
    """Word is not a node of the graph."""


class UnknownPair(LitnetError):
    """Ordered word pair has no supporting relation."""


class EmptyGraph(LitnetError):
    """Graph operation requires at least one relation."""


class LayoutMissing(LitnetError):
    """Rendering requires node coordinates; run the layout first."""


class MissingPriorStage(LitnetError):
    """A pipeline stage was run before the stage it depends on."""


class ConfigError(LitnetError):
    """Invalid or incomplete pipeline configuration."""


class RebuildInProgress(LitnetError):
    """A snapshot rebuild is already running."""


class GraphNotBuilt(LitnetError):
    """The graph artifacts are missing; run the graph stage first."""


class LockHeld(LitnetError):
    """Another process holds the corpus directory lock."""
