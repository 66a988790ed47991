"""Thin batch adapters around an external dependency parser and an
external paraphrase generator.  They read the example/story JSONL files,
call the tool, and emit the CoNLL-U and paraphrase-JSONL interchange
files (plus a manifest) that the corpus toolkit consumes.  No filtering
or text transformation happens here; the interchange files are a
faithful record of the tools' outputs.
"""

from .manifest import AdapterManifest, read_manifest
from .parsing import HanlpParser, ReplayParser, ToolUnavailableError, parse_stories
from .paraphrasing import ReplayParaphraser, SimbertParaphraser, paraphrase_stories

__version__ = "0.1.0"
