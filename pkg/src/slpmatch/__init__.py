"""Linear-time pattern matching in SLP-compressed text."""

from .concat import ConcatIndex, concat_batch, concat_build
from .matcher import MatchResult, match
from .pattern_index import PatternIndex, SubstringRef
from .slp import Binary, Slp, SlpError, Terminal, TooLong, analyze, decompress_guarded, parse_slp, render_slp

__all__ = [
    "Binary", "ConcatIndex", "MatchResult", "PatternIndex", "Slp", "SlpError", "SubstringRef",
    "Terminal", "TooLong", "analyze", "concat_batch", "concat_build", "decompress_guarded",
    "match", "parse_slp", "render_slp",
]

__version__ = "0.1.0"
