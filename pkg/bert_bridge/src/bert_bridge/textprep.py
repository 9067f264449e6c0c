"""Light tweet cleanup for the transformer path.

Reimplements the classical pipeline's artifact stripping with identical
semantics (this package must not import the classical one): URLs removed
with trailing punctuation excluded, @mentions removed, '#' replaced by a
space keeping the word, whitespace normalized.  Casing and emoji are kept.
"""

from __future__ import annotations

import re

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_TRAILING_PUNCT_RE = re.compile(r"""[.,;:!?)\]'"]+$""")
_MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")


def light_clean(text: str) -> str:
    def _drop_url(match: re.Match) -> str:
        trailing = _TRAILING_PUNCT_RE.search(match.group(0))
        return " " + (trailing.group(0) if trailing else "") + " "

    text = _URL_RE.sub(_drop_url, text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    return _WS_RE.sub(" ", text).strip()
