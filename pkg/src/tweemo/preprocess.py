"""Tweet text normalization.

Two paths: the classical pipeline (artifact stripping, emoticon-to-word
conversion, ASCII folding, stopword filtering, stemming) feeding the TF-IDF
vectorizer, and a light path (artifact stripping only) for transformer-style
consumers that want casing and emoji intact.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .stemming import stem

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_TRAILING_PUNCT_RE = re.compile(r"""[.,;:!?)\]'"]+$""")
_MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")
_TOKEN_RE = re.compile(r"[a-z0-9']+")

# Codepoint ranges treated as emoji/pictographic for the unknown-emoji drop.
_EMOJI_RANGES = (
    (0x1F000, 0x1FAFF),  # mahjong/dominoes through symbols-extended, incl. emoticons
    (0x2600, 0x27BF),    # misc symbols and dingbats
    (0x2B00, 0x2BFF),    # misc symbols and arrows (stars etc.)
    (0xFE00, 0xFE0F),    # variation selectors
    (0x200D, 0x200D),    # zero-width joiner
    (0x20E3, 0x20E3),    # combining enclosing keycap
)


def _is_emoji_codepoint(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


@dataclass(frozen=True)
class EmoticonLexicon:
    """Emoji codepoint sequences and western ASCII emoticons mapped to word phrases."""

    unicode_map: dict[str, str]
    western_map: dict[str, str]

    def __post_init__(self):
        for phrase in list(self.unicode_map.values()) + list(self.western_map.values()):
            if phrase != phrase.lower() or not phrase.isascii():
                raise ValueError(f"lexicon phrase must be lowercase ASCII: {phrase!r}")

    @property
    def _unicode_pattern(self) -> re.Pattern:
        return _compile_alternation(tuple(self.unicode_map))

    @property
    def _western_pattern(self) -> re.Pattern:
        return _compile_token_alternation(tuple(self.western_map))


@lru_cache(maxsize=8)
def _compile_alternation(keys: tuple[str, ...]) -> re.Pattern:
    ordered = sorted(keys, key=len, reverse=True)
    return re.compile("|".join(re.escape(k) for k in ordered))


@lru_cache(maxsize=8)
def _compile_token_alternation(keys: tuple[str, ...]) -> re.Pattern:
    # Longest-first, anchored to whitespace boundaries so ":-)" never matches
    # inside a word like "8:-)x".
    ordered = sorted(keys, key=len, reverse=True)
    body = "|".join(re.escape(k) for k in ordered)
    return re.compile(r"(?:(?<=\s)|^)(?:" + body + r")(?=\s|$)")


def _read_lexicon_tsv(name: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    text = resources.files("tweemo.data").joinpath(name).read_text(encoding="utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        key, _, phrase = line.partition("\t")
        if not key or not phrase:
            raise ValueError(f"{name}: bad lexicon line {line!r}")
        mapping[key] = phrase.strip()
    return mapping


@lru_cache(maxsize=1)
def default_lexicon() -> EmoticonLexicon:
    return EmoticonLexicon(
        unicode_map=_read_lexicon_tsv("emoji_names.tsv"),
        western_map=_read_lexicon_tsv("western_emoticons.tsv"),
    )


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("tweemo.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w for w in text.split("\n") if w)


def strip_artifacts(text: str) -> str:
    """Remove usernames and links, keep hashtag words without the marker.

    URLs go first (they may contain @ or #); trailing sentence punctuation is
    not considered part of a URL.  Output is whitespace-normalized.
    """

    def _drop_url(match: re.Match) -> str:
        trailing = _TRAILING_PUNCT_RE.search(match.group(0))
        return " " + (trailing.group(0) if trailing else "") + " "

    text = _URL_RE.sub(_drop_url, text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    return _WS_RE.sub(" ", text).strip()


def demojize(text: str, lexicon: EmoticonLexicon | None = None) -> str:
    """Replace known emoji and western emoticons with word phrases; drop unknown emoji."""
    lexicon = lexicon or default_lexicon()
    if lexicon.unicode_map:
        text = lexicon._unicode_pattern.sub(
            lambda m: " " + lexicon.unicode_map[m.group(0)] + " ", text
        )
    if lexicon.western_map:
        text = lexicon._western_pattern.sub(
            lambda m: lexicon.western_map[m.group(0)], text
        )
    text = "".join(" " if _is_emoji_codepoint(ch) else ch for ch in text)
    return _WS_RE.sub(" ", text).strip()


def fold_ascii(text: str) -> str:
    """Compatibility-decompose, strip combining marks, drop what has no ASCII form."""
    decomposed = unicodedata.normalize("NFKD", text)
    without_marks = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return without_marks.encode("ascii", "ignore").decode("ascii")


def tokenize_filter_stem(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop stopwords, stem the rest.

    Stemming can collapse a surviving token onto a stopword ("ins" -> "in"),
    so the stopword filter runs once more on the stems; the output never
    contains a stopword member.
    """
    stopwords = default_stopwords() if stopwords is None else stopwords
    tokens = []
    for raw in _TOKEN_RE.findall(text.lower()):
        token = raw.replace("'", "")
        if not token or token in stopwords:
            continue
        stemmed = stem(token)
        if not stemmed or stemmed in stopwords:
            continue
        tokens.append(stemmed)
    return tokens


def preprocess_classical(
    text: str,
    lexicon: EmoticonLexicon | None = None,
    stopwords: frozenset[str] | None = None,
) -> list[str]:
    """Full classical pipeline: artifacts -> emoticons -> ASCII -> tokens/stems."""
    return tokenize_filter_stem(fold_ascii(demojize(strip_artifacts(text), lexicon)), stopwords)


def preprocess_light(text: str) -> str:
    """Transformer-path cleanup: links and usernames only, casing and emoji kept."""
    return strip_artifacts(text)
