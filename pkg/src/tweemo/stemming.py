"""English Snowball (Porter2) stemmer.

Implements the published algorithm: y-marking prelude, R1/R2 regions with the
gener/commun/arsen prefix rule, steps 0 through 5, exceptional forms, and the
post-step-1a invariant words.  Input is lowercased; output is lowercase ASCII.
"""

from __future__ import annotations

_VOWELS = "aeiouy"
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDERS = "cdeghkmnrt"

_EXCEPTIONS = {
    "skis": "ski",
    "skies": "sky",
    "dying": "die",
    "lying": "lie",
    "tying": "tie",
    "idly": "idl",
    "gently": "gentl",
    "ugly": "ugli",
    "early": "earli",
    "only": "onli",
    "singly": "singl",
    "sky": "sky",
    "news": "news",
    "howe": "howe",
    "atlas": "atlas",
    "cosmos": "cosmos",
    "bias": "bias",
    "andes": "andes",
}

_POST_1A_INVARIANT = frozenset(
    {"inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed"}
)

# (suffix, replacement) in longest-first match order; None replacement = conditional.
_STEP2 = (
    ("ization", "ize"),
    ("ational", "ate"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("lessli", "less"),
    ("entli", "ent"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("ousli", "ous"),
    ("iviti", "ive"),
    ("fulli", "ful"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("izer", "ize"),
    ("ator", "ate"),
    ("alli", "al"),
    ("bli", "ble"),
    ("ogi", None),
    ("li", None),
)

_STEP3 = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ative", None),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
)

_STEP4 = (
    "ement",
    "ance",
    "ence",
    "able",
    "ible",
    "ment",
    "ant",
    "ent",
    "ism",
    "ate",
    "iti",
    "ous",
    "ive",
    "ize",
    "ion",
    "al",
    "er",
    "ic",
)


def _mark_ys(word: str) -> str:
    chars = list(word)
    if chars[0] == "y":
        chars[0] = "Y"
    for i in range(1, len(chars)):
        if chars[i] == "y" and chars[i - 1] in _VOWELS:
            chars[i] = "Y"
    return "".join(chars)


def _regions(word: str) -> tuple[int, int]:
    """Start indices of R1 and R2 (len(word) when the region is empty)."""
    n = len(word)

    def scan(start: int) -> int:
        for i in range(start + 1, n):
            if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
                return i + 1
        return n

    if word.startswith(("gener", "arsen")):
        p1 = 5
    elif word.startswith("commun"):
        p1 = 6
    else:
        p1 = scan(0)
    p2 = scan(p1) if p1 < n else n
    return p1, p2


def _ends_short_syllable(word: str) -> bool:
    if len(word) == 2:
        return word[0] in _VOWELS and word[1] not in _VOWELS
    if len(word) >= 3:
        return (
            word[-1] not in _VOWELS
            and word[-1] not in "wxY"
            and word[-2] in _VOWELS
            and word[-3] not in _VOWELS
        )
    return False


def _is_short(word: str, p1: int) -> bool:
    return p1 >= len(word) and _ends_short_syllable(word)


def stem(word: str) -> str:
    """Stem one lowercase word.  Non-alphabetic input passes through steps unchanged."""
    word = word.lower()
    if len(word) <= 2:
        return word
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]
    if word[0] == "'":
        word = word[1:]
        if len(word) <= 2:
            return word
    word = _mark_ys(word)
    p1, p2 = _regions(word)

    # Step 0: apostrophe suffixes.
    for suffix in ("'s'", "'s", "'"):
        if word.endswith(suffix):
            word = word[: -len(suffix)]
            break

    # Step 1a.
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith(("ied", "ies")):
        word = word[:-2] if len(word) > 4 else word[:-1]
    elif word.endswith(("ss", "us")):
        pass
    elif word.endswith("s"):
        if any(c in _VOWELS for c in word[:-2]):
            word = word[:-1]

    if word in _POST_1A_INVARIANT:
        return word

    # Step 1b.
    for suffix in ("eedly", "eed"):
        if word.endswith(suffix):
            if len(word) - len(suffix) >= p1:
                word = word[: -len(suffix)] + "ee"
            break
    else:
        for suffix in ("ingly", "edly", "ing", "ed"):
            if word.endswith(suffix):
                stem_part = word[: -len(suffix)]
                if any(c in _VOWELS for c in stem_part):
                    word = stem_part
                    if word.endswith(("at", "bl", "iz")):
                        word += "e"
                    elif word.endswith(_DOUBLES):
                        word = word[:-1]
                    elif _is_short(word, p1):
                        word += "e"
                break

    # Step 1c: y -> i after a non-vowel that is not the first letter.
    if len(word) > 2 and word[-1] in "yY" and word[-2] not in _VOWELS:
        word = word[:-1] + "i"

    # Step 2 (longest match wins; no fallthrough when the region test fails).
    for suffix, replacement in _STEP2:
        if word.endswith(suffix):
            if len(word) - len(suffix) >= p1:
                if suffix == "ogi":
                    if len(word) >= 4 and word[-4] == "l":
                        word = word[:-1]
                elif suffix == "li":
                    if len(word) >= 3 and word[-3] in _LI_ENDERS:
                        word = word[:-2]
                else:
                    word = word[: -len(suffix)] + replacement
            break

    # Step 3.
    for suffix, replacement in _STEP3:
        if word.endswith(suffix):
            if len(word) - len(suffix) >= p1:
                if suffix == "ative":
                    if len(word) - len(suffix) >= p2:
                        word = word[:-5]
                else:
                    word = word[: -len(suffix)] + replacement
            break

    # Step 4.
    for suffix in _STEP4:
        if word.endswith(suffix):
            if len(word) - len(suffix) >= p2:
                if suffix == "ion":
                    if len(word) >= 4 and word[-4] in "st":
                        word = word[:-3]
                else:
                    word = word[: -len(suffix)]
            break

    # Step 5.
    if word.endswith("e"):
        if len(word) - 1 >= p2:
            word = word[:-1]
        elif len(word) - 1 >= p1 and not _ends_short_syllable(word[:-1]):
            word = word[:-1]
    elif word.endswith("ll") and len(word) - 1 >= p2:
        word = word[:-1]

    return word.replace("Y", "y")
