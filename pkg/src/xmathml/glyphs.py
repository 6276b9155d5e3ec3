"""Character tables for font-sensitive glyph and identifier mapping."""

from __future__ import annotations

#: Uppercase Greek (U+0391..U+03A9, skipping the unassigned slot). TeX sets
#: these upright, unlike the default-italic Latin letters, so they surface
#: as mathvariant="normal" tokens and "normal-"-prefixed identifiers.
GREEK_CAPITALS = frozenset(
    chr(cp) for cp in range(0x0391, 0x03AA) if cp != 0x03A2
)

# Mathematical script capitals, with the Letterlike Symbols exceptions that
# predate the U+1D49C block.
_SCRIPT_EXCEPTIONS = {
    "B": "ℬ",
    "E": "ℰ",
    "F": "ℱ",
    "H": "ℋ",
    "I": "ℐ",
    "L": "ℒ",
    "M": "ℳ",
    "R": "ℛ",
    "e": "ℯ",
    "g": "ℊ",
    "o": "ℴ",
}

SCRIPT_FORMS: dict[str, str] = {}
for _i in range(26):
    _upper = chr(ord("A") + _i)
    _lower = chr(ord("a") + _i)
    SCRIPT_FORMS[_upper] = _SCRIPT_EXCEPTIONS.get(_upper, chr(0x1D49C + _i))
    SCRIPT_FORMS[_lower] = _SCRIPT_EXCEPTIONS.get(_lower, chr(0x1D4B6 + _i))


def script_form(text: str) -> str:
    """Map Latin letters to their script (calligraphic) code points.

    Characters without a script form pass through unchanged.
    """
    return "".join(SCRIPT_FORMS.get(ch, ch) for ch in text)


def is_greek_capital(text: str) -> bool:
    return len(text) == 1 and text in GREEK_CAPITALS
