"""Character legality and the four-way character class partition.

Every legal password character is printable ASCII excluding space
(codepoints 0x21-0x7E) and belongs to exactly one class:

    D  digits 0-9
    U  uppercase A-Z
    L  lowercase a-z
    S  everything else in the legal range (32 symbols)
"""

from __future__ import annotations

LEGAL_MIN = 0x21
LEGAL_MAX = 0x7E

CLASS_ORDER = "DULS"

DIGITS = "0123456789"
UPPERCASE = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
LOWERCASE = "abcdefghijklmnopqrstuvwxyz"
SYMBOLS = "".join(
    chr(c)
    for c in range(LEGAL_MIN, LEGAL_MAX + 1)
    if not (chr(c).isdigit() or ("A" <= chr(c) <= "Z") or ("a" <= chr(c) <= "z"))
)

CLASS_ALPHABETS = {"D": DIGITS, "U": UPPERCASE, "L": LOWERCASE, "S": SYMBOLS}


class IllegalCharacterError(ValueError):
    """A password contains a codepoint outside the legal 0x21-0x7E range."""


def is_legal_char(ch: str) -> bool:
    return LEGAL_MIN <= ord(ch) <= LEGAL_MAX


def is_legal_password(text: str) -> bool:
    return all(is_legal_char(ch) for ch in text)


def char_class(ch: str) -> str:
    """Classify one legal character into D, U, L, or S."""
    code = ord(ch)
    if code < LEGAL_MIN or code > LEGAL_MAX:
        raise IllegalCharacterError(f"character U+{code:04X} outside legal range 0x21-0x7E")
    if 0x30 <= code <= 0x39:
        return "D"
    if 0x41 <= code <= 0x5A:
        return "U"
    if 0x61 <= code <= 0x7A:
        return "L"
    return "S"
