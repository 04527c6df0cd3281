"""Tuple states: d-tuples of fixed-length strings over a small alphabet.

Characters are the integers 0..sigma-1.  A state bundles d strings of equal
length l and has a canonical index in [0, sigma**(l*d)): each string is read
as a base-sigma numeral with its first character most significant, and the d
numerals are concatenated with string 1 most significant.  Keeping the head
in the top digit makes head extraction and the shift-and-append move plain
div/mod arithmetic.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class TupleState:
    """d strings of length l over {0, ..., sigma-1}."""

    sigma: int
    d: int
    l: int
    strings: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.sigma < 2:
            raise ValueError(f"sigma must be >= 2, got {self.sigma}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.l < 1:
            raise ValueError(f"l must be >= 1, got {self.l}")
        if len(self.strings) != self.d:
            raise ValueError(f"expected {self.d} strings, got {len(self.strings)}")
        for s in self.strings:
            if len(s) != self.l:
                raise ValueError(f"expected strings of length {self.l}, got {s!r}")
            if any(not 0 <= ch < self.sigma for ch in s):
                raise ValueError(f"character out of range [0, {self.sigma}) in {s!r}")


def string_code(s: Sequence[int], sigma: int) -> int:
    """Base-sigma value of a string, first character most significant."""
    code = 0
    for ch in s:
        code = code * sigma + ch
    return code


def encode(state: TupleState) -> int:
    """Canonical index of a state in [0, sigma**(l*d))."""
    block = state.sigma**state.l
    k = 0
    for s in state.strings:
        k = k * block + string_code(s, state.sigma)
    return k


def decode(k: int, sigma: int, d: int, l: int) -> TupleState:
    """Inverse of :func:`encode`."""
    n = sigma ** (l * d)
    if not 0 <= k < n:
        raise ValueError(f"state index {k} out of range [0, {n})")
    digits = []
    for _ in range(l * d):
        k, ch = divmod(k, sigma)
        digits.append(ch)
    digits.reverse()
    strings = tuple(tuple(digits[i * l : (i + 1) * l]) for i in range(d))
    return TupleState(sigma, d, l, strings)


def head(s: Sequence[int]) -> int:
    """First character of a nonempty string."""
    if len(s) == 0:
        raise ValueError("head of an empty string")
    return s[0]


def tail(s: Sequence[int]) -> tuple[int, ...]:
    """Everything after the first character (empty for a length-1 string)."""
    if len(s) == 0:
        raise ValueError("tail of an empty string")
    return tuple(s[1:])


def n_z(state: TupleState, z: int) -> frozenset[int]:
    """1-based indices of the strings whose head differs from z.

    Empty exactly when every string starts with z.
    """
    if not 0 <= z < state.sigma:
        raise ValueError(f"character {z} out of range [0, {state.sigma})")
    return frozenset(i for i, s in enumerate(state.strings, start=1) if s[0] != z)


def tau_z(state: TupleState, z: int, c: Mapping[int, int]) -> TupleState:
    """Shift left every string not starting with z and append its chosen character.

    ``c`` maps each 1-based index in ``n_z(state, z)`` -- exactly those -- to
    the character appended to that string after the shift.  Strings whose head
    equals z are untouched; all lengths stay l.
    """
    required = n_z(state, z)
    if frozenset(c) != required:
        raise ValueError(
            f"completion defined on {sorted(c)}, expected exactly {sorted(required)}"
        )
    for ch in c.values():
        if not 0 <= ch < state.sigma:
            raise ValueError(f"appended character {ch} out of range [0, {state.sigma})")
    shifted = tuple(
        tuple(s) if s[0] == z else tail(s) + (c[i],)
        for i, s in enumerate(state.strings, start=1)
    )
    return TupleState(state.sigma, state.d, state.l, shifted)


def all_heads_equal(state: TupleState) -> bool:
    """True iff every string starts with the same character."""
    first = state.strings[0][0]
    return all(s[0] == first for s in state.strings)


def parse_string(text: str, sigma: int | None = None) -> tuple[int, ...]:
    """Parse a digit string such as "011" into a character tuple.

    The text syntax covers alphabets up to sigma = 10 (one digit per
    character); larger alphabets exist only programmatically.
    """
    if not text or not text.isdigit():
        raise ValueError(f"expected a nonempty string of digits, got {text!r}")
    chars = tuple(int(ch) for ch in text)
    if sigma is not None and max(chars) >= sigma:
        raise ValueError(f"character {max(chars)} out of range for sigma={sigma}")
    return chars


def state_from_text(text: str, sigma: int) -> TupleState:
    """Parse comma-separated digit strings ("001,011") into a TupleState."""
    parts = text.split(",")
    strings = tuple(parse_string(p, sigma) for p in parts)
    if not strings:
        raise ValueError("empty tuple")
    return TupleState(sigma, len(strings), len(strings[0]), strings)
