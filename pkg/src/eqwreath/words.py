"""Reduced words in the free group on constants ``a<i>`` and variables ``x<i>``.

Concrete syntax: terms separated by whitespace, each ``a<i>`` or ``x<i>``
optionally followed by ``^<signed int>``.  The lone token ``1`` denotes the
empty word.  Example: ``"x1^2 a1 x1^-1"``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Protocol, Sequence, Union

CONSTANT = "a"
VARIABLE = "x"


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnassignedSymbolError(LookupError):
    def __init__(self, symbol: str):
        super().__init__(f"no value assigned to {symbol}")
        self.symbol = symbol


@dataclass(frozen=True, slots=True, order=True)
class Letter:
    kind: str
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.kind not in (CONSTANT, VARIABLE):
            raise ValueError(f"letter kind must be 'a' or 'x', got {self.kind!r}")
        if self.index < 1:
            raise ValueError(f"letter index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign}")

    @property
    def symbol(self) -> str:
        return f"{self.kind}{self.index}"

    def inverse(self) -> Letter:
        return Letter(self.kind, self.index, -self.sign)

    def __str__(self) -> str:
        return self.symbol if self.sign == 1 else f"{self.symbol}^-1"


def a(i: int, sign: int = 1) -> Letter:
    return Letter(CONSTANT, i, sign)


def x(i: int, sign: int = 1) -> Letter:
    return Letter(VARIABLE, i, sign)


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1].kind == letter.kind and stack[-1].index == letter.index \
                and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word; reduction happens on construction."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def constant_indices(self) -> set[int]:
        return {l.index for l in self.letters if l.kind == CONSTANT}

    def variable_indices(self) -> set[int]:
        return {l.index for l in self.letters if l.kind == VARIABLE}

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        terms = []
        i = 0
        while i < len(self.letters):
            head = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == head:
                j += 1
            power = (j - i) * head.sign
            terms.append(head.symbol if power == 1 else f"{head.symbol}^{power}")
            i = j
        return " ".join(terms)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


IDENTITY_WORD = Word()


def reduce(letters: Iterable[Letter]) -> Word:
    return Word(tuple(letters))


_TERM = re.compile(r"([ax])(\d+)(?:\^([+-]?\d+))?|1(?![\d^])")


def parse_word(text: str) -> Word:
    """Parse ``text`` into a reduced word; raises WordSyntaxError with position."""
    letters: list[Letter] = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TERM.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected {text[pos]!r}", pos, text)
        end = m.end()
        if end < n and not text[end].isspace():
            raise WordSyntaxError(f"unexpected {text[end]!r} after term", end, text)
        if m.group(1) is not None:
            index = int(m.group(2))
            if index == 0:
                raise WordSyntaxError("symbol index 0 is not allowed", m.start(2), text)
            exponent = int(m.group(3)) if m.group(3) is not None else 1
            sign = 1 if exponent > 0 else -1
            letters.extend([Letter(m.group(1), index, sign)] * abs(exponent))
        pos = end
    return Word(tuple(letters))


def prefix_set(p: Word) -> frozenset[Word]:
    """All initial segments of ``p``, from the empty word up to ``p`` itself."""
    return frozenset(Word(p.letters[:i]) for i in range(len(p) + 1))


def prefixes(p: Word) -> list[Word]:
    """Initial segments of ``p`` in increasing length."""
    return [Word(p.letters[:i]) for i in range(len(p) + 1)]


@dataclass(frozen=True)
class EquationSystem:
    """A nonempty tuple of words, read as the equations ``w = 1``.

    ``k`` and ``n`` default to the largest constant/variable index used; they
    may be set higher so that a system formally mentions unused symbols.
    """

    words: tuple[Word, ...]
    k: int = -1
    n: int = -1

    def __post_init__(self):
        words = tuple(self.words)
        if not words:
            raise ValueError("an equation system needs at least one word")
        object.__setattr__(self, "words", words)
        used_k = max((max(w.constant_indices(), default=0) for w in words), default=0)
        used_n = max((max(w.variable_indices(), default=0) for w in words), default=0)
        k = used_k if self.k < 0 else self.k
        n = used_n if self.n < 0 else self.n
        if k < used_k or n < used_n:
            raise ValueError(f"system uses a{used_k}/x{used_n} but declares k={k}, n={n}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)

    @property
    def r(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def prefix_union(self) -> frozenset[Word]:
        out: set[Word] = set()
        for w in self.words:
            out |= prefix_set(w)
        return frozenset(out)

    def __str__(self) -> str:
        return "\n".join(str(w) for w in self.words)


def parse_system(text: str, k: int = -1, n: int = -1) -> EquationSystem:
    """Parse the equation-file format: one word per line, ``#`` comments."""
    words = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.strip()
        if body and not body.startswith("#"):
            try:
                words.append(parse_word(line))
            except WordSyntaxError as exc:
                raise WordSyntaxError(str(exc).rsplit(" at position", 1)[0],
                                      offset + exc.position, text) from None
        offset += len(line)
    if not words:
        raise ValueError("equation file contains no equations")
    return EquationSystem(tuple(words), k, n)


def system(*texts: str, k: int = -1, n: int = -1) -> EquationSystem:
    return EquationSystem(tuple(parse_word(t) for t in texts), k, n)


class GroupLike(Protocol):
    identity: object

    def mul(self, a, b): ...

    def inv(self, a): ...


Assignment = Union[Sequence, Mapping]


def _lookup(values: Assignment, letter: Letter):
    try:
        if isinstance(values, Mapping):
            return values[letter.index]
        if letter.index > len(values):
            raise IndexError
        return values[letter.index - 1]
    except (KeyError, IndexError):
        raise UnassignedSymbolError(letter.symbol) from None


def evaluate(w: Word, group: GroupLike, consts: Assignment = (), vars: Assignment = ()):
    """Left-to-right product of the letters of ``w`` under the assignment.

    Sequences are 1-indexed by position (``consts[0]`` is ``a1``); mappings
    are keyed by symbol index.
    """
    acc = group.identity
    for letter in w.letters:
        value = _lookup(consts if letter.kind == CONSTANT else vars, letter)
        if letter.sign < 0:
            value = group.inv(value)
        acc = group.mul(acc, value)
    return acc


def evaluate_system(ws: EquationSystem, group: GroupLike, consts: Assignment = (),
                    vars: Assignment = ()) -> list:
    return [evaluate(w, group, consts, vars) for w in ws.words]


def prefix_values(words: Iterable[Word], group: GroupLike, consts: Assignment = (),
                  vars: Assignment = ()) -> set:
    return {evaluate(p, group, consts, vars) for p in words}
