"""String rewriting systems over inverse-closed alphabets.

Words are tuples of letter ids. A system is a pair (alphabet, rules); rules
are kept in input order because rule order is the tie-break of the default
rewrite strategy (leftmost redex, lowest rule index).

Example (the infinite cyclic group)::

    >>> rws = parse_system('''
    ... letters: a A
    ... inverses: a=A
    ... rule: a A -> λ
    ... rule: A a -> λ
    ... ''')
    >>> rws.format_word(normalize(rws, rws.parse_word("aAa")))
    'a'
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import ParseError, PreconditionError

__all__ = [
    "EMPTY_WORD_TOKEN",
    "Letter",
    "Alphabet",
    "Word",
    "Rule",
    "StringRewritingSystem",
    "CriticalPair",
    "ConvergenceReport",
    "parse_system",
    "format_system",
    "normalize",
    "one_step_reducts",
    "normalize_append",
    "is_length_reducing",
    "critical_pairs",
    "check_convergent",
    "check_presents_group",
    "equal_in_group",
]

EMPTY_WORD_TOKEN = "λ"
_RESERVED_CHARS = set("=#")
# step budget when normalizing with a system that is not length-reducing
_UNBOUNDED_STEP_LIMIT = 10_000

Word = tuple  # tuple[int, ...]; kept as a plain alias so tuples compare and hash natively


class Letter(NamedTuple):
    id: int
    name: str


def _check_name(name: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise ValueError(f"letter name {name!r} must be nonempty and whitespace-free")
    if name == EMPTY_WORD_TOKEN or "->" in name or _RESERVED_CHARS & set(name):
        raise ValueError(f"letter name {name!r} uses a reserved token")


@dataclass(frozen=True)
class Alphabet:
    """Ordered letter names plus an optional involution (formal inverses).

    ``inverse[i]`` is the id of the inverse of letter ``i``. ``inverse`` is
    ``None`` when the alphabet does not claim to be closed under inversion.
    """

    names: tuple[str, ...]
    inverse: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            _check_name(name)
        if len(set(self.names)) != len(self.names):
            raise ValueError("letter names must be unique")
        if self.inverse is not None:
            inv = tuple(self.inverse)
            object.__setattr__(self, "inverse", inv)
            n = len(self.names)
            if len(inv) != n or any(not 0 <= j < n for j in inv):
                raise ValueError("involution must map every letter to a letter")
            if any(inv[inv[i]] != i for i in range(n)):
                raise ValueError("involution is not its own inverse")

    def __len__(self):
        return len(self.names)

    @property
    def letters(self) -> list[Letter]:
        return [Letter(i, name) for i, name in enumerate(self.names)]

    @property
    def inverse_closed(self) -> bool:
        return self.inverse is not None

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @property
    def single_char(self) -> bool:
        return all(len(name) == 1 for name in self.names)

    def invert(self, word: Sequence[int]) -> Word:
        """Formal inverse: reverse the word and invert each letter."""
        if self.inverse is None:
            raise PreconditionError("alphabet has no involution")
        return tuple(self.inverse[x] for x in reversed(word))

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return EMPTY_WORD_TOKEN
        sep = "" if self.single_char else " "
        return sep.join(self.names[x] for x in word)

    def parse_word(self, text: str) -> Word:
        """Parse whitespace-separated letter tokens.

        A single token that is not a letter name is split into characters when
        every letter name is one character long (so ``"aAa"`` works).
        """
        tokens = text.split()
        if not tokens or tokens == [EMPTY_WORD_TOKEN]:
            return ()
        if len(tokens) == 1 and tokens[0] not in self.index and self.single_char:
            tokens = list(tokens[0])
        try:
            return tuple(self.index[tok] for tok in tokens if tok != EMPTY_WORD_TOKEN)
        except KeyError as exc:
            raise ParseError(f"unknown letter {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if not self.lhs:
            raise ValueError("rule left-hand side must be nonempty")

    @property
    def length_reducing(self) -> bool:
        return len(self.lhs) > len(self.rhs)


@dataclass(frozen=True)
class StringRewritingSystem:
    alphabet: Alphabet
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        n = len(self.alphabet)
        for rule in self.rules:
            if any(not 0 <= x < n for x in rule.lhs + rule.rhs):
                raise ValueError("rule mentions a letter outside the alphabet")

    # convenience pass-throughs
    def parse_word(self, text: str) -> Word:
        return self.alphabet.parse_word(text)

    def format_word(self, word: Sequence[int]) -> str:
        return self.alphabet.format_word(word)

    def format_rule(self, rule: Rule) -> str:
        return f"{self.format_word(rule.lhs)} -> {self.format_word(rule.rhs)}"

    @property
    def max_lhs(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    @cached_property
    def rule_set(self) -> frozenset[tuple[Word, Word]]:
        return frozenset((r.lhs, r.rhs) for r in self.rules)

    @cached_property
    def _matcher(self) -> tuple[dict[Word, int], tuple[int, ...]]:
        first = {}
        for i, rule in enumerate(self.rules):
            first.setdefault(rule.lhs, i)
        lengths = tuple(sorted({len(lhs) for lhs in first}))
        return first, lengths

    def conflicting_lhs(self) -> list[tuple[int, int]]:
        """Index pairs of rules sharing a left-hand side but not a right-hand side."""
        out = []
        for i, r1 in enumerate(self.rules):
            for j in range(i + 1, len(self.rules)):
                r2 = self.rules[j]
                if r1.lhs == r2.lhs and r1.rhs != r2.rhs:
                    out.append((i, j))
        return out

    def leftmost_redex(self, word: Word, start: int = 0) -> tuple[int, int] | None:
        """(position, rule index) of the leftmost redex at or after ``start``."""
        first, lengths = self._matcher
        n = len(word)
        for pos in range(start, n):
            best = None
            for length in lengths:
                if pos + length > n:
                    break
                idx = first.get(word[pos : pos + length])
                if idx is not None and (best is None or idx < best):
                    best = idx
            if best is not None:
                return pos, best
        return None

    def is_irreducible(self, word: Word) -> bool:
        return self.leftmost_redex(tuple(word)) is None

    @cached_property
    def report(self) -> "ConvergenceReport":
        return check_convergent(self)


@dataclass(frozen=True)
class CriticalPair:
    superposition: Word
    left_result: Word
    right_result: Word
    kind: str  # "overlap" | "containment"
    rules: tuple[int, int]
    # irreducible descendants of the two branches, filled in by check_convergent
    left_normal: Word | None = None
    right_normal: Word | None = None


@dataclass(frozen=True)
class ConvergenceReport:
    length_reducing: bool
    locally_confluent: bool
    unresolved_pairs: tuple[CriticalPair, ...] = ()
    presents_group: bool = False
    conflicting_lhs: tuple[tuple[int, int], ...] = ()

    @property
    def convergent(self) -> bool:
        # Newman: terminating (via length reduction) and locally confluent
        return self.length_reducing and self.locally_confluent

    def to_dict(self, rws: StringRewritingSystem | None = None) -> dict:
        fmt = rws.format_word if rws is not None else list

        def pair(cp):
            return {
                "superposition": fmt(cp.superposition),
                "left": fmt(cp.left_result),
                "right": fmt(cp.right_result),
                "kind": cp.kind,
                "rules": list(cp.rules),
                "left_normal": None if cp.left_normal is None else fmt(cp.left_normal),
                "right_normal": None if cp.right_normal is None else fmt(cp.right_normal),
            }

        return {
            "length_reducing": self.length_reducing,
            "locally_confluent": self.locally_confluent,
            "convergent": self.convergent,
            "presents_group": self.presents_group,
            "unresolved_pairs": [pair(cp) for cp in self.unresolved_pairs],
            "conflicting_lhs": [list(p) for p in self.conflicting_lhs],
        }


# ---------------------------------------------------------------- parsing


def _split_directive(line: str) -> tuple[str, str] | None:
    head, sep, rest = line.partition(":")
    if not sep:
        return None
    return head.strip().lower(), rest


def parse_system(text: str, source: str | None = None) -> StringRewritingSystem:
    """Parse the line-oriented `.rws` format.

    Rules that are not length-reducing are kept; :func:`is_length_reducing`
    and :func:`check_convergent` report them.
    """
    names: list[str] = []
    name_lines: dict[str, int] = {}
    inverse_pairs: list[tuple[str, str, int]] = []
    saw_inverses = False
    raw_rules: list[tuple[list[str], list[str], int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = _split_directive(line)
        if parts is None:
            raise ParseError(f"expected 'letters:', 'inverses:' or 'rule:', got {line!r}", lineno, source)
        key, rest = parts
        if key == "letters":
            for tok in rest.split():
                try:
                    _check_name(tok)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno, source) from None
                if tok in name_lines:
                    raise ParseError(f"letter {tok!r} declared twice", lineno, source)
                name_lines[tok] = lineno
                names.append(tok)
        elif key == "inverses":
            saw_inverses = True
            for tok in rest.split():
                left, eq, right = tok.partition("=")
                if not eq or not left or not right:
                    raise ParseError(f"malformed inverse pair {tok!r}", lineno, source)
                inverse_pairs.append((left, right, lineno))
        elif key == "rule":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise ParseError("rule needs '->'", lineno, source)
            raw_rules.append((lhs.split(), rhs.split(), lineno))
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, source)

    index = {name: i for i, name in enumerate(names)}

    def lookup(tok, lineno):
        try:
            return index[tok]
        except KeyError:
            raise ParseError(f"unknown letter {tok!r}", lineno, source) from None

    inverse = None
    if saw_inverses:
        inv: list[int | None] = [None] * len(names)
        for left, right, lineno in inverse_pairs:
            i, j = lookup(left, lineno), lookup(right, lineno)
            for a, b in ((i, j), (j, i)):
                if inv[a] is not None and inv[a] != b:
                    raise ParseError(f"involution is not an involution at {names[a]!r}", lineno, source)
                inv[a] = b
        missing = [names[i] for i, v in enumerate(inv) if v is None]
        if missing:
            raise ParseError(f"inverses section omits letters {missing}", None, source)
        inverse = tuple(inv)

    rules = []
    for lhs, rhs, lineno in raw_rules:
        lw = tuple(lookup(t, lineno) for t in lhs if t != EMPTY_WORD_TOKEN)
        rw = tuple(lookup(t, lineno) for t in rhs if t != EMPTY_WORD_TOKEN)
        if not lw:
            raise ParseError("rule left-hand side is empty", lineno, source)
        rules.append(Rule(lw, rw))

    return StringRewritingSystem(Alphabet(tuple(names), inverse), tuple(rules))


def format_system(rws: StringRewritingSystem) -> str:
    """Serialize to `.rws`; ``parse_system(format_system(s)) == s``."""
    alpha = rws.alphabet
    lines = ["letters: " + " ".join(alpha.names)]
    if alpha.inverse is not None:
        pairs = [f"{alpha.names[i]}={alpha.names[j]}" for i, j in enumerate(alpha.inverse) if i <= j]
        lines.append("inverses: " + " ".join(pairs))
    for rule in rws.rules:
        lhs = " ".join(alpha.names[x] for x in rule.lhs)
        rhs = " ".join(alpha.names[x] for x in rule.rhs)
        lines.append(f"rule: {lhs} -> {rhs}".rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- rewriting


def one_step_reducts(rws: StringRewritingSystem, word: Sequence[int]) -> list[tuple[int, int, Word]]:
    """Every single rewrite of ``word`` as (position, rule index, result)."""
    word = tuple(word)
    out = []
    for pos in range(len(word)):
        for idx, rule in enumerate(rws.rules):
            k = len(rule.lhs)
            if word[pos : pos + k] == rule.lhs:
                out.append((pos, idx, word[:pos] + rule.rhs + word[pos + k :]))
    return out


def _normalize_leftmost(rws, word, max_steps, start=0):
    _, lengths = rws._matcher
    back = (lengths[-1] - 1) if lengths else 0
    steps = 0
    while True:
        hit = rws.leftmost_redex(word, start)
        if hit is None:
            return word
        if max_steps is not None and steps >= max_steps:
            return None
        pos, idx = hit
        rule = rws.rules[idx]
        word = word[:pos] + rule.rhs + word[pos + len(rule.lhs) :]
        steps += 1
        # redexes starting before pos - back lie entirely in the untouched prefix
        start = max(0, pos - back)


def _normalize_strategy(rws, word, pick, max_steps):
    steps = 0
    while True:
        options = one_step_reducts(rws, word)
        if not options:
            return word
        if max_steps is not None and steps >= max_steps:
            return None
        word = pick(options)[2]
        steps += 1


def normalize(
    rws: StringRewritingSystem,
    word: Sequence[int],
    strategy: str = "leftmost",
    rng: random.Random | None = None,
) -> Word:
    """Rewrite until no rule applies.

    ``strategy`` is ``"leftmost"`` (default: leftmost redex, lowest rule
    index), ``"rightmost"`` (rightmost redex, highest rule index) or
    ``"random"`` (uniform over all redexes, drawn from ``rng``).
    """
    if not is_length_reducing(rws):
        raise PreconditionError("normalize requires a length-reducing system")
    word = tuple(word)
    if strategy == "leftmost":
        return _normalize_leftmost(rws, word, None)
    if strategy == "rightmost":
        return _normalize_strategy(rws, word, lambda opts: opts[-1], None)
    if strategy == "random":
        rng = rng if rng is not None else random.Random(0)
        return _normalize_strategy(rws, word, rng.choice, None)
    raise ValueError(f"unknown strategy {strategy!r}")


def normalize_append(rws: StringRewritingSystem, irreducible: Word, letter: int) -> Word:
    """``normalize(rws, irreducible + (letter,))`` scanning only the new suffix window."""
    word = irreducible + (letter,)
    start = max(0, len(word) - rws.max_lhs)
    return _normalize_leftmost(rws, word, None, start)


def is_length_reducing(rws: StringRewritingSystem) -> bool:
    return all(rule.length_reducing for rule in rws.rules)


# ---------------------------------------------------------------- confluence


def critical_pairs(rws: StringRewritingSystem) -> list[CriticalPair]:
    """All overlap and containment superpositions of the rule set.

    Overlap of rule i over rule j: lhs_i = u t, lhs_j = t v with t, u, v
    nonempty, superposition u t v. Containment: lhs_j is a factor of lhs_i
    (i != j); identical left-hand sides are reported once, for i < j.
    """
    rules = rws.rules
    pairs = []
    for i, r1 in enumerate(rules):
        l1 = r1.lhs
        for j, r2 in enumerate(rules):
            l2 = r2.lhs
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    u, v = l1[:-k], l2[k:]
                    pairs.append(CriticalPair(l1 + v, r1.rhs + v, u + r2.rhs, "overlap", (i, j)))
            if i == j or len(l2) > len(l1) or (l1 == l2 and i > j):
                continue
            for p in range(len(l1) - len(l2) + 1):
                if l1[p : p + len(l2)] == l2:
                    right = l1[:p] + r2.rhs + l1[p + len(l2) :]
                    pairs.append(CriticalPair(l1, r1.rhs, right, "containment", (i, j)))
    return pairs


def check_convergent(rws: StringRewritingSystem) -> ConvergenceReport:
    """Length reduction plus joinability of every critical pair.

    For systems that are not length-reducing the critical-pair branches are
    normalized under a step budget; a branch that exhausts it counts as
    unresolved.
    """
    reducing = is_length_reducing(rws)
    budget = None if reducing else _UNBOUNDED_STEP_LIMIT
    unresolved = []
    for cp in critical_pairs(rws):
        left = _normalize_leftmost(rws, cp.left_result, budget)
        right = _normalize_leftmost(rws, cp.right_result, budget)
        if left is None or right is None or left != right:
            unresolved.append(replace(cp, left_normal=left, right_normal=right))
    confluent = not unresolved
    presents = False
    if reducing and confluent and rws.alphabet.inverse_closed:
        presents = check_presents_group(rws)
    return ConvergenceReport(
        length_reducing=reducing,
        locally_confluent=confluent,
        unresolved_pairs=tuple(unresolved),
        presents_group=presents,
        conflicting_lhs=tuple(rws.conflicting_lhs()),
    )


def check_presents_group(rws: StringRewritingSystem) -> bool:
    """True iff every letter times its formal inverse (both orders) reduces to λ."""
    inv = rws.alphabet.inverse
    if inv is None:
        raise PreconditionError("system has no involution; cannot test for a group")
    for x in range(len(rws.alphabet)):
        if normalize(rws, (x, inv[x])) or normalize(rws, (inv[x], x)):
            return False
    return True


def equal_in_group(rws: StringRewritingSystem, w1: Iterable[int], w2: Iterable[int]) -> bool:
    if not rws.report.convergent:
        raise PreconditionError("equal_in_group requires a convergent system")
    return normalize(rws, tuple(w1)) == normalize(rws, tuple(w2))
