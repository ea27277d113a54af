"""Canonical length-reducing presentations: Z, finite groups, free products."""

from __future__ import annotations

import csv
import io
import re
import string
from dataclasses import dataclass, field

from .errors import ParseError, PreconditionError
from .rewrite_core import Alphabet, Rule, StringRewritingSystem, is_length_reducing

__all__ = [
    "FiniteGroupTable",
    "PlainSpec",
    "cyclic_group",
    "table_from_csv",
    "table_to_csv",
    "gen_infinite_cyclic",
    "gen_finite_group",
    "free_product",
    "gen_plain",
    "parse_factors",
]


@dataclass(frozen=True)
class FiniteGroupTable:
    """Multiplication table of a finite group; element 0 is the identity.

    ``table[g][h]`` is the index of the product ``g h``.
    """

    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        names = tuple(self.names)
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "table", table)
        n = len(names)
        if n == 0:
            raise ValueError("a group has at least one element")
        if len(set(names)) != n:
            raise ValueError("element names must be unique")
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("table must be n x n")
        full = set(range(n))
        for g in range(n):
            if set(table[g]) != full or {table[h][g] for h in range(n)} != full:
                raise ValueError("table is not a Latin square")
            if table[0][g] != g or table[g][0] != g:
                raise ValueError("element 0 is not a two-sided identity")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                for c in range(n):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise ValueError("table is not associative")

    @property
    def order(self) -> int:
        return len(self.names)

    @property
    def inverse(self) -> tuple[int, ...]:
        return tuple(self.table[g].index(0) for g in range(self.order))

    def renamed(self, names) -> "FiniteGroupTable":
        return FiniteGroupTable(tuple(names), self.table)


def _cyclic_names(n: int, base: str) -> list[str]:
    names = ["e"]
    for k in range(1, n):
        if k == 1:
            names.append(base)
        elif k == n - 1:
            names.append(base.upper())
        else:
            names.append(f"{base}{k}")
    return names


def cyclic_group(n: int, base: str = "a") -> FiniteGroupTable:
    """C_n with generator ``base``, its inverse ``base.upper()`` and powers ``base<k>``."""
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroupTable(tuple(_cyclic_names(n, base)), table)


def table_from_csv(text: str, source: str | None = None) -> FiniteGroupTable:
    """Read a multiplication table: header row and first column hold element names.

    The identity is detected from the products and moved to index 0.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise ParseError("table needs a header row and at least one element row", None, source)
    header = [c.strip() for c in rows[0][1:]]
    index = {name: i for i, name in enumerate(header)}
    if len(index) != len(header):
        raise ParseError("duplicate element name in header", 1, source)
    n = len(header)
    products = [[0] * n for _ in range(n)]
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) != n + 1:
            raise ParseError(f"expected {n + 1} cells, got {len(cells)}", lineno, source)
        if cells[0] not in index:
            raise ParseError(f"unknown element {cells[0]!r}", lineno, source)
        g = index[cells[0]]
        seen.add(g)
        for h, cell in enumerate(cells[1:]):
            if cell not in index:
                raise ParseError(f"unknown product {cell!r}", lineno, source)
            products[g][h] = index[cell]
    if len(seen) != n:
        raise ParseError("every element needs exactly one row", None, source)
    ident = [g for g in range(n) if products[g] == list(range(n))]
    if not ident:
        raise ParseError("no identity element", None, source)
    order = [ident[0]] + [g for g in range(n) if g != ident[0]]
    pos = {g: i for i, g in enumerate(order)}
    table = [[pos[products[g][h]] for h in order] for g in order]
    try:
        return FiniteGroupTable(tuple(header[g] for g in order), table)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def table_to_csv(table: FiniteGroupTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(table.names))
    for g, row in enumerate(table.table):
        writer.writerow([table.names[g]] + [table.names[k] for k in row])
    return buf.getvalue()


def gen_infinite_cyclic(name: str = "a", inverse_name: str = "A") -> StringRewritingSystem:
    if name == inverse_name:
        raise ValueError("generator and inverse names must differ")
    alphabet = Alphabet((name, inverse_name), (1, 0))
    return StringRewritingSystem(alphabet, (Rule((0, 1), ()), Rule((1, 0), ())))


def gen_finite_group(table: FiniteGroupTable) -> StringRewritingSystem:
    """One letter per nontrivial element; rule g h -> k (or -> λ when k = e).

    Letter ``i`` stands for element ``i + 1``. Produces exactly (n-1)^2 rules.
    """
    n = table.order
    inv = table.inverse
    alphabet = Alphabet(table.names[1:], tuple(inv[g] - 1 for g in range(1, n)))
    rules = []
    for g in range(1, n):
        for h in range(1, n):
            k = table.table[g][h]
            rules.append(Rule((g - 1, h - 1), () if k == 0 else (k - 1,)))
    return StringRewritingSystem(alphabet, tuple(rules))


def free_product(systems) -> StringRewritingSystem:
    """Union of pairwise-disjoint alphabets and their rule sets."""
    systems = list(systems)
    if not systems:
        raise ValueError("free product needs at least one factor")
    names: list[str] = []
    inverse: list[int] | None = []
    rules = []
    for rws in systems:
        if not is_length_reducing(rws):
            raise PreconditionError("free_product inputs must be length-reducing")
        clash = set(names) & set(rws.alphabet.names)
        if clash:
            raise ValueError(f"alphabet collision on {sorted(clash)}")
        offset = len(names)
        names.extend(rws.alphabet.names)
        if inverse is not None and rws.alphabet.inverse is not None:
            inverse.extend(j + offset for j in rws.alphabet.inverse)
        else:
            inverse = None
        for rule in rws.rules:
            rules.append(Rule(tuple(x + offset for x in rule.lhs), tuple(x + offset for x in rule.rhs)))
    return StringRewritingSystem(Alphabet(tuple(names), None if inverse is None else tuple(inverse)), tuple(rules))


@dataclass(frozen=True)
class PlainSpec:
    """Free product of the given finite groups and ``infinite_cyclic`` copies of Z."""

    finite: tuple[FiniteGroupTable, ...] = ()
    infinite_cyclic: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "finite", tuple(self.finite))
        if self.infinite_cyclic < 0:
            raise ValueError("infinite cyclic count must be non-negative")
        if not self.finite and not self.infinite_cyclic:
            raise ValueError("a plain group needs at least one factor")

    @property
    def factor_count(self) -> int:
        return len(self.finite) + self.infinite_cyclic

    def describe(self) -> str:
        if self.label:
            return self.label
        parts = [f"C{t.order}" for t in self.finite] + ["Z"] * self.infinite_cyclic
        return "*".join(parts)


_FACTOR = re.compile(r"^(?:C(\d+)|Z)$", re.IGNORECASE)


def parse_factors(text: str) -> PlainSpec:
    """Parse ``"C2,C3,Z"`` (or ``"C2*C3*Z"``) into a :class:`PlainSpec`.

    Finite factors get the short letter names a, b, c, ... in order;
    the names of Z factors are assigned by :func:`gen_plain`.
    """
    tokens = [t.strip() for t in re.split(r"[,*∗]", text) if t.strip()]
    if not tokens:
        raise ParseError(f"no factors in {text!r}")
    orders = []
    z = 0
    for tok in tokens:
        m = _FACTOR.match(tok)
        if not m:
            raise ParseError(f"unknown factor {tok!r}; expected C<n> or Z")
        if m.group(1) is None:
            z += 1
        else:
            order = int(m.group(1))
            if order < 1:
                raise ParseError(f"cyclic factor order must be positive: {tok!r}")
            orders.append(order)
    bases = string.ascii_lowercase
    if len(orders) <= len(bases):
        tables = tuple(cyclic_group(n, bases[i]) for i, n in enumerate(orders))
    else:
        tables = tuple(cyclic_group(n, f"g{i + 1}_") for i, n in enumerate(orders))
    return PlainSpec(tables, z, label="*".join(t.upper() for t in tokens))


def _short_cyclic_names(taken: set[str], count: int) -> list[tuple[str, str]] | None:
    out = []
    for base in string.ascii_lowercase:
        if len(out) == count:
            break
        if base in taken or base.upper() in taken:
            continue
        out.append((base, base.upper()))
    return out if len(out) == count else None


def gen_plain(spec: PlainSpec) -> StringRewritingSystem:
    """Free product of :func:`gen_finite_group` and :func:`gen_infinite_cyclic` systems.

    Every left-hand side has length two. Factor letters keep their table names
    and Z factors take the next unused short letters when that is collision
    free; otherwise all letters fall back to factor-indexed tokens
    ``g<i>_<k>`` and ``z<j>`` / ``z<j>'``.
    """
    table_names = [name for t in spec.finite for name in t.names[1:]]
    taken = set(table_names)
    cyclic = None
    if len(taken) == len(table_names):
        cyclic = _short_cyclic_names(taken, spec.infinite_cyclic)
    if cyclic is not None:
        tables = list(spec.finite)
    else:
        tables = [
            t.renamed(["e"] + [f"g{i}_{k}" for k in range(1, t.order)])
            for i, t in enumerate(spec.finite, start=1)
        ]
        cyclic = [(f"z{j}", f"z{j}'") for j in range(1, spec.infinite_cyclic + 1)]
    parts = [gen_finite_group(t) for t in tables]
    parts += [gen_infinite_cyclic(a, b) for a, b in cyclic]
    return free_product(parts)
