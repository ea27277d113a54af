import itertools
from pathlib import Path

import pytest

from plainrws.presentations import gen_plain, parse_factors
from plainrws.rewrite_core import parse_system

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"

Z_TEXT = """\
letters: a A
inverses: a=A
rule: a A -> λ
rule: A a -> λ
"""

NONCONFLUENT_TEXT = """\
letters: a b
rule: a b -> b
rule: b a -> a
"""


def all_words(n_letters, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(range(n_letters), repeat=k)


def normal_forms(rules, word):
    """Every irreducible word reachable from ``word`` by any rewrite sequence.

    ``rules`` is a list of (lhs, rhs) tuples; used as an oracle independent
    of the library's strategies.
    """
    seen = set()
    stack = [tuple(word)]
    out = set()
    while stack:
        w = stack.pop()
        if w in seen:
            continue
        seen.add(w)
        moved = False
        for lhs, rhs in rules:
            k = len(lhs)
            for i in range(len(w) - k + 1):
                if w[i : i + k] == lhs:
                    moved = True
                    stack.append(w[:i] + rhs + w[i + k :])
        if not moved:
            out.add(w)
    return out


def rule_pairs(rws):
    return [(r.lhs, r.rhs) for r in rws.rules]


@pytest.fixture
def z_system():
    return parse_system(Z_TEXT, "z.rws")


@pytest.fixture
def c2c3():
    return gen_plain(parse_factors("C2,C3"))


@pytest.fixture
def nonconfluent():
    return parse_system(NONCONFLUENT_TEXT, "nonconfluent.rws")


# acceptance criteria record (number, passed, seconds, limit, detail) here
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, secs, limit, detail in sorted(ACCEPTANCE_RESULTS):
        bound = f" (limit {limit:g} s)" if limit else ""
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {secs:.2f} s{bound}  {detail}")
