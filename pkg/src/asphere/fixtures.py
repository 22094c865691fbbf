"""Built-in fixture corpus: presentation files and small monoid tables.

The presentation fixtures live as ``.pres`` files next to this module; the
monoid corpus is generated here and shipped as ``monoids.json`` (a test
asserts the file matches the generators).  Everything is loadable from an
alternative directory so the suite can be pointed at modified fixtures.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .actions import FiniteMonoid, validate_monoid
from .presentations import GroupPresentation, parse
from .xmod import ReducibleFixture

DEFAULT_DIR = Path(__file__).parent / "fixtures"

PEIFFER_NAMES = ("c3", "sym3", "klein", "ab2", "lot3")
REDUCIBLE_NAMES = ("lot3", "lot4", "lot3b")
PRESENTATION_FILES = ("c3", "sym3", "klein", "ab2", "lot3", "lot4", "lot3b")


class FixtureError(ValueError):
    pass


# --- monoid corpus builders ---------------------------------------------------


def cyclic_monoid(index: int, period: int) -> FiniteMonoid:
    """The monoid generated by one element with a^(index+period) = a^index."""
    size = index + period

    def fold(e: int) -> int:
        while e >= size:
            e -= period
        return e

    table = tuple(tuple(fold(x + y) for y in range(size)) for x in range(size))
    return FiniteMonoid(table, 0)


def cyclic_group(n: int) -> FiniteMonoid:
    return cyclic_monoid(0, n)


def klein_four() -> FiniteMonoid:
    table = tuple(tuple(x ^ y for y in range(4)) for x in range(4))
    return FiniteMonoid(table, 0)


def chain_semilattice(n: int) -> FiniteMonoid:
    """Meet of a chain, identity on top."""
    table = tuple(tuple(max(x, y) for y in range(n)) for x in range(n))
    return FiniteMonoid(table, 0)


def diamond_semilattice() -> FiniteMonoid:
    """1 above two incomparable idempotents above 0."""
    meet = [
        [0, 1, 2, 3],
        [1, 1, 3, 3],
        [2, 3, 2, 3],
        [3, 3, 3, 3],
    ]
    return validate_monoid(meet)


def null_monoid_plus_one(k: int) -> FiniteMonoid:
    """k nilpotents with every product the absorbing zero, identity adjoined.
    Elements: 0 = identity, 1..k nilpotents, k+1 = zero."""
    size = k + 2
    zero = k + 1
    table = []
    for x in range(size):
        row = []
        for y in range(size):
            if x == 0:
                row.append(y)
            elif y == 0:
                row.append(x)
            else:
                row.append(zero)
        table.append(tuple(row))
    return FiniteMonoid(tuple(table), 0)


def left_zero_plus_one(k: int) -> FiniteMonoid:
    """x·y = x on k elements, identity adjoined."""
    size = k + 1
    table = []
    for x in range(size):
        row = []
        for y in range(size):
            if x == 0:
                row.append(y)
            elif y == 0:
                row.append(x)
            else:
                row.append(x)
        table.append(tuple(row))
    return FiniteMonoid(tuple(table), 0)


def right_zero_plus_one(k: int) -> FiniteMonoid:
    size = k + 1
    table = []
    for x in range(size):
        row = []
        for y in range(size):
            if x == 0:
                row.append(y)
            elif y == 0:
                row.append(x)
            else:
                row.append(y)
        table.append(tuple(row))
    return FiniteMonoid(tuple(table), 0)


def transformations_of_two_points() -> FiniteMonoid:
    """All maps {0,1} -> {0,1} under left-to-right composition."""
    maps = [(0, 1), (1, 0), (0, 0), (1, 1)]  # id, swap, const0, const1
    index = {m: i for i, m in enumerate(maps)}
    table = tuple(
        tuple(index[(g[f[0]], g[f[1]])] for g in maps) for f in maps
    )
    return FiniteMonoid(table, 0)


def monoid_corpus() -> dict[str, FiniteMonoid]:
    """Named tables of size <= 5, in a fixed order."""
    corpus: dict[str, FiniteMonoid] = {}
    for n in range(1, 6):
        corpus[f"z{n}"] = cyclic_group(n)
    corpus["v4"] = klein_four()
    for i, p in ((1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)):
        corpus[f"cyc_{i}_{p}"] = cyclic_monoid(i, p)
    for n in (3, 4, 5):
        corpus[f"chain{n}"] = chain_semilattice(n)
    corpus["diamond"] = diamond_semilattice()
    for k in (1, 2, 3):
        corpus[f"null{k}"] = null_monoid_plus_one(k)
    corpus["leftzero2"] = left_zero_plus_one(2)
    corpus["leftzero3"] = left_zero_plus_one(3)
    corpus["rightzero2"] = right_zero_plus_one(2)
    corpus["t2"] = transformations_of_two_points()
    return corpus


def monoid_to_json(m: FiniteMonoid) -> dict:
    return {"size": m.size, "identity": m.identity, "table": [list(row) for row in m.table]}


def monoid_from_json(data: dict) -> FiniteMonoid:
    m = validate_monoid(data["table"])
    if m.size != data.get("size", m.size):
        raise FixtureError("declared size does not match the table")
    if m.identity != data.get("identity", m.identity):
        raise FixtureError("declared identity does not match the table")
    return m


def corpus_json_text() -> str:
    corpus = {name: monoid_to_json(m) for name, m in monoid_corpus().items()}
    return json.dumps(corpus, indent=1, sort_keys=True) + "\n"


# --- loading -------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureSet:
    presentations: dict[str, GroupPresentation]
    monoids: dict[str, FiniteMonoid]

    def peiffer_presentations(self) -> list[GroupPresentation]:
        return [self.presentations[name] for name in PEIFFER_NAMES]

    def reducible_fixtures(self) -> list[ReducibleFixture]:
        return [
            ReducibleFixture.from_presentation(self.presentations[name])
            for name in REDUCIBLE_NAMES
        ]


def load_fixtures(directory: str | Path | None = None) -> FixtureSet:
    base = Path(directory) if directory is not None else DEFAULT_DIR
    presentations = {}
    for name in PRESENTATION_FILES:
        path = base / f"{name}.pres"
        if not path.exists():
            raise FixtureError(f"missing fixture file {path}")
        gp = parse(path.read_text())
        if not isinstance(gp, GroupPresentation):
            raise FixtureError(f"{path} is not a group presentation")
        presentations[name] = gp
    monoid_path = base / "monoids.json"
    if not monoid_path.exists():
        raise FixtureError(f"missing fixture file {monoid_path}")
    try:
        raw = json.loads(monoid_path.read_text())
        monoids = {name: monoid_from_json(data) for name, data in raw.items()}
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise FixtureError(f"bad monoid corpus: {exc}") from exc
    return FixtureSet(presentations, monoids)
