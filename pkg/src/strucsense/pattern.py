"""Pattern matrices over {zero, star, unknown} and their numeric realizations.

A pattern matrix fixes the structure of a family of real matrices: ``ZERO``
positions must hold 0, ``STAR`` positions must hold a nonzero value, and
``UNKNOWN`` positions may hold anything. Storage is sparse (absent position
means zero) because the network patterns this library targets are
overwhelmingly zero.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np


class Entry(enum.Enum):
    """One structural constraint on a matrix position."""

    ZERO = "0"
    STAR = "*"
    UNKNOWN = "?"

    def __str__(self) -> str:
        return self.value


_CHAR_TO_ENTRY = {"0": Entry.ZERO, "*": Entry.STAR, "?": Entry.UNKNOWN}


@dataclass(frozen=True)
class PatternMatrix:
    """Sparse structural matrix; positions absent from both sets are zero.

    ``symmetric=True`` asserts entry(i, j) == entry(j, i) for all positions
    and is verified at construction time.
    """

    rows: int
    cols: int
    star: frozenset = field(default_factory=frozenset)
    unknown: frozenset = field(default_factory=frozenset)
    symmetric: bool = False

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        object.__setattr__(self, "star", frozenset(tuple(p) for p in self.star))
        object.__setattr__(self, "unknown", frozenset(tuple(p) for p in self.unknown))
        for (i, j) in self.star | self.unknown:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"position ({i}, {j}) outside {self.rows}x{self.cols}")
        both = self.star & self.unknown
        if both:
            raise ValueError(f"position {min(both)} is both star and unknown")
        if self.symmetric:
            if self.rows != self.cols:
                raise ValueError("symmetric flag on a non-square matrix")
            for (i, j) in self.star:
                if (j, i) not in self.star:
                    raise ValueError(f"symmetric flag set but star ({i}, {j}) unmirrored")
            for (i, j) in self.unknown:
                if (j, i) not in self.unknown:
                    raise ValueError(f"symmetric flag set but unknown ({i}, {j}) unmirrored")

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> Entry:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        if (i, j) in self.star:
            return Entry.STAR
        if (i, j) in self.unknown:
            return Entry.UNKNOWN
        return Entry.ZERO

    @classmethod
    def from_rows(cls, rows: list, symmetric: bool = False) -> "PatternMatrix":
        """Build from dense rows of '0'/'*'/'?' characters or Entry values."""
        r = len(rows)
        c = len(rows[0]) if rows else 0
        star, unknown = set(), set()
        for i, row in enumerate(rows):
            if len(row) != c:
                raise ValueError("ragged rows")
            for j, cell in enumerate(row):
                e = cell if isinstance(cell, Entry) else _CHAR_TO_ENTRY[str(cell)]
                if e is Entry.STAR:
                    star.add((i, j))
                elif e is Entry.UNKNOWN:
                    unknown.add((i, j))
        return cls(r, c, frozenset(star), frozenset(unknown), symmetric)

    def to_json(self) -> str:
        payload = {
            "rows": self.rows,
            "cols": self.cols,
            "star": sorted([i, j] for (i, j) in self.star),
            "unknown": sorted([i, j] for (i, j) in self.unknown),
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, symmetric: bool = False) -> "PatternMatrix":
        data = json.loads(text)
        return cls(
            int(data["rows"]),
            int(data["cols"]),
            frozenset((int(i), int(j)) for i, j in data.get("star", [])),
            frozenset((int(i), int(j)) for i, j in data.get("unknown", [])),
            symmetric,
        )


@dataclass(frozen=True)
class SampleConfig:
    """Distribution knobs for drawing numeric realizations of a pattern.

    Star magnitudes are drawn uniformly from ``star_range`` with a random
    sign; the range is kept away from 0 and from overflow so downstream
    rank tests stay well conditioned. Unknown positions are exactly 0 with
    probability ``zero_prob`` and otherwise drawn like stars.
    """

    star_range: tuple = (0.5, 2.0)
    zero_prob: float = 0.5


def make_abar(a: PatternMatrix) -> PatternMatrix:
    """Rewrite the diagonal: star where the entry is zero, unknown otherwise.

    Off-diagonal entries are untouched. The result never has a zero on the
    diagonal; it is the companion pattern used by the second colorability
    check of the observability certificate.
    """
    if not a.is_square:
        raise ValueError(f"square matrix required, got {a.rows}x{a.cols}")
    star = {(i, j) for (i, j) in a.star if i != j}
    unknown = {(i, j) for (i, j) in a.unknown if i != j}
    for i in range(a.rows):
        if a.entry(i, i) is Entry.ZERO:
            star.add((i, i))
        else:
            unknown.add((i, i))
    return PatternMatrix(a.rows, a.cols, frozenset(star), frozenset(unknown), a.symmetric)


def is_member(x: np.ndarray, a: PatternMatrix) -> bool:
    """True iff ``x`` realizes the pattern: 0 at zeros, nonzero at stars."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.rows, a.cols):
        raise ValueError(f"shape {x.shape} does not match {a.rows}x{a.cols} pattern")
    free = np.zeros(x.shape, dtype=bool)
    for (i, j) in a.unknown:
        free[i, j] = True
    for (i, j) in a.star:
        if x[i, j] == 0.0:
            return False
        free[i, j] = True
    return bool(np.all(x[~free] == 0.0))


def sample_realization(a: PatternMatrix, seed: int, cfg: SampleConfig | None = None) -> np.ndarray:
    """Draw a member of the pattern class, deterministically for a fixed seed."""
    cfg = cfg or SampleConfig()
    lo, hi = cfg.star_range
    if not (0.0 < lo <= hi):
        raise ValueError(f"star_range must satisfy 0 < lo <= hi, got {cfg.star_range}")
    rng = np.random.default_rng(seed)
    x = np.zeros((a.rows, a.cols))

    def draw() -> float:
        mag = rng.uniform(lo, hi)
        return mag if rng.random() < 0.5 else -mag

    for (i, j) in sorted(a.star):
        x[i, j] = draw()
    for (i, j) in sorted(a.unknown):
        if rng.random() >= cfg.zero_prob:
            x[i, j] = draw()
    return x
