"""Two-argument functions f(i, s) that are nondecreasing in s and settle to a limit."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


class SFunctionError(Exception):
    """Exception raised for malformed s-function tables."""

    pass


@dataclass(frozen=True)
class SFunction:
    """
    An s-function given either by explicit rows or by a staircase formula.

    Explicit rows list f(i, 0), f(i, 1), ...; the last value of a row is
    repeated forever, so each row settles. The staircase form has infinitely
    many rows with f(i, s) = min(offset + i // repeat, s).
    """

    rows: Tuple[Tuple[int, ...], ...] = ()
    staircase: Optional[Tuple[int, int]] = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.staircase is not None:
            if rows:
                raise SFunctionError("An s-function is either tabulated or a staircase, not both")
            offset, repeat = self.staircase
            if offset < 0 or repeat < 1:
                raise SFunctionError(f"Staircase needs offset >= 0 and repeat >= 1, got {offset}:{repeat}")
            return
        for i, row in enumerate(rows):
            if not row:
                raise SFunctionError(f"Row {i} is empty")
            if row[0] < 0:
                raise SFunctionError(f"Row {i} has a negative value")
            for s in range(1, len(row)):
                if row[s] < row[s - 1]:
                    raise SFunctionError(f"Row {i} is not monotone at stage {s}: {row[s - 1]} > {row[s]}")

    @classmethod
    def tabulated(cls, rows: Sequence[Sequence[int]]) -> "SFunction":
        return cls(rows=tuple(tuple(r) for r in rows))

    @classmethod
    def stairs(cls, offset: int = 1, repeat: int = 1) -> "SFunction":
        return cls(staircase=(offset, repeat))

    @property
    def row_count(self) -> Optional[int]:
        """Number of rows, None when there are infinitely many."""
        if self.staircase is not None:
            return None
        return len(self.rows)

    def value(self, i: int, s: int) -> int:
        if self.staircase is not None:
            offset, repeat = self.staircase
            return min(offset + i // repeat, s)
        row = self.rows[i]
        return row[min(s, len(row) - 1)]

    def limit(self, i: int) -> int:
        if self.staircase is not None:
            offset, repeat = self.staircase
            return offset + i // repeat
        return self.rows[i][-1]

    def settle_stage(self, i: int) -> int:
        """First stage from which row i equals its limit."""
        if self.staircase is not None:
            return self.limit(i)
        row = self.rows[i]
        for s, v in enumerate(row):
            if v == row[-1]:
                return s
        return len(row) - 1

    def limits(self, count: Optional[int] = None) -> List[int]:
        """
        The first count limits, or all of them for tabulated functions.

        Raises:
            SFunctionError: If count is missing for a function with infinitely many rows
        """
        total = self.row_count
        if count is None:
            if total is None:
                raise SFunctionError("Staircase s-functions have infinitely many limits; pass a count")
            count = total
        if total is not None:
            count = min(count, total)
        return [self.limit(i) for i in range(count)]

    def limit_multiplicity(self, n: int) -> int:
        """Number of rows whose limit is n."""
        if self.staircase is not None:
            offset, repeat = self.staircase
            return repeat if n >= offset else 0
        return sum(1 for row in self.rows if row[-1] == n)

    def is_s1(self) -> bool:
        """True when the limits are strictly increasing."""
        if self.staircase is not None:
            return self.staircase[1] == 1
        limits = self.limits()
        return all(a < b for a, b in zip(limits, limits[1:]))

    def describe(self) -> str:
        if self.staircase is not None:
            offset, repeat = self.staircase
            return f"staircase {offset}:{repeat}"
        return f"table of {len(self.rows)} rows"
