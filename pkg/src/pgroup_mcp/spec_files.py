"""
Line-based group spec files.

A spec file holds one `key: value` pair per line; blank lines and lines
starting with `#` are ignored. Recognized keys:

    p: <prime>                          required
    divisible_rank: <int>|omega         default 0
    cyclic: <exp>:<mult>[,...]          may repeat; multiplicities add up
    cyclic_infinite: <exp>[,...]
    character: <n>:<k>[,...]            explicit (n, k) entries, downward closed
    sfunction: <i>:<v0>,<v1>,...        one line per row, rows numbered from 0
    sfunction_staircase: <offset>:<repeat>
    inf_mode: computable|sigma1
    length: <int>|omega
    reduced_computable: true|false
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .presentations import Character, CharacterError, IsoTypeSpec, format_rank
from .sfunction import SFunction, SFunctionError
from .types import OMEGA_TEXT, InfMode

logger = logging.getLogger(__name__)

KNOWN_KEYS = (
    "p",
    "divisible_rank",
    "cyclic",
    "cyclic_infinite",
    "character",
    "sfunction",
    "sfunction_staircase",
    "inf_mode",
    "length",
    "reduced_computable",
)
REPEATABLE_KEYS = ("cyclic", "sfunction")


class SpecFileError(Exception):
    """Exception raised for spec files that cannot be parsed or violate an invariant."""

    def __init__(self, message: str, line: int = 0):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class SpecDocument:
    """A parsed spec: the isomorphism type plus how its presentations are built."""

    iso_type: IsoTypeSpec
    inf_mode: InfMode = InfMode.computable
    length: Optional[str] = None

    @property
    def p(self) -> int:
        return self.iso_type.p

    def character(self) -> Character:
        return self.iso_type.character()

    @property
    def infinite_classes(self) -> Optional[int]:
        """Number of infinite classes of the matching equivalence structure."""
        return self.iso_type.divisible_rank


def _int(value: str, line: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise SpecFileError(f"{what} must be an integer, got '{value}'", line)


def _rank(value: str, line: int, what: str) -> Optional[int]:
    if value == OMEGA_TEXT:
        return None
    result = _int(value, line, what)
    if result < 0:
        raise SpecFileError(f"{what} must be nonnegative, got {result}", line)
    return result


def _pairs(value: str, line: int, what: str) -> List[Tuple[int, int]]:
    pairs = []
    for item in value.split(","):
        left, sep, right = item.strip().partition(":")
        if not sep:
            raise SpecFileError(f"{what} entries must look like a:b, got '{item.strip()}'", line)
        pairs.append((_int(left.strip(), line, what), _int(right.strip(), line, what)))
    return pairs


def _split_lines(text: str) -> List[Tuple[int, str, str]]:
    entries = []
    seen: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep:
            raise SpecFileError(f"Expected 'key: value', got '{line}'", number)
        if key not in KNOWN_KEYS:
            raise SpecFileError(f"Unknown key '{key}'", number)
        if key in seen and key not in REPEATABLE_KEYS:
            raise SpecFileError(f"Key '{key}' repeated (first on line {seen[key]})", number)
        seen.setdefault(key, number)
        entries.append((number, key, value))
    return entries


def parse_spec_text(text: str) -> SpecDocument:
    """
    Parse spec text.

    Raises:
        SpecFileError: On syntax errors or invariant violations, with the line number
    """
    p: Optional[int] = None
    p_line = 0
    divisible_rank: Optional[int] = 0
    cyclic: List[Tuple[int, int]] = []
    cyclic_infinite: FrozenSet[int] = frozenset()
    rows: Dict[int, Tuple[int, List[int]]] = {}
    staircase: Optional[Tuple[int, int]] = None
    sfunction_line = 0
    inf_mode = InfMode.computable
    length: Optional[str] = None
    reduced_computable = True

    for number, key, value in _split_lines(text):
        if key == "p":
            p, p_line = _int(value, number, "p"), number
        elif key == "divisible_rank":
            divisible_rank = _rank(value, number, "divisible_rank")
        elif key == "cyclic":
            cyclic += _pairs(value, number, "cyclic")
        elif key == "cyclic_infinite":
            cyclic_infinite = frozenset(_int(v.strip(), number, "cyclic_infinite") for v in value.split(",") if v.strip())
        elif key == "character":
            try:
                cyclic += list(Character.from_entries(_pairs(value, number, "character")).finite)
            except CharacterError as e:
                raise SpecFileError(str(e), number)
        elif key == "sfunction":
            index, sep, values = value.partition(":")
            if not sep:
                raise SpecFileError(f"sfunction rows must look like i:v0,v1,..., got '{value}'", number)
            i = _int(index.strip(), number, "sfunction row index")
            if i in rows:
                raise SpecFileError(f"sfunction row {i} repeated (first on line {rows[i][0]})", number)
            rows[i] = (number, [_int(v.strip(), number, f"sfunction row {i}") for v in values.split(",")])
            sfunction_line = sfunction_line or number
        elif key == "sfunction_staircase":
            pairs = _pairs(value, number, "sfunction_staircase")
            if len(pairs) != 1:
                raise SpecFileError("sfunction_staircase takes a single offset:repeat pair", number)
            staircase = pairs[0]
            sfunction_line = sfunction_line or number
        elif key == "inf_mode":
            try:
                inf_mode = InfMode(value)
            except ValueError:
                raise SpecFileError(f"inf_mode must be one of {', '.join(m.value for m in InfMode)}, got '{value}'", number)
        elif key == "length":
            if value != OMEGA_TEXT and not value.isdigit():
                raise SpecFileError(f"Only lengths up to omega are supported, got '{value}'", number)
            length = value if value == OMEGA_TEXT else str(int(value))
        elif key == "reduced_computable":
            if value not in ("true", "false"):
                raise SpecFileError(f"reduced_computable must be true or false, got '{value}'", number)
            reduced_computable = value == "true"

    if p is None:
        raise SpecFileError("Missing required key 'p'")
    if rows and sorted(rows) != list(range(len(rows))):
        raise SpecFileError(f"sfunction rows must be numbered 0..{len(rows) - 1}, got {sorted(rows)}", sfunction_line)

    sfunction: Optional[SFunction] = None
    try:
        if rows or staircase is not None:
            sfunction = SFunction(rows=tuple(tuple(rows[i][1]) for i in sorted(rows)), staircase=staircase)
    except SFunctionError as e:
        raise SpecFileError(str(e), sfunction_line)
    try:
        iso_type = IsoTypeSpec(p, divisible_rank, tuple(cyclic), cyclic_infinite, sfunction, reduced_computable)
    except CharacterError as e:
        raise SpecFileError(str(e), p_line)
    logger.debug(f"Parsed spec: {iso_type.describe()}")
    return SpecDocument(iso_type, inf_mode, length)


def parse_spec(path: Union[str, Path]) -> SpecDocument:
    """
    Parse a spec file.

    Raises:
        SpecFileError: If the file cannot be read or parsed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except Exception as e:
        raise SpecFileError(f"Could not read spec file {path}: {e}")
    return parse_spec_text(text)


def print_spec(doc: SpecDocument) -> List[str]:
    """Canonical form: fixed key order, defaults omitted except p and divisible_rank."""
    t = doc.iso_type
    lines = [f"p: {t.p}", f"divisible_rank: {format_rank(t.divisible_rank)}"]
    if t.cyclic_finite:
        lines.append("cyclic: " + ",".join(f"{n}:{k}" for n, k in t.cyclic_finite))
    if t.cyclic_infinite:
        lines.append("cyclic_infinite: " + ",".join(str(m) for m in sorted(t.cyclic_infinite)))
    if t.sfunction is not None:
        if t.sfunction.staircase is not None:
            offset, repeat = t.sfunction.staircase
            lines.append(f"sfunction_staircase: {offset}:{repeat}")
        for i, row in enumerate(t.sfunction.rows):
            lines.append(f"sfunction: {i}:" + ",".join(map(str, row)))
    if doc.inf_mode != InfMode.computable:
        lines.append(f"inf_mode: {doc.inf_mode}")
    if doc.length is not None:
        lines.append(f"length: {doc.length}")
    if not t.reduced_computable:
        lines.append("reduced_computable: false")
    return lines
