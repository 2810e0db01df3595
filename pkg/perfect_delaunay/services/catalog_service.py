"""
Catalog loading, orbit expansion and serialization.

File format, one section per record, keys in this order:

    [polytope "<id>"]
    dim = <n>
    gram =
      <n rows of n integers>
    center = <p>/<q> * (<int>,...)
    radius2 = <p>/<q>
    orbit = "<notation>"                 (repeated, optionally preceded by # comments)
    expected.<name> = <value>            (one line per ExpectedInvariants field)
    lamina_functional = (<int>,...)      (optional)
    note = "<text>"                      (optional, repeated)

Placeholder records have only dim and notes. Comments before the first
section form the preamble; both preamble and orbit comments round-trip.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from pydantic import ValidationError

from perfect_delaunay.config import settings
from perfect_delaunay.core.geometry import CATALOG_KINDS, ReferencePolytope, build_reference, parse_reference_name
from perfect_delaunay.core.qlattice import LatticePoint
from perfect_delaunay.exceptions import CatalogError, OrbitParseError, UnknownRecordError
from perfect_delaunay.schemas.catalog_schema import ExpectedInvariants, PolytopeRecord, VertexOrbitModel

log = logging.getLogger(__name__)

ORBIT_RE = re.compile(r"^\[(?P<body>[^\[\]]*)\]\s*(?:×|x|\*)\s*(?P<mult>\d+)$")
ENTRY_RE = re.compile(r"^(?P<value>[+-]?\d+)(?:\^(?P<exp>\d+))?$")
HEADER_RE = re.compile(r'^\[polytope\s+"(?P<id>[^"]+)"\]$')
CENTER_RE = re.compile(r"^(?P<scale>-?\d+/\d+)\s*\*\s*\((?P<coords>[^)]*)\)$")
VECTOR_RE = re.compile(r"^\((?P<coords>[^)]*)\)$")
QUOTED_RE = re.compile(r'^"(?P<text>.*)"$')

KEY_ORDER = (
    "dim", "gram", "center", "radius2", "orbit",
    *(f"expected.{name}" for name in ExpectedInvariants.model_fields),
    "lamina_functional", "note",
)
REPEATABLE = {"orbit", "note"}
LIST_FIELDS = {"spectrum", "subpolytopes"}
# commas inside J(n,s) belong to the name
LIST_SPLIT_RE = re.compile(r",\s*(?![^()]*\))")


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------

def arrangements(block: tuple[int, ...]) -> int:
    """Distinct orderings of a multiset: len! / prod(multiplicity!)."""
    return math.factorial(len(block)) // math.prod(math.factorial(c) for c in Counter(block).values())


def parse_orbit(text: str, line: int | None = None) -> VertexOrbitModel:
    """
    Parse '[1^2,0^3;-1] × 10'. ',' separates permuted entries, ';' separates
    blocks, '^k' repeats an entry; 'x' is accepted for '×'.
    """
    m = ORBIT_RE.match(text.strip())
    if not m:
        raise OrbitParseError(text, "expected '[blocks] × multiplicity'", line)
    body = re.sub(r"\s+", "", m.group("body"))
    blocks = []
    for raw in body.split(";"):
        if not raw:
            raise OrbitParseError(text, "empty block", line)
        block: list[int] = []
        for entry in raw.split(","):
            e = ENTRY_RE.match(entry)
            if not e:
                raise OrbitParseError(text, f"bad entry {entry!r}", line)
            count = int(e.group("exp") or 1)
            if count == 0:
                raise OrbitParseError(text, f"zero exponent in {entry!r}", line)
            block.extend([int(e.group("value"))] * count)
        blocks.append(tuple(block))
    multiplicity = int(m.group("mult"))
    computed = math.prod(arrangements(b) for b in blocks)
    if computed != multiplicity:
        raise OrbitParseError(text, f"declares {multiplicity} vectors but expands to {computed}", line)
    return VertexOrbitModel(notation=f"[{body}] × {multiplicity}", blocks=tuple(blocks), multiplicity=multiplicity)


def expand_orbit(orbit: VertexOrbitModel) -> list[LatticePoint]:
    """Cartesian product over blocks of their distinct arrangements, block order kept."""
    choices = [sorted(set(itertools.permutations(b))) for b in orbit.blocks]
    return [tuple(x for part in combo for x in part) for combo in itertools.product(*choices)]


def expand_record(record: PolytopeRecord) -> tuple[LatticePoint, ...]:
    """Sorted union of the orbit expansions; duplicates and count mismatches are errors."""
    if record.is_placeholder:
        return ()
    seen: dict[LatticePoint, str] = {}
    for orbit in record.orbits:
        for v in expand_orbit(orbit):
            if v in seen:
                raise CatalogError(f"{record.id}: vertex {v} appears in orbits {seen[v]!r} and {orbit.notation!r}")
            seen[v] = orbit.notation
    if len(seen) != record.expected.vertex_count:
        raise CatalogError(f"{record.id}: orbits expand to {len(seen)} vertices, expected {record.expected.vertex_count}")
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Catalog:
    records: tuple[PolytopeRecord, ...]
    preamble: tuple[str, ...] = ()

    def __iter__(self) -> Iterator[PolytopeRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.records)

    @property
    def available(self) -> tuple[PolytopeRecord, ...]:
        return tuple(r for r in self.records if not r.is_placeholder)

    def get(self, record_id: str) -> PolytopeRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise UnknownRecordError(record_id)


def _int_list(text: str, line: int) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError as e:
        raise CatalogError(f"expected comma separated integers, got {text!r}", line) from e


def _quoted(text: str, line: int) -> str:
    m = QUOTED_RE.match(text)
    if not m:
        raise CatalogError(f"expected a quoted string, got {text!r}", line)
    return m.group("text")


class _RecordBuilder:
    def __init__(self, record_id: str, line: int) -> None:
        self.line = line
        self.fields: dict = {"id": record_id}
        self.expected: dict = {}
        self.orbits: list[VertexOrbitModel] = []
        self.notes: list[str] = []
        self.pending_comments: list[str] = []
        self.gram_rows: list[tuple[int, ...]] | None = None
        self.last_key = -1

    def check_order(self, key: str, line: int) -> None:
        if key not in KEY_ORDER:
            raise CatalogError(f"unknown key {key!r}", line)
        pos = KEY_ORDER.index(key)
        if pos < self.last_key or (pos == self.last_key and key not in REPEATABLE):
            raise CatalogError(f"key {key!r} out of order", line)
        self.last_key = pos

    def set(self, key: str, value: str, line: int) -> None:
        self.check_order(key, line)
        # rows are only accepted directly after 'gram ='
        self.gram_rows = None
        if key == "dim":
            try:
                self.fields["dim"] = int(value)
            except ValueError as e:
                raise CatalogError(f"dim must be an integer, got {value!r}", line) from e
        elif key == "gram":
            if value:
                raise CatalogError("gram rows go on the following indented lines", line)
            self.gram_rows = []
            self.fields["gram"] = self.gram_rows
        elif key == "center":
            m = CENTER_RE.match(value)
            if not m:
                raise CatalogError(f"center must look like 'p/q * (a,b,...)', got {value!r}", line)
            self.fields["center_scale"] = m.group("scale")
            self.fields["center_coordinates"] = _int_list(m.group("coords"), line)
        elif key == "radius2":
            self.fields["radius2"] = value
        elif key == "orbit":
            orbit = parse_orbit(_quoted(value, line), line)
            self.orbits.append(orbit.model_copy(update={"comments": tuple(self.pending_comments)}))
            self.pending_comments = []
        elif key.startswith("expected."):
            name = key.split(".", 1)[1]
            if name in LIST_FIELDS:
                items = [x.strip() for x in LIST_SPLIT_RE.split(value)]
                self.expected[name] = items if name == "subpolytopes" else list(_int_list(value, line))
            else:
                self.expected[name] = value
        elif key == "lamina_functional":
            m = VECTOR_RE.match(value)
            if not m:
                raise CatalogError(f"lamina_functional must look like '(a,b,...)', got {value!r}", line)
            self.fields["lamina_functional"] = _int_list(m.group("coords"), line)
        elif key == "note":
            self.notes.append(_quoted(value, line))

    def add_gram_row(self, text: str, line: int) -> None:
        if self.gram_rows is None:
            raise CatalogError("indented line outside a gram block", line)
        try:
            self.gram_rows.append(tuple(int(x) for x in text.split()))
        except ValueError as e:
            raise CatalogError(f"gram rows hold integers, got {text!r}", line) from e

    def build(self) -> PolytopeRecord:
        fields = dict(self.fields)
        if "gram" in fields:
            fields["gram"] = tuple(fields["gram"])
        if self.expected:
            fields["expected"] = self.expected
        try:
            return PolytopeRecord(**fields, orbits=tuple(self.orbits), notes=tuple(self.notes))
        except ValidationError as e:
            raise CatalogError(f"record {fields['id']!r}: {e}", self.line) from e


def parse_catalog_text(text: str) -> Catalog:
    records: list[PolytopeRecord] = []
    preamble: list[str] = []
    current: _RecordBuilder | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if current is None:
                preamble.append(raw.rstrip())
            else:
                current.pending_comments.append(stripped)
            continue
        header = HEADER_RE.match(stripped)
        if header:
            if current is not None:
                records.append(current.build())
            current = _RecordBuilder(header.group("id"), number)
            continue
        if current is None:
            raise CatalogError("content before the first [polytope] section", number)
        if raw[0].isspace():
            current.add_gram_row(stripped, number)
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise CatalogError(f"expected 'key = value', got {stripped!r}", number)
        current.set(key.strip(), value.strip(), number)
    if current is not None:
        records.append(current.build())

    ids = [r.id for r in records]
    duplicates = sorted(k for k, c in Counter(ids).items() if c > 1)
    if duplicates:
        raise CatalogError(f"duplicate record ids: {', '.join(duplicates)}")
    return Catalog(tuple(records), tuple(preamble))


@functools.lru_cache(maxsize=8)
def _load_path(path: str) -> Catalog:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CatalogError(f"cannot read catalog {path}: {e}") from e
    catalog = parse_catalog_text(text)
    log.info("loaded %d records (%d available) from %s", len(catalog), len(catalog.available), path)
    return catalog


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and validate a catalog file; the packaged catalog when no path is given."""
    return _load_path(str(path or settings.CATALOG_PATH))


def resolve_reference(name: str, catalog: Catalog | None = None) -> ReferencePolytope:
    """
    Reference polytope for a subpolytope name such as 'J(6,2)' or 'tope35'.

    Sporadic names take their form and vertices from the catalog record of
    the same id; the families are constructed.
    """
    kind, params = parse_reference_name(name)
    if kind in CATALOG_KINDS:
        record = (catalog or load_catalog()).get(kind)
        return ReferencePolytope(kind, (), record.form(), expand_record(record))
    return build_reference(kind, *params)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _format_expected(name: str, value) -> str:
    if name in LIST_FIELDS:
        return ", ".join(str(x) for x in value)
    return str(value)


def serialize_record(record: PolytopeRecord) -> str:
    lines = [f'[polytope "{record.id}"]', f"dim = {record.dim}"]
    if not record.is_placeholder:
        lines.append("gram =")
        lines.extend("  " + " ".join(str(x) for x in row) for row in record.gram)
        lines.append(f"center = {record.center_scale} * ({','.join(str(x) for x in record.center_coordinates)})")
        lines.append(f"radius2 = {record.radius2}")
        for orbit in record.orbits:
            lines.extend(orbit.comments)
            lines.append(f'orbit = "{orbit.notation}"')
        for name, value in record.expected.model_dump().items():
            if value is not None:
                lines.append(f"expected.{name} = {_format_expected(name, value)}")
        if record.lamina_functional is not None:
            lines.append(f"lamina_functional = ({','.join(str(x) for x in record.lamina_functional)})")
    lines.extend(f'note = "{n}"' for n in record.notes)
    return "\n".join(lines) + "\n"


def serialize_catalog(catalog: Catalog) -> str:
    parts = []
    if catalog.preamble:
        parts.append("\n".join(catalog.preamble) + "\n")
    parts.extend(serialize_record(r) for r in catalog.records)
    return "\n".join(parts)
