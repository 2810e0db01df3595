"""
Catalog record models.
"""

import re
from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from perfect_delaunay.core.qlattice import AffineQuadraticFunction, QuadraticForm

RATIONAL_PATTERN = re.compile(r"^-?\d+/[1-9]\d*$")

SymmetryTypeName = Literal["centrally-symmetric", "antisymmetric"]


def parse_rational(text: str) -> Fraction:
    """'p/q' with q > 0."""
    if not RATIONAL_PATTERN.match(text):
        raise ValueError(f"expected a rational 'p/q' with q > 0, got {text!r}")
    num, den = text.split("/")
    return Fraction(int(num), int(den))


class VertexOrbitModel(BaseModel):
    """One orbit line: blocks of entries permuted within each block"""
    notation: str
    blocks: tuple[tuple[int, ...], ...]
    multiplicity: int = Field(gt=0)
    comments: tuple[str, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def length(self) -> int:
        return sum(len(b) for b in self.blocks)


class ExpectedInvariants(BaseModel):
    """Invariants stored for a record"""
    vertex_count: int = Field(gt=0)
    iso_order: int = Field(gt=0)
    lattice_aut_order: int = Field(gt=0)
    symmetric_subgroup_k: int = Field(gt=0)
    shortest_count: int = Field(gt=0)
    quadinv_dim: int = Field(gt=0)
    spectrum: tuple[int, ...]
    lamina: int = Field(gt=1)
    symmetry_type: SymmetryTypeName
    subpolytopes: Optional[tuple[str, ...]] = None

    model_config = ConfigDict(frozen=True)

    @field_validator("spectrum")
    @classmethod
    def spectrum_ascending(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or list(v) != sorted(set(v)) or v[0] <= 0:
            raise ValueError("spectrum must be strictly ascending positive values")
        return v


class PolytopeRecord(BaseModel):
    """
    A catalog record. Placeholders carry only id, dim and notes.

    The center is stored as scale * coordinates with scale written 'p/q', so
    the file text round-trips exactly.
    """
    id: str = Field(min_length=1)
    dim: int = Field(gt=0)
    gram: Optional[tuple[tuple[int, ...], ...]] = None
    center_scale: Optional[str] = None
    center_coordinates: Optional[tuple[int, ...]] = None
    radius2: Optional[str] = None
    orbits: tuple[VertexOrbitModel, ...] = ()
    expected: Optional[ExpectedInvariants] = None
    lamina_functional: Optional[tuple[int, ...]] = None
    notes: tuple[str, ...] = ()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_shapes(self) -> "PolytopeRecord":
        body = (self.gram, self.center_scale, self.center_coordinates, self.radius2, self.expected)
        if all(x is None for x in body) and not self.orbits:
            return self
        if any(x is None for x in body) or not self.orbits:
            raise ValueError("a record needs gram, center, radius2, orbits and expected values")
        n = self.dim
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise ValueError(f"gram must be {n}x{n}")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(i)):
            raise ValueError("gram must be symmetric")
        if len(self.center_coordinates) != n:
            raise ValueError(f"center has {len(self.center_coordinates)} coordinates, expected {n}")
        parse_rational(self.center_scale)
        if parse_rational(self.radius2) < 0:
            raise ValueError("radius2 must be nonnegative")
        for orbit in self.orbits:
            if orbit.length != n:
                raise ValueError(f"orbit {orbit.notation!r} has {orbit.length} entries, expected {n}")
        if self.lamina_functional is not None and len(self.lamina_functional) != n:
            raise ValueError(f"lamina_functional must have {n} entries")
        return self

    @property
    def is_placeholder(self) -> bool:
        return self.gram is None

    @property
    def center(self) -> tuple[Fraction, ...]:
        scale = parse_rational(self.center_scale)
        return tuple(scale * c for c in self.center_coordinates)

    @property
    def radius2_value(self) -> Fraction:
        return parse_rational(self.radius2)

    def form(self) -> QuadraticForm:
        return QuadraticForm.from_rows(self.gram)

    def affine_function(self) -> AffineQuadraticFunction:
        return AffineQuadraticFunction(self.form(), self.center, self.radius2_value)

    def notes_for(self, prefix: str) -> list[str]:
        """Notes whose text starts with '<prefix>:'."""
        return [n for n in self.notes if n.startswith(prefix + ":")]
