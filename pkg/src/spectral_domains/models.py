"""Pydantic models for the JSON file formats (boxes, opens, step functions, lattices, problems)."""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from spectral_domains.exceptions import DimensionMismatch, InputError
from spectral_domains.interval_domain import Box, to_rational
from spectral_domains.ivp.solver import IvpProblem
from spectral_domains.lattice_duality import FinDistLattice, lattice_from_leq
from spectral_domains.open_ring import (
    AT_LEFT_END,
    Carrier,
    HalfOpenPiece,
    OpenSet,
    canonicalize,
)
from spectral_domains.step_functions import Component, StepFn

__all__ = [
    "LEFT_END",
    "BoxModel",
    "IvpProblemModel",
    "LatticeModel",
    "OpenSetModel",
    "RationalStr",
    "StepFnModel",
]

LEFT_END = "leftend"


def _parse_rational(value: object) -> Fraction:
    return to_rational(value)


RationalStr = Annotated[
    Fraction,
    PlainValidator(_parse_rational, json_schema_input_type=str | int),
    PlainSerializer(str, return_type=str),
]


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    def dump(self) -> dict[str, object]:
        """JSON-ready dict in the file format (aliases used, defaults left out)."""
        return self.model_dump(mode="json", by_alias=True, exclude_defaults=True)


class BoxModel(_Schema):
    """``{"bottom": true}`` or ``{"dims": [["lo", "hi"], ...]}``."""

    bottom: bool = False
    dims: list[tuple[RationalStr, RationalStr]] | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> BoxModel:
        if self.bottom == (self.dims is not None):
            msg = "A box is either {'bottom': true} or has 'dims'"
            raise ValueError(msg)
        if self.dims is not None and not self.dims:
            msg = "A box needs at least one side"
            raise ValueError(msg)
        return self

    def to_domain(self, dim: int | None = None) -> Box:
        """Build the Box; a bottom box takes ``dim`` from its context (default 1)."""
        if self.dims is None:
            return Box.bottom(dim or 1)
        box = Box(len(self.dims), tuple(self.dims))
        if dim is not None and box.dim != dim:
            msg = f"Box of dimension {box.dim} where dimension {dim} is expected"
            raise DimensionMismatch(msg)
        return box

    @classmethod
    def from_domain(cls, box: Box) -> BoxModel:
        if box.bounds is None:
            return cls(bottom=True)
        return cls(dims=[tuple(side) for side in box.bounds])


class OpenSetModel(_Schema):
    """``{"carrier": ["lo", "hi"], "pieces": [["leftend" | "a", "b"], ...]}``.

    Pieces may overlap or touch and extend past the carrier; they are
    canonicalized on conversion.
    """

    carrier: tuple[RationalStr, RationalStr]
    pieces: list[tuple[Literal["leftend"] | RationalStr, RationalStr]] = Field(
        default_factory=list
    )

    def to_domain(self) -> OpenSet:
        carrier = Carrier(*self.carrier)
        raw = [
            HalfOpenPiece(AT_LEFT_END if lower == LEFT_END else lower, upper)
            for lower, upper in self.pieces
        ]
        return canonicalize(raw, carrier)

    @classmethod
    def from_domain(cls, u: OpenSet) -> OpenSetModel:
        return cls(
            carrier=(u.carrier.lo, u.carrier.hi),
            pieces=[
                (LEFT_END if p.lower is None else p.lower, p.upper) for p in u.pieces
            ],
        )


class ComponentModel(_Schema):
    region: OpenSetModel = Field(alias="open")
    box: BoxModel


class StepFnModel(_Schema):
    """``{"carrier": [...], "dim": n, "components": [{"open": {...}, "box": {...}}]}``."""

    carrier: tuple[RationalStr, RationalStr]
    dim: int = Field(ge=1)
    components: list[ComponentModel] = Field(default_factory=list)

    def to_domain(self) -> StepFn:
        carrier = Carrier(*self.carrier)
        comps = tuple(
            Component(c.region.to_domain(), c.box.to_domain(self.dim)) for c in self.components
        )
        return StepFn(carrier, self.dim, comps)

    @classmethod
    def from_domain(cls, f: StepFn) -> StepFnModel:
        return cls(
            carrier=(f.carrier.lo, f.carrier.hi),
            dim=f.dim,
            components=[
                ComponentModel(
                    region=OpenSetModel.from_domain(c.region), box=BoxModel.from_domain(c.box)
                )
                for c in f.components
            ],
        )


class LatticeModel(_Schema):
    """``{"elements": [...], "leq": [[bool, ...], ...], "labels": {name: OpenSet}}``."""

    elements: list[str] = Field(min_length=1)
    leq: list[list[bool]]
    labels: dict[str, OpenSetModel] | None = None

    def to_domain(self) -> FinDistLattice:
        """Build and validate the lattice.

        Raises:
            InputError: if the relation is not a bounded distributive lattice
                order, or labels name unknown elements.
        """
        labels = None
        if self.labels is not None:
            unknown = set(self.labels) - set(self.elements)
            if unknown:
                msg = f"Labels for unknown elements: {sorted(unknown)}"
                raise InputError(msg)
            labels = [
                self.labels[name].to_domain() if name in self.labels else None
                for name in self.elements
            ]
        return lattice_from_leq(self.elements, self.leq, labels)

    @classmethod
    def from_domain(cls, lattice: FinDistLattice) -> LatticeModel:
        labels = None
        if lattice.labels:
            labels = {
                name: OpenSetModel.from_domain(label)
                for name, label in zip(lattice.names, lattice.labels, strict=True)
                if label is not None
            }
        return cls(
            elements=list(lattice.names),
            leq=[list(row) for row in lattice.leq],
            labels=labels,
        )


class IvpProblemModel(_Schema):
    """``{"n": 1, "t0": "0", "T": "1", "y0": {"dims": [["1", "1"]]}, "field": "y1"}``."""

    n: int = Field(ge=1)
    t0: RationalStr
    t_end: RationalStr = Field(alias="T")
    y0: BoxModel
    field: str

    def to_domain(self) -> IvpProblem:
        """Raises ParseError / DimensionMismatch / InputError on bad problems."""
        y0 = self.y0.to_domain(self.n)
        return IvpProblem.parse(self.n, self.t0, self.t_end, y0, self.field)

    @classmethod
    def from_domain(cls, problem: IvpProblem) -> IvpProblemModel:
        return cls(
            n=problem.n,
            t0=problem.t0,
            t_end=problem.t_end,
            y0=BoxModel.from_domain(problem.y0),
            field=problem.field_text,
        )
