"""
Document schemas for the toolkit using Pydantic models.

Every JSON document the command line reads or writes has a model here: fields,
quivers, algebras (five constructors plus the ground field), modules,
representations, verdicts and the enumeration index.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path as FilePath
from typing import TYPE_CHECKING, Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, TypeAdapter, ValidationError, model_validator

from .errors import InputError

if TYPE_CHECKING:
    from .algebra import Algebra, Module
    from .exactlin import Field as ScalarField, Matrix
    from .monrep import Representation
    from .quiver import Quiver


Entry = Union[StrictInt, str]
MatrixRows = List[List[Entry]]


class Status(str, Enum):
    """Three-valued outcome of every check"""
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Verdict(BaseModel):
    """Result of a check; a failure names its witness, an unknown its exhausted cutoffs."""
    check: str
    status: Status
    witness: Optional[Dict[str, Any]] = None
    cutoffs: Dict[str, int] = Field(default_factory=dict)
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _carriers(self) -> "Verdict":
        if self.status == Status.FAILS and not self.witness:
            raise ValueError("a failing verdict needs a witness")
        if self.status == Status.UNKNOWN and not self.cutoffs:
            raise ValueError("an unknown verdict needs the exhausted cutoff")
        return self

    @classmethod
    def holds(cls, check: str, **kwargs) -> "Verdict":
        return cls(check=check, status=Status.HOLDS, **kwargs)

    @classmethod
    def fails(cls, check: str, witness: Dict[str, Any], **kwargs) -> "Verdict":
        return cls(check=check, status=Status.FAILS, witness=witness, **kwargs)

    @classmethod
    def unknown(cls, check: str, cutoffs: Dict[str, int], **kwargs) -> "Verdict":
        return cls(check=check, status=Status.UNKNOWN, cutoffs=cutoffs, **kwargs)

    @property
    def ok(self) -> bool:
        return self.status == Status.HOLDS

    @property
    def exit_code(self) -> int:
        return {Status.HOLDS: 0, Status.FAILS: 1, Status.UNKNOWN: 2}[self.status]

    def renamed(self, check: str) -> "Verdict":
        return self.model_copy(update={"check": check})

    def report(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


# -- fields and quivers ---------------------------------------------------------------

class FieldDoc(BaseModel):
    kind: Literal["prime", "rational"]
    p: Optional[int] = None

    @model_validator(mode="before")
    @classmethod
    def _shorthand(cls, data: Any) -> Any:
        if isinstance(data, str):
            text = data.strip().lower()
            if text.startswith("fp:"):
                return {"kind": "prime", "p": text[3:]}
            if text in ("q", "rational"):
                return {"kind": "rational"}
        return data

    @model_validator(mode="after")
    def _needs_prime(self) -> "FieldDoc":
        if self.kind == "prime" and self.p is None:
            raise ValueError("a prime field needs p")
        return self

    def build(self) -> "ScalarField":
        from .exactlin import Field as ScalarField
        try:
            return ScalarField(self.p if self.kind == "prime" else None)
        except InputError as exc:
            raise exc.relocate("/p")

    @classmethod
    def of(cls, field: "ScalarField") -> "FieldDoc":
        return cls(kind="prime", p=field.p) if field.is_finite else cls(kind="rational")


class ArrowDoc(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: int = Field(alias="from")
    target: int = Field(alias="to")


class QuiverDoc(BaseModel):
    vertices: int = Field(ge=1)
    arrows: List[ArrowDoc] = Field(default_factory=list)

    def build(self) -> "Quiver":
        from .quiver import Quiver
        return Quiver(self.vertices, tuple((a.source, a.target) for a in self.arrows))

    @classmethod
    def of(cls, q: "Quiver") -> "QuiverDoc":
        return cls(vertices=q.vertex_count, arrows=[ArrowDoc(source=s, target=e) for s, e in q.arrows])


# -- algebras -------------------------------------------------------------------------

class _AlgebraDocBase(BaseModel):
    field: Optional[FieldDoc] = None

    def _field(self, default: Optional["ScalarField"]) -> "ScalarField":
        if self.field is not None:
            return self.field.build()
        if default is None:
            raise InputError("no field given in the document or on the command line", "/field")
        return default


class GroundDoc(_AlgebraDocBase):
    kind: Literal["ground"]

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        from .algebra import ground_algebra
        return ground_algebra(self._field(default))


class StructureConstantsDoc(_AlgebraDocBase):
    kind: Literal["structure_constants"]
    dim: int = Field(ge=1)
    unit: List[Entry]
    mult: List[List[List[Entry]]]
    labels: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _shape(self) -> "StructureConstantsDoc":
        n = self.dim
        if len(self.unit) != n:
            raise ValueError(f"unit must have {n} coefficients")
        if len(self.mult) != n or any(len(row) != n or any(len(c) != n for c in row) for row in self.mult):
            raise ValueError(f"mult must be a {n}x{n}x{n} table")
        if self.labels and len(self.labels) != n:
            raise ValueError(f"labels must name all {n} basis elements")
        return self

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        from .algebra import from_structure_constants
        return from_structure_constants(self._field(default), self.mult, self.unit, self.labels, strict=True)


class TruncPolyDoc(_AlgebraDocBase):
    kind: Literal["trunc_poly"]
    t: int = Field(ge=1)

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        from .algebra import truncated_polynomial
        return truncated_polynomial(self._field(default), self.t)


class PathAlgebraDoc(_AlgebraDocBase):
    kind: Literal["path_algebra"]
    quiver: QuiverDoc

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        from .algebra import path_algebra
        try:
            q = self.quiver.build()
        except InputError as exc:
            raise exc.relocate("/quiver")
        return path_algebra(q, self._field(default))


class TensorDoc(_AlgebraDocBase):
    kind: Literal["tensor"]
    left: "AlgebraDoc"
    right: "AlgebraDoc"

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        from .algebra import tensor_algebra
        inherited = self.field.build() if self.field is not None else default
        try:
            b = self.left.build(inherited)
        except InputError as exc:
            raise exc.relocate("/left")
        try:
            a = self.right.build(inherited)
        except InputError as exc:
            raise exc.relocate("/right")
        return tensor_algebra(b, a)


class OppositeDoc(_AlgebraDocBase):
    kind: Literal["opposite"]
    of: "AlgebraDoc"

    def build(self, default: Optional["ScalarField"] = None) -> "Algebra":
        inherited = self.field.build() if self.field is not None else default
        try:
            return self.of.build(inherited).opposite
        except InputError as exc:
            raise exc.relocate("/of")


AlgebraDoc = Annotated[Union[GroundDoc, StructureConstantsDoc, TruncPolyDoc, PathAlgebraDoc, TensorDoc, OppositeDoc],
                       Field(discriminator="kind")]
TensorDoc.model_rebuild()
OppositeDoc.model_rebuild()
ALGEBRA_ADAPTER: TypeAdapter = TypeAdapter(AlgebraDoc)
ALGEBRA_KINDS = ("ground", "structure_constants", "trunc_poly", "path_algebra", "tensor", "opposite")


def algebra_doc(a: "Algebra", with_field: bool = True) -> Dict[str, Any]:
    """Document for an algebra, naming its constructor where one is known."""
    field = a.field
    out: Dict[str, Any]
    if a.kind == "ground":
        out = {"kind": "ground"}
    elif a.kind == "trunc_poly":
        out = {"kind": "trunc_poly", "t": a.degree}
    elif a.kind == "path_algebra":
        out = {"kind": "path_algebra", "quiver": QuiverDoc.of(a.quiver).model_dump(by_alias=True)}
    elif a.kind == "tensor":
        out = {"kind": "tensor", "left": algebra_doc(a.factors[0], False), "right": algebra_doc(a.factors[1], False)}
    elif a.kind == "opposite" and a.factors:
        out = {"kind": "opposite", "of": algebra_doc(a.factors[0], False)}
    else:
        n = a.dim
        out = {"kind": "structure_constants", "dim": n,
               "unit": [field.encode(u) for u in a.unit],
               "mult": [[[field.encode(a.mult[i, j, k]) for k in range(n)] for j in range(n)] for i in range(n)],
               "labels": list(a.labels)}
    if with_field:
        out["field"] = FieldDoc.of(field).model_dump(exclude_none=True)
    return out


def build_algebra(ref: Union[Dict[str, Any], BaseModel, str], default: Optional["ScalarField"] = None,
                  base_dir: Optional[FilePath] = None) -> "Algebra":
    """Builds an algebra from a document, a model or an ``@file`` reference."""
    if isinstance(ref, str):
        if not ref.startswith("@"):
            raise InputError(f"algebra reference {ref!r} must start with '@'")
        path = (base_dir or FilePath(".")) / ref[1:]
        try:
            ref = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read algebra document {path}: {exc}")
    if isinstance(ref, dict):
        ref = parse_document(ALGEBRA_ADAPTER, ref)
    return ref.build(default)


# -- modules and representations ----------------------------------------------------------

class ModuleDoc(BaseModel):
    algebra: Optional[Union[AlgebraDoc, str]] = None
    dim: int = Field(ge=0)
    action: List[MatrixRows]
    label: str = ""

    def build(self, algebra: "Algebra") -> "Module":
        from .algebra import make_module
        from .exactlin import Matrix
        if len(self.action) != algebra.dim:
            raise InputError(f"expected {algebra.dim} action matrices, got {len(self.action)}", "/action")
        matrices = []
        for i, rows in enumerate(self.action):
            try:
                matrices.append(Matrix.from_rows(algebra.field, rows, shape=(self.dim, self.dim), strict=True))
            except InputError as exc:
                raise exc.relocate(f"/action/{i}")
        return make_module(algebra, matrices, label=self.label)

    def build_standalone(self, default: Optional["ScalarField"] = None,
                         base_dir: Optional[FilePath] = None) -> "Module":
        if self.algebra is None:
            raise InputError("module document has no algebra", "/algebra")
        try:
            a = build_algebra(self.algebra, default, base_dir)
        except InputError as exc:
            raise exc.relocate("/algebra")
        return self.build(a)


class RepresentationDoc(BaseModel):
    quiver: QuiverDoc
    algebra: Union[AlgebraDoc, str]
    branches: List[ModuleDoc]
    arrows: List[MatrixRows]
    label: str = ""

    def build(self, default: Optional["ScalarField"] = None, base_dir: Optional[FilePath] = None) -> "Representation":
        from .exactlin import Matrix
        from .monrep import Representation
        try:
            q = self.quiver.build()
        except InputError as exc:
            raise exc.relocate("/quiver")
        try:
            a = build_algebra(self.algebra, default, base_dir)
        except InputError as exc:
            raise exc.relocate("/algebra")
        if len(self.branches) != q.vertex_count:
            raise InputError(f"expected {q.vertex_count} branches, got {len(self.branches)}", "/branches")
        branches = []
        for v, doc in enumerate(self.branches):
            try:
                branches.append(doc.build(a))
            except InputError as exc:
                raise exc.relocate(f"/branches/{v}")
        if len(self.arrows) != len(q.arrows):
            raise InputError(f"expected {len(q.arrows)} arrow matrices, got {len(self.arrows)}", "/arrows")
        maps = []
        for k, ((s, e), rows) in enumerate(zip(q.arrows, self.arrows)):
            try:
                maps.append(Matrix.from_rows(a.field, rows, shape=(branches[e - 1].dim, branches[s - 1].dim), strict=True))
            except InputError as exc:
                raise exc.relocate(f"/arrows/{k}")
        return Representation(q, a, tuple(branches), tuple(maps), label=self.label).validate()


def module_doc(m: "Module", with_algebra: bool = True) -> Dict[str, Any]:
    out: Dict[str, Any] = {"dim": m.dim, "action": [x.to_rows() for x in m.action]}
    if m.label:
        out["label"] = m.label
    if with_algebra:
        out["algebra"] = algebra_doc(m.algebra)
    return out


def representation_doc(x: "Representation") -> Dict[str, Any]:
    out = {"quiver": QuiverDoc.of(x.quiver).model_dump(by_alias=True),
           "algebra": algebra_doc(x.algebra),
           "branches": [module_doc(b, with_algebra=False) for b in x.branches],
           "arrows": [m.to_rows() for m in x.arrow_maps]}
    if x.label:
        out["label"] = x.label
    return out


# -- reports -------------------------------------------------------------------------

class EnumerationIndex(BaseModel):
    """Index file written next to an oracle directory of representation documents"""
    quiver: Dict[str, Any]
    algebra: Dict[str, Any]
    bound: List[int]
    monic_only: bool
    seed: int
    partial: bool
    visited: int
    total: int
    counts: Dict[str, int]
    files: List[str]


class CertificateReport(Verdict):
    """A finite-type certificate: the verdict, its three sub-checks and the summand list"""
    checks: Dict[str, Verdict] = Field(default_factory=dict)
    conclusion: Optional[str] = None
    summands: List[Dict[str, Any]] = Field(default_factory=list)


# -- validation errors -------------------------------------------------------------------

def _pointer(loc) -> str:
    parts = [str(p) for p in loc
             if not (isinstance(p, str) and (p in ALGEBRA_KINDS or "[" in p or p in ("str", "function-after")))]
    return "/" + "/".join(parts) if parts else ""


def parse_document(model: Union[type, TypeAdapter], data: Any, location: str = "") -> Any:
    """Validates ``data``; schema failures become InputError with a JSON-pointer location."""
    try:
        if isinstance(model, TypeAdapter):
            return model.validate_python(data)
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise InputError(first["msg"], location + _pointer(first["loc"]))
