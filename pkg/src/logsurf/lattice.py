"""Surface models as Picard lattices of iterated blow-ups of the plane.

A model is the numerical shadow of a rational surface: an ambient
intersection lattice in the diagonal basis (+1, -1, ..., -1), the canonical
class, a set of named tracked curve classes, and a subset of tracked curves
declared contracted (the exceptional set of a map to a normal, possibly
singular, surface).

Blow-downs keep the ambient coordinate length and decrement a separate rank
counter; pushforward representatives live in the orthogonal complement of
the contracted (-1)-class, so one fixed diagonal form computes all pairings
forever.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ModelError, NotNegativeDefiniteError
from .linalg import is_negative_definite_matrix, pairing

GENERAL = "general"
ON_CURVE = "on_curve"
AT_INTERSECTION = "at_intersection"


@dataclass(frozen=True)
class CurveClass:
    """An integral class in the ambient lattice, in the diagonal basis.

    Index 0 is the hyperplane class; later indices are exceptional basis
    directions. The pairing is diagonal (+1, -1, ..., -1) and lives in
    linalg.pairing, not here.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        assert len(self.coeffs) >= 1
        assert all(isinstance(c, int) for c in self.coeffs)

    def padded(self, length: int) -> "CurveClass":
        assert length >= len(self.coeffs)
        return CurveClass(self.coeffs + (0,) * (length - len(self.coeffs)))

    def scaled(self, c: int) -> "CurveClass":
        return CurveClass(tuple(c * x for x in self.coeffs))

    def __add__(self, other: "CurveClass") -> "CurveClass":
        assert len(self.coeffs) == len(other.coeffs)
        return CurveClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        return self + other.scaled(-1)

    def __neg__(self) -> "CurveClass":
        return self.scaled(-1)


@dataclass(frozen=True)
class PointSpec:
    """Where a blow-up center sits relative to the tracked curves."""

    kind: str
    names: tuple[str, ...] = ()

    def __post_init__(self):
        assert self.kind in (GENERAL, ON_CURVE, AT_INTERSECTION)
        expected = {GENERAL: 0, ON_CURVE: 1, AT_INTERSECTION: 2}[self.kind]
        assert len(self.names) == expected

    @classmethod
    def general(cls) -> "PointSpec":
        return cls(GENERAL, ())

    @classmethod
    def on_curve(cls, name: str) -> "PointSpec":
        return cls(ON_CURVE, (name,))

    @classmethod
    def at_intersection(cls, a: str, b: str) -> "PointSpec":
        if a == b:
            raise ModelError("intersection point needs two distinct curves")
        return cls(AT_INTERSECTION, (a, b))


@dataclass(frozen=True)
class BlowupRecord:
    point: PointSpec
    name: str
    basis_index: int


@dataclass(frozen=True)
class SurfaceModel:
    """Tracked intersection data of a rational surface.

    `rank` is the Picard rank of the smooth ambient surface; it can be
    smaller than the coordinate length after blow-downs. `contracted`
    names the tracked curves collapsed by the map to the modeled surface;
    an empty set means the surface itself is smooth.
    """

    rank: int
    canonical: CurveClass
    curves: dict[str, CurveClass]
    contracted: frozenset[str]
    history: tuple[BlowupRecord, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.canonical.coeffs)

    @property
    def k_squared(self) -> int:
        return pairing(self.canonical.coeffs, self.canonical.coeffs)

    @property
    def tracked(self) -> tuple[str, ...]:
        return tuple(sorted(self.curves))

    def curve_class(self, name: str) -> CurveClass:
        try:
            return self.curves[name]
        except KeyError:
            raise ModelError(f"unknown curve {name!r}") from None

    def pair(self, a: CurveClass, b: CurveClass) -> int:
        return intersect(self, a, b)

    def intersection(self, a: str, b: str) -> int:
        return intersect(self, self.curve_class(a), self.curve_class(b))

    def self_int(self, name: str) -> int:
        c = self.curve_class(name)
        return intersect(self, c, c)

    def k_dot(self, name: str) -> int:
        return intersect(self, self.canonical, self.curve_class(name))

    def genus(self, name: str) -> Fraction:
        return arithmetic_genus(self, self.curve_class(name))

    def gram(self, names) -> list[list[int]]:
        classes = [self.curve_class(n) for n in names]
        return [[intersect(self, a, b) for b in classes] for a in classes]


def intersect(model: SurfaceModel, a: CurveClass, b: CurveClass) -> int:
    """Intersection number of two classes under the ambient diagonal form."""
    if len(a.coeffs) != model.ambient_dim or len(b.coeffs) != model.ambient_dim:
        raise ModelError("class length does not match the ambient lattice")
    return pairing(a.coeffs, b.coeffs)


def arithmetic_genus(model: SurfaceModel, c: CurveClass) -> Fraction:
    """Genus by adjunction: 1 + (C.C + K.C)/2, always exact."""
    total = intersect(model, c, c) + intersect(model, model.canonical, c)
    assert total % 2 == 0  # the canonical class is characteristic
    return Fraction(1) + Fraction(total, 2)


def _validated(model: SurfaceModel) -> SurfaceModel:
    dim = model.ambient_dim
    if not (1 <= model.rank <= dim):
        raise ModelError(f"rank {model.rank} out of range for ambient dimension {dim}")
    assert model.k_squared == 10 - model.rank
    names = model.tracked
    for name in names:
        c = model.curves[name]
        if len(c.coeffs) != dim:
            raise ModelError(f"curve {name!r} has class length {len(c.coeffs)}, expected {dim}")
        if arithmetic_genus(model, c) != 0:
            raise ModelError(f"curve {name!r} is not a smooth rational class (genus != 0)")
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if model.intersection(a, b) < 0:
                raise ModelError(f"tracked curves {a!r} and {b!r} have negative intersection")
    stray = model.contracted - set(model.curves)
    if stray:
        raise ModelError(f"contracted names not tracked: {sorted(stray)}")
    contracted = sorted(model.contracted)
    for name in contracted:
        if model.self_int(name) >= 0:
            raise NotNegativeDefiniteError(
                f"contracted curve {name!r} has self-intersection {model.self_int(name)} >= 0"
            )
    if not is_negative_definite_matrix(model.gram(contracted)):
        raise NotNegativeDefiniteError(
            f"contracted configuration {contracted} is not negative definite"
        )
    return model


def new_projective_plane() -> SurfaceModel:
    """The plane: rank 1, canonical class -3H, nothing tracked."""
    return _validated(
        SurfaceModel(
            rank=1,
            canonical=CurveClass((-3,)),
            curves={},
            contracted=frozenset(),
            history=(),
        )
    )


def blow_up(model: SurfaceModel, point: PointSpec, exc_name: str) -> SurfaceModel:
    """Blow up a point, appending one exceptional basis direction.

    Curves named in the point spec lose the new basis class (strict
    transform); the canonical class gains it. Only smooth models (empty
    contracted set) may be blown up.
    """
    if model.contracted:
        raise ModelError("cannot blow up a model with contracted curves")
    if exc_name in model.curves:
        raise ModelError(f"curve name {exc_name!r} already tracked")
    for n in point.names:
        if n not in model.curves:
            raise ModelError(f"unknown curve {n!r} in blow-up point")
    if point.kind == AT_INTERSECTION:
        a, b = point.names
        if model.intersection(a, b) < 1:
            raise ModelError(f"curves {a!r} and {b!r} do not meet; no intersection to blow up")
    curves = {}
    for name, c in model.curves.items():
        through = -1 if name in point.names else 0
        curves[name] = CurveClass(c.coeffs + (through,))
    new_index = model.ambient_dim
    curves[exc_name] = CurveClass((0,) * new_index + (1,))
    record = BlowupRecord(point=point, name=exc_name, basis_index=new_index)
    return _validated(
        SurfaceModel(
            rank=model.rank + 1,
            canonical=CurveClass(model.canonical.coeffs + (1,)),
            curves=curves,
            contracted=frozenset(),
            history=model.history + (record,),
        )
    )


def blow_down(model: SurfaceModel, exc_name: str) -> SurfaceModel:
    """Contract a (-1)-curve to a smooth point.

    Every remaining class D becomes its pushforward representative
    D + (D.e)e, orthogonal to e; the canonical class transforms the same
    way (K.e = -1, so K maps to K - e). Ambient coordinates stay fixed;
    the rank counter drops.
    """
    e = model.curve_class(exc_name)
    if model.self_int(exc_name) != -1 or model.k_dot(exc_name) != -1:
        raise ModelError(f"{exc_name!r} is not a (-1)-curve; cannot blow down")
    curves = {}
    for name, c in model.curves.items():
        if name == exc_name:
            continue
        curves[name] = c + e.scaled(intersect(model, c, e))
    canonical = model.canonical + e.scaled(intersect(model, model.canonical, e))
    return _validated(
        SurfaceModel(
            rank=model.rank - 1,
            canonical=canonical,
            curves=curves,
            contracted=model.contracted - {exc_name},
            history=model.history,
        )
    )


def declare_contracted(model: SurfaceModel, names) -> SurfaceModel:
    """Extend the contracted set, validating Artin contractibility."""
    names = frozenset(names)
    unknown = names - set(model.curves)
    if unknown:
        raise ModelError(f"cannot contract unknown curves: {sorted(unknown)}")
    return _validated(replace(model, contracted=model.contracted | names))
