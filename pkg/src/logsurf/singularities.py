"""Pullbacks, discrepancies, and epsilon-classification of contractions.

All solves are exact. The classification routines see a surface through its
tracked resolution: the contracted set defines the singularities, boundary
curves contribute their own coefficients, and everything is compared against
the -1 + epsilon thresholds with exact rationals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ModelError, MultiEdgeError
from .lattice import SurfaceModel, blow_down
from .linalg import solve_exact

NEG_INFINITY = float("-inf")

EPS_LOG_TERMINAL = "eps-log-terminal"
EPS_LOG_CANONICAL = "eps-log-canonical"
NOT_LOG_CANONICAL = "not-log-canonical"
UNCLASSIFIABLE_SNC = "unclassifiable-snc"


@dataclass(frozen=True)
class QDivisor:
    """A rational divisor supported on named tracked curves.

    Entries are kept name-sorted; explicit zero coefficients are allowed and
    ignored by `support`.
    """

    coefficients: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        names = [n for n, _ in self.coefficients]
        assert names == sorted(names) and len(names) == len(set(names))
        assert all(isinstance(c, Fraction) for _, c in self.coefficients)

    @classmethod
    def from_map(cls, mapping) -> "QDivisor":
        items = tuple(sorted((n, Fraction(c)) for n, c in dict(mapping).items()))
        return cls(items)

    @classmethod
    def zero(cls) -> "QDivisor":
        return cls(())

    def coefficient(self, name: str) -> Fraction:
        for n, c in self.coefficients:
            if n == name:
                return c
        return Fraction(0)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.coefficients)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(n for n, c in self.coefficients if c != 0)

    def as_map(self) -> dict[str, Fraction]:
        return dict(self.coefficients)

    def without(self, name: str) -> "QDivisor":
        return QDivisor(tuple((n, c) for n, c in self.coefficients if n != name))


@dataclass(frozen=True)
class LogPullback:
    """Exceptional data of a log pullback over the contracted set.

    boundary_part holds the coefficients g_i making
    K + (boundary strict transform) + sum g_i E_i orthogonal to every
    contracted E_j; discrepancies are their negatives.
    """

    boundary_part: QDivisor
    discrepancies: QDivisor


@dataclass(frozen=True)
class SingularityClass:
    total_discrepancy: Fraction | float | None
    classification: str
    mr_total_discrepancy: Fraction
    mr_classification: str
    epsilon: Fraction


def _check_boundary(model: SurfaceModel, boundary: QDivisor) -> None:
    for name, c in boundary.coefficients:
        if name not in model.curves:
            raise ModelError(f"boundary names unknown curve {name!r}")
        if name in model.contracted and c != 0:
            raise ModelError(f"boundary curve {name!r} is contracted; fold it into the pullback instead")
        if not (0 <= c <= 1):
            raise ModelError(f"boundary coefficient {c} on {name!r} outside [0, 1]")


def _fraction_pair(model: SurfaceModel, u, v) -> Fraction:
    # same diagonal form as lattice pairing, over rational coefficient vectors
    assert len(u) == len(v) == model.ambient_dim
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total -= a * b
    return Fraction(total)


def pullback(model: SurfaceModel, divisor: QDivisor) -> QDivisor:
    """Numerical pullback coefficients c_i with (D + sum c_i E_i).E_j = 0.

    The divisor must be supported away from the contracted set. Effective
    divisors get non-negative coefficients; that sign is re-asserted on the
    solution.
    """
    for name in divisor.names:
        if name not in model.curves:
            raise ModelError(f"divisor names unknown curve {name!r}")
        if name in model.contracted:
            raise ModelError(f"divisor curve {name!r} is contracted")
    exceptional = sorted(model.contracted)
    if not exceptional:
        return QDivisor.zero()
    gram = model.gram(exceptional)
    rhs = []
    for e in exceptional:
        dot = sum(
            (c * model.intersection(name, e) for name, c in divisor.coefficients),
            Fraction(0),
        )
        rhs.append(-dot)
    coeffs = solve_exact(gram, rhs)
    for row, target in zip(gram, rhs):
        # orthogonality, re-verified exactly
        assert sum(ci * gij for ci, gij in zip(coeffs, row)) == target
    if all(c >= 0 for _, c in divisor.coefficients):
        assert all(c >= 0 for c in coeffs), "negativity lemma violated; model inconsistent"
    return QDivisor(tuple(zip(exceptional, coeffs)))


def log_discrepancies(model: SurfaceModel, boundary: QDivisor) -> LogPullback:
    """Solve for the exceptional part of the log pullback.

    Finds g_i with (K + boundary strict transform + sum g_i E_i).E_j = 0
    for every contracted E_j, and returns both g_i and the discrepancies
    a_i = -g_i. The orthogonality is re-verified by direct pairing after
    the solve.
    """
    _check_boundary(model, boundary)
    exceptional = sorted(model.contracted)
    if not exceptional:
        return LogPullback(QDivisor.zero(), QDivisor.zero())
    for name in model.tracked:
        # adjunction for genus-0 classes, cross-checking the tracked canonical
        assert model.k_dot(name) == -2 - model.self_int(name)
    gram = model.gram(exceptional)
    rhs = []
    for e in exceptional:
        dot = Fraction(model.k_dot(e))
        for name, c in boundary.coefficients:
            dot += c * model.intersection(name, e)
        rhs.append(-dot)
    g = solve_exact(gram, rhs)
    dim = model.ambient_dim
    log_vector = [Fraction(x) for x in model.canonical.coeffs]
    for name, c in boundary.coefficients:
        cls = model.curve_class(name)
        log_vector = [v + c * x for v, x in zip(log_vector, cls.coeffs)]
    for name, gi in zip(exceptional, g):
        cls = model.curve_class(name)
        log_vector = [v + gi * x for v, x in zip(log_vector, cls.coeffs)]
    for name in exceptional:
        e_vec = [Fraction(x) for x in model.curve_class(name).coeffs]
        assert _fraction_pair(model, log_vector, e_vec) == 0
    assert len(log_vector) == dim
    boundary_part = QDivisor(tuple(zip(exceptional, g)))
    discrepancies = QDivisor(tuple((n, -gi) for n, gi in zip(exceptional, g)))
    return LogPullback(boundary_part=boundary_part, discrepancies=discrepancies)


def minimal_resolution(model: SurfaceModel) -> SurfaceModel:
    """Blow down contracted (-1)-curves until none remain.

    Candidates are processed in ascending name order, so the result is
    deterministic. The output represents the same surface through its
    minimal desingularization.
    """
    while True:
        ready = [
            n
            for n in sorted(model.contracted)
            if model.self_int(n) == -1 and model.k_dot(n) == -1
        ]
        if not ready:
            return model
        model = blow_down(model, ready[0])


def total_discrepancy_snc(coefficients, edges) -> Fraction | float:
    """Total discrepancy of a simple normal crossing configuration.

    `coefficients` maps vertex name -> coefficient b (so the discrepancy
    of the vertex itself is -b); `edges` lists transverse intersection
    points as name pairs. Any coefficient above 1 sinks the total to
    negative infinity. Otherwise node blow-ups can only produce
    coefficients b_i + b_j - 1 and deeper candidates never undercut the
    first level, so the total is
    min(1, min_i(-b_i), min over edges (1 - b_i - b_j)).
    """
    b = {name: Fraction(c) for name, c in dict(coefficients).items()}
    counts = Counter()
    for a, d in edges:
        if a == d:
            raise MultiEdgeError(f"vertex {a!r} meets itself; not simple normal crossing")
        assert a in b and d in b, "edge endpoint is not a vertex"
        counts[tuple(sorted((a, d)))] += 1
    multi = [pair for pair, k in counts.items() if k >= 2]
    if multi:
        raise MultiEdgeError(f"multiple intersection points between {multi[0][0]!r} and {multi[0][1]!r}")
    if any(c > 1 for c in b.values()):
        return NEG_INFINITY
    best = Fraction(1)
    for c in b.values():
        best = min(best, -c)
    for a, d in counts:
        best = min(best, 1 - b[a] - b[d])
    return best


def _threshold_label(total, epsilon: Fraction) -> str:
    bar = Fraction(-1) + epsilon
    if total > bar:
        return EPS_LOG_TERMINAL
    if total == bar:
        return EPS_LOG_CANONICAL
    return NOT_LOG_CANONICAL


def classify(model: SurfaceModel, boundary: QDivisor, epsilon) -> SingularityClass:
    """Epsilon-classification of the modeled pair, total and MR variants.

    Works on the minimal resolution: exceptional coefficients come from the
    log pullback there, boundary curves contribute their own coefficients,
    and the total discrepancy is the SNC minimum over that configuration.
    A multi-edge configuration cannot be treated as simple normal crossing
    and comes back unclassifiable (total None); the MR numbers are still
    exact.
    """
    epsilon = Fraction(epsilon)
    if not (0 <= epsilon <= 1):
        raise ModelError(f"epsilon {epsilon} outside [0, 1]")
    _check_boundary(model, boundary)
    mr = minimal_resolution(model)
    lp = log_discrepancies(mr, boundary)
    mr_values = [a for _, a in lp.discrepancies.coefficients]
    mr_values.extend(-boundary.coefficient(n) for n in boundary.support)
    mr_total = min(mr_values, default=Fraction(1))
    mr_total = min(mr_total, Fraction(1))
    coefficients = dict(lp.boundary_part.coefficients)
    for n in boundary.support:
        coefficients[n] = boundary.coefficient(n)
    vertex_names = sorted(coefficients)
    edges = []
    for i, a in enumerate(vertex_names):
        for d in vertex_names[i + 1 :]:
            edges.extend([(a, d)] * mr.intersection(a, d))
    try:
        total = total_discrepancy_snc(coefficients, edges)
    except MultiEdgeError:
        return SingularityClass(
            total_discrepancy=None,
            classification=UNCLASSIFIABLE_SNC,
            mr_total_discrepancy=mr_total,
            mr_classification=_threshold_label(mr_total, epsilon),
            epsilon=epsilon,
        )
    assert total <= mr_total  # the total ranges over strictly more divisors
    return SingularityClass(
        total_discrepancy=total,
        classification=_threshold_label(total, epsilon),
        mr_total_discrepancy=mr_total,
        mr_classification=_threshold_label(mr_total, epsilon),
        epsilon=epsilon,
    )
