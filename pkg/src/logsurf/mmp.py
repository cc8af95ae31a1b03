"""Contraction loop on a tracked configuration, with a per-step auditor.

A state is a surface model plus a boundary divisor. Each step contracts one
tracked curve with negative extremal pairing: a (-1)-curve on a smooth
surface is blown down (Castelnuovo), anything else joins the contracted set
after a negative-definiteness check (Artin type). The auditor replays the
whole run on the initial lattice and verifies the effectivity, rank-drop,
classification, and support conditions that make the loop sound.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ModelError, NotNegativeDefiniteError, ScenarioError
from .lattice import (
    PointSpec,
    SurfaceModel,
    blow_down,
    blow_up,
    declare_contracted,
    new_projective_plane,
)
from .singularities import (
    EPS_LOG_TERMINAL,
    NOT_LOG_CANONICAL,
    QDivisor,
    classify,
    log_discrepancies,
    minimal_resolution,
    pullback,
)

CASTELNUOVO = "castelnuovo"
ARTIN_TYPE = "artin-type"


@dataclass(frozen=True)
class MmpState:
    surface: SurfaceModel
    boundary: QDivisor
    step_index: int = 0

    def __post_init__(self):
        for name, c in self.boundary.coefficients:
            if name not in self.surface.curves:
                raise ModelError(f"boundary names unknown curve {name!r}")
            if name in self.surface.contracted and c != 0:
                raise ModelError(f"boundary curve {name!r} is contracted")
            if not (0 <= c <= 1):
                raise ModelError(f"boundary coefficient {c} on {name!r} outside [0, 1]")

    @property
    def rho(self) -> int:
        return self.surface.rank - len(self.surface.contracted)


@dataclass(frozen=True)
class Candidate:
    name: str
    extremal_value: Fraction
    self_int: Fraction


@dataclass(frozen=True)
class MmpStep:
    contracted_curve: str
    extremal_value: Fraction
    self_int: Fraction
    kind: str
    post_classification: object


@dataclass(frozen=True)
class MinimalOverTracked:
    pass


@dataclass(frozen=True)
class MoriFiberSignal:
    curve: str
    self_int: Fraction


@dataclass(frozen=True)
class Exhausted:
    pass


@dataclass(frozen=True)
class MostNegativeFirst:
    pass


@dataclass(frozen=True)
class NamedOrder:
    names: tuple[str, ...]


def parse_strategy(text: str):
    if text == "most-negative":
        return MostNegativeFirst()
    if text.startswith("named:"):
        names = tuple(n for n in text[len("named:"):].split(",") if n)
        if not names:
            raise ScenarioError("named strategy needs at least one curve name")
        return NamedOrder(names)
    raise ScenarioError(f"unknown strategy {text!r}")


def _mumford_vector(model: SurfaceModel, name: str) -> list[Fraction]:
    """Full pullback class of a tracked curve as a rational vector."""
    vec = [Fraction(x) for x in model.curve_class(name).coeffs]
    if all(model.intersection(name, e) == 0 for e in model.contracted):
        return vec  # disjoint from the contracted set: nothing to correct
    coeffs = pullback(model, QDivisor.from_map({name: 1}))
    for e, c in coeffs.coefficients:
        cls = model.curve_class(e)
        vec = [v + c * x for v, x in zip(vec, cls.coeffs)]
    return vec


def _pair_vectors(u, v) -> Fraction:
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total -= a * b
    return Fraction(total)


def extremal_pairing(model: SurfaceModel, boundary: QDivisor, name: str) -> Fraction:
    """(K + boundary).C on the modeled surface, via the numerical pullback."""
    if name in model.contracted:
        raise ModelError(f"curve {name!r} is contracted; it has no extremal pairing")
    fc = _mumford_vector(model, name)
    log_vec = [Fraction(x) for x in model.canonical.coeffs]
    for b, c in boundary.coefficients:
        cls = model.curve_class(b)
        log_vec = [v + c * x for v, x in zip(log_vec, cls.coeffs)]
    return _pair_vectors(log_vec, fc)


def contracted_self_intersection(model: SurfaceModel, name: str) -> Fraction:
    """C.C on the modeled surface (not on the resolution)."""
    fc = _mumford_vector(model, name)
    return _pair_vectors(fc, fc)


def step_candidates(state: MmpState) -> list[Candidate]:
    """Tracked non-contracted curves with (K + boundary).C < 0, most negative
    first, names breaking ties."""
    model = state.surface
    log_vec = [Fraction(x) for x in model.canonical.coeffs]
    for b, c in state.boundary.coefficients:
        cls = model.curve_class(b)
        log_vec = [v + c * x for v, x in zip(log_vec, cls.coeffs)]
    out = []
    for name in model.tracked:
        if name in model.contracted:
            continue
        fc = _mumford_vector(model, name)
        value = _pair_vectors(log_vec, fc)
        if value < 0:
            out.append(
                Candidate(
                    name=name,
                    extremal_value=value,
                    self_int=_pair_vectors(fc, fc),
                )
            )
    out.sort(key=lambda c: (c.extremal_value, c.name))
    return out


def _apply_contraction(state: MmpState, cand: Candidate) -> tuple[MmpState, str]:
    model = state.surface
    name = cand.name
    if not model.contracted and model.self_int(name) == -1 and model.k_dot(name) == -1:
        new_model = blow_down(model, name)
        kind = CASTELNUOVO
    else:
        new_model = declare_contracted(model, [name])
        kind = ARTIN_TYPE
    new_state = MmpState(
        surface=new_model,
        boundary=state.boundary.without(name),
        step_index=state.step_index + 1,
    )
    assert new_state.rho == state.rho - 1
    return new_state, kind


def contract(state: MmpState, name: str) -> MmpState:
    """One contraction step; the curve must be a contractible candidate."""
    matches = [c for c in step_candidates(state) if c.name == name]
    if not matches:
        raise ModelError(f"{name!r} is not an extremal candidate (needs (K + boundary).C < 0)")
    cand = matches[0]
    if cand.self_int >= 0:
        raise ModelError(
            f"{name!r} has self-intersection {cand.self_int} >= 0; it signals a fiber space, not a contraction"
        )
    new_state, _ = _apply_contraction(state, cand)
    return new_state


@dataclass(frozen=True)
class AuditStep:
    curve: str
    rho_before: int
    rho_after: int
    effectivity_ok: bool
    classification: str
    step3_applicable: bool
    step3_value: Fraction | None
    step3_ok: bool


@dataclass(frozen=True)
class AuditReport:
    initial_rho: int
    rho_sequence: tuple[int, ...]
    smooth_start: bool
    coefficients_bounded: bool
    epsilon: Fraction
    steps: tuple[AuditStep, ...]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class MmpRun:
    steps: tuple[MmpStep, ...]
    outcome: object
    audit: AuditReport | None


def run(state: MmpState, strategy, epsilon=Fraction(0)) -> MmpRun:
    """Drive contractions until nef-over-tracked, a fiber-space signal, or an
    exhausted named strategy; then audit the whole run against the initial
    state."""
    epsilon = Fraction(epsilon)
    initial = state
    steps = []
    queue = list(strategy.names) if isinstance(strategy, NamedOrder) else None
    while True:
        cands = step_candidates(state)
        if not cands:
            outcome = MinimalOverTracked()
            break
        contractible = [c for c in cands if c.self_int < 0]
        if not contractible:
            best = cands[0]
            outcome = MoriFiberSignal(curve=best.name, self_int=best.self_int)
            break
        if queue is None:
            cand = contractible[0]
        else:
            if not queue:
                outcome = Exhausted()
                break
            wanted = queue.pop(0)
            matches = [c for c in contractible if c.name == wanted]
            if not matches:
                raise ScenarioError(
                    f"strategy names {wanted!r} but it is not a contractible candidate at step {state.step_index}"
                )
            cand = matches[0]
        state, kind = _apply_contraction(state, cand)
        steps.append(
            MmpStep(
                contracted_curve=cand.name,
                extremal_value=cand.extremal_value,
                self_int=cand.self_int,
                kind=kind,
                post_classification=classify(state.surface, QDivisor.zero(), epsilon),
            )
        )
        assert len(steps) <= initial.rho - 1
    partial = MmpRun(steps=tuple(steps), outcome=outcome, audit=None)
    audit = audit_run(partial, initial, epsilon)
    return MmpRun(steps=tuple(steps), outcome=outcome, audit=audit)


def _log_coefficient_map(model: SurfaceModel, boundary: QDivisor) -> dict[str, Fraction]:
    """Coefficients, on the initial lattice, of the log pullback of the
    modeled pair: boundary strict transforms keep their coefficients and
    contracted curves get their solved exceptional part."""
    lp = log_discrepancies(model, boundary)
    out = {name: c for name, c in boundary.coefficients}
    out.update(dict(lp.boundary_part.coefficients))
    return out


def audit_run(run_record: MmpRun, initial: MmpState, epsilon) -> AuditReport:
    """Replay a run on the initial lattice and verify the soundness conditions.

    Checks, per step: (a) the pullback of the new pair differs from the old
    one by a coefficient-wise non-negative correction; (b) the active rank
    drops by exactly one; (c) for smooth starts with boundary coefficients
    at most 1 - epsilon, the new surface classifies epsilon-log terminal;
    (d) when the pullback support of the contracted curve on the current
    minimal resolution has no (-1)-curve, the boundary meets the curve
    negatively. Violations are reported, never raised.
    """
    epsilon = Fraction(epsilon)
    violations = []
    smooth_start = not initial.surface.contracted
    cap = Fraction(1) - epsilon
    coefficients_bounded = all(c <= cap for _, c in initial.boundary.coefficients)
    check_classification = smooth_start and coefficients_bounded
    initial_rho = initial.rho
    if len(run_record.steps) > max(initial_rho - 1, 0):
        violations.append(
            f"bound: run has {len(run_record.steps)} steps, limit {initial_rho - 1}"
        )
    shadow = initial.surface
    boundary = initial.boundary
    prev_coeffs = _log_coefficient_map(shadow, boundary)
    rho_sequence = [initial_rho]
    audit_steps = []
    for i, step in enumerate(run_record.steps):
        name = step.contracted_curve
        rho_before = rho_sequence[-1]
        if name in shadow.contracted:
            violations.append(f"rho: step {i} contracts already-contracted curve {name!r}")
            break
        # (d) support condition on the minimal resolution of the current state
        try:
            mr = minimal_resolution(shadow)
            pb = pullback(mr, QDivisor.from_map({name: 1}))
            support = [name] + [e for e, c in pb.coefficients if c > 0]
            has_minus_one = any(
                mr.self_int(x) == -1 and mr.k_dot(x) == -1 for x in support
            )
            step3_applicable = not has_minus_one
            fc = _mumford_vector(mr, name)
            boundary_vec = [Fraction(0)] * mr.ambient_dim
            for b, c in boundary.coefficients:
                cls = mr.curve_class(b)
                boundary_vec = [v + c * x for v, x in zip(boundary_vec, cls.coeffs)]
            step3_value = _pair_vectors(boundary_vec, fc)
            step3_ok = (not step3_applicable) or step3_value < 0
        except ModelError as exc:
            step3_applicable, step3_value, step3_ok = False, None, False
            violations.append(f"step3: step {i} ({name!r}): replay failed: {exc}")
        if not step3_ok and step3_value is not None:
            violations.append(
                f"step3: step {i} ({name!r}): pullback support has no (-1)-curve but boundary pairing {step3_value} >= 0"
            )
        try:
            shadow = declare_contracted(shadow, [name])
        except NotNegativeDefiniteError as exc:
            violations.append(f"effectivity: step {i} ({name!r}): replay failed: {exc}")
            break
        boundary = boundary.without(name)
        new_coeffs = _log_coefficient_map(shadow, boundary)
        bad = sorted(
            n
            for n in set(prev_coeffs) | set(new_coeffs)
            if new_coeffs.get(n, Fraction(0)) > prev_coeffs.get(n, Fraction(0))
        )
        effectivity_ok = not bad
        for n in bad:
            violations.append(
                f"effectivity: step {i} ({name!r}): coefficient of {n!r} rises from "
                f"{prev_coeffs.get(n, Fraction(0))} to {new_coeffs.get(n, Fraction(0))}"
            )
        prev_coeffs = new_coeffs
        rho_after = shadow.rank - len(shadow.contracted)
        if rho_after != rho_before - 1:
            violations.append(f"rho: step {i} ({name!r}): rank drops {rho_before} -> {rho_after}")
        rho_sequence.append(rho_after)
        try:
            label = classify(shadow, QDivisor.zero(), epsilon).classification
        except ModelError as exc:
            label = f"error: {exc}"
        if check_classification and label != EPS_LOG_TERMINAL:
            violations.append(
                f"classification: step {i} ({name!r}): surface classifies {label}, "
                f"expected {EPS_LOG_TERMINAL}"
            )
        audit_steps.append(
            AuditStep(
                curve=name,
                rho_before=rho_before,
                rho_after=rho_after,
                effectivity_ok=effectivity_ok,
                classification=label,
                step3_applicable=step3_applicable,
                step3_value=step3_value,
                step3_ok=step3_ok,
            )
        )
    return AuditReport(
        initial_rho=initial_rho,
        rho_sequence=tuple(rho_sequence),
        smooth_start=smooth_start,
        coefficients_bounded=coefficients_bounded,
        epsilon=epsilon,
        steps=tuple(audit_steps),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    seed: int
    epsilon: Fraction
    max_blowups: int
    total_steps: int
    outcome_counts: tuple[tuple[str, int], ...]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _coefficient_grid(cap: Fraction) -> list[Fraction]:
    # multiples of 1/6 up to the cap, and the cap itself so the bound is tight
    grid = {Fraction(k, 6) for k in range(7) if Fraction(k, 6) <= cap}
    grid.add(cap)
    return sorted(grid)


def _random_tower(rng: random.Random, max_blowups: int) -> SurfaceModel:
    model = new_projective_plane()
    count = rng.randint(1, max_blowups)
    for i in range(count):
        tracked = model.tracked
        if not tracked or rng.random() < 0.5:
            point = PointSpec.general()
        else:
            point = PointSpec.on_curve(rng.choice(tracked))
        model = blow_up(model, point, f"C{i + 1}")
    return model


def verify_smooth_start_runs(trials, seed, epsilon, max_blowups=10) -> VerificationReport:
    """Randomized smooth-start runs; every audit must come back clean.

    Towers of at most max_blowups blow-ups, boundary coefficients drawn from
    the sixths grid capped at 1 - epsilon, greedy strategy. Per-trial seeds
    derive deterministically from the master seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    epsilon = Fraction(epsilon)
    if not (0 <= epsilon <= 1):
        raise ValueError(f"epsilon {epsilon} outside [0, 1]")
    grid = _coefficient_grid(Fraction(1) - epsilon)
    violations = []
    outcome_counts = Counter()
    total_steps = 0
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        model = _random_tower(rng, max_blowups)
        coeffs = {n: rng.choice(grid) for n in model.tracked}
        boundary = QDivisor.from_map({n: c for n, c in coeffs.items() if c != 0})
        state = MmpState(surface=model, boundary=boundary)
        result = run(state, MostNegativeFirst(), epsilon=epsilon)
        total_steps += len(result.steps)
        outcome_counts[type(result.outcome).__name__] += 1
        violations.extend(f"trial {trial}: {v}" for v in result.audit.violations)
    return VerificationReport(
        trials=trials,
        seed=seed,
        epsilon=epsilon,
        max_blowups=max_blowups,
        total_steps=total_steps,
        outcome_counts=tuple(sorted(outcome_counts.items())),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class SearchConfig:
    max_blowups: int = 10
    smooth_starts_only: bool = False
    min_chain_length: int = 1
    max_chain_length: int = 3


@dataclass(frozen=True)
class SearchReport:
    trials: int
    seed: int
    canonical_starts: int
    total_steps: int
    runs_with_not_lc_intermediate: int
    not_lc_steps: int
    samples: tuple[str, ...]


def search_canonical_starts(config: SearchConfig, trials, seed) -> SearchReport:
    """Evidence harness: canonical starts, random boundaries, greedy runs.

    Start surfaces carry a contracted chain of (-2)-curves (or nothing when
    smooth_starts_only), which classifies canonical: total discrepancy >= 0.
    The report counts intermediate surfaces that classify not log canonical
    and asserts nothing beyond the counts.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    assert 1 <= config.min_chain_length <= config.max_chain_length
    grid = _coefficient_grid(Fraction(1))
    canonical_starts = 0
    total_steps = 0
    runs_with = 0
    not_lc_steps = 0
    samples = []
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        chain = 0 if config.smooth_starts_only else rng.randint(
            config.min_chain_length, config.max_chain_length
        )
        model = new_projective_plane()
        chain_names = [f"S{i + 1}" for i in range(chain)]
        built = 0
        if chain:
            # S1 .. S_chain end up as a contracted chain of (-2)-curves
            model = blow_up(model, PointSpec.general(), "S1")
            for i in range(chain):
                parent = f"S{i + 1}"
                child = f"S{i + 2}" if i + 1 < chain else "T1"
                model = blow_up(model, PointSpec.on_curve(parent), child)
            built = chain + 1
        else:
            model = blow_up(model, PointSpec.general(), "T1")
            built = 1
        extra = rng.randint(0, max(config.max_blowups - built, 0))
        for i in range(extra):
            allowed = [n for n in model.tracked if n not in chain_names]
            if not allowed or rng.random() < 0.5:
                point = PointSpec.general()
            else:
                point = PointSpec.on_curve(rng.choice(allowed))
            model = blow_up(model, point, f"T{i + 2}")
        if chain:
            model = declare_contracted(model, chain_names)
        start = classify(model, QDivisor.zero(), Fraction(0))
        assert start.total_discrepancy is not None
        assert start.total_discrepancy >= 0  # canonical start by construction
        canonical_starts += 1
        coeffs = {
            n: rng.choice(grid)
            for n in model.tracked
            if n not in model.contracted
        }
        boundary = QDivisor.from_map({n: c for n, c in coeffs.items() if c != 0})
        result = run(MmpState(surface=model, boundary=boundary), MostNegativeFirst())
        total_steps += len(result.steps)
        bad = [
            s
            for s in result.steps
            if s.post_classification.classification == NOT_LOG_CANONICAL
        ]
        if bad:
            runs_with += 1
            not_lc_steps += len(bad)
            if len(samples) < 5:
                samples.append(
                    f"trial {trial}: step {bad[0].contracted_curve!r} leaves a not-log-canonical surface"
                )
    return SearchReport(
        trials=trials,
        seed=seed,
        canonical_starts=canonical_starts,
        total_steps=total_steps,
        runs_with_not_lc_intermediate=runs_with,
        not_lc_steps=not_lc_steps,
        samples=tuple(samples),
    )
