"""Register automaton model: guards, transitions, validation, completeness.

Data values are opaque naturals; only equality between the input datum and
register contents is ever consulted.  Guards over k registers therefore
factor through "atom assignments": bitmasks sigma where bit j says whether
the input equals register j.  Every assignment is realizable by a concrete
(valuation, datum) pair, which makes the 2^k assignment sweep an exact
completeness/determinism check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

Datum = int
Valuation = tuple  # tuple[Datum, ...] of length k
Configuration = tuple  # (location id, Valuation)

# Guards are enumerated over 2^k atom assignments; reject silly register
# counts instead of silently degrading.
REGISTER_ENUMERATION_CAP = 6


class StructuralError(ValueError):
    """An automaton or argument violates a structural invariant."""


class ResourceCapError(RuntimeError):
    """A computation would exceed a configured resource cap."""


# ---------------------------------------------------------------------------
# Guards


class Constraint:
    """Base class for register-constraint ASTs."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueC(Constraint):
    pass


@dataclass(frozen=True)
class Eq(Constraint):
    register: int


@dataclass(frozen=True)
class And(Constraint):
    left: Constraint
    right: Constraint


@dataclass(frozen=True)
class Not(Constraint):
    operand: Constraint


TRUE = TrueC()


def neq(register: int) -> Constraint:
    return Not(Eq(register))


def or_(left: Constraint, right: Constraint) -> Constraint:
    return Not(And(Not(left), Not(right)))


def conj(parts) -> Constraint:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Constraint:
    parts = list(parts)
    if not parts:
        raise ValueError("disjunction of nothing (no False constraint exists)")
    out = parts[0]
    for p in parts[1:]:
        out = or_(out, p)
    return out


def guard_registers(guard: Constraint) -> set:
    """All register indices referenced by the guard."""
    match guard:
        case TrueC():
            return set()
        case Eq(r):
            return {r}
        case And(l, r):
            return guard_registers(l) | guard_registers(r)
        case Not(g):
            return guard_registers(g)
    raise TypeError(f"not a constraint: {guard!r}")


def eval_constraint(guard: Constraint, valuation: Valuation, datum: Datum) -> bool:
    """Truth of `guard` when reading `datum` under `valuation`."""
    match guard:
        case TrueC():
            return True
        case Eq(r):
            if not 0 <= r < len(valuation):
                raise StructuralError(f"guard register r{r} out of range for k={len(valuation)}")
            return valuation[r] == datum
        case And(l, r):
            return eval_constraint(l, valuation, datum) and eval_constraint(r, valuation, datum)
        case Not(g):
            return not eval_constraint(g, valuation, datum)
    raise TypeError(f"not a constraint: {guard!r}")


def eval_under_assignment(guard: Constraint, sigma: int) -> bool:
    """Truth of `guard` under the atom assignment bitmask `sigma`."""
    match guard:
        case TrueC():
            return True
        case Eq(r):
            return bool(sigma >> r & 1)
        case And(l, r):
            return eval_under_assignment(l, sigma) and eval_under_assignment(r, sigma)
        case Not(g):
            return not eval_under_assignment(g, sigma)
    raise TypeError(f"not a constraint: {guard!r}")


def guard_mask(guard: Constraint, k: int) -> int:
    """Bitmask over all 2^k atom assignments satisfying `guard`."""
    mask = 0
    for sigma in range(1 << k):
        if eval_under_assignment(guard, sigma):
            mask |= 1 << sigma
    return mask


def apply_update(valuation: Valuation, update, datum: Datum) -> Valuation:
    """valuation[update := datum]."""
    for r in update:
        if not 0 <= r < len(valuation):
            raise StructuralError(f"update register r{r} out of range for k={len(valuation)}")
    return tuple(datum if j in update else v for j, v in enumerate(valuation))


# ---------------------------------------------------------------------------
# Automata


@dataclass(frozen=True)
class Transition:
    source: int
    letter: int
    guard: Constraint
    update: frozenset
    target: int


@dataclass(frozen=True)
class Acceptance:
    initial: int
    accepting: frozenset


@dataclass(frozen=True)
class RegisterAutomaton:
    name: str
    locations: tuple
    registers: int
    alphabet: tuple
    transitions: tuple
    acceptance: Optional[Acceptance] = None

    @property
    def k(self) -> int:
        return self.registers

    def location_index(self, name: str) -> int:
        return self.locations.index(name)

    def letter_index(self, name: str) -> int:
        return self.alphabet.index(name)

    def all_registers(self) -> frozenset:
        return frozenset(range(self.registers))

    def transitions_from(self, source: int, letter: int) -> list:
        return [t for t in self.transitions if t.source == source and t.letter == letter]


def mk_transition(source, letter, guard, update, target) -> Transition:
    return Transition(source, letter, guard, frozenset(update), target)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def validate(aut: RegisterAutomaton) -> list:
    """Structural diagnostics; empty list iff the automaton is well formed."""
    diags = []
    n_loc = len(aut.locations)
    n_sym = len(aut.alphabet)
    if aut.registers < 0:
        diags.append(Diagnostic("register-count", f"negative register count {aut.registers}"))
    for kind, names in (("location", aut.locations), ("letter", aut.alphabet)):
        seen = set()
        for name in names:
            if name in seen:
                diags.append(Diagnostic("duplicate-name", f"duplicate {kind} name {name!r}"))
            seen.add(name)
    for i, t in enumerate(aut.transitions):
        if not 0 <= t.source < n_loc:
            diags.append(Diagnostic("dangling-id", f"transition {i}: source {t.source} out of range"))
        if not 0 <= t.target < n_loc:
            diags.append(Diagnostic("dangling-id", f"transition {i}: target {t.target} out of range"))
        if not 0 <= t.letter < n_sym:
            diags.append(Diagnostic("dangling-id", f"transition {i}: letter {t.letter} out of range"))
        bad = [r for r in guard_registers(t.guard) if not 0 <= r < aut.registers]
        if bad:
            diags.append(Diagnostic(
                "guard-register-range",
                f"transition {i}: guard register out of range: {sorted(bad)}"))
        bad = [r for r in t.update if not 0 <= r < aut.registers]
        if bad:
            diags.append(Diagnostic(
                "update-register-range",
                f"transition {i}: update register out of range: {sorted(bad)}"))
    acc = aut.acceptance
    if acc is not None:
        if not 0 <= acc.initial < n_loc:
            diags.append(Diagnostic("dangling-id", f"initial location {acc.initial} out of range"))
        for loc in acc.accepting:
            if not 0 <= loc < n_loc:
                diags.append(Diagnostic("dangling-id", f"accepting location {loc} out of range"))
        full = aut.all_registers()
        for i, t in enumerate(aut.transitions):
            if 0 <= acc.initial < n_loc and t.source == acc.initial and t.update != full:
                diags.append(Diagnostic(
                    "initial-update-rule",
                    f"transition {i} leaves the initial location without updating all registers"))
    return diags


def check_validated(aut: RegisterAutomaton) -> None:
    diags = validate(aut)
    if diags:
        raise StructuralError("; ".join(d.message for d in diags))


def _check_register_cap(aut: RegisterAutomaton, cap: Optional[int]) -> None:
    cap = REGISTER_ENUMERATION_CAP if cap is None else cap
    if aut.registers > cap:
        raise ResourceCapError(
            f"k={aut.registers} exceeds the assignment-enumeration cap {cap}")


def completeness_gap(aut: RegisterAutomaton, cap: Optional[int] = None):
    """First (location, letter, sigma) cell with no enabled transition, or None."""
    _check_register_cap(aut, cap)
    k = aut.registers
    for loc in range(len(aut.locations)):
        for letter in range(len(aut.alphabet)):
            covered = 0
            for t in aut.transitions:
                if t.source == loc and t.letter == letter:
                    covered |= guard_mask(t.guard, k)
            if covered != (1 << (1 << k)) - 1:
                for sigma in range(1 << k):
                    if not covered >> sigma & 1:
                        return loc, letter, sigma
    return None


def is_complete(aut: RegisterAutomaton, cap: Optional[int] = None) -> bool:
    return completeness_gap(aut, cap) is None


def determinism_conflict(aut: RegisterAutomaton, cap: Optional[int] = None):
    """First (location, letter, sigma, i, j) with two enabled transitions, or None."""
    _check_register_cap(aut, cap)
    k = aut.registers
    for loc in range(len(aut.locations)):
        for letter in range(len(aut.alphabet)):
            hits = [(i, guard_mask(t.guard, k)) for i, t in enumerate(aut.transitions)
                    if t.source == loc and t.letter == letter]
            for sigma in range(1 << k):
                enabled = [i for i, m in hits if m >> sigma & 1]
                if len(enabled) > 1:
                    return loc, letter, sigma, enabled[0], enabled[1]
    return None


def is_deterministic(aut: RegisterAutomaton, cap: Optional[int] = None) -> bool:
    return determinism_conflict(aut, cap) is None


def fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def complete_with_sink(aut: RegisterAutomaton, cap: Optional[int] = None,
                       skip=()) -> RegisterAutomaton:
    """Total completion: route every uncovered (location, letter) cell to a sink.

    The added guard is the complement of the disjunction of the cell's
    existing guards, so exactly the uncovered assignments are redirected.
    Locations in `skip` keep their gaps (used by the non-emptiness reduction,
    whose accepting location must stay exit-free until the construction adds
    its own loops).  Already-complete automata are returned unchanged.
    """
    _check_register_cap(aut, cap)
    k = aut.registers
    full = (1 << (1 << k)) - 1
    gaps = []
    for loc in range(len(aut.locations)):
        if loc in skip:
            continue
        for letter in range(len(aut.alphabet)):
            guards = [t.guard for t in aut.transitions if t.source == loc and t.letter == letter]
            covered = 0
            for g in guards:
                covered |= guard_mask(g, k)
            if covered != full:
                gap_guard = TRUE if not guards else Not(disj(guards))
                gaps.append((loc, letter, gap_guard))
    if not gaps:
        return aut
    sink = len(aut.locations)
    locations = aut.locations + (fresh_name("sink", aut.locations),)
    new = [mk_transition(loc, letter, guard, (), sink) for loc, letter, guard in gaps]
    new += [mk_transition(sink, letter, TRUE, (), sink) for letter in range(len(aut.alphabet))]
    return RegisterAutomaton(
        name=aut.name,
        locations=locations,
        registers=aut.registers,
        alphabet=aut.alphabet,
        transitions=aut.transitions + tuple(new),
        acceptance=aut.acceptance,
    )
