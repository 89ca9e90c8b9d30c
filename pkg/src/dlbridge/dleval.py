"""Satisfaction of (dl-)atoms and bodies, and the monotonicity classifier.

An EvalContext bundles a program with its grounded ontology and the
memo caches that dominate runtime: dl-atom satisfaction is keyed by the
interpretation restricted to the atom's input atoms (sound because
J |= A iff J restricted to A's input predicates |= A).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import ontology as onto_mod
from .syntax import BodyLiteral, DLAtom, DLProgram


class SearchCapExceeded(Exception):
    pass


DEFAULT_PAIR_CAP = 12  # max input atoms per dl-atom for the 3^k pair sweep


class EvalContext:
    """Evaluation state for one dl-program."""

    def __init__(self, program: DLProgram, equality_mode="congruence"):
        self.program = program
        self.hb = program.herbrand_base
        self.hb_set = frozenset(self.hb)
        self.grounded = onto_mod.ground(
            program.ontology, program.signature, equality_mode=equality_mode
        )
        self._sat_cache = {}
        self._input_atoms = {}
        self._mono_cache = {}
        self._answer_cache = {}

    def input_atoms(self, atom: DLAtom):
        """Ground atoms over the dl-atom's input predicates, HB order."""
        got = self._input_atoms.get(atom)
        if got is None:
            preds = dict(atom.input_preds)
            got = tuple(a for a in self.hb if a.pred in preds and len(a.args) == preds[a.pred])
            self._input_atoms[atom] = got
        return got

    def dl_satisfies(self, interp, atom: DLAtom) -> bool:
        restricted = frozenset(interp) & frozenset(self.input_atoms(atom))
        key = (atom, restricted)
        hit = self._sat_cache.get(key)
        if hit is None:
            update = onto_mod.build_update(restricted, atom.inputs, self.program.constants)
            hit = onto_mod.o_entails(self.grounded, update, atom.query)
            self._sat_cache[key] = hit
        return hit


_contexts = {}


def get_context(program: DLProgram) -> EvalContext:
    ctx = _contexts.get(program)
    if ctx is None:
        if len(_contexts) > 4096:
            _contexts.clear()
        ctx = EvalContext(program)
        _contexts[program] = ctx
    return ctx


def satisfies(interp, atom, program_or_ctx) -> bool:
    """I |=_O A for a plain atom or a dl-atom."""
    ctx = as_context(program_or_ctx)
    if isinstance(atom, DLAtom):
        return ctx.dl_satisfies(interp, atom)
    return atom in interp


def as_context(program_or_ctx) -> EvalContext:
    if isinstance(program_or_ctx, EvalContext):
        return program_or_ctx
    return get_context(program_or_ctx)


def satisfies_literal(interp, lit: BodyLiteral, ctx) -> bool:
    v = satisfies(interp, lit.atom, ctx)
    return not v if lit.negated else v


def satisfies_body(interp, body, program_or_ctx) -> bool:
    ctx = as_context(program_or_ctx)
    return all(satisfies_literal(interp, lit, ctx) for lit in body)


def is_model(interp, program_or_ctx) -> bool:
    ctx = as_context(program_or_ctx)
    interp = frozenset(interp)
    return all(
        not satisfies_body(interp, r.body, ctx) or r.head in interp
        for r in ctx.program.rules
    )


def up_to_satisfies(lower, upper, lit: BodyLiteral, program_or_ctx) -> bool:
    """(E,I) |=_O lit: satisfaction by every F between E and I.

    For plain atoms this is membership in E (positive) or absence from I
    (negated).  For dl-atoms the F-sweep is restricted to the atom's
    input atoms, which decide its satisfaction.
    """
    ctx = as_context(program_or_ctx)
    lower, upper = frozenset(lower), frozenset(upper)
    if not lower <= upper:
        raise ValueError("up-to satisfaction needs E ⊆ I")
    if not lit.is_dl:
        return (lit.atom not in upper) if lit.negated else (lit.atom in lower)
    inputs = frozenset(ctx.input_atoms(lit.atom))
    base = lower & inputs
    free = sorted(upper & inputs - base, key=lambda a: (a.pred, a.args))
    if lit.negated:
        return not any(
            ctx.dl_satisfies(base | set(extra), lit.atom)
            for extra in _subsets(free)
        )
    return all(
        ctx.dl_satisfies(base | set(extra), lit.atom) for extra in _subsets(free)
    )


def up_to_satisfies_body(lower, upper, body, ctx) -> bool:
    return all(up_to_satisfies(lower, upper, lit, ctx) for lit in body)


def _subsets(items):
    for k in range(len(items) + 1):
        yield from combinations(items, k)


# ---------------------------------------------------------------------------
# Monotonicity


@dataclass(frozen=True)
class AtomMonotonicity:
    atom: DLAtom
    monotonic: bool
    witness: tuple = None  # (I_A, I'_A) with I_A |= atom, I'_A not|= atom


@dataclass(frozen=True)
class MonotonicityReport:
    per_atom: tuple  # of AtomMonotonicity, program order
    monotonic_atoms: frozenset  # DL+_P
    nonmonotonic_atoms: frozenset  # DL?_P

    def witness_for(self, atom):
        for rec in self.per_atom:
            if rec.atom == atom:
                return rec.witness
        return None


def is_monotonic(atom: DLAtom, program_or_ctx, cap=DEFAULT_PAIR_CAP):
    """Exhaustive pair search over restrictions to the atom's input atoms.

    Pairs (I_A, I'_A) with I_A ⊆ I'_A are swept in order of growing
    |I'_A \\ I_A| so the first witness found is difference-minimal.
    Returns an AtomMonotonicity record.
    """
    ctx = as_context(program_or_ctx)
    hit = ctx._mono_cache.get(atom)
    if hit is not None:
        return hit
    inputs = ctx.input_atoms(atom)
    k = len(inputs)
    if k > cap:
        raise SearchCapExceeded(
            f"dl-atom has {k} input atoms; pair sweep cap is {cap} (3^k pairs)"
        )
    sat = {}

    def satisfied(subset):
        v = sat.get(subset)
        if v is None:
            v = ctx.dl_satisfies(set(subset), atom)
            sat[subset] = v
        return v

    result = None
    for d in range(1, k + 1):
        for added in combinations(inputs, d):
            rest = [a for a in inputs if a not in added]
            for base in _subsets(rest):
                lower = frozenset(base)
                upper = lower | frozenset(added)
                if satisfied(lower) and not satisfied(upper):
                    result = AtomMonotonicity(atom, False, (lower, upper))
                    break
            if result:
                break
        if result:
            break
    if result is None:
        result = AtomMonotonicity(atom, True)
    ctx._mono_cache[atom] = result
    return result


@dataclass(frozen=True)
class ProgramClass:
    positive: bool
    canonical: bool
    normal: bool
    report: MonotonicityReport

    @property
    def labels(self):
        out = [
            name
            for name, flag in (
                ("positive", self.positive),
                ("canonical", self.canonical),
                ("normal", self.normal),
            )
            if flag
        ]
        return out or ["arbitrary"]


def classify(program_or_ctx, cap=DEFAULT_PAIR_CAP) -> ProgramClass:
    """Program class flags plus the monotonicity report (DL+_P / DL?_P)."""
    ctx = as_context(program_or_ctx)
    records = tuple(is_monotonic(a, ctx, cap) for a in ctx.program.dl_atoms)
    mono = frozenset(r.atom for r in records if r.monotonic)
    nonmono = frozenset(r.atom for r in records if not r.monotonic)
    report = MonotonicityReport(records, mono, nonmono)
    canonical = not any(a.mentions_constraint_op for a in ctx.program.dl_atoms)
    normal = not any(a.mentions_constraint_op for a in mono)
    not_free = not any(l.negated for r in ctx.program.rules for l in r.body)
    positive = not_free and not nonmono
    return ProgramClass(positive, canonical, normal, report)


def nonmonotonic_atoms(program_or_ctx, cap=DEFAULT_PAIR_CAP):
    """DL?_P, the exact set of nonmonotonic dl-atoms."""
    return classify(program_or_ctx, cap).report.nonmonotonic_atoms
