"""Seeded random dl-program generator.

Instances are emitted as canonical .onto/.dlp text (identical seed and
config give byte-identical files) and sized so that |HB_P| stays within
the enumeration caps of the property suites.  Queries are biased toward
the concepts a dl-atom actually feeds, so the generated atoms exercise
the interesting cases (nonmonotonicity, tautologies, semantics
divergence) instead of being vacuously true or false.

Generation guarantees syntactic validity only; the ontology_mode knob
additionally forces consistency or inconsistency by construction when a
suite needs it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .parser import parse_ontology, parse_program
from .syntax import DLProgram


@dataclass(frozen=True)
class GeneratorConfig:
    max_constants: int = 2
    max_predicates: int = 3
    max_concepts: int = 2
    max_rules: int = 4
    max_body: int = 2
    max_inputs: int = 2
    ontology_axiom_budget: int = 2
    seed: int = 0
    # harness knobs
    allow_constraint: bool = True       # ⊖ may appear
    force_constraint: bool = False      # at least one ⊖ pair
    constraint_in_neg: bool = True      # ⊖-atoms may occur under not
    ontology_mode: str = "any"          # any | consistent | inconsistent
    allow_equality: bool = True         # == axioms may appear in the ontology
    use_roles: bool = False             # feed a role through a binary predicate
    max_dl_atoms: int = 3
    hb_limit: int = 5                   # keep |HB_P| within the suite caps

    def validate(self):
        if any(
            v < 0
            for v in (
                self.max_constants,
                self.max_predicates,
                self.max_concepts,
                self.max_rules,
                self.max_body,
                self.max_inputs,
                self.ontology_axiom_budget,
            )
        ):
            raise ValueError("generator bounds must be nonnegative")
        if self.ontology_mode not in ("any", "consistent", "inconsistent"):
            raise ValueError(f"bad ontology_mode {self.ontology_mode!r}")
        return self


CONSTANT_POOL = ("a", "b", "c")
PREDICATE_POOL = ("p", "q", "r", "s", "t")
BINARY_PREDICATE_POOL = ("u", "v")
CONCEPT_POOL = ("S1", "S2", "S3")


def generate_texts(config: GeneratorConfig):
    """One instance as (onto_text, dlp_text)."""
    config.validate()
    rng = random.Random(config.seed)
    n_consts = rng.randint(1, max(1, config.max_constants))
    # unary predicates cost n_consts Herbrand atoms each
    max_preds = max(1, min(config.max_predicates, config.hb_limit // n_consts))
    n_preds = rng.randint(1, max_preds)
    if config.use_roles:
        # a binary input predicate costs n_consts^2 Herbrand atoms
        n_consts = 1 if config.hb_limit < 6 else min(n_consts, 2)
        n_preds = 1
    consts = list(CONSTANT_POOL[:n_consts])
    preds = list(PREDICATE_POOL[:n_preds])
    concepts = list(CONCEPT_POOL[: max(1, rng.randint(1, max(1, config.max_concepts)))])

    onto_lines = [f"concept {', '.join(concepts)}.", f"individual {', '.join(consts)}."]
    if config.use_roles:
        onto_lines.append("role R1.")
    onto_lines += _ontology_axioms(rng, config, concepts, consts)
    onto_text = "\n".join(onto_lines) + "\n"

    dl_atoms = []

    def dl_atom_text(force_minus=False, allow_minus=True):
        reusable = [a for a in dl_atoms if allow_minus or "?=" not in a]
        if reusable and (len(dl_atoms) >= config.max_dl_atoms or rng.random() < 0.3):
            if not force_minus or any("?=" in a for a in reusable):
                pool = [a for a in reusable if "?=" in a] if force_minus else reusable
                return rng.choice(pool)
        n_inputs = rng.randint(1, max(1, config.max_inputs))
        pairs, used = [], []
        has_minus = False
        role_fed = False
        for i in range(n_inputs):
            op = _draw_op(rng, config, allow_minus)
            if force_minus and i == n_inputs - 1 and not has_minus:
                op = "?="
            has_minus = has_minus or op == "?="
            if config.use_roles and rng.random() < 0.5:
                role_fed = True
                pairs.append(f"R1 {op} {rng.choice(BINARY_PREDICATE_POOL)}")
            else:
                target = rng.choice(concepts)
                used.append((target, op))
                pairs.append(f"{target} {op} {rng.choice(preds)}")
        if role_fed and (not used or rng.random() < 0.7):
            shape = rng.choice(["exists R1 . {c}", "forall R1 . {c}", "!(exists R1 . {c})"])
            query = shape.format(c=rng.choice(concepts + ["TOP"]))
            if rng.random() < 0.2:
                query = "-" + query
        else:
            query = _query_text(rng, concepts, used)
        term = rng.choice(consts)
        text = f"DL[{', '.join(pairs)} ; {query}]({term})"
        dl_atoms.append(text)
        return text

    rules = []
    n_rules = rng.randint(1, config.max_rules) if config.max_rules else 0
    for _ in range(n_rules):
        head = f"{rng.choice(preds)}({rng.choice(consts)})"
        body = []
        for _ in range(rng.randint(0, config.max_body)):
            negated = rng.random() < 0.4
            if rng.random() < 0.6:
                allow_minus = config.constraint_in_neg or not negated
                body.append(("not " if negated else "") + dl_atom_text(allow_minus=allow_minus))
            else:
                body.append(
                    ("not " if negated else "") + f"{rng.choice(preds)}({rng.choice(consts)})"
                )
        rules.append(head + (" :- " + ", ".join(body) if body else "") + ".")
    if config.force_constraint and not any("?=" in r for r in rules):
        head = f"{preds[0]}({consts[0]})"
        rules.append(f"{head} :- {dl_atom_text(force_minus=True)}.")
    dlp_text = "\n".join(rules) + ("\n" if rules else "")
    return onto_text, dlp_text


def _draw_op(rng, config, allow_minus):
    roll = rng.random()
    if config.allow_constraint and allow_minus and roll < 0.45:
        return "?="
    if roll < 0.6:
        return "-="
    return "+="


def _query_text(rng, concepts, used_pairs):
    """Query over the concepts the atom feeds, matching the operator's
    polarity often enough to produce satisfiable-but-input-sensitive
    atoms."""
    def polar(target, op):
        if op == "+=":
            return target
        return f"!{target}"

    if used_pairs and rng.random() < 0.85:
        picks = [polar(t, op) for t, op in used_pairs]
        if len(picks) >= 2 and rng.random() < 0.5:
            op = rng.choice(["&", "|"])
            lhs, rhs = picks[0], picks[1]
            body = f"({lhs} {op} {rhs})"
        else:
            body = rng.choice(picks)
        if rng.random() < 0.2:
            body = f"!{body}" if not body.startswith("!") else body[1:]
    else:
        body = rng.choice(concepts)
        if rng.random() < 0.3:
            body = "!" + body
    neg = "-" if rng.random() < 0.15 else ""
    return neg + body


def _ontology_axioms(rng, config, concepts, consts):
    mode = config.ontology_mode
    out = []
    budget = rng.randint(0, config.ontology_axiom_budget)
    if mode == "inconsistent":
        c, d = rng.choice(concepts), rng.choice(consts)
        out.append(f"axiom {c}({d}).")
        out.append(f"axiom -{c}({d}).")
    safe = mode == "consistent"
    for _ in range(budget):
        roll = rng.random()
        if roll < 0.45:
            out.append(f"axiom {rng.choice(concepts)} [= {rng.choice(concepts)}.")
        elif roll < 0.8 or safe:
            out.append(f"axiom {rng.choice(concepts)}({rng.choice(consts)}).")
        elif roll < 0.9:
            out.append(f"axiom -{rng.choice(concepts)}({rng.choice(consts)}).")
        elif len(consts) > 1 and config.allow_equality:
            out.append(f"axiom {consts[0]} == {consts[1]}.")
    if safe:
        # inclusions plus positive assertions are satisfiable (everything true)
        out = [l for l in out if not l.startswith("axiom -")]
    return out


def generate_program(config: GeneratorConfig) -> DLProgram:
    onto_text, dlp_text = generate_texts(config)
    return parse_program(dlp_text, ontology=parse_ontology(onto_text))


def instance_stream(config: GeneratorConfig, count: int):
    """(index, program) pairs with per-instance seeds derived from the base."""
    for i in range(count):
        yield i, generate_program(replace(config, seed=config.seed * 1_000_003 + i))
