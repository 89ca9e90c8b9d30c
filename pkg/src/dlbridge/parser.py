"""Parsers and serializers for the three surface formats.

.onto  — ontology: declarations (`concept`, `role`, `individual`) then
         `axiom ... .` statements.
.dlp   — dl-program: optional `#ontology "file"` header, then rules
         `head :- lit, ..., lit.` where a literal may be a dl-atom
         `DL[S += p, S' ?= q ; Q](args)`.
.dth   — default theory: `formula.` lines for the background and
         `default: alpha : beta1, beta2 / gamma.` lines; an optional
         `#equality true.` header switches ⊢ to true equality.

All parsers are strict UTF-8 and report 1-based line/column positions.
parse(serialize(x)) is structurally x; serialize(parse(text)) is a
canonical form (stable after one pass).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import fol, syntax
from .fol import EQ, FALSE, TRUE, Atom, FAtom, Formula, implies
from .syntax import (
    BodyLiteral,
    CAnd,
    CAtLeast,
    CAtMost,
    CBot,
    CExists,
    CForall,
    CName,
    CNot,
    COneOf,
    COr,
    CTop,
    ConceptAssertion,
    ConceptInclusion,
    Default,
    DefaultTheory,
    DLAtom,
    DLProgram,
    DLQuery,
    Equality,
    Inequality,
    InputPair,
    Ontology,
    OP_MINUS,
    OP_PLUS,
    Role,
    RoleAssertion,
    RoleInclusion,
    Rule,
    RuleAtom,
    Signature,
    Transitivity,
)


class ParseError(Exception):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def decode_utf8(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        prefix = data[: e.start].decode("utf-8", errors="replace")
        line = prefix.count("\n") + 1
        col = len(prefix) - (prefix.rfind("\n") + 1) + 1
        raise ParseError(f"invalid UTF-8 byte {data[e.start]:#x}", line, col) from None


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<str>"[^"\n]*")
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>:-|\[=|\+=|-=|\?=|==|!=|->|\^-|>=|<=|[#.,;:()\[\]{}!&|/-])
    """,
    re.VERBOSE,
)

@dataclass
class Token:
    kind: str  # "name" | "num" | "sym" | "str" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.start() != pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text):
        return self.peek().text == text and self.peek().kind != "eof"

    def take(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        t = self.peek()
        if t.text != text or t.kind == "eof":
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def expect_name(self, what="name"):
        t = self.peek()
        if t.kind != "name":
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def error(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)


# ---------------------------------------------------------------------------
# Concept expressions


def _parse_role(ts: TokenStream) -> Role:
    name = ts.expect_name("role name").text
    if ts.take("^-"):
        return Role(name, inverse=True)
    return Role(name)


def parse_concept(ts: TokenStream):
    """expr := term (('&'|'|') term)* with a single operator kind per level."""
    first = _parse_concept_term(ts)
    if ts.at("&") or ts.at("|"):
        op = ts.peek().text
        args = [first]
        while ts.take(op):
            args.append(_parse_concept_term(ts))
        if ts.at("&") or ts.at("|"):
            ts.error("mixed & and | need parentheses")
        return CAnd(tuple(args)) if op == "&" else COr(tuple(args))
    return first


def _parse_concept_term(ts: TokenStream):
    t = ts.peek()
    if ts.take("("):
        c = parse_concept(ts)
        ts.expect(")")
        return c
    if ts.take("!"):
        return CNot(_parse_concept_term(ts))
    if ts.take("{"):
        inds = [ts.expect_name("individual").text]
        while ts.take(","):
            inds.append(ts.expect_name("individual").text)
        ts.expect("}")
        return COneOf(tuple(inds))
    if ts.take(">="):
        n = _parse_number(ts)
        return CAtLeast(n, _parse_role(ts))
    if ts.take("<="):
        n = _parse_number(ts)
        return CAtMost(n, _parse_role(ts))
    if t.kind == "name":
        if t.text == "TOP":
            ts.next()
            return CTop()
        if t.text == "BOT":
            ts.next()
            return CBot()
        if t.text == "exists" or t.text == "forall":
            ts.next()
            role = _parse_role(ts)
            ts.expect(".")
            sub = _parse_concept_term(ts)
            return CExists(role, sub) if t.text == "exists" else CForall(role, sub)
        return CName(ts.next().text)
    ts.error("expected concept expression")


def _parse_number(ts: TokenStream) -> int:
    t = ts.peek()
    if t.kind != "num":
        ts.error("expected a nonnegative integer")
    ts.next()
    return int(t.text)


def serialize_concept(c) -> str:
    if isinstance(c, CName):
        return c.name
    if isinstance(c, CTop):
        return "TOP"
    if isinstance(c, CBot):
        return "BOT"
    if isinstance(c, CNot):
        return "!" + _concept_term(c.sub)
    if isinstance(c, CAnd):
        return "(" + " & ".join(serialize_concept(a) for a in c.args) + ")"
    if isinstance(c, COr):
        return "(" + " | ".join(serialize_concept(a) for a in c.args) + ")"
    if isinstance(c, CExists):
        return f"exists {c.role} . {_concept_term(c.sub)}"
    if isinstance(c, CForall):
        return f"forall {c.role} . {_concept_term(c.sub)}"
    if isinstance(c, CAtLeast):
        return f">= {c.n} {c.role}"
    if isinstance(c, CAtMost):
        return f"<= {c.n} {c.role}"
    if isinstance(c, COneOf):
        return "{" + ",".join(c.individuals) + "}"
    raise TypeError(f"not a concept: {c!r}")


def _concept_term(c) -> str:
    s = serialize_concept(c)
    if isinstance(c, (CExists, CForall, CAtLeast, CAtMost)):
        return "(" + s + ")"
    return s


# ---------------------------------------------------------------------------
# Ontology files


def parse_ontology(text: str) -> Ontology:
    if isinstance(text, bytes):
        text = decode_utf8(text)
    ts = TokenStream(text)
    concepts, roles, individuals = [], [], []
    axioms = []

    def declared(kind):
        return {"concept": concepts, "role": roles, "individual": individuals}[kind]

    while ts.peek().kind != "eof":
        t = ts.peek()
        if t.text in ("concept", "role", "individual"):
            ts.next()
            bucket = declared(t.text)
            bucket.append(ts.expect_name().text)
            while ts.take(","):
                bucket.append(ts.expect_name().text)
            ts.expect(".")
        elif t.text == "axiom":
            ts.next()
            axioms.append(_parse_axiom(ts, set(concepts), set(roles), set(individuals)))
            ts.expect(".")
        else:
            ts.error("expected a declaration or an axiom")
    sig = Signature(
        concepts=frozenset(concepts),
        roles=frozenset(roles),
        declared_individuals=tuple(dict.fromkeys(individuals)),
    )
    return Ontology(sig, tuple(axioms))


def _parse_axiom(ts, concepts, roles, individuals):
    def check_ind(tok):
        if tok.text not in individuals:
            raise ParseError(f"undeclared individual {tok.text!r}", tok.line, tok.col)
        return tok.text

    t = ts.peek()
    if t.text == "trans":
        ts.next()
        ts.expect("(")
        r = ts.expect_name("role name")
        if r.text not in roles:
            raise ParseError(f"undeclared role {r.text!r}", r.line, r.col)
        ts.expect(")")
        return Transitivity(r.text)
    if ts.take("-"):
        # -S(a) or -R(a,b)
        name = ts.expect_name("concept or role name")
        ts.expect("(")
        a = ts.expect_name("individual")
        if ts.take(","):
            b = ts.expect_name("individual")
            ts.expect(")")
            if name.text not in roles:
                raise ParseError(f"undeclared role {name.text!r}", name.line, name.col)
            return RoleAssertion(name.text, check_ind(a), check_ind(b), negated=True)
        ts.expect(")")
        if name.text not in concepts:
            raise ParseError(f"undeclared concept {name.text!r}", name.line, name.col)
        return ConceptAssertion(CNot(CName(name.text)), check_ind(a), dashed=True)
    # equality / inequality between individuals
    if t.kind == "name" and t.text in individuals and ts.tokens[ts.i + 1].text in ("==", "!="):
        a = ts.next().text
        op = ts.next().text
        b = check_ind(ts.expect_name("individual"))
        return Equality(a, b) if op == "==" else Inequality(a, b)
    # role inclusion / assertion on a declared role name
    if t.kind == "name" and t.text in roles:
        name = ts.next().text
        if ts.take("[="):
            r2 = ts.expect_name("role name")
            if r2.text not in roles:
                raise ParseError(f"undeclared role {r2.text!r}", r2.line, r2.col)
            return RoleInclusion(name, r2.text)
        ts.expect("(")
        a = ts.expect_name("individual")
        ts.expect(",")
        b = ts.expect_name("individual")
        ts.expect(")")
        return RoleAssertion(name, check_ind(a), check_ind(b))
    # otherwise a concept expression: inclusion or assertion
    c = parse_concept(ts)
    _check_concept_names(c, concepts, roles, individuals, t)
    if ts.take("[="):
        t2 = ts.peek()
        d = parse_concept(ts)
        _check_concept_names(d, concepts, roles, individuals, t2)
        return ConceptInclusion(c, d)
    ts.expect("(")
    a = ts.expect_name("individual")
    ts.expect(")")
    return ConceptAssertion(c, check_ind(a))


def _check_concept_names(c, concepts, roles, individuals, tok):
    bad = syntax.concept_names(c) - concepts
    if bad:
        raise ParseError(f"undeclared concept {sorted(bad)[0]!r}", tok.line, tok.col)
    bad = syntax.role_names(c) - roles
    if bad:
        raise ParseError(f"undeclared role {sorted(bad)[0]!r}", tok.line, tok.col)
    bad = syntax.individuals_in_concept(c) - individuals
    if bad:
        raise ParseError(f"undeclared individual {sorted(bad)[0]!r}", tok.line, tok.col)


def serialize_ontology(onto: Ontology) -> str:
    sig = onto.signature
    lines = []
    if sig.concepts:
        lines.append("concept " + ", ".join(sorted(sig.concepts)) + ".")
    if sig.roles:
        lines.append("role " + ", ".join(sorted(sig.roles)) + ".")
    if sig.declared_individuals:
        lines.append("individual " + ", ".join(sig.declared_individuals) + ".")
    for ax in onto.axioms:
        lines.append("axiom " + _serialize_axiom(ax) + ".")
    return "\n".join(lines) + ("\n" if lines else "")


def _serialize_axiom(ax) -> str:
    if isinstance(ax, ConceptInclusion):
        return f"{serialize_concept(ax.lhs)} [= {serialize_concept(ax.rhs)}"
    if isinstance(ax, RoleInclusion):
        return f"{ax.lhs} [= {ax.rhs}"
    if isinstance(ax, Transitivity):
        return f"trans({ax.role})"
    if isinstance(ax, ConceptAssertion):
        if ax.dashed and isinstance(ax.concept, CNot) and isinstance(ax.concept.sub, CName):
            return f"-{ax.concept.sub.name}({ax.individual})"
        return f"{serialize_concept(ax.concept)}({ax.individual})"
    if isinstance(ax, RoleAssertion):
        s = f"{ax.role}({ax.a},{ax.b})"
        return "-" + s if ax.negated else s
    if isinstance(ax, Equality):
        return f"{ax.a} == {ax.b}"
    if isinstance(ax, Inequality):
        return f"{ax.a} != {ax.b}"
    raise TypeError(f"not an axiom: {ax!r}")


# ---------------------------------------------------------------------------
# Program files


def parse_program(text, ontology: Ontology = None, load_ontology=None) -> DLProgram:
    """Parse a .dlp text.

    `load_ontology` maps the `#ontology "name"` header to an Ontology
    (e.g. reading a file); a directly supplied `ontology` wins.
    """
    if isinstance(text, bytes):
        text = decode_utf8(text)
    ts = TokenStream(text)
    onto_ref = None
    if ts.at("#"):
        ts.next()
        kw = ts.expect_name()
        if kw.text != "ontology":
            raise ParseError("expected 'ontology' after '#'", kw.line, kw.col)
        ref = ts.peek()
        if ref.kind != "str":
            ts.error("expected a quoted file name")
        onto_ref = ts.next().text[1:-1]
        ts.expect(".")
    if ontology is None:
        if onto_ref is not None:
            if load_ontology is None:
                raise ParseError("program names an ontology but no loader was given", 1, 1)
            ontology = load_ontology(onto_ref)
        else:
            ontology = Ontology.empty()

    arities = {}

    def check_arity(tok, pred, arity):
        old = arities.setdefault(pred, arity)
        if old != arity:
            raise ParseError(
                f"predicate {pred!r} used with arity {arity} and {old}", tok.line, tok.col
            )

    roles = set(ontology.signature.roles)
    rules = []
    while ts.peek().kind != "eof":
        rules.append(_parse_rule(ts, check_arity, roles))
    prog = DLProgram(ontology, tuple(rules))
    prog.signature  # validates name disjointness and constants
    return prog


def _parse_rule(ts, check_arity, roles) -> Rule:
    head = _parse_rule_atom(ts, check_arity)
    body = []
    if ts.take(":-"):
        if not ts.at("."):
            body.append(_parse_literal(ts, check_arity, roles))
            while ts.take(","):
                body.append(_parse_literal(ts, check_arity, roles))
    ts.expect(".")
    return Rule(head, tuple(body))


def _parse_rule_atom(ts, check_arity) -> RuleAtom:
    t = ts.expect_name("predicate")
    args = []
    if ts.take("("):
        if not ts.at(")"):
            args.append(ts.expect_name("constant").text)
            while ts.take(","):
                args.append(ts.expect_name("constant").text)
        ts.expect(")")
    if len(args) > 2:
        raise ParseError(f"predicate {t.text!r} has arity {len(args)} > 2", t.line, t.col)
    check_arity(t, t.text, len(args))
    return RuleAtom(t.text, tuple(args))


def _parse_literal(ts, check_arity, roles) -> BodyLiteral:
    negated = bool(ts.take("not"))
    if ts.at("DL"):
        return BodyLiteral(negated, _parse_dlatom(ts, check_arity, roles))
    return BodyLiteral(negated, _parse_rule_atom(ts, check_arity))


def _parse_dlatom(ts, check_arity, roles) -> DLAtom:
    ts.expect("DL")
    ts.expect("[")
    pairs = []
    while not ts.at(";"):
        pairs.append(_parse_input_pair(ts, check_arity, roles))
        if not ts.take(","):
            break
    ts.expect(";")
    query, inline_terms = _parse_query(ts)
    ts.expect("]")
    args = []
    if ts.take("("):
        if not ts.at(")"):
            args.append(ts.expect_name("constant").text)
            while ts.take(","):
                args.append(ts.expect_name("constant").text)
        ts.expect(")")
    terms = inline_terms if inline_terms is not None else tuple(args)
    query = _finish_query(ts, query, terms)
    return DLAtom(tuple(pairs), query).normalized()


def _parse_input_pair(ts, check_arity, roles) -> InputPair:
    """A λ entry.  The target decides the input predicate's arity: role
    targets take binary predicates, concept targets unary ones."""
    negated = bool(ts.take("!"))
    target = ts.expect_name("concept or role name")
    op_tok = ts.peek()
    if ts.take("+="):
        op, display = OP_PLUS, False
    elif ts.take("-="):
        op, display = OP_PLUS, True  # ⊙ is stored as ¬target ⊕ pred
        negated = not negated
    elif ts.take("?="):
        op, display = OP_MINUS, False
    else:
        raise ParseError("expected '+=', '-=' or '?='", op_tok.line, op_tok.col)
    p = ts.expect_name("predicate")
    is_role = target.text in roles
    check_arity(p, p.text, 2 if is_role else 1)
    return InputPair(target.text, negated, op, p.text, is_role, display_odot=display)


def _parse_query(ts):
    negated = bool(ts.take("-"))
    t = ts.peek()
    # equality query with inline terms: t1 == t2
    if t.kind == "name" and ts.tokens[ts.i + 1].text == "==":
        a = ts.next().text
        ts.next()
        b = ts.expect_name("constant").text
        return DLQuery("eq", negated=negated, terms=(a, b)), ()
    c = parse_concept(ts)
    if ts.take("[="):
        d = parse_concept(ts)
        return DLQuery("subsumes", negated=negated, concept=c, concept2=d), ()
    return DLQuery("concept", negated=negated, concept=c), None


def _finish_query(ts, query, terms):
    if query.kind in ("eq", "subsumes"):
        return query
    if len(terms) == 1:
        return DLQuery("concept", negated=query.negated, concept=query.concept, terms=terms)
    if len(terms) == 2:
        c = query.concept
        negated = query.negated
        if isinstance(c, CNot):
            negated, c = not negated, c.sub
        if not isinstance(c, CName):
            ts.error("a two-argument dl-query must be a (possibly negated) role name")
        return DLQuery("role", negated=negated, role=Role(c.name), terms=terms)
    ts.error("a concept dl-query takes exactly one argument, a role query two")


def serialize_program(program: DLProgram, ontology_ref: str = None) -> str:
    lines = []
    if ontology_ref:
        lines.append(f'#ontology "{ontology_ref}".')
    for r in program.rules:
        lines.append(serialize_rule(r))
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_rule(r: Rule) -> str:
    head = str(r.head)
    if not r.body:
        return head + "."
    return head + " :- " + ", ".join(_serialize_literal(l) for l in r.body) + "."


def _serialize_literal(lit: BodyLiteral) -> str:
    s = serialize_dlatom(lit.atom) if lit.is_dl else str(lit.atom)
    return ("not " + s) if lit.negated else s


def serialize_dlatom(a: DLAtom) -> str:
    pairs = ", ".join(_serialize_pair(p) for p in a.inputs)
    q, args = _serialize_query(a.query)
    body = f"{pairs} ; {q}" if pairs else f" ; {q}"
    return f"DL[{body}]({','.join(args)})"


def _serialize_pair(p: InputPair) -> str:
    if p.display_odot:
        return f"{p.target} -= {p.pred}"
    neg = "!" if p.negated else ""
    op = "+=" if p.op == OP_PLUS else "?="
    return f"{neg}{p.target} {op} {p.pred}"


def _serialize_query(q: DLQuery):
    neg = "-" if q.negated else ""
    if q.kind == "eq":
        return f"{neg}{q.terms[0]} == {q.terms[1]}", ()
    if q.kind == "subsumes":
        return f"{neg}{serialize_concept(q.concept)} [= {serialize_concept(q.concept2)}", ()
    if q.kind == "role":
        return f"{neg}{q.role}", q.terms
    return f"{neg}{serialize_concept(q.concept)}", q.terms


# ---------------------------------------------------------------------------
# Default theory files


def parse_default_theory(text) -> DefaultTheory:
    if isinstance(text, bytes):
        text = decode_utf8(text)
    ts = TokenStream(text)
    true_eq = False
    if ts.at("#"):
        ts.next()
        kw = ts.expect_name()
        if kw.text != "equality":
            raise ParseError("expected 'equality' after '#'", kw.line, kw.col)
        val = ts.expect_name()
        if val.text not in ("true", "congruence"):
            raise ParseError("expected 'true' or 'congruence'", val.line, val.col)
        true_eq = val.text == "true"
        ts.expect(".")
    background, defaults = [], []
    while ts.peek().kind != "eof":
        if ts.at("default"):
            ts.next()
            ts.expect(":")
            premise = parse_formula(ts)
            ts.expect(":")
            justs = []
            if not ts.at("/"):
                justs.append(parse_formula(ts))
                while ts.take(","):
                    justs.append(parse_formula(ts))
            ts.expect("/")
            conclusion = parse_formula(ts)
            ts.expect(".")
            defaults.append(Default(premise, tuple(justs), conclusion))
        else:
            background.append(parse_formula(ts))
            ts.expect(".")
    return DefaultTheory(tuple(background), tuple(defaults), true_equality=true_eq)


def parse_formula(ts: TokenStream) -> Formula:
    t = ts.peek()
    if ts.take("-"):
        return fol.Not(parse_formula(ts))
    if ts.take("("):
        first = parse_formula(ts)
        op_tok = ts.peek()
        if ts.take("->"):
            rhs = parse_formula(ts)
            ts.expect(")")
            return implies(first, rhs)
        if op_tok.text in ("&", "|"):
            op = op_tok.text
            args = [first]
            while ts.take(op):
                args.append(parse_formula(ts))
            if ts.at("&") or ts.at("|"):
                ts.error("mixed & and | need parentheses")
            ts.expect(")")
            node = fol.And(tuple(args)) if op == "&" else fol.Or(tuple(args))
            return node
        ts.expect(")")
        return first
    if t.kind == "name":
        if t.text == "TRUE":
            ts.next()
            return TRUE
        if t.text == "FALSE":
            ts.next()
            return FALSE
        name = ts.next().text
        if ts.peek().text in ("==", "!="):
            op = ts.next().text
            b = ts.expect_name("constant").text
            e = fol.eq_atom(name, b)
            return fol.Not(e) if op == "!=" else e
        args = []
        if ts.take("("):
            if not ts.at(")"):
                args.append(ts.expect_name("constant").text)
                while ts.take(","):
                    args.append(ts.expect_name("constant").text)
            ts.expect(")")
        return Atom(FAtom(name, tuple(args)))
    ts.error("expected a formula")


def serialize_formula(f: Formula) -> str:
    if isinstance(f, fol.Top):
        return "TRUE"
    if isinstance(f, fol.Bot):
        return "FALSE"
    if isinstance(f, Atom):
        return str(f.atom)
    if isinstance(f, fol.Not):
        if isinstance(f.sub, Atom) and f.sub.atom.name == EQ:
            a, b = f.sub.atom.args
            return f"{a} != {b}"
        return "-" + _formula_term(f.sub)
    if isinstance(f, fol.And):
        return "(" + " & ".join(serialize_formula(g) for g in f.args) + ")"
    if isinstance(f, fol.Or):
        return "(" + " | ".join(serialize_formula(g) for g in f.args) + ")"
    if isinstance(f, fol.Implies):
        return f"({serialize_formula(f.lhs)} -> {serialize_formula(f.rhs)})"
    raise TypeError(f"not a formula: {f!r}")


def _formula_term(f: Formula) -> str:
    s = serialize_formula(f)
    if isinstance(f, Atom) and f.atom.name == EQ:
        return "(" + s + ")"
    return s


def serialize_default_theory(dt: DefaultTheory) -> str:
    lines = []
    if dt.true_equality:
        lines.append("#equality true.")
    for f in dt.background:
        lines.append(serialize_formula(f) + ".")
    for d in dt.defaults:
        justs = ", ".join(serialize_formula(j) for j in d.justifications)
        lines.append(
            f"default: {serialize_formula(d.premise)} : {justs} / {serialize_formula(d.conclusion)}."
        )
    return "\n".join(lines) + ("\n" if lines else "")
