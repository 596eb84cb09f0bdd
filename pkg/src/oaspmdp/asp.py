"""Restricted answer-set-programming fragment.

Programs consist of facts, cardinality-1..1 choice rules with positive
fact-only bodies, and integrity constraints.  This is the only fragment the
agent ever emits, so negation, variables and general rule heads are rejected
outright instead of being half-supported.
"""

import itertools
import re

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class AspError(Exception):
    pass


class ParseError(AspError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class FragmentError(AspError):
    """Raised when a program falls outside the supported fragment."""


class Atom:
    """An interned propositional atom; equal atoms are identical objects."""

    __slots__ = ("name", "id")
    _interned = {}
    _next_id = itertools.count()

    def __new__(cls, name):
        atom = cls._interned.get(name)
        if atom is None:
            if not ATOM_RE.match(name):
                raise ValueError(f"invalid atom name: {name!r}")
            atom = object.__new__(cls)
            atom.name = name
            atom.id = next(cls._next_id)
            cls._interned[name] = atom
        return atom

    def __repr__(self):
        return self.name

    def __lt__(self, other):
        return self.name < other.name

    def __hash__(self):
        return self.id

    def __eq__(self, other):
        return self is other


class ChoiceRule:
    """``1{ h1; ...; hn }1 :- b1, ..., bm.`` with positive body literals."""

    __slots__ = ("heads", "body")

    def __init__(self, heads, body):
        heads = list(dict.fromkeys(heads))
        body = tuple(dict.fromkeys(body))
        if not heads:
            raise ValueError("choice rule needs at least one head")
        if not body:
            raise ValueError("choice rule needs a non-empty body")
        self.heads = heads
        self.body = body

    @property
    def body_key(self):
        return frozenset(self.body)

    def __eq__(self, other):
        return (isinstance(other, ChoiceRule)
                and set(self.heads) == set(other.heads)
                and self.body_key == other.body_key)

    def __hash__(self):
        return hash((frozenset(self.heads), self.body_key))

    def __repr__(self):
        return render_choice(self)


class IntegrityConstraint:
    """Headless rule ``:- b1, ..., bm.`` forbidding its body."""

    __slots__ = ("body",)

    def __init__(self, body):
        body = tuple(dict.fromkeys(body))
        if not body:
            raise ValueError("constraint needs a non-empty body")
        self.body = body

    def __eq__(self, other):
        return (isinstance(other, IntegrityConstraint)
                and frozenset(self.body) == frozenset(other.body))

    def __hash__(self):
        return hash(frozenset(self.body))

    def __repr__(self):
        return render_constraint(self)


class Program:
    def __init__(self, facts=(), choice_rules=(), constraints=()):
        self.facts = set(facts)
        self.choice_rules = []
        self._rule_by_body = {}
        for rule in choice_rules:
            self._append_rule(rule)
        self.constraints = list(constraints)

    def _append_rule(self, rule):
        # one rule per distinct body: merging heads keeps bodies usable as keys
        existing = self._rule_by_body.get(rule.body_key)
        if existing is None:
            self.choice_rules.append(rule)
            self._rule_by_body[rule.body_key] = rule
        else:
            for head in rule.heads:
                if head not in existing.heads:
                    existing.heads.append(head)

    def rule_for_body(self, body):
        return self._rule_by_body.get(frozenset(body))

    def __eq__(self, other):
        return (isinstance(other, Program)
                and self.facts == other.facts
                and self.choice_rules == other.choice_rules
                and self.constraints == other.constraints)

    def __repr__(self):
        return f"Program({render_program(self)!r})"


class AnswerSet:
    __slots__ = ("atoms",)

    def __init__(self, atoms):
        self.atoms = frozenset(atoms)

    def sorted_atoms(self):
        return sorted(self.atoms)

    def __eq__(self, other):
        return isinstance(other, AnswerSet) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return "{" + ", ".join(a.name for a in self.sorted_atoms()) + "}"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<if>:-)
      | (?P<atom>[a-z][a-zA-Z0-9_]*)
      | (?P<int>\d+)
      | (?P<lbrace>\{) | (?P<rbrace>\})
      | (?P<comma>,) | (?P<semi>;) | (?P<dot>\.)
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            ch = text[pos]
            if ch == "-":
                raise ParseError("unsupported fragment: strong negation", line, col)
            raise ParseError(f"unexpected character {ch!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "atom" and value == "not":
                raise ParseError("unsupported fragment: negation as failure",
                                 line, pos - line_start + 1)
            tokens.append((kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        _, value, line, col = self.peek()
        raise ParseError(message, line, col)

    def expect(self, kind, what):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def atom(self):
        tok = self.expect("atom", "an atom")
        return Atom(tok[1])

    def atom_list(self, separators):
        atoms = [self.atom()]
        while self.peek()[0] in separators:
            self.next()
            atoms.append(self.atom())
        return atoms

    def statement(self):
        kind = self.peek()[0]
        if kind == "int":
            return self.choice()
        if kind == "if":
            self.next()
            body = self.atom_list(("comma",))
            self.expect("dot", "'.'")
            return IntegrityConstraint(body)
        if kind == "atom":
            atom = self.atom()
            self.expect("dot", "'.'")
            return atom
        self.fail("expected a statement")

    def choice(self):
        lower = self.expect("int", "cardinality bound")
        self.expect("lbrace", "'{'")
        heads = self.atom_list(("semi", "comma"))
        self.expect("rbrace", "'}'")
        upper = self.expect("int", "cardinality bound")
        if lower[1] != "1" or upper[1] != "1":
            raise ParseError("unsupported fragment: cardinality bounds must be 1..1",
                             lower[2], lower[3])
        self.expect("if", "':-'")
        body = self.atom_list(("comma",))
        self.expect("dot", "'.'")
        return ChoiceRule(heads, body)


def parse_program(text):
    """Parse program text in the fragment grammar into a Program."""
    parser = _Parser(_tokenize(text))
    program = Program()
    while parser.peek()[0] != "eof":
        stmt = parser.statement()
        if isinstance(stmt, Atom):
            program.facts.add(stmt)
        elif isinstance(stmt, ChoiceRule):
            program._append_rule(stmt)
        else:
            program.constraints.append(stmt)
    return program


# ---------------------------------------------------------------------------
# rendering

def render_choice(rule):
    heads = "; ".join(a.name for a in sorted(rule.heads))
    body = ", ".join(a.name for a in sorted(rule.body))
    return f"1{{ {heads} }}1 :- {body}."


def render_constraint(constraint):
    return ":- " + ", ".join(a.name for a in sorted(constraint.body)) + "."


def render_program(program):
    """Canonical text: sorted facts, then rules in insertion order, then
    constraints.  ``parse_program(render_program(p)) == p``."""
    lines = [f"{a.name}." for a in sorted(program.facts)]
    lines.extend(render_choice(r) for r in program.choice_rules)
    lines.extend(render_constraint(c) for c in program.constraints)
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# mutation

def add_transition_head(program, body, head):
    """Add ``head`` to the choice rule keyed by ``body``, creating the rule
    if absent.  Returns True iff the head was newly added."""
    rule = program.rule_for_body(body)
    if rule is None:
        program._append_rule(ChoiceRule([head], tuple(body)))
        return True
    if head in rule.heads:
        return False
    rule.heads.append(head)
    return True


# ---------------------------------------------------------------------------
# answer sets

def _check_fragment(program):
    all_heads = set()
    for rule in program.choice_rules:
        all_heads.update(rule.heads)
    for rule in program.choice_rules:
        for atom in rule.body:
            if atom not in program.facts and atom in all_heads:
                raise FragmentError(
                    f"unsupported fragment: body atom {atom.name} is a "
                    "non-fact choice head")


def _key(atoms):
    return tuple(sorted(a.name for a in atoms))


def enumerate_answer_sets(program):
    """All answer sets of a fragment program, lexicographically ordered.

    A choice rule is applicable iff its body is contained in the facts; each
    applicable rule contributes exactly one head per answer set; candidate
    sets hitting an integrity constraint are dropped.
    """
    _check_fragment(program)
    facts = frozenset(program.facts)
    applicable = [r for r in program.choice_rules if set(r.body) <= facts]
    results = set()
    for combo in itertools.product(*(r.heads for r in applicable)):
        model = facts.union(combo)
        if any(sum(h in model for h in r.heads) != 1 for r in applicable):
            continue
        if any(all(a in model for a in c.body) for c in program.constraints):
            continue
        results.add(model)
    return [AnswerSet(m) for m in sorted(results, key=_key)]


def brute_force_answer_sets(program):
    """Independent oracle: enumerate candidate atom sets and keep exactly the
    fragment stable models.

    A candidate M must (i) contain all facts, (ii) contain only facts or heads
    of rules applicable in M (body contained in M), (iii) contain exactly one
    head of every applicable rule, and (iv) satisfy every constraint.
    Candidates missing a fact fail (i) outright, so enumeration ranges over
    facts plus every subset of the remaining atoms.
    """
    atoms = set(program.facts)
    for rule in program.choice_rules:
        atoms.update(rule.heads)
        atoms.update(rule.body)
    for constraint in program.constraints:
        atoms.update(constraint.body)
    if len(atoms) > 20:
        raise AspError("atom universe too large for brute force")
    facts = set(program.facts)
    free = sorted(atoms - facts)
    results = []
    for bits in range(1 << len(free)):
        model = set(facts)
        model.update(a for i, a in enumerate(free) if bits >> i & 1)
        applicable = [r for r in program.choice_rules
                      if all(a in model for a in r.body)]
        heads_ok = all(sum(h in model for h in r.heads) == 1 for r in applicable)
        if not heads_ok:
            continue
        supported = set(facts)
        for rule in applicable:
            supported.update(rule.heads)
        if not model <= supported:
            continue
        if any(all(a in model for a in c.body) for c in program.constraints):
            continue
        results.append(frozenset(model))
    return [AnswerSet(m) for m in sorted(set(results), key=_key)]
