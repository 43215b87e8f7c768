"""ASTs for the formula and action languages, concrete grammar, parser and printer.

Surface syntax (ASCII):

    formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)?
    or := and ("|" and)* ; and := unary ("&" unary)*
    unary := "~" unary | "true" | "false" | ATOM
           | "[" inner "]" unary | "<" inner ">" unary
           | "[*]" unary | "<*>" unary
           | "Cov{" AGENT "}(" (formula ("," formula)*)? ")" | "(" formula ")"
    inner := AGENT | action
    action := seq ("+" seq)* ; seq := aatom (";" aatom)*
    aatom := "?" unary | "L{" AGENT ("," AGENT)* "}" "(" action ("," action)? ")"
           | "(" action ")"

Inside "[...]"/"<...>" a lone identifier naming a declared agent is an agent
modality; everything else is an action expression (actions never begin with a
bare identifier).  "[*]"/"<*>" are the refinement quantifiers.  L{B}(a) is
sugar for L{B}(a, a).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple


def _cached_hash(cls):
    """Memoise the generated structural hash; trees get deep, dicts get hot."""
    generated = cls.__hash__

    def __hash__(self):
        try:
            return object.__getattribute__(self, "_hash_cache")
        except AttributeError:
            value = generated(self)
            object.__setattr__(self, "_hash_cache", value)
            return value

    cls.__hash__ = __hash__
    return cls


class Formula:
    """Base class for formula AST nodes. Instances are immutable and hashable."""


class ActionFormula:
    """Base class for action AST nodes: tests, choice, composition, learning."""


@_cached_hash
@dataclass(frozen=True)
class Top(Formula):
    pass


@_cached_hash
@dataclass(frozen=True)
class Bottom(Formula):
    pass


@_cached_hash
@dataclass(frozen=True)
class Atom(Formula):
    name: str


@_cached_hash
@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@_cached_hash
@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@_cached_hash
@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@_cached_hash
@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@_cached_hash
@dataclass(frozen=True)
class Box(Formula):
    agent: str
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class Diamond(Formula):
    agent: str
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class Cover(Formula):
    agent: str
    members: FrozenSet[Formula]


@_cached_hash
@dataclass(frozen=True)
class DynBox(Formula):
    action: "ActionFormula"
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class DynDiamond(Formula):
    action: "ActionFormula"
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class RefBox(Formula):
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class RefDiamond(Formula):
    body: Formula


@_cached_hash
@dataclass(frozen=True)
class Test(ActionFormula):
    condition: Formula


@_cached_hash
@dataclass(frozen=True)
class Choice(ActionFormula):
    left: ActionFormula
    right: ActionFormula


@_cached_hash
@dataclass(frozen=True)
class Compose(ActionFormula):
    left: ActionFormula
    right: ActionFormula


@_cached_hash
@dataclass(frozen=True)
class Learn(ActionFormula):
    group: FrozenSet[str]
    left: ActionFormula
    right: ActionFormula


TOP = Top()
BOTTOM = Bottom()


def _balanced(parts: List[Formula], node) -> Formula:
    # balanced shape keeps recursion over large juncts logarithmic
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return node(_balanced(parts[:mid], node), _balanced(parts[mid:], node))


def big_and(parts: Iterable[Formula]) -> Formula:
    """Conjunction of the parts; empty yields true."""
    parts = list(parts)
    if not parts:
        return TOP
    return _balanced(parts, And)


def big_or(parts: Iterable[Formula]) -> Formula:
    """Disjunction of the parts; empty yields false."""
    parts = list(parts)
    if not parts:
        return BOTTOM
    return _balanced(parts, Or)


def big_choice(parts: Iterable[ActionFormula]) -> ActionFormula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty choice is not expressible")
    out = parts[0]
    for p in parts[1:]:
        out = Choice(out, p)
    return out


def big_compose(parts: Iterable[ActionFormula]) -> ActionFormula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty composition is not expressible")
    out = parts[0]
    for p in parts[1:]:
        out = Compose(out, p)
    return out


def is_basic(f: Formula) -> bool:
    """True iff f has no dynamic or refinement operators."""
    if isinstance(f, (DynBox, DynDiamond, RefBox, RefDiamond)):
        return False
    if isinstance(f, (Top, Bottom, Atom)):
        return True
    if isinstance(f, Not):
        return is_basic(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_basic(f.left) and is_basic(f.right)
    if isinstance(f, (Box, Diamond)):
        return is_basic(f.body)
    if isinstance(f, Cover):
        return all(is_basic(g) for g in f.members)
    raise TypeError(f"not a formula: {f!r}")


def is_propositional(f: Formula) -> bool:
    """True iff f is basic and has no modal operators either."""
    if isinstance(f, (Top, Bottom, Atom)):
        return True
    if isinstance(f, Not):
        return is_propositional(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def require_basic(f: Formula, what: str = "operation") -> None:
    if not is_basic(f):
        raise ValueError(f"{what} is only defined on basic formulae: {print_formula(f)}")


def modal_depth(f: Formula) -> int:
    """Nesting depth of modal operators; rejects dynamic/refinement operators."""
    if isinstance(f, (Top, Bottom, Atom)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.body)
    if isinstance(f, Cover):
        return 1 + max((modal_depth(g) for g in f.members), default=0)
    raise ValueError(f"modal depth undefined on non-basic formula: {print_formula(f)}")


def expand_cover(agent: str, members: Iterable[Formula]) -> Formula:
    """Cov{a}(G) as box-over-disjunction plus one diamond per member."""
    members = sorted(set(members), key=formula_sort_key)
    box = Box(agent, big_or(members))
    return big_and([box] + [Diamond(agent, g) for g in members])


def expand_covers(f: Formula) -> Formula:
    """Replace every cover node by its box/diamond expansion."""
    if isinstance(f, Cover):
        return expand_cover(f.agent, [expand_covers(g) for g in f.members])
    return _map_children(f, expand_covers)


def _map_children(f: Formula, fn) -> Formula:
    if isinstance(f, (Top, Bottom, Atom)):
        return f
    if isinstance(f, Not):
        return Not(fn(f.body))
    if isinstance(f, And):
        return And(fn(f.left), fn(f.right))
    if isinstance(f, Or):
        return Or(fn(f.left), fn(f.right))
    if isinstance(f, Implies):
        return Implies(fn(f.left), fn(f.right))
    if isinstance(f, Iff):
        return Iff(fn(f.left), fn(f.right))
    if isinstance(f, Box):
        return Box(f.agent, fn(f.body))
    if isinstance(f, Diamond):
        return Diamond(f.agent, fn(f.body))
    if isinstance(f, Cover):
        return Cover(f.agent, frozenset(fn(g) for g in f.members))
    if isinstance(f, DynBox):
        return DynBox(f.action, fn(f.body))
    if isinstance(f, DynDiamond):
        return DynDiamond(f.action, fn(f.body))
    if isinstance(f, RefBox):
        return RefBox(fn(f.body))
    if isinstance(f, RefDiamond):
        return RefDiamond(fn(f.body))
    raise TypeError(f"not a formula: {f!r}")


def is_b_restricted(f: Formula, group: Iterable[str]) -> bool:
    """Every top-level modal layer uses only agents in `group`; bodies are free."""
    require_basic(f, "is_b_restricted")
    group = frozenset(group)

    def walk(g: Formula) -> bool:
        if isinstance(g, (Top, Bottom, Atom)):
            return True
        if isinstance(g, Not):
            return walk(g.body)
        if isinstance(g, (And, Or, Implies, Iff)):
            return walk(g.left) and walk(g.right)
        if isinstance(g, (Box, Diamond, Cover)):
            return g.agent in group
        raise TypeError(f"not a formula: {g!r}")

    return walk(f)


def subformulae(f: Formula) -> Set[Formula]:
    """All subformulae of a basic formula, including f itself."""
    require_basic(f, "subformulae")
    out: Set[Formula] = set()

    def walk(g: Formula) -> None:
        if g in out:
            return
        out.add(g)
        if isinstance(g, (Top, Bottom, Atom)):
            return
        if isinstance(g, (Not, Box, Diamond)):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Cover):
            for h in g.members:
                walk(h)

    walk(f)
    return out


def formula_atoms(f: Formula) -> Set[str]:
    out: Set[str] = set()

    def walk(g) -> None:
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, (Not, Box, Diamond, RefBox, RefDiamond)):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Cover):
            for h in g.members:
                walk(h)
        elif isinstance(g, (DynBox, DynDiamond)):
            walk_action(g.action)
            walk(g.body)

    def walk_action(a: ActionFormula) -> None:
        if isinstance(a, Test):
            walk(a.condition)
        elif isinstance(a, (Choice, Compose)):
            walk_action(a.left)
            walk_action(a.right)
        elif isinstance(a, Learn):
            walk_action(a.left)
            walk_action(a.right)

    walk(f)
    return out


def formula_agents(f: Formula) -> Set[str]:
    out: Set[str] = set()

    def walk(g) -> None:
        if isinstance(g, (Box, Diamond, Cover)):
            out.add(g.agent)
        if isinstance(g, (Not, Box, Diamond, RefBox, RefDiamond)):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Cover):
            for h in g.members:
                walk(h)
        elif isinstance(g, (DynBox, DynDiamond)):
            out.update(action_agents(g.action))
            walk(g.body)

    walk(f)
    return out


def action_agents(a: ActionFormula) -> Set[str]:
    if isinstance(a, Test):
        return formula_agents(a.condition)
    if isinstance(a, (Choice, Compose)):
        return action_agents(a.left) | action_agents(a.right)
    if isinstance(a, Learn):
        return set(a.group) | action_agents(a.left) | action_agents(a.right)
    raise TypeError(f"not an action: {a!r}")


def action_tests(a: ActionFormula) -> Iterator[Formula]:
    if isinstance(a, Test):
        yield a.condition
    elif isinstance(a, (Choice, Compose, Learn)):
        yield from action_tests(a.left)
        yield from action_tests(a.right)


def map_action_tests(a: ActionFormula, fn) -> ActionFormula:
    """Rebuild an action with every test condition passed through fn."""
    if isinstance(a, Test):
        return Test(fn(a.condition))
    if isinstance(a, Choice):
        return Choice(map_action_tests(a.left, fn), map_action_tests(a.right, fn))
    if isinstance(a, Compose):
        return Compose(map_action_tests(a.left, fn), map_action_tests(a.right, fn))
    if isinstance(a, Learn):
        return Learn(a.group, map_action_tests(a.left, fn), map_action_tests(a.right, fn))
    raise TypeError(f"not an action: {a!r}")


# ---------------------------------------------------------------------------
# printing


_LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY, _LEVEL_ATOM = 1, 2, 3, 4, 5, 6


def _level(f: Formula) -> int:
    if isinstance(f, Iff):
        return _LEVEL_IFF
    if isinstance(f, Implies):
        return _LEVEL_IMP
    if isinstance(f, Or):
        return _LEVEL_OR
    if isinstance(f, And):
        return _LEVEL_AND
    if isinstance(f, (Not, Box, Diamond, DynBox, DynDiamond, RefBox, RefDiamond)):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def _show(f: Formula, min_level: int) -> str:
    text = _render(f)
    if _level(f) < min_level:
        return f"({text})"
    return text


def _render(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _show(f.body, _LEVEL_UNARY)
    if isinstance(f, And):
        return f"{_show(f.left, _LEVEL_AND)} & {_show(f.right, _LEVEL_UNARY)}"
    if isinstance(f, Or):
        return f"{_show(f.left, _LEVEL_OR)} | {_show(f.right, _LEVEL_AND)}"
    if isinstance(f, Implies):
        return f"{_show(f.left, _LEVEL_OR)} -> {_show(f.right, _LEVEL_IMP)}"
    if isinstance(f, Iff):
        return f"{_show(f.left, _LEVEL_IFF)} <-> {_show(f.right, _LEVEL_IMP)}"
    if isinstance(f, Box):
        return f"[{f.agent}] {_show(f.body, _LEVEL_UNARY)}"
    if isinstance(f, Diamond):
        return f"<{f.agent}> {_show(f.body, _LEVEL_UNARY)}"
    if isinstance(f, Cover):
        inner = ", ".join(print_formula(g) for g in sorted(f.members, key=formula_sort_key))
        return f"Cov{{{f.agent}}}({inner})"
    if isinstance(f, DynBox):
        return f"[{print_action(f.action)}] {_show(f.body, _LEVEL_UNARY)}"
    if isinstance(f, DynDiamond):
        return f"<{print_action(f.action)}> {_show(f.body, _LEVEL_UNARY)}"
    if isinstance(f, RefBox):
        return "[*] " + _show(f.body, _LEVEL_UNARY)
    if isinstance(f, RefDiamond):
        return "<*> " + _show(f.body, _LEVEL_UNARY)
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    """Canonical text; parse_formula(print_formula(f)) == f."""
    return _render(f)


_ALEVEL_CHOICE, _ALEVEL_SEQ, _ALEVEL_ATOM = 1, 2, 3


def _alevel(a: ActionFormula) -> int:
    if isinstance(a, Choice):
        return _ALEVEL_CHOICE
    if isinstance(a, Compose):
        return _ALEVEL_SEQ
    return _ALEVEL_ATOM


def _ashow(a: ActionFormula, min_level: int) -> str:
    text = _arender(a)
    if _alevel(a) < min_level:
        return f"({text})"
    return text


def _arender(a: ActionFormula) -> str:
    if isinstance(a, Test):
        return "?" + _show(a.condition, _LEVEL_UNARY)
    if isinstance(a, Choice):
        return f"{_ashow(a.left, _ALEVEL_CHOICE)} + {_ashow(a.right, _ALEVEL_SEQ)}"
    if isinstance(a, Compose):
        return f"{_ashow(a.left, _ALEVEL_SEQ)} ; {_ashow(a.right, _ALEVEL_ATOM)}"
    if isinstance(a, Learn):
        group = ",".join(sorted(a.group))
        if a.left == a.right:
            return f"L{{{group}}}({_arender(a.left)})"
        return f"L{{{group}}}({_arender(a.left)}, {_arender(a.right)})"
    raise TypeError(f"not an action: {a!r}")


def print_action(a: ActionFormula) -> str:
    """Canonical text; parse_action(print_action(a)) == a."""
    return _arender(a)


def formula_sort_key(f: Formula) -> str:
    return print_formula(f)


# ---------------------------------------------------------------------------
# lexer / parser


class ParseError(ValueError):
    """Syntax or vocabulary error, carrying 1-based line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@_cached_hash
@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "symbol", "end"
    text: str
    line: int
    column: int


_SYMBOLS = ["<->", "[*]", "<*>", "->", "~", "&", "|", "(", ")", "[", "]",
            "<", ">", "?", ";", "+", ",", "{", "}"]
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(_Token("symbol", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Iterable[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.agents = frozenset(agents)
        if not self.agents:
            raise ValueError("agent set must be non-empty")

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # formula grammar

    def formula(self) -> Formula:
        out = self.imp()
        while self.at("<->"):
            self.next()
            out = Iff(out, self.imp())
        return out

    def imp(self) -> Formula:
        out = self.disj()
        if self.at("->"):
            self.next()
            return Implies(out, self.imp())
        return out

    def disj(self) -> Formula:
        out = self.conj()
        while self.at("|"):
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.at("&"):
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.unary())
        if tok.text == "[*]":
            self.next()
            return RefBox(self.unary())
        if tok.text == "<*>":
            self.next()
            return RefDiamond(self.unary())
        if tok.text == "[":
            self.next()
            inner = self.inner("]")
            self.expect("]")
            body = self.unary()
            return Box(inner, body) if isinstance(inner, str) else DynBox(inner, body)
        if tok.text == "<":
            self.next()
            inner = self.inner(">")
            self.expect(">")
            body = self.unary()
            return Diamond(inner, body) if isinstance(inner, str) else DynDiamond(inner, body)
        if tok.text == "(":
            self.next()
            out = self.formula()
            self.expect(")")
            return out
        if tok.kind == "ident":
            if tok.text == "true":
                self.next()
                return TOP
            if tok.text == "false":
                self.next()
                return BOTTOM
            if tok.text == "Cov" and self.peek(1).text == "{":
                return self.cover()
            self.next()
            return Atom(tok.text)
        self.error(f"expected a formula, found {tok.text or 'end of input'!r}", tok)

    def cover(self) -> Formula:
        self.expect("Cov")
        self.expect("{")
        agent = self.agent_name()
        self.expect("}")
        self.expect("(")
        members: Set[Formula] = set()
        if not self.at(")"):
            members.add(self.formula())
            while self.at(","):
                self.next()
                members.add(self.formula())
        self.expect(")")
        return Cover(agent, frozenset(members))

    def inner(self, closer: str):
        tok = self.peek()
        if tok.kind == "ident" and self.peek(1).text == closer:
            if tok.text in self.agents:
                self.next()
                return tok.text
            self.error(f"{tok.text!r} is neither a declared agent nor a well-formed action", tok)
        return self.action()

    def agent_name(self) -> str:
        tok = self.next()
        if tok.kind != "ident":
            self.error(f"expected an agent name, found {tok.text!r}", tok)
        if tok.text not in self.agents:
            self.error(f"unknown agent {tok.text!r}", tok)
        return tok.text

    # action grammar

    def action(self) -> ActionFormula:
        out = self.seq()
        while self.at("+"):
            self.next()
            out = Choice(out, self.seq())
        return out

    def seq(self) -> ActionFormula:
        out = self.aatom()
        while self.at(";"):
            self.next()
            out = Compose(out, self.aatom())
        return out

    def aatom(self) -> ActionFormula:
        tok = self.peek()
        if tok.text == "?":
            self.next()
            return Test(self.unary())
        if tok.kind == "ident" and tok.text == "L" and self.peek(1).text == "{":
            self.next()
            self.expect("{")
            group = {self.agent_name()}
            while self.at(","):
                self.next()
                group.add(self.agent_name())
            self.expect("}")
            self.expect("(")
            left = self.action()
            if self.at(","):
                self.next()
                right = self.action()
            else:
                right = left
            self.expect(")")
            return Learn(frozenset(group), left, right)
        if tok.text == "(":
            self.next()
            out = self.action()
            self.expect(")")
            return out
        self.error(f"expected an action, found {tok.text or 'end of input'!r}", tok)

    def finish(self, value):
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected trailing input {tok.text!r}", tok)
        return value


def parse_formula(text: str, agents: Iterable[str]) -> Formula:
    parser = _Parser(text, agents)
    return parser.finish(parser.formula())


def parse_action(text: str, agents: Iterable[str]) -> ActionFormula:
    parser = _Parser(text, agents)
    return parser.finish(parser.action())


def infer_agents(text: str) -> Set[str]:
    """Best-effort agent vocabulary from surface text: [x], <x>, Cov{..}, L{..}."""
    tokens = _tokenize(text)
    agents: Set[str] = set()
    for i, tok in enumerate(tokens):
        if tok.text in ("[", "<") and tokens[i + 1].kind == "ident" \
                and i + 2 < len(tokens) and tokens[i + 2].text == ("]" if tok.text == "[" else ">"):
            agents.add(tokens[i + 1].text)
        if tok.kind == "ident" and tok.text in ("L", "Cov") and tokens[i + 1].text == "{":
            j = i + 2
            while j < len(tokens) and tokens[j].text != "}":
                if tokens[j].kind == "ident":
                    agents.add(tokens[j].text)
                j += 1
    agents.discard("true")
    agents.discard("false")
    return agents
