"""Terms, atoms, clauses and programs of pure Horn-clause logic, with a
parser and printer for a small Prolog-like surface syntax.

Surface syntax:

* functors and predicates start with a lowercase letter (or are digit
  strings such as ``0``), variables with an uppercase letter or ``_``;
* a clause is ``head.`` or ``head :- a1, ..., an.``;
* a goal is ``?- a1, ..., ak.``; ``?- .`` and ``?- true.`` denote the
  empty goal;
* ``%`` starts a comment running to the end of the line.

Names of the form ``_G<n>`` are reserved for renaming and are rejected in
user input.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class SyntaxErrorAt(ValueError):
    """Parse error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SignatureError(ValueError):
    """Arity clash or function/predicate name collision."""


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    functor: str
    args: tuple = ()

    def __str__(self) -> str:
        return term_str(self)


Term = Union[Var, App]


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __str__(self) -> str:
        return atom_str(self)


@dataclass(frozen=True)
class Goal:
    atoms: tuple = ()

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def is_empty(self) -> bool:
        return not self.atoms

    def __str__(self) -> str:
        return goal_str(self)


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple = ()
    id: str = ""

    def __str__(self) -> str:
        return clause_str(self)


@dataclass(frozen=True)
class Signature:
    functions: tuple = ()   # sorted (name, arity) pairs
    predicates: tuple = ()

    @staticmethod
    def of(functions: dict | None = None, predicates: dict | None = None) -> "Signature":
        functions = dict(functions or {})
        predicates = dict(predicates or {})
        clash = set(functions) & set(predicates)
        if clash:
            raise SignatureError(f"symbol used as function and predicate: {sorted(clash)[0]}")
        return Signature(tuple(sorted(functions.items())), tuple(sorted(predicates.items())))

    @property
    def fun_arity(self) -> dict:
        return dict(self.functions)

    @property
    def pred_arity(self) -> dict:
        return dict(self.predicates)

    def merge(self, other: "Signature") -> "Signature":
        funs, preds = self.fun_arity, self.pred_arity
        for name, n in other.functions:
            if funs.setdefault(name, n) != n:
                raise SignatureError(f"arity clash for {name}: {funs[name]} vs {n}")
        for name, n in other.predicates:
            if preds.setdefault(name, n) != n:
                raise SignatureError(f"arity clash for {name}: {preds[name]} vs {n}")
        return Signature.of(funs, preds)


@dataclass(frozen=True)
class Program:
    clauses: tuple = ()
    signature: Signature = field(default_factory=Signature)

    def __str__(self) -> str:
        return program_str(self)

    def clause(self, cid: str) -> Clause:
        for c in self.clauses:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def with_clauses(self, clauses: Iterable[Clause]) -> "Program":
        clauses = tuple(clauses)
        return Program(clauses, signature_of_clauses(clauses))


# ---------------------------------------------------------------- printing

def term_str(t) -> str:
    if isinstance(t, App):
        if not t.args:
            return t.functor
        return f"{t.functor}({','.join(term_str(a) for a in t.args)})"
    return str(t)


def atom_str(a: Atom) -> str:
    if not a.args:
        return a.predicate
    return f"{a.predicate}({','.join(term_str(t) for t in a.args)})"


def clause_str(c: Clause) -> str:
    if not c.body:
        return f"{atom_str(c.head)}."
    return f"{atom_str(c.head)} :- {', '.join(atom_str(b) for b in c.body)}."


def goal_str(g: Goal | tuple) -> str:
    atoms = g.atoms if isinstance(g, Goal) else tuple(g)
    if not atoms:
        return "?- true."
    return f"?- {', '.join(atom_str(a) for a in atoms)}."


def program_str(p: Program) -> str:
    return "".join(clause_str(c) + "\n" for c in p.clauses)


# ------------------------------------------------------------ traversal

def term_vars(t, acc: list | None = None) -> list:
    """Variables of a term (or atom) in first-occurrence order."""
    acc = [] if acc is None else acc
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, (App, Atom)):
            stack.extend(reversed(x.args))
        elif x not in acc:
            acc.append(x)
    return acc


def variables_of(g: Goal | Iterable[Atom]) -> list:
    """Variable names of a goal, first occurrence first, no duplicates."""
    acc: list = []
    for a in (g.atoms if isinstance(g, Goal) else g):
        term_vars(a, acc)
    return [v.name for v in acc]


def term_depth(t) -> int:
    if isinstance(t, App) and t.args:
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def is_ground(t) -> bool:
    if isinstance(t, (App, Atom)):
        return all(is_ground(a) for a in t.args)
    return False


def substitute(t, mapping: dict):
    """Apply a variable -> term mapping simultaneously."""
    if isinstance(t, App):
        if not t.args:
            return t
        return App(t.functor, tuple(substitute(a, mapping) for a in t.args))
    if isinstance(t, Atom):
        return Atom(t.predicate, tuple(substitute(a, mapping) for a in t.args))
    return mapping.get(t, t)


# ------------------------------------------------------------ renaming

RESERVED = re.compile(r"_G\d+$")


class FreshSource:
    """Supplies names ``_G<n>``; confined to one derivation at a time."""

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)

    def fresh(self) -> Var:
        return Var(f"_G{next(self._counter)}")


def rename_clause(c: Clause, fresh: FreshSource) -> Clause:
    vs: list = []
    term_vars(c.head, vs)
    for b in c.body:
        term_vars(b, vs)
    if not vs:
        return c
    mapping = {v: fresh.fresh() for v in vs}
    return Clause(substitute(c.head, mapping),
                  tuple(substitute(b, mapping) for b in c.body), c.id)


# ------------------------------------------------------------ signatures

def _collect(t, funs: dict) -> None:
    if isinstance(t, App):
        if funs.setdefault(t.functor, len(t.args)) != len(t.args):
            raise SignatureError(
                f"arity clash for {t.functor}: {funs[t.functor]} vs {len(t.args)}")
        for a in t.args:
            _collect(a, funs)


def signature_of_atoms(atoms: Iterable[Atom]) -> Signature:
    funs: dict = {}
    preds: dict = {}
    for a in atoms:
        if preds.setdefault(a.predicate, len(a.args)) != len(a.args):
            raise SignatureError(
                f"arity clash for {a.predicate}: {preds[a.predicate]} vs {len(a.args)}")
        for t in a.args:
            _collect(t, funs)
    return Signature.of(funs, preds)


def signature_of_clauses(clauses: Iterable[Clause]) -> Signature:
    return signature_of_atoms(a for c in clauses for a in (c.head, *c.body))


def signature_of(p: Program) -> Signature:
    return signature_of_clauses(p.clauses)


# ------------------------------------------------------------ parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|%[^\n]*)
  | (?P<nl>\n)
  | (?P<query>\?-)
  | (?P<neck>:-)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*|[0-9]+)
  | (?P<punct>[(),.])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SyntaxErrorAt(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            toks.append(_Tok(kind if kind != "punct" else m.group(), m.group(),
                             line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise SyntaxErrorAt(f"{msg}, found {found}", t.line, t.col)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def term(self):
        t = self.tok
        if t.kind == "var":
            if RESERVED.match(t.text):
                raise SyntaxErrorAt(f"reserved variable name {t.text}", t.line, t.col)
            self.i += 1
            return Var(t.text)
        if t.kind == "name":
            self.i += 1
            return App(t.text, self.args())
        self.fail("expected a term")

    def args(self) -> tuple:
        if not self.accept("("):
            return ()
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def atom(self) -> Atom:
        t = self.tok
        if t.kind != "name":
            self.fail("expected an atom")
        self.i += 1
        return Atom(t.text, self.args())

    def conjunction(self) -> tuple:
        out = [self.atom()]
        while self.accept(","):
            out.append(self.atom())
        return tuple(out)


def parse_program(text: str) -> Program:
    p = _Parser(text)
    clauses = []
    while p.tok.kind != "eof":
        head = p.atom()
        body = p.conjunction() if p.accept("neck") else ()
        p.expect(".")
        clauses.append(Clause(head, body, f"c{len(clauses) + 1}"))
    clauses = tuple(clauses)
    return Program(clauses, signature_of_clauses(clauses))


def parse_goal(text: str, signature: Signature | None = None) -> Goal:
    p = _Parser(text)
    p.expect("query")
    if p.accept("."):
        atoms: tuple = ()
    elif p.tok.kind == "name" and p.tok.text == "true" and p.toks[p.i + 1].kind == ".":
        p.i += 1
        p.expect(".")
        atoms = ()
    else:
        atoms = p.conjunction()
        p.expect(".")
    if p.tok.kind != "eof":
        p.fail("expected end of goal")
    sig = signature_of_atoms(atoms)
    if signature is not None:
        signature.merge(sig)
    return Goal(atoms)


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("expected end of term")
    return t


def parse_atom(text: str) -> Atom:
    p = _Parser(text)
    a = p.atom()
    if p.tok.kind != "eof":
        p.fail("expected end of atom")
    return a


def terms_up_to(functions: dict, depth: int, leaves: Iterable = ()) -> list:
    """All terms of depth <= ``depth`` over ``functions`` and extra leaves.

    Ordered by depth, then by functor name, then by arguments.
    """
    level = [App(f, ()) for f, n in sorted(functions.items()) if n == 0] + list(leaves)
    out = list(level)
    seen = set(out)
    for _ in range(depth):
        pool = list(out)
        new = []
        for f, n in sorted(functions.items()):
            if n == 0:
                continue
            for args in itertools.product(pool, repeat=n):
                t = App(f, args)
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        if not new:
            break
        out.extend(new)
    return out


def ground_atoms(signature: Signature, depth: int, predicates: Iterable[str] | None = None) -> list:
    """All ground atoms with argument depth <= ``depth``."""
    terms = terms_up_to(signature.fun_arity, depth)
    preds = signature.pred_arity
    names = sorted(preds) if predicates is None else list(predicates)
    return [Atom(p, args) for p in names for args in itertools.product(terms, repeat=preds[p])]
