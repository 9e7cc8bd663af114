"""The free algebraic theory over a two-sorted logic-program signature.

An arrow ``m -> n`` is a tuple of ``|n|`` components over the canonical
placeholders ``x1 .. x|m|``. Interfaces are strings over ``{t, p}``. A
t-component is a term. A p-component is a flat tuple of items; an item is
an atom, a p-sorted placeholder, or an observation operator (an ``App``
whose arguments are single items). Arrows are kept in tuple normal form,
so the equational laws of the theory hold as plain value equality.

Composition is in diagram order: ``compose(a, b)`` is ``a;b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .syntax import App, Atom, Var, term_str


class InterfaceError(ValueError):
    """Arrows whose interfaces do not fit together."""


@dataclass(frozen=True, slots=True)
class Ph:
    """Canonical placeholder ``x<index>`` (1-based)."""

    index: int

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class Arrow:
    dom: str
    cod: str
    comps: tuple

    def __post_init__(self):
        if len(self.comps) != len(self.cod):
            raise InterfaceError(f"{len(self.comps)} components for codomain {self.cod!r}")

    def __str__(self) -> str:
        return arrow_str(self)

    @property
    def is_term(self) -> bool:
        return "p" not in self.dom and "p" not in self.cod


# ------------------------------------------------------------ substitution

def subst_term(t, comps: Sequence):
    """Replace ``Ph(j)`` by ``comps[j-1]`` inside a term."""
    if isinstance(t, Ph):
        return comps[t.index - 1]
    if isinstance(t, App) and t.args:
        return App(t.functor, tuple(subst_term(a, comps) for a in t.args))
    return t


def _subst_single(item, comps: Sequence):
    if isinstance(item, Ph):
        got = comps[item.index - 1]
        if len(got) != 1:
            raise InterfaceError(f"operator argument {item} receives {len(got)} items")
        return got[0]
    return _subst_item_one(item, comps)


def _subst_item_one(item, comps: Sequence):
    if isinstance(item, Atom):
        return Atom(item.predicate, tuple(subst_term(a, comps) for a in item.args))
    if isinstance(item, App):
        return App(item.functor, tuple(_subst_single(a, comps) for a in item.args))
    raise TypeError(f"not a formula item: {item!r}")


def subst_formula(items: tuple, comps: Sequence) -> tuple:
    """Replace placeholders in a p-component; p-placeholders are spliced."""
    out: list = []
    for item in items:
        if isinstance(item, Ph):
            out.extend(comps[item.index - 1])
        else:
            out.append(_subst_item_one(item, comps))
    return tuple(out)


def _subst_comp(sort: str, c, comps: Sequence):
    return subst_formula(c, comps) if sort == "p" else subst_term(c, comps)


def compose(a: Arrow, b: Arrow) -> Arrow:
    """``a;b``: plug ``a``'s components into ``b``'s placeholders."""
    if a.cod != b.dom:
        raise InterfaceError(f"cannot compose {a.dom}->{a.cod} with {b.dom}->{b.cod}")
    if _is_identity(a):
        return b
    if _is_identity(b):
        return a
    comps = a.comps
    return Arrow(a.dom, b.cod, tuple(_subst_comp(s, c, comps) for s, c in zip(b.cod, b.comps)))


def compose_all(arrows: Iterable[Arrow]) -> Arrow:
    arrows = list(arrows)
    out = arrows[0]
    for a in arrows[1:]:
        out = compose(out, a)
    return out


def _is_identity(a: Arrow) -> bool:
    if a.dom != a.cod:
        return False
    for i, (s, c) in enumerate(zip(a.cod, a.comps), 1):
        if s == "t":
            if c != Ph(i):
                return False
        elif c != (Ph(i),):
            return False
    return True


def is_identity(a: Arrow) -> bool:
    return _is_identity(a)


# ------------------------------------------------------------ shifting

def shift_term(t, k: int):
    if k == 0:
        return t
    if isinstance(t, Ph):
        return Ph(t.index + k)
    if isinstance(t, App) and t.args:
        return App(t.functor, tuple(shift_term(a, k) for a in t.args))
    if isinstance(t, Atom):
        return Atom(t.predicate, tuple(shift_term(a, k) for a in t.args))
    return t


def shift_comp(sort: str, c, k: int):
    if sort == "p":
        return tuple(shift_term(i, k) for i in c)
    return shift_term(c, k)


def tensor(*arrows: Arrow) -> Arrow:
    dom, cod, comps = "", "", []
    for a in arrows:
        k = len(dom)
        comps.extend(shift_comp(s, c, k) for s, c in zip(a.cod, a.comps))
        dom += a.dom
        cod += a.cod
    return Arrow(dom, cod, tuple(comps))


# ------------------------------------------------------------ constants

def _ph_comp(sort: str, i: int):
    return (Ph(i),) if sort == "p" else Ph(i)


def identity(i: str) -> Arrow:
    return Arrow(i, i, tuple(_ph_comp(s, k) for k, s in enumerate(i, 1)))


def symmetry(n: str, m: str) -> Arrow:
    order = list(range(len(n) + 1, len(n) + len(m) + 1)) + list(range(1, len(n) + 1))
    dom = n + m
    return Arrow(dom, m + n, tuple(_ph_comp(dom[j - 1], j) for j in order))


def duplicator(n: str) -> Arrow:
    ids = tuple(_ph_comp(s, k) for k, s in enumerate(n, 1))
    return Arrow(n, n + n, ids + ids)


def discharger(n: str) -> Arrow:
    return Arrow(n, "", ())


def permutation(perm: Sequence[int], sorts: str | None = None) -> Arrow:
    """Arrow whose i-th component is ``x_{perm[i]}`` (perm is 1-based)."""
    sorts = sorts if sorts is not None else "t" * len(perm)
    return Arrow(sorts, "".join(sorts[j - 1] for j in perm),
                 tuple(_ph_comp(sorts[j - 1], j) for j in perm))


def term_arrow(n: int, *terms) -> Arrow:
    """All-t arrow ``t^n -> t^len(terms)``."""
    return Arrow("t" * n, "t" * len(terms), tuple(terms))


def op(functor: str, arity: int) -> Arrow:
    """The generator ``f: t^arity -> t``."""
    return term_arrow(arity, App(functor, tuple(Ph(i) for i in range(1, arity + 1))))


def predicate_arrow(pred: str, arity: int) -> Arrow:
    """The bare predicate ``p: t^arity -> p``."""
    return Arrow("t" * arity, "p", ((Atom(pred, tuple(Ph(i) for i in range(1, arity + 1))),),))


def conj(r: int) -> Arrow:
    """``p^r -> p`` joining r formulas; ``conj(0)`` is the empty goal."""
    return Arrow("p" * r, "p", (tuple(Ph(i) for i in range(1, r + 1)),))


# ------------------------------------------------------------ inspection

def placeholders(x, acc: set | None = None) -> set:
    acc = set() if acc is None else acc
    if isinstance(x, Ph):
        acc.add(x.index)
    elif isinstance(x, (App, Atom)):
        for a in x.args:
            placeholders(a, acc)
    elif isinstance(x, tuple):
        for a in x:
            placeholders(a, acc)
    return acc


def used(a: Arrow) -> set:
    return placeholders(a.comps)


def ph_order(x, acc: list | None = None) -> list:
    """Placeholder indices in first-occurrence order."""
    acc = [] if acc is None else acc
    if isinstance(x, Ph):
        if x.index not in acc:
            acc.append(x.index)
    elif isinstance(x, (App, Atom)):
        for a in x.args:
            ph_order(a, acc)
    elif isinstance(x, tuple):
        for a in x:
            ph_order(a, acc)
    return acc


def is_permutation(a: Arrow) -> bool:
    return (a.is_term and len(a.dom) == len(a.cod)
            and all(isinstance(c, Ph) for c in a.comps)
            and len(set(a.comps)) == len(a.comps))


def inverse_permutation(a: Arrow) -> Arrow:
    inv = [0] * len(a.comps)
    for i, c in enumerate(a.comps, 1):
        inv[c.index - 1] = i
    return permutation(inv, a.cod)


def rename_arrow(a: Arrow, mapping: dict) -> Arrow:
    """Rename placeholder indices by ``mapping`` (old -> new), same dom."""
    comps = [Ph(mapping[i]) for i in range(1, len(a.dom) + 1)]
    return Arrow(a.dom, a.cod, tuple(_subst_comp(s, c, comps) for s, c in zip(a.cod, a.comps)))


# ------------------------------------------------------------ printing

def item_str(item) -> str:
    if isinstance(item, Atom):
        if not item.args:
            return item.predicate
        return f"{item.predicate}({','.join(term_str(a) for a in item.args)})"
    return term_str(item)


def comp_str(sort: str, c) -> str:
    if sort == "p":
        return " & ".join(item_str(i) for i in c) if c else "true"
    return term_str(c)


def arrow_name(a: Arrow) -> str | None:
    """Structural name (id, gamma, nabla, !) when the arrow is one."""
    sub = lambda s: s or "0"
    if _is_identity(a):
        return f"id_{sub(a.dom)}"
    if not a.comps:
        return f"!_{sub(a.dom)}"
    if len(a.cod) == 2 * len(a.dom) and a == duplicator(a.dom):
        return f"nabla_{sub(a.dom)}"
    for k in range(1, len(a.dom)):
        if a == symmetry(a.dom[:k], a.dom[k:]):
            return f"gamma_{a.dom[:k]},{a.dom[k:]}"
    return None


def arrow_str(a: Arrow) -> str:
    body = ", ".join(comp_str(s, c) for s, c in zip(a.cod, a.comps))
    return f"<{body}> : {a.dom or 'e'} -> {a.cod or 'e'}"


def arrow_label(a: Arrow) -> str:
    """Short form for traces: a structural name if there is one."""
    return arrow_name(a) or arrow_str(a)


# ------------------------------------------------------------ substitutions

@dataclass(frozen=True)
class Substitution:
    """Named-variable substitution; ``bindings`` keeps domain order."""

    bindings: tuple = ()   # ((Var, term), ...)

    @staticmethod
    def of(pairs) -> "Substitution":
        items = pairs.items() if isinstance(pairs, dict) else pairs
        return Substitution(tuple((v, t) for v, t in items if v != t))

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def domain(self) -> list:
        return [v for v, _ in self.bindings]

    def __call__(self, t):
        from .syntax import substitute
        return substitute(t, self.as_dict())

    def __len__(self) -> int:
        return len(self.bindings)

    def __str__(self) -> str:
        if not self.bindings:
            return "ε"
        return "[" + ", ".join(f"{term_str(t)}/{v}" for v, t in self.bindings) + "]"


def substitution_to_arrow(s: Substitution, var_order_in: Sequence, var_order_out: Sequence) -> Arrow:
    """Read ``s`` on ``var_order_out`` as an arrow over ``var_order_in``.

    Unbound output variables are mapped to themselves.
    """
    def name(v):
        return v.name if isinstance(v, Var) else v
    index = {name(v): i for i, v in enumerate(var_order_in, 1)}
    binds = {name(v): t for v, t in s.bindings}

    def conv(t):
        if isinstance(t, Var):
            if t.name not in index:
                raise ValueError(f"variable {t.name} missing from the input order")
            return Ph(index[t.name])
        if isinstance(t, App) and t.args:
            return App(t.functor, tuple(conv(a) for a in t.args))
        return t

    comps = tuple(conv(binds.get(name(v), Var(name(v)))) for v in var_order_out)
    return Arrow("t" * len(var_order_in), "t" * len(var_order_out), comps)


def arrow_to_substitution(a: Arrow, names_in: Sequence, names_out: Sequence) -> Substitution:
    if not a.is_term:
        raise InterfaceError("only all-t arrows denote substitutions")
    if len(names_in) != len(a.dom) or len(names_out) != len(a.cod):
        raise ValueError("name sequences do not match the interfaces")
    vs = [v if isinstance(v, Var) else Var(v) for v in names_in]
    return Substitution.of(
        ((v if isinstance(v, Var) else Var(v)), subst_term(c, vs))
        for v, c in zip(names_out, a.comps))


# ------------------------------------------------------------ slices

@dataclass(frozen=True)
class Slice:
    """``id_left (x) basic (x) id_right``; kind is op/gamma/nabla/bang/id."""

    left: int
    kind: str
    right: int
    functor: str = ""
    arity: int = 0

    @property
    def basic(self) -> Arrow:
        if self.kind == "op":
            return op(self.functor, self.arity)
        if self.kind == "gamma":
            return symmetry("t", "t")
        if self.kind == "nabla":
            return duplicator("t")
        if self.kind == "bang":
            return discharger("t")
        return identity("t")

    @property
    def arrow(self) -> Arrow:
        return tensor(identity("t" * self.left), self.basic, identity("t" * self.right))


def slice_structure(a: Arrow) -> list:
    """Slices ``s1..sl`` with ``s1;...;sl = a`` (empty list for identities)."""
    if not a.is_term:
        raise InterfaceError("only all-t arrows decompose into slices")
    ops: list = []
    comps = list(a.comps)
    while True:
        for i, c in enumerate(comps):
            if isinstance(c, App):
                ops.append(Slice(i, "op", len(comps) - i - 1, c.functor, len(c.args)))
                comps[i:i + 1] = list(c.args)
                break
        else:
            break
    ops.reverse()
    return _arrangement(len(a.dom), [c.index for c in comps]) + ops


def _arrangement(m: int, target: list) -> list:
    out: list = []
    counts = {j: target.count(j) for j in set(target)}
    cur = list(range(1, m + 1))
    for pos in range(m - 1, -1, -1):
        if counts.get(cur[pos], 0) == 0:
            out.append(Slice(pos, "bang", len(cur) - pos - 1))
            del cur[pos]
    pos = 0
    while pos < len(cur):
        v = cur[pos]
        for _ in range(counts[v] - 1):
            out.append(Slice(pos, "nabla", len(cur) - pos - 1))
            cur.insert(pos, v)
        pos += counts[v]
    # stable matching of occurrences, then bubble sort by target position
    seen: dict = {}
    slots: dict = {}
    for k, v in enumerate(target):
        slots.setdefault(v, []).append(k)
    keys = []
    for v in cur:
        keys.append(slots[v][seen.get(v, 0)])
        seen[v] = seen.get(v, 0) + 1
    n = len(keys)
    for i in range(n):
        for j in range(n - 1 - i):
            if keys[j] > keys[j + 1]:
                keys[j], keys[j + 1] = keys[j + 1], keys[j]
                out.append(Slice(j, "gamma", n - j - 2))
    return out


def decompose_slices(a: Arrow) -> list:
    """Slice arrows whose composition in order equals ``a``."""
    slices = slice_structure(a)
    if not slices:
        return [identity(a.dom)]
    return [s.arrow for s in slices]
