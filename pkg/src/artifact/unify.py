"""Unification by equation solving, and the equalizers and pullbacks it
computes in the theory of substitutions.

Anything that is not an ``App`` or an ``Atom`` counts as a variable, so
the same code unifies named terms (``Var``) and arrow components
(``Ph``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .syntax import App, Atom, term_vars, substitute, terms_up_to
from .theory import Arrow, Ph, Substitution, compose, ph_order, shift_term


class FuelExhausted(RuntimeError):
    pass


def _is_var(t) -> bool:
    return not isinstance(t, (App, Atom))


def _head(t):
    if isinstance(t, Atom):
        return ("atom", t.predicate, len(t.args))
    return ("app", t.functor, len(t.args))


def mgu(eqs: Iterable, fuel: int | None = None) -> Optional[Substitution]:
    """Most general unifier of a set of equations, or None.

    Steps: (1) drop ``x = x``; (2) split ``f(..) = f(..)``; (3) use
    ``x = t`` to eliminate ``x`` from the other equations. They run
    cyclically as 1, 3 on variable pairs, 2, 3 on the rest, leftmost
    equation first, until nothing changes. A clash or a failed occurs
    check cannot be removed by any step, so it is reported at once.

    >>> from artifact.syntax import parse_term as t
    >>> str(mgu([(t("sum(0,X1,X1)"), t("sum(0,s(0),Z)"))]))
    '[s(0)/X1, s(0)/Z]'
    >>> mgu([(t("f(X)"), t("X"))]) is None
    True
    """
    eqs = [(l, r) for l, r in eqs]
    order: dict = {}
    for side in (0, 1):
        for e in eqs:
            for v in term_vars(e[side]):
                order.setdefault(v, len(order))
    solver = _Solver(eqs, fuel if fuel is not None else 10_000 + 4 * _size(eqs) ** 2)
    solved = solver.run()
    if solved is None:
        return None
    pairs = sorted(solved.items(), key=lambda kv: order.get(kv[0], len(order)))
    return Substitution(tuple(pairs))


def _size(eqs) -> int:
    n = 0
    stack = [x for e in eqs for x in e]
    while stack:
        x = stack.pop()
        n += 1
        if isinstance(x, (App, Atom)):
            stack.extend(x.args)
    return n


class _Solver:
    def __init__(self, eqs: list, fuel: int):
        self.eqs: list = []          # [left, right, locked var or None] or None
        self.occ: dict = {}          # var -> set of equation slots
        self.fuel = fuel
        for l, r in eqs:
            self._add(l, r)

    def _add(self, l, r, at: int | None = None):
        entry = [l, r, None]
        if at is None:
            self.eqs.append(entry)
            at = len(self.eqs) - 1
        else:
            self.eqs[at] = entry
        for v in self._vars(entry):
            self.occ.setdefault(v, set()).add(at)
        return at

    @staticmethod
    def _vars(entry) -> list:
        acc: list = []
        term_vars(entry[0], acc)
        term_vars(entry[1], acc)
        return acc

    def _drop(self, i: int):
        for v in self._vars(self.eqs[i]):
            self.occ[v].discard(i)
        self.eqs[i] = None

    def _tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("unification step budget exhausted")

    def _eliminate(self, i: int, x, t) -> bool:
        others = self.occ.get(x, set()) - {i}
        if not others:
            return False
        for j in sorted(others):
            self._tick()
            l, r, lock = self.eqs[j]
            self._drop(j)
            self._add(substitute(l, {x: t}), substitute(r, {x: t}), j)
            self.eqs[j][2] = lock
        return True

    def _orient(self, entry):
        """Candidate (var, term) readings of an equation."""
        l, r, lock = entry
        if lock is not None:
            return [(l, r)] if lock == "l" else [(r, l)]
        out = []
        if _is_var(l):
            out.append((l, r))
        if _is_var(r):
            out.append((r, l))
        if len(out) == 2 and self._in_locked(l) and not self._in_locked(r):
            out.reverse()   # keep solved equations untouched where possible
        return out

    def _in_locked(self, x) -> bool:
        return any(self.eqs[j][2] is not None for j in self.occ.get(x, ()))

    def _step3(self, var_pairs: bool) -> Optional[bool]:
        changed = False
        for i in range(len(self.eqs)):
            entry = self.eqs[i]
            if entry is None:
                continue
            l, r, _ = entry
            if (_is_var(l) and _is_var(r)) != var_pairs:
                continue
            for x, t in self._orient(entry):
                if x == t:
                    continue
                if x in term_vars(t):
                    return None   # occurs check
                if self._eliminate(i, x, t):
                    entry[2] = "l" if x is l or x == l else "r"
                    changed = True
                    break
        return changed

    def _step2(self) -> Optional[bool]:
        changed = False
        new: list = []
        for entry in self.eqs:
            if entry is None:
                continue
            l, r, lock = entry
            if _is_var(l) or _is_var(r):
                new.append((l, r, lock))
                continue
            self._tick()
            if _head(l) != _head(r):
                return None   # clash
            changed = True
            new.extend((a, b, None) for a, b in zip(l.args, r.args))
        if changed:
            self.eqs, self.occ = [], {}
            for l, r, lock in new:
                i = self._add(l, r)
                self.eqs[i][2] = lock
        return changed

    def _step1(self) -> bool:
        changed = False
        for i, entry in enumerate(self.eqs):
            if entry is not None and _is_var(entry[0]) and entry[0] == entry[1]:
                self._drop(i)
                changed = True
        return changed

    def run(self) -> Optional[dict]:
        while True:
            self._tick()
            c1 = self._step1()
            c3 = self._step3(True)
            if c3 is None:
                return None
            c2 = self._step2()
            if c2 is None:
                return None
            c4 = self._step3(False)
            if c4 is None:
                return None
            if not (c1 or c2 or c3 or c4):
                break
        return self._solution()

    def _solution(self) -> Optional[dict]:
        live = [e for e in self.eqs if e is not None]
        out: dict = {}
        for e in live:
            for x, t in self._orient(e):
                if len(self.occ.get(x, ())) == 1 and x not in out:
                    out[x] = t
                    break
            else:
                return None
        for t in out.values():
            if any(v in out for v in term_vars(t)):
                return None
        return out


def unify_atoms(a: Atom, h: Atom) -> Optional[Substitution]:
    if a.predicate != h.predicate or len(a.args) != len(h.args):
        return None
    return mgu([(a, h)])


def match(pattern, target, binding: dict | None = None) -> Optional[dict]:
    """One-way matching; variables in ``target`` are treated as constants."""
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if _is_var(p):
            if p in binding:
                if binding[p] != t:
                    return None
            else:
                binding[p] = t
        elif _is_var(t) or _head(p) != _head(t):
            return None
        else:
            stack.extend(zip(p.args, t.args))
    return binding


# ------------------------------------------------------------ equalizers

@dataclass(frozen=True)
class PullbackResult:
    apex: str
    proj_left: Arrow
    proj_right: Arrow


def _renumber(comps: Sequence) -> tuple:
    order = ph_order(tuple(comps))
    mapping = [None] * (max(order, default=0) + 1)
    for k, j in enumerate(order, 1):
        mapping[j] = Ph(k)
    lookup = {Ph(j): mapping[j] for j in order}
    return len(order), tuple(substitute(c, lookup) for c in comps)


def equalizer(s1: Arrow, s2: Arrow) -> Optional[Arrow]:
    """The mgu arrow ``theta`` with ``theta;s1 = theta;s2``."""
    if s1.dom != s2.dom or s1.cod != s2.cod:
        raise ValueError("equalizer needs parallel arrows")
    if not (s1.is_term and s2.is_term):
        raise ValueError("equalizer needs all-t arrows")
    sol = mgu(list(zip(s1.comps, s2.comps)))
    if sol is None:
        return None
    binds = sol.as_dict()
    comps = [binds.get(Ph(j), Ph(j)) for j in range(1, len(s1.dom) + 1)]
    k, comps = _renumber(comps)
    return Arrow("t" * k, s1.dom, comps)


def pullback_oracle(sL: Arrow, sR: Arrow) -> Optional[PullbackResult]:
    """Pullback of a cospan, by splitting the equalizer on the joint domain."""
    if sL.cod != sR.cod:
        raise ValueError("pullback needs arrows with a common codomain")
    nx = len(sL.dom)
    left = Arrow(sL.dom + sR.dom, sL.cod, sL.comps)
    right = Arrow(sL.dom + sR.dom, sR.cod, tuple(shift_term(c, nx) for c in sR.comps))
    theta = equalizer(left, right)
    if theta is None:
        return None
    return PullbackResult(theta.dom,
                          Arrow(theta.dom, sL.dom, theta.comps[:nx]),
                          Arrow(theta.dom, sR.dom, theta.comps[nx:]))


def functions_of(*arrows: Arrow) -> dict:
    funs: dict = {}
    stack = [c for a in arrows for c in a.comps]
    while stack:
        x = stack.pop()
        if isinstance(x, App):
            funs[x.functor] = len(x.args)
            stack.extend(x.args)
        elif isinstance(x, (Atom, tuple)):
            stack.extend(x.args if isinstance(x, Atom) else x)
    return funs


def verify_universal(p: PullbackResult, sL: Arrow, sR: Arrow, depth: int,
                     functions: dict | None = None) -> bool:
    """Brute-force check of the pullback property on small cones.

    Every cone ``(q0, q1)`` over ``w <= |apex|`` placeholders whose
    components have depth <= ``depth`` must factor uniquely through the
    projections.
    """
    if p.proj_left.cod != sL.dom or p.proj_right.cod != sR.dom:
        return False
    if p.proj_left.dom != p.apex or p.proj_right.dom != p.apex:
        return False
    if compose(p.proj_left, sL) != compose(p.proj_right, sR):
        return False
    proj = p.proj_left.comps + p.proj_right.comps
    if len(ph_order(proj)) != len(p.apex):
        return False   # an unused apex placeholder breaks uniqueness
    funs = dict(functions) if functions is not None else functions_of(sL, sR, p.proj_left, p.proj_right)
    ny = len(sR.dom)
    right_used = set(ph_order(sR.comps))
    for w in range(len(p.apex) + 1):
        terms = terms_up_to(funs, depth, [Ph(i) for i in range(1, w + 1)])
        for q0c in itertools.product(terms, repeat=len(sL.dom)):
            q0 = Arrow("t" * w, sL.dom, q0c)
            goal = compose(q0, sL).comps
            forced = {}
            for pat, tgt in zip(sR.comps, goal):
                forced = match(pat, tgt, forced)
                if forced is None:
                    break
            if forced is None:
                continue
            free = [j for j in range(1, ny + 1) if j not in right_used]
            for extra in itertools.product(terms, repeat=len(free)):
                binds = dict(forced)
                binds.update({Ph(j): t for j, t in zip(free, extra)})
                q1c = tuple(binds[Ph(j)] for j in range(1, ny + 1))
                if not _factors(proj, q0c + q1c):
                    return False
    return True


def _factors(proj: tuple, cone: tuple) -> bool:
    binding: dict = {}
    for pat, tgt in zip(proj, cone):
        binding = match(pat, tgt, binding)
        if binding is None:
            return False
    return True
