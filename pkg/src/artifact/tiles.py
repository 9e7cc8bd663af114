"""Flat tiles, their composition, the pullback basis, and tile-based
pullback synthesis.

Borders are stored in the direction of the theory: a tile
``<initial, trigger, effect, final>`` has ``initial: A -> N``,
``trigger: W -> N``, ``effect: P -> A`` and ``final: P -> W``. A tile
commutes when ``effect;initial = final;trigger``.

Every tile carries the proof term that built it. ``eval_proof`` rebuilds
a tile from its proof alone.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .syntax import App, Signature
from .theory import (Arrow, Ph, Slice, arrow_label, compose, discharger, duplicator,
                     identity, inverse_permutation, is_identity, is_permutation, op,
                     permutation, placeholders, slice_structure, symmetry, tensor,
                     term_arrow)


class BorderError(ValueError):
    """Tiles or arrows whose borders do not match."""


# ------------------------------------------------------------ proof terms

@dataclass(frozen=True)
class Basic:
    name: str


@dataclass(frozen=True)
class HId:
    arrow: Arrow


@dataclass(frozen=True)
class VId:
    arrow: Arrow


@dataclass(frozen=True)
class HComp:
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class VComp:
    top: "ProofTerm"
    bottom: "ProofTerm"


@dataclass(frozen=True)
class Par:
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class Macro:
    """A named derived tile; evaluates to its body."""

    name: str
    body: "ProofTerm"


ProofTerm = Union[Basic, HId, VId, HComp, VComp, Par, Macro]


def proof_lines(p: ProofTerm, depth: int = 0) -> list:
    """One node per line, two spaces of indentation per level."""
    pad = "  " * depth
    if isinstance(p, Basic):
        return [pad + p.name]
    if isinstance(p, HId):
        return [f"{pad}hid {arrow_label(p.arrow)}"]
    if isinstance(p, VId):
        return [f"{pad}vid {arrow_label(p.arrow)}"]
    if isinstance(p, Macro):
        return [f"{pad}{p.name}"] + proof_lines(p.body, depth + 1)
    kind = {HComp: "hcomp", VComp: "vcomp", Par: "par"}[type(p)]
    a, b = (p.top, p.bottom) if isinstance(p, VComp) else (p.left, p.right)
    return [pad + kind] + proof_lines(a, depth + 1) + proof_lines(b, depth + 1)


def proof_str(p: ProofTerm) -> str:
    return "\n".join(proof_lines(p))


def proof_size(p: ProofTerm) -> int:
    if isinstance(p, (Basic, HId, VId)):
        return 1
    if isinstance(p, Macro):
        return proof_size(p.body)
    a, b = (p.top, p.bottom) if isinstance(p, VComp) else (p.left, p.right)
    return 1 + proof_size(a) + proof_size(b)


def proof_leaves(p: ProofTerm) -> list:
    if isinstance(p, (Basic, HId, VId)):
        return [p]
    if isinstance(p, Macro):
        return proof_leaves(p.body)
    a, b = (p.top, p.bottom) if isinstance(p, VComp) else (p.left, p.right)
    return proof_leaves(a) + proof_leaves(b)


# ------------------------------------------------------------ tiles

@dataclass(frozen=True)
class Tile:
    initial: Arrow
    trigger: Arrow
    effect: Arrow
    final: Arrow
    proof: Optional[ProofTerm] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        i, t, e, f = self.initial, self.trigger, self.effect, self.final
        if i.cod != t.cod or e.cod != i.dom or f.cod != t.dom or e.dom != f.dom:
            raise BorderError(f"ill-formed tile borders {self.border_str()}")

    @property
    def border(self) -> tuple:
        return (self.initial, self.trigger, self.effect, self.final)

    def commutes(self) -> bool:
        return compose(self.effect, self.initial) == compose(self.final, self.trigger)

    def named(self, name: str) -> "Tile":
        return Tile(*self.border, proof=Macro(name, self.proof))

    def with_proof(self, proof: ProofTerm) -> "Tile":
        return Tile(*self.border, proof=proof)

    def border_str(self) -> str:
        return "<" + " | ".join(arrow_label(a) for a in self.border) + ">"

    def __str__(self) -> str:
        return self.border_str()


def hcomp(a: Tile, b: Tile) -> Tile:
    """Paste ``b`` along ``a``'s effect; ``a.effect`` must be ``b.trigger``."""
    if a.effect != b.trigger:
        raise BorderError(f"hcomp: effect {arrow_label(a.effect)} != trigger {arrow_label(b.trigger)}")
    return Tile(compose(b.initial, a.initial), a.trigger, b.effect,
                compose(b.final, a.final), HComp(a.proof, b.proof))


def vcomp(a: Tile, b: Tile) -> Tile:
    """Paste ``b`` below ``a``; ``a.final`` must be ``b.initial``."""
    if a.final != b.initial:
        raise BorderError(f"vcomp: final {arrow_label(a.final)} != initial {arrow_label(b.initial)}")
    return Tile(a.initial, compose(b.trigger, a.trigger), compose(b.effect, a.effect),
                b.final, VComp(a.proof, b.proof))


def par(*tiles: Tile) -> Tile:
    out = tiles[0]
    for t in tiles[1:]:
        out = Tile(tensor(out.initial, t.initial), tensor(out.trigger, t.trigger),
                   tensor(out.effect, t.effect), tensor(out.final, t.final),
                   Par(out.proof, t.proof))
    return out


def hid(u: Arrow) -> Tile:
    return Tile(identity(u.cod), u, u, identity(u.dom), HId(u))


def vid(t: Arrow) -> Tile:
    return Tile(t, identity(t.cod), identity(t.dom), t, VId(t))


def _h(a: Tile, b: Tile) -> Tile:
    """hcomp that drops horizontal identities (same borders, smaller proof)."""
    if isinstance(b.proof, HId):
        if a.effect != b.trigger:
            raise BorderError("hcomp: borders do not match")
        return a
    if isinstance(a.proof, HId):
        if a.effect != b.trigger:
            raise BorderError("hcomp: borders do not match")
        return b
    return hcomp(a, b)


def _v(a: Tile, b: Tile) -> Tile:
    """vcomp that drops vertical identities."""
    if isinstance(b.proof, VId):
        if a.final != b.initial:
            raise BorderError("vcomp: borders do not match")
        return a
    if isinstance(a.proof, VId):
        if a.final != b.initial:
            raise BorderError("vcomp: borders do not match")
        return b
    return vcomp(a, b)


def _par(*tiles: Tile) -> Tile:
    """par that skips identity cells on the empty interface."""
    keep = [t for t in tiles if not (isinstance(t.proof, (HId, VId)) and not t.initial.dom
                                     and not t.initial.cod and not t.trigger.dom)]
    if not keep:
        return tiles[0]
    return par(*keep)


# ------------------------------------------------------------ basic tiles

def tid(n: int) -> Arrow:
    return identity("t" * n)


def gamma(n: int, m: int) -> Arrow:
    return symmetry("t" * n, "t" * m)


def nabla_then(n: int, f: str, left: bool) -> Arrow:
    """``nabla_n;(id_n (x) f)`` or, with ``left``, ``nabla_n;(f (x) id_n)``."""
    xs = tuple(Ph(i) for i in range(1, n + 1))
    fx = App(f, xs)
    return term_arrow(n, fx, *xs) if left else term_arrow(n, *xs, fx)


def R_op(f: str, n: int) -> Tile:
    g = op(f, n)
    return Tile(g, g, tid(n), tid(n), Basic(f"R_{f}"))


def D_op(f: str, n: int) -> Tile:
    return Tile(tensor(op(f, n), tid(1)), duplicator("t"), nabla_then(n, f, False), op(f, n),
                Basic(f"D_{f}"))


def Dh_op(f: str, n: int) -> Tile:
    return Tile(duplicator("t"), tensor(op(f, n), tid(1)), op(f, n), nabla_then(n, f, False),
                Basic(f"Dh_{f}"))


def R_nabla() -> Tile:
    d = duplicator("t")
    return Tile(d, d, tid(1), tid(1), Basic("R_nabla"))


def R_gamma() -> Tile:
    g = gamma(1, 1)
    return Tile(g, g, tid(2), tid(2), Basic("R_gamma"))


def D_nabla() -> Tile:
    d = duplicator("t")
    return Tile(tensor(d, tid(1)), tensor(tid(1), d), d, d, Basic("D_nabla"))


@dataclass(frozen=True)
class TileSystem:
    tiles: tuple = ()             # ((name, Tile), ...)
    signature: Signature = field(default_factory=Signature)
    observations: tuple = ()      # extra vertical operators (name, arity)

    def get(self, name: str) -> Tile:
        for n, t in self.tiles:
            if n == name:
                return t
        raise KeyError(name)

    def names(self) -> list:
        return [n for n, _ in self.tiles]

    def __len__(self) -> int:
        return len(self.tiles)

    def extend(self, more) -> "TileSystem":
        return TileSystem(self.tiles + tuple(more), self.signature, self.observations)


def basic_tiles(sig: Signature) -> TileSystem:
    """The pullback basis: ``R_f, D_f, Dh_f`` per operator plus three more."""
    out = []
    for f, n in sig.functions:
        out += [(f"R_{f}", R_op(f, n)), (f"D_{f}", D_op(f, n)), (f"Dh_{f}", Dh_op(f, n))]
    out += [("R_nabla", R_nabla()), ("R_gamma", R_gamma()), ("D_nabla", D_nabla())]
    return TileSystem(tuple(out), sig)


def eval_proof(p: ProofTerm, sys: TileSystem) -> Tile:
    """Rebuild the tile denoted by ``p``; leaves are looked up in ``sys``."""
    if isinstance(p, Basic):
        return sys.get(p.name).with_proof(p)
    if isinstance(p, HId):
        return hid(p.arrow)
    if isinstance(p, VId):
        return vid(p.arrow)
    if isinstance(p, Macro):
        return eval_proof(p.body, sys).with_proof(p)
    if isinstance(p, HComp):
        return hcomp(eval_proof(p.left, sys), eval_proof(p.right, sys)).with_proof(p)
    if isinstance(p, VComp):
        return vcomp(eval_proof(p.top, sys), eval_proof(p.bottom, sys)).with_proof(p)
    if isinstance(p, Par):
        return par(eval_proof(p.left, sys), eval_proof(p.right, sys)).with_proof(p)
    raise TypeError(f"not a proof term: {p!r}")


def functions_in(*arrows: Arrow) -> dict:
    funs: dict = {}
    stack = [c for a in arrows for c in a.comps]
    while stack:
        x = stack.pop()
        if isinstance(x, App):
            funs[x.functor] = len(x.args)
            stack.extend(x.args)
        elif isinstance(x, tuple):
            stack.extend(x)
    return funs


def system_for(*tiles: Tile) -> TileSystem:
    """Pullback basis over the operators found on the given borders."""
    funs: dict = {}
    for t in tiles:
        funs.update(functions_in(*t.border))
    return basic_tiles(Signature.of(funs))


# ------------------------------------------------------------ duality

def dual(t: Tile) -> Tile:
    """Transpose: ``<i, t, e, f>`` becomes ``<t, i, f, e>``."""
    return Tile(t.trigger, t.initial, t.final, t.effect, dual_proof(t.proof))


def dual_proof(p: ProofTerm) -> ProofTerm:
    if isinstance(p, Basic):
        n = p.name
        if n == "D_nabla":
            return dh_nabla().proof
        if n.startswith("Dh_"):
            return Basic("D_" + n[3:])
        if n.startswith("D_"):
            return Basic("Dh_" + n[2:])
        if n.startswith("R_"):
            return p
        raise ValueError(f"{n} is not a pullback basis tile")
    if isinstance(p, HId):
        return VId(p.arrow)
    if isinstance(p, VId):
        return HId(p.arrow)
    if isinstance(p, HComp):
        return VComp(dual_proof(p.left), dual_proof(p.right))
    if isinstance(p, VComp):
        return HComp(dual_proof(p.top), dual_proof(p.bottom))
    if isinstance(p, Par):
        return Par(dual_proof(p.left), dual_proof(p.right))
    if isinstance(p, Macro):
        if p.name == "Dh_nabla":
            return Basic("D_nabla")
        return Macro(_dual_name(p.name), dual_proof(p.body))
    raise TypeError(f"not a proof term: {p!r}")


def _dual_name(name: str) -> str:
    for a, b in (("Dh'_", "D'_"), ("D'_", "Dh'_"), ("iso_west", "iso_north"),
                 ("iso_north", "iso_west"), ("factor_west", "factor_north"),
                 ("factor_north", "factor_west")):
        if name.startswith(a):
            return b + name[len(a):]
    return "dual " + name


# ------------------------------------------------------------ lemma cells

def _slice_R(s: Slice) -> Tile:
    if s.kind == "op":
        core = R_op(s.functor, s.arity)
    elif s.kind == "nabla":
        core = R_nabla()
    elif s.kind == "gamma":
        core = R_gamma()
    elif s.kind == "id":
        core = hid(tid(1))
    else:
        raise ValueError("lift_R: the arrow contains a discharger")
    parts = ([hid(tid(s.left))] if s.left else []) + [core] + ([hid(tid(s.right))] if s.right else [])
    return par(*parts)


def lift_R(t: Arrow) -> Tile:
    """The tile ``<t, t, id, id>`` for a discharger-free arrow ``t``.

    Slices are stacked along the diagonal: the cell for ``s1;s2`` is the
    cell for ``s2`` beside ``vid(s1)``, above the cell for ``s1``.
    """
    slices = slice_structure(t)
    if any(s.kind == "bang" for s in slices):
        raise ValueError("lift_R: the arrow contains a discharger")
    if not slices:
        return hid(identity(t.dom))
    cell = _slice_R(slices[0])
    prefix = slices[0].arrow
    for s in slices[1:]:
        cell = vcomp(hcomp(_slice_R(s), vid(prefix)), cell)
        prefix = compose(prefix, s.arrow)
    return cell


def iso_west(theta: Arrow, pi: Arrow) -> Tile:
    """``<theta, pi, id, theta;pi^-1>`` for a permutation ``pi``."""
    if is_identity(pi):
        return vid(theta)
    rest = compose(theta, inverse_permutation(pi))
    if is_identity(rest):
        return lift_R(pi)
    return hcomp(lift_R(pi), vid(rest))


def iso_north(pi: Arrow, sigma: Arrow) -> Tile:
    """``<pi, sigma, sigma;pi^-1, id>`` for a permutation ``pi``."""
    if is_identity(pi):
        return hid(sigma)
    return dual(iso_west(sigma, pi))


def factor_west(theta: Arrow, s: Arrow, rest: Arrow) -> Tile:
    """``<theta, s, id, rest>`` when ``theta = rest;s``."""
    if is_identity(rest):
        return lift_R(s)
    return hcomp(lift_R(s), vid(rest))


def factor_north(n: Arrow, sigma: Arrow, rest: Arrow) -> Tile:
    """``<n, sigma, rest, id>`` when ``sigma = rest;n``."""
    return dual(factor_west(sigma, n, rest))


def west_perm(cell: Tile, pi: Arrow) -> Tile:
    """Precompose the trigger with a permutation: ``<i, pi;t, e, f;pi^-1>``."""
    if is_identity(pi):
        return cell
    return vcomp(cell, iso_west(cell.final, pi))


# ------------------------------------------------------------ derived cells

@functools.lru_cache(maxsize=None)
def dh_prime(f: str, n: int) -> Tile:
    """``<nabla_1, id_1 (x) f, f, nabla_n;(f (x) id_n)>``."""
    top = iso_north(gamma(1, 1), tensor(tid(1), op(f, n)))
    col = vcomp(Dh_op(f, n), iso_west(nabla_then(n, f, False), gamma(1, n)))
    return _h(top, col).named(f"Dh'_{f}")


@functools.lru_cache(maxsize=None)
def d_prime(f: str, n: int) -> Tile:
    """``<id_1 (x) f, nabla_1, nabla_n;(f (x) id_n), f>``."""
    return dual(dh_prime(f, n))


@functools.lru_cache(maxsize=None)
def dh_nabla() -> Tile:
    """``<id_1 (x) nabla_1, nabla_1 (x) id_1, nabla_1, nabla_1>``."""
    d = duplicator("t")
    c1 = iso_north(permutation([3, 2, 1]), tensor(d, tid(1)))
    c2 = vcomp(D_nabla(), iso_west(d, gamma(1, 1)))
    c3 = iso_north(gamma(1, 1), d)
    return hcomp(hcomp(c1, c2), c3).named("Dh_nabla")


@functools.lru_cache(maxsize=None)
def ff(f: str, n: int) -> Tile:
    """``<f (x) f, nabla_1, nabla_n, f>``: both copies headed by ``f``."""
    right = factor_north(tensor(tid(n), op(f, n)), nabla_then(n, f, False), duplicator("t" * n))
    return hcomp(D_op(f, n), right).named(f"FF_{f}")


@functools.lru_cache(maxsize=None)
def merge_core() -> Tile:
    """``<nabla_1 (x) nabla_1, id_1 (x) nabla_1 (x) id_1, nabla_1, <z,z,z>>``."""
    return hcomp(par(D_nabla(), hid(tid(1))), dh_nabla()).named("M")


def copy_vs_op(m: int, j: int, f: str, k: int) -> Tile:
    """Pullback of ``<x1..xm, xj>`` against ``id_m (x) f``."""
    pi = tensor(tid(j), gamma(1, m - j))
    core = _par(*([hid(tid(j - 1))] if j > 1 else []), dh_prime(f, k),
                *([hid(tid(m - j))] if m > j else []))
    perm = [*range(1, j + 1), *range(m + 1, m + k + 1), *range(j + 1, m + 1)]
    cell = west_perm(core, permutation(perm))
    return _h(iso_north(pi, tensor(tid(m), op(f, k))), cell)


def merge_cell(m: int, j: int, k: int) -> Tile:
    """Pullback of ``<x1..xm, xj, xk>`` against ``id_m (x) nabla_1``."""
    rest = [i for i in range(1, m + 1) if i not in (j, k)]
    tau_dom = permutation(rest + [j, k])
    slot = {p: q for q, p in enumerate(rest, 1)}
    slot.update({j: m - 1, m + 1: m, m + 2: m + 1, k: m + 2})
    tau_cod = permutation([slot[p] for p in range(1, m + 3)])
    west = tensor(tid(m), duplicator("t"))
    x1 = iso_north(tau_cod, west)
    core = _par(*([hid(tid(m - 2))] if m > 2 else []), merge_core())
    x2 = west_perm(core, permutation(rest + [j, m + 1, k]))
    x12 = _h(x1, x2)
    return _h(x12, iso_north(tau_dom, x12.effect))


# ------------------------------------------------------------ synthesis

class _Fail(Exception):
    pass


def synthesize_pullback(north: Arrow, west: Arrow) -> Optional[Tile]:
    """A pullback square over ``north`` and ``west`` built from the basis.

    Returns None when the pullback does not exist (the two arrows do not
    unify). The tile's proof uses only basis tiles and identities.
    """
    if not (north.is_term and west.is_term):
        raise ValueError("pullbacks are synthesized for all-t arrows")
    if north.cod != west.cod:
        raise BorderError("north and west must share their codomain")
    try:
        return _pb(north, west)
    except _Fail:
        return None


def _pb(theta: Arrow, sigma: Arrow) -> Tile:
    if is_identity(sigma):
        return vid(theta)
    if is_identity(theta):
        return hid(sigma)
    if is_permutation(sigma):
        return iso_west(theta, sigma)
    if is_permutation(theta):
        return iso_north(theta, sigma)
    cell = None
    north = theta
    for s in reversed(slice_structure(sigma)):
        c = _pb_slice(north, s)
        cell = c if cell is None else _v(cell, c)
        north = c.final
    return cell


def _count(theta: Arrow, j: int) -> int:
    n = 0
    stack = list(theta.comps)
    while stack:
        x = stack.pop()
        if x == Ph(j):
            n += 1
        elif isinstance(x, App):
            stack.extend(x.args)
    return n


def _pb_slice(theta: Arrow, s: Slice) -> Tile:
    if s.kind == "id":
        return vid(theta)
    if s.kind == "gamma":
        return iso_west(theta, s.arrow)
    if s.kind == "bang":
        top = par(vid(theta), hid(discharger("t")))
        return west_perm(top, tensor(tid(s.left), gamma(1, s.right)))
    if s.kind == "op":
        return _pb_op(theta, s)
    return _pb_nabla(theta, s)


def _with(theta: Arrow, cod: str, comps) -> Arrow:
    return Arrow(theta.dom, cod, tuple(comps))


def _pb_op(theta: Arrow, s: Slice) -> Tile:
    a, f, k = s.left, s.functor, s.arity
    comps = list(theta.comps)
    u = comps[a]
    if isinstance(u, App):
        if u.functor != f or len(u.args) != k:
            raise _Fail("clash")
        rest = _with(theta, s.arrow.dom, comps[:a] + list(u.args) + comps[a + 1:])
        return factor_west(theta, s.arrow, rest)
    j = u.index
    if _count(theta, j) == 1:
        return _private(theta, s, [a])
    n = len(comps)
    if a + 1 < n and comps[a + 1] == u:
        c = n - a - 2
        cell = _par(*([hid(tid(a))] if a else []), Dh_op(f, k), *([hid(tid(c))] if c else []))
        rest = _with(theta, "t" * (n - 1), comps[:a + 1] + comps[a + 2:])
        return _h(cell, _pb(rest, cell.effect))
    if a > 0 and comps[a - 1] == u:
        c = n - a - 1
        cell = _par(*([hid(tid(a - 1))] if a > 1 else []), dh_prime(f, k),
                    *([hid(tid(c))] if c else []))
        rest = _with(theta, "t" * (n - 1), comps[:a] + comps[a + 1:])
        return _h(cell, _pb(rest, cell.effect))
    m = len(theta.dom)
    q = Arrow("t" * (m + 1), theta.cod, tuple(comps[:a] + [Ph(m + 1)] + comps[a + 1:]))
    return hcomp(_private(q, s, [a]), copy_vs_op(m, j, f, k))


def _pb_nabla(theta: Arrow, s: Slice) -> Tile:
    a, c = s.left, s.right
    comps = list(theta.comps)
    u, v = comps[a], comps[a + 1]
    ida = [hid(tid(a))] if a else []
    idc = [hid(tid(c))] if c else []
    if u == v:
        rest = _with(theta, s.arrow.dom, comps[:a + 1] + comps[a + 2:])
        return factor_west(theta, s.arrow, rest)
    if isinstance(u, Ph) and isinstance(v, Ph):
        j, k = u.index, v.index
        if _count(theta, j) == 1 and _count(theta, k) == 1:
            return _private(theta, s, [a, a + 1])
        m = len(theta.dom)
        q = Arrow("t" * (m + 2), theta.cod,
                  tuple(comps[:a] + [Ph(m + 1), Ph(m + 2)] + comps[a + 2:]))
        return hcomp(_private(q, s, [a, a + 1]), merge_cell(m, j, k))
    if isinstance(u, Ph):
        if u.index in placeholders(v):
            raise _Fail("occurs check")
        cell = _par(*ida, d_prime(v.functor, len(v.args)), *idc)
        rest = _with(theta, cell.initial.dom, comps[:a + 1] + list(v.args) + comps[a + 2:])
        return _h(cell, _pb(rest, cell.effect))
    if isinstance(v, Ph):
        if v.index in placeholders(u):
            raise _Fail("occurs check")
        cell = _par(*ida, D_op(u.functor, len(u.args)), *idc)
        rest = _with(theta, cell.initial.dom, comps[:a] + list(u.args) + comps[a + 1:])
        return _h(cell, _pb(rest, cell.effect))
    if u.functor != v.functor or len(u.args) != len(v.args):
        raise _Fail("clash")
    cell = _par(*ida, ff(u.functor, len(u.args)), *idc)
    rest = _with(theta, cell.initial.dom, comps[:a] + list(u.args) + list(v.args) + comps[a + 2:])
    return _h(cell, _pb(rest, cell.effect))


def _private(theta: Arrow, s: Slice, positions: Sequence[int]) -> Tile:
    """Pullback against a slice whose positions hold private placeholders.

    ``theta = rho;(theta_o (x) id_r);pi_cod`` where ``rho`` moves the
    private placeholders last and ``pi_cod`` puts them back in place.
    """
    m, n, r = len(theta.dom), len(theta.cod), len(positions)
    b = s.basic
    k = len(b.dom)
    priv = [theta.comps[p].index for p in positions]
    others = [i for i in range(1, m + 1) if i not in priv]
    rho = permutation(others + priv)
    rename = [None] * (m + 1)
    for q, i in enumerate(others, 1):
        rename[i] = Ph(q)
    for q, i in enumerate(priv, 1):
        rename[i] = Ph(len(others) + q)
    kept = [p for p in range(n) if p not in positions]
    theta_o = Arrow("t" * (m - r), "t" * (n - r),
                    tuple(_rename(theta.comps[p], rename) for p in kept))
    order = [0] * n
    for q, p in enumerate(kept, 1):
        order[p] = q
    for q, p in enumerate(positions, 1):
        order[p] = n - r + q
    pi_cod = permutation(order)
    mid = west_perm(par(vid(theta_o), hid(b)), tensor(tid(s.left), gamma(k, s.right)))
    cell = _h(iso_north(pi_cod, s.arrow), mid)
    return _h(cell, iso_north(rho, cell.effect))


def _rename(t, rename):
    if isinstance(t, Ph):
        return rename[t.index]
    if isinstance(t, App) and t.args:
        return App(t.functor, tuple(_rename(a, rename) for a in t.args))
    return t


# ------------------------------------------------------------ decomposition

def sequential_decompose(t: Tile, t1: Arrow, t2: Arrow, bound: int = 6,
                         sys: TileSystem | None = None) -> Optional[tuple]:
    """Split ``t`` into ``(A, B)`` with ``hcomp(A, B) == t``.

    ``t1`` is the part of the initial configuration next to the trigger
    and ``t2`` the rest, so ``t.initial == compose(t2, t1)``. ``A`` has
    initial ``t1`` and ``B`` initial ``t2``. The search follows the
    proof of ``t`` down to ``bound`` levels and returns None when it
    finds nothing, which is not a proof that no split exists.
    """
    if compose(t2, t1) != t.initial:
        raise BorderError("t1 and t2 do not compose to the initial configuration")
    sys = sys if sys is not None else system_for(t)
    return _decompose(t, t1, t2, bound, sys)


def _decompose(t: Tile, t1: Arrow, t2: Arrow, bound: int, sys: TileSystem):
    if is_identity(t1):
        return hid(t.trigger), t
    if is_identity(t2):
        return t, hid(t.effect)
    if bound <= 0 or t.proof is None:
        return None
    p = t.proof
    while isinstance(p, Macro):
        p = p.body
    if isinstance(p, HComp):
        factors = [eval_proof(q, sys) for q in _hfactors(p)]
        for cut in range(1, len(factors)):
            left, right = _hfold(factors[:cut]), _hfold(factors[cut:])
            if left.initial == t1 and right.initial == t2:
                return left, right
        for c, f in enumerate(factors):
            # the seam runs through factor c
            before = _hfold(factors[:c]) if c else None
            after = _hfold(factors[c + 1:]) if c + 1 < len(factors) else None
            a1 = _left_quotient(t1, before.initial) if before else t1
            if a1 is None or a1.cod != f.initial.cod:
                continue
            a2 = _left_quotient(f.initial, a1)
            if a2 is None:
                continue
            got = _decompose(f, a1, a2, bound - 1, sys)
            if got is None:
                continue
            x, y = got
            left = hcomp(before, x) if before else x
            right = hcomp(y, after) if after else y
            if left.initial == t1 and right.initial == t2:
                return left, right
        return None
    if isinstance(p, VComp):
        top = eval_proof(p.top, sys)
        bot = eval_proof(p.bottom, sys)
        got = _decompose(top, t1, t2, bound - 1, sys)
        if got is None:
            return None
        a1, a2 = got
        got = _decompose(bot, a1.final, a2.final, bound - 1, sys)
        if got is None:
            return None
        b1, b2 = got
        return vcomp(a1, b1), vcomp(a2, b2)
    return None


def _hfactors(p: ProofTerm) -> list:
    while isinstance(p, Macro):
        p = p.body
    if isinstance(p, HComp):
        return _hfactors(p.left) + _hfactors(p.right)
    return [p]


def _hfold(tiles: list) -> Tile:
    out = tiles[0]
    for x in tiles[1:]:
        out = hcomp(out, x)
    return out


def _left_quotient(whole: Arrow, tail: Arrow) -> Optional[Arrow]:
    """``x`` with ``compose(x, tail) == whole``, when it is determined."""
    from .unify import match
    binding: dict = {}
    for pat, tgt in zip(tail.comps, whole.comps):
        binding = match(pat, tgt, binding)
        if binding is None:
            return None
    if len(binding) != len(tail.dom):
        return None
    x = Arrow(whole.dom, tail.dom, tuple(binding[Ph(i)] for i in range(1, len(tail.dom) + 1)))
    return x if compose(x, tail) == whole else None
