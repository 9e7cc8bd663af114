"""The equational laws of the theory and the exchange law of tiles, as
randomized value-equality checks."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .random_gen import random_arrow
from .theory import (compose, discharger, duplicator, identity, symmetry, tensor)
from .tiles import Basic, Tile, eval_proof, hcomp, system_for, vcomp


def _id(n: int):
    return identity("t" * n)


def _gamma(n: int, m: int):
    return symmetry("t" * n, "t" * m)


def _nabla(n: int):
    return duplicator("t" * n)


def _bang(n: int):
    return discharger("t" * n)


def _sizes(rng: random.Random, k: int, top: int = 3) -> list:
    return [rng.randint(0, top) for _ in range(k)]


def _arr(rng, m, n):
    return random_arrow(rng, m, n, 2)


# each law draws its own random instance and returns (lhs, rhs)

def _assoc(rng):
    a, b, c, d = _sizes(rng, 4)
    x, y, z = _arr(rng, a, b), _arr(rng, b, c), _arr(rng, c, d)
    return compose(x, compose(y, z)), compose(compose(x, y), z)


def _unit_right(rng):
    n, m = _sizes(rng, 2)
    x = _arr(rng, n, m)
    return compose(x, _id(m)), x


def _unit_left(rng):
    n, m = _sizes(rng, 2)
    x = _arr(rng, n, m)
    return compose(_id(n), x), x


def _tensor_functor(rng):
    a, b, c, d, e, f = _sizes(rng, 6)
    x, x2 = _arr(rng, a, b), _arr(rng, b, c)
    y, y2 = _arr(rng, d, e), _arr(rng, e, f)
    return tensor(compose(x, x2), compose(y, y2)), compose(tensor(x, y), tensor(x2, y2))


def _tensor_id(rng):
    n, m = _sizes(rng, 2)
    return _id(n + m), tensor(_id(n), _id(m))


def _tensor_assoc(rng):
    s = _sizes(rng, 6)
    x, y, z = _arr(rng, s[0], s[1]), _arr(rng, s[2], s[3]), _arr(rng, s[4], s[5])
    return tensor(x, tensor(y, z)), tensor(tensor(x, y), z)


def _tensor_unit(rng):
    n, m = _sizes(rng, 2)
    x = _arr(rng, n, m)
    return tensor(x, _id(0)), tensor(_id(0), x)


def _sym_split(rng):
    n, m, k = _sizes(rng, 3)
    return _gamma(n, m + k), compose(tensor(_gamma(n, m), _id(k)), tensor(_id(m), _gamma(n, k)))


def _sym_zero(rng):
    n, = _sizes(rng, 1)
    return _gamma(n, 0), _id(n)


def _sym_inverse(rng):
    n, m = _sizes(rng, 2)
    return compose(_gamma(n, m), _gamma(m, n)), _id(n + m)


def _dup_split(rng):
    n, m = _sizes(rng, 2)
    return _nabla(n + m), compose(tensor(_nabla(n), _nabla(m)),
                                  tensor(_id(n), _gamma(n, m), _id(m)))


def _dup_zero(rng):
    return _nabla(0), _id(0)


def _dup_coassoc(rng):
    n, = _sizes(rng, 1)
    return (compose(_nabla(n), tensor(_id(n), _nabla(n))),
            compose(_nabla(n), tensor(_nabla(n), _id(n))))


def _dup_cocomm(rng):
    n, = _sizes(rng, 1)
    return compose(_nabla(n), _gamma(n, n)), _nabla(n)


def _dis_split(rng):
    n, m = _sizes(rng, 2)
    return _bang(n + m), tensor(_bang(n), _bang(m))


def _dis_zero(rng):
    return _bang(0), _id(0)


def _dis_counit(rng):
    n, = _sizes(rng, 1)
    return compose(_nabla(n), tensor(_id(n), _bang(n))), _id(n)


def _nat_sym(rng):
    n, m, k, l = _sizes(rng, 4)
    x, y = _arr(rng, n, m), _arr(rng, k, l)
    return compose(tensor(x, y), _gamma(m, l)), compose(_gamma(n, k), tensor(y, x))


def _nat_dup(rng):
    n, m = _sizes(rng, 2)
    x = _arr(rng, n, m)
    return compose(x, _nabla(m)), compose(_nabla(n), tensor(x, x))


def _nat_dis(rng):
    n, m = _sizes(rng, 2)
    x = _arr(rng, n, m)
    return compose(x, _bang(m)), _bang(n)


LAWS = (
    ("category: associativity", _assoc),
    ("category: right identity", _unit_right),
    ("category: left identity", _unit_left),
    ("tensor: functoriality", _tensor_functor),
    ("tensor: identities", _tensor_id),
    ("tensor: associativity", _tensor_assoc),
    ("tensor: unit", _tensor_unit),
    ("symmetry: split", _sym_split),
    ("symmetry: zero", _sym_zero),
    ("symmetry: inverse", _sym_inverse),
    ("duplicator: split", _dup_split),
    ("duplicator: zero", _dup_zero),
    ("duplicator: coassociativity", _dup_coassoc),
    ("duplicator: cocommutativity", _dup_cocomm),
    ("discharger: split", _dis_split),
    ("discharger: zero", _dis_zero),
    ("discharger: counit", _dis_counit),
    ("naturality: symmetry", _nat_sym),
    ("naturality: duplicator", _nat_dup),
    ("naturality: discharger", _nat_dis),
)


# ------------------------------------------------------------ exchange

def random_tile_grid(rng: random.Random, top: int = 2) -> tuple:
    """Four tiles ``A B / C D`` whose borders fit in a 2x2 grid.

    Corner ``g[r][j]``: horizontal arrows run right to left, vertical
    arrows bottom to top, so ``A*B`` and ``A.C`` are both defined.
    """
    g = [[rng.randint(0, top) for _ in range(3)] for _ in range(3)]
    h = [[_arr(rng, g[r][j + 1], g[r][j]) for j in range(2)] for r in range(3)]
    v = [[_arr(rng, g[r + 1][j], g[r][j]) for j in range(3)] for r in range(2)]
    a = Tile(h[0][0], v[0][0], v[0][1], h[1][0], Basic("A"))
    b = Tile(h[0][1], v[0][1], v[0][2], h[1][1], Basic("B"))
    c = Tile(h[1][0], v[1][0], v[1][1], h[2][0], Basic("C"))
    d = Tile(h[1][1], v[1][1], v[1][2], h[2][1], Basic("D"))
    return a, b, c, d


def exchange_holds(a: Tile, b: Tile, c: Tile, d: Tile) -> bool:
    """``(A.C)*(B.D) = (A*B).(C*D)``, on borders and via proof evaluation."""
    left = hcomp(vcomp(a, c), vcomp(b, d))
    right = vcomp(hcomp(a, b), hcomp(c, d))
    if left != right:
        return False
    sys = system_for(a, b, c, d).extend((("A", a), ("B", b), ("C", c), ("D", d)))
    return eval_proof(left.proof, sys) == eval_proof(right.proof, sys) == left


@dataclass(frozen=True)
class LawReport:
    trials: int
    failures: tuple = ()      # ((law name, lhs, rhs), ...)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_laws(trials: int = 500, seed: int = 0, exchange_trials: int = 100) -> LawReport:
    rng = random.Random(seed)
    failures = []
    for name, law in LAWS:
        for _ in range(trials):
            lhs, rhs = law(rng)
            if lhs != rhs:
                failures.append((name, lhs, rhs))
                break
    for _ in range(exchange_trials):
        quad = random_tile_grid(rng)
        if not exchange_holds(*quad):
            failures.append(("tiles: exchange", quad, None))
            break
    return LawReport(trials, tuple(failures))
