"""Pure logic programming two ways: SLD resolution, and resolution by
tiles whose unification steps are pullback squares built from a finite
basis."""
from .syntax import (App, Atom, Clause, Goal, Program, Signature, Var, parse_goal,
                     parse_program, parse_term)
from .theory import Arrow, Ph, Substitution, compose, tensor
from .unify import mgu, pullback_oracle
from .tiles import Tile, eval_proof, synthesize_pullback
from .engine import (AnswerSet, ResolutionMode, correspondence_check, head_decompositions,
                     sld_refute, tile_refute)

__all__ = [
    "App", "Atom", "Clause", "Goal", "Program", "Signature", "Var",
    "parse_goal", "parse_program", "parse_term",
    "Arrow", "Ph", "Substitution", "compose", "tensor",
    "mgu", "pullback_oracle",
    "Tile", "eval_proof", "synthesize_pullback",
    "AnswerSet", "ResolutionMode", "correspondence_check", "head_decompositions",
    "sld_refute", "tile_refute",
]
