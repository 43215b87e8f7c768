"""Action formula logic: parsing, translation to action models, product
update, reduction to basic modal logic, bisimulation, correspondence and
synthesis over the frame classes K, K45 and S5."""

import sys as _sys

# formula trees from normal forms and reductions nest deeply
if _sys.getrecursionlimit() < 20_000:
    _sys.setrecursionlimit(20_000)

from .action import (ActionModel, PointedActionModel, am_frame_class_holds,
                     choice_union, execute, seq_compose)
from .bisim import (am_bisimilar, am_n_bisimilar, b_bisimilar, bisimilar,
                    n_bisimilar, refines)
from .budget import Budget, ResourceExhausted
from .check import (check, check_via_reduction, eval_basic, sample_action,
                    sample_formula, sample_model)
from .correspond import correspond, correspond_multi
from .frames import FrameClass
from .kripke import (KripkeModel, PointedKripkeModel, disjoint_union,
                     export_dot, frame_class_holds, model_from_json,
                     model_to_json)
from .normform import (DnfClause, DnfFormula, ExplicitDisjunction,
                       ExplicitFormula, NotConverted, is_explicit, to_adnf,
                       to_dnf, to_explicit)
from .prover import equiv, find_model, satisfiable, valid
from .reduction import reduce_afl_fastpath, reduce_formula
from .synth import SynthReport, synthesize, verify_synthesis
from .syntax import (BOTTOM, TOP, ActionFormula, And, Atom, Bottom, Box,
                     Choice, Compose, Cover, Diamond, DynBox, DynDiamond,
                     Formula, Iff, Implies, Learn, Not, Or, ParseError,
                     RefBox, RefDiamond, Test, Top, big_and, big_choice,
                     big_compose, big_or, expand_cover, is_b_restricted,
                     is_basic, is_propositional, modal_depth, parse_action,
                     parse_formula, print_action, print_formula, subformulae)
from .tau import tau

__all__ = [name for name in dir() if not name.startswith("_")]
