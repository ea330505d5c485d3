"""Finite-model toolkit for the Carmo-Jones deontic logic CJ."""
from .closure import (ClosureOptions, ClosureReport, CTCTDResult, Step, close,
                      ctctd_model, replay, seed_conditional)
from .conditions import (ConditionReport, Violation, check_all, check_condition,
                         check_union_property)
from .errors import (CJError, DisjointSeed, EmptyWorldSet, FormulaSyntaxError,
                     FrameViolation, InvalidArgument, IterationLimit, ScenarioSyntaxError,
                     TooLarge, UndeclaredAtom, UndeclaredWorld, UnknownAtom, UnknownFixture,
                     UnknownToken)
from .evaluator import conditional_selection, enumerate_models, extension, holds_at
from .fixtures import repro
from .formula import Formula, atoms_of, parse_formula, render_formula
from .kernel import Model, ObMap, make_model, upset
from .scenario import (Scenario, format_ob_listing, parse_scenario, run_scenario,
                       serialize_scenario)

__version__ = "0.1.0"
