"""Satisfiability tools for Horn and Krom fragments of the modal logics K, T, K4 and S4."""

from .formulas import (
    And, Box, ClausalFormula, Clause, Dia, Formula, FragmentDescriptor, Logic, Modality,
    Not, Or, ParseError, PositiveLiteral, Prop, Top, classify, closure, modal_depth,
    parse, parse_clausal, to_text,
)
from .kripke import (
    KripkeModel, PreLinearModel, expand, intersect, model_check, model_check_clausal, product,
)
from .results import FragmentError, SatResult, Verdict, VerificationError
from .hornbox import horn_box_sat
from .corebox import core_box_sat
from .translate import krom_to_kromdia, krom_to_krombox, to_clausal
from .oracle import OracleConfig, Shape, brute_force_sat, enumerate_models

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
