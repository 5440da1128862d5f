"""Simulate one-way quantum finite automata and learn them from an
amplitude-distribution oracle."""

from .automata import (Alphabet, MmQfa, MoQfa, Rfa, UnknownSymbol, gen_random_mm, gen_random_mo,
                       gen_random_rfa, mm_accept_prob, mm_reject_prob, mm_trajectory,
                       mo_accept_prob, mo_trajectory, rfa_accepts, rfa_run, rfa_to_mo, rotation_mo)
from .learner import LearnReport, Outcome, learn_mm, learn_mo, learn_rfa
from .linalg import IsometryViolation, OrthoFrame, complete_isometry, extend_frame, residual, unitarity_defect
from .oracle import AdOracle, IllegalQueryString, SimulatedMmOracle, SimulatedMoOracle, SimulatedRfaOracle
from .verify import VerifyConfig, VerifyReport, audit, verify, verify_mm, verify_mo, verify_rfa

__version__ = "0.1.0"
