"""Virtual machine and toolkit for infinite time Blum-Shub-Smale computation.

Submodules: ordinal (clock values in Cantor normal form), numeric (exact
rationals, eventually periodic bit sets), rfn (polynomials and rational
functions), machine (the VM with transfinite limit resolution), asm
(assembly text and program numbering), coding (structure codes at finite
scale), programs (generated clockers, recognizers, compiled tables),
generic (Cohen forcing toys), harness (recognizability trials and the
bounded halting set), cli (command-line front end).
"""

from .machine import (
    Assign,
    Budget,
    Node,
    NonHaltingError,
    Program,
    RunResult,
    Snapshot,
    Verdict,
    clock,
    detect_cycle,
    resolve_limit,
    run,
    step,
)
from .numeric import BitSet, DivisionByZero, Rational
from .ordinal import OMEGA, ONE, ZERO, Ordinal, omega_pow

__all__ = [
    "Assign",
    "BitSet",
    "Budget",
    "DivisionByZero",
    "Node",
    "NonHaltingError",
    "OMEGA",
    "ONE",
    "Ordinal",
    "Program",
    "Rational",
    "RunResult",
    "Snapshot",
    "Verdict",
    "ZERO",
    "clock",
    "detect_cycle",
    "omega_pow",
    "resolve_limit",
    "run",
    "step",
]
