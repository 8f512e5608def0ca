"""Shared search budgets.

The undecidable searches (many-step reachability, conversion search,
completion) are bounded by these knobs; every bound errs on the side of
answering "unknown" rather than guessing.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Budgets:
    #: depth bound for conversion / many-step reachability searches
    conv_depth: int = 5
    #: iterations of parallel steps approximating a multistep (non-left-linear case)
    dev_cap: int = 3
    #: maximal term size (symbol count) kept during searches
    size_cap: int = 40
    #: safety valve on the size of one conversion class
    max_class: int = 2000


DEFAULT_BUDGETS = Budgets()
