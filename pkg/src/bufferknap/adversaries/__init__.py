"""Adaptive lower-bound adversaries and the duel driver."""

from .duel import DuelResult, duel
from .kinds import (
    ADVERSARIES,
    Adversary,
    AdversaryKind,
    ParamOutOfRange,
    SequenceCapExceeded,
    make_adversary,
)

__all__ = [
    "ADVERSARIES",
    "Adversary",
    "AdversaryKind",
    "DuelResult",
    "ParamOutOfRange",
    "SequenceCapExceeded",
    "duel",
    "make_adversary",
]
