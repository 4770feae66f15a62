"""Decision results shared by all definability deciders."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import QfFormula
from .isotype import Subisomorphism


@dataclass(frozen=True)
class Definable:
    """Positive answer; `formula` is present when the strategy produces one."""

    formula: QfFormula | None = None

    @property
    def is_definable(self) -> bool:
        return True


@dataclass(frozen=True)
class NotDefinable:
    """Negative answer: a subisomorphism separating the target.

    witness_in lies in the target, witness_out does not, and gamma maps
    witness_in to witness_out pointwise.
    """

    witness_in: tuple[int, ...]
    witness_out: tuple[int, ...]
    gamma: Subisomorphism

    @property
    def is_definable(self) -> bool:
        return False


Decision = Definable | NotDefinable
