"""Values of the form ``2x^2 + 2xy + 3y^2`` and the two identities linking
them to ``x^2 + 5y^2``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidArgumentError
from .quadform import QuadRep


@dataclass(frozen=True)
class Form223Val:
    """``value = 2*xp^2 + 2*xp*y + 3*y^2``; ``xp`` may be negative."""

    xp: int
    y: int
    value: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.y < 0:
            raise InvalidArgumentError("y must be nonnegative")
        xp, y = self.xp, self.y
        object.__setattr__(self, "value", 2 * xp * xp + 2 * xp * y + 3 * y * y)

    def __str__(self):
        return f"{self.value} = 2*({self.xp})^2 + 2*({self.xp})*{self.y} + 3*{self.y}^2"


def compose_form(f1, f2):
    """``f1.value * f2.value`` as ``x^2 + 5y^2``, with ``(x, y) = f1`` and
    ``(a, b) = f2``: ``(2ax + bx + ay + 3by)^2 + 5(bx - ay)^2``."""
    x, y = f1.xp, f1.y
    a, b = f2.xp, f2.y
    return QuadRep(5, abs(2 * a * x + b * x + a * y + 3 * b * y), abs(b * x - a * y))


def double_form(f):
    """``2 * f.value = (2*xp + y)^2 + 5*y^2``."""
    return QuadRep(5, abs(2 * f.xp + f.y), f.y)
