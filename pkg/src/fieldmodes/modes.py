"""Modes: canonical pairs of smeared field and momentum observables.

A mode is two operators O1, O2 with [O1, O2] = i. Each operator is a real
linear combination of smeared field ``Phi[f]`` and smeared momentum
``Pi[f] = c * integral(f pi)`` terms. The simplest mode pairs the field and
momentum smeared with the same function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .smearing import SmearingSpec

__all__ = ["Term", "ModeSpec"]

_KINDS = ("phi", "pi")


@dataclass(frozen=True)
class Term:
    """One term ``coef * Phi[smearing]`` or ``coef * Pi[smearing]``."""

    coef: float
    kind: str
    smearing: SmearingSpec

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"term kind must be 'phi' or 'pi', got {self.kind!r}")
        object.__setattr__(self, "coef", float(self.coef))

    def to_dict(self) -> dict:
        return {"coef": self.coef, "kind": self.kind, "smearing": self.smearing.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "Term":
        return cls(data["coef"], data["kind"], SmearingSpec.from_dict(data["smearing"]))


@dataclass(frozen=True)
class ModeSpec:
    """A mode given by its two operators, each a tuple of :class:`Term`."""

    first: tuple
    second: tuple

    def __post_init__(self):
        object.__setattr__(self, "first", tuple(self.first))
        object.__setattr__(self, "second", tuple(self.second))
        if not self.first or not self.second:
            raise DomainError("both operators of a mode need at least one term")
        dims = {t.smearing.dim for t in self.first + self.second}
        if len(dims) != 1:
            raise DomainError("all smearings of a mode must share one dimension")

    @classmethod
    def pure(cls, smearing: SmearingSpec) -> "ModeSpec":
        """Field and momentum smeared with the same function."""
        return cls((Term(1.0, "phi", smearing),), (Term(1.0, "pi", smearing),))

    @classmethod
    def mixed_sinc(cls, n_pairs: int, center=None, radius: float = 1.0, dim: int = 3,
                   c: float | None = None) -> "ModeSpec":
        """Mode mixing field and momentum of the first ``2 n_pairs`` Sinc functions.

        O1 = sum_i (Phi[k_{2i-1}] - Pi[k_{2i}]) / sqrt(2 n_pairs) and
        O2 = sum_i (Pi[k_{2i-1}] + Phi[k_{2i}]) / sqrt(2 n_pairs), which are
        canonically conjugate because the Sinc functions are orthonormal.
        """
        if n_pairs < 1:
            raise DomainError("n_pairs must be >= 1")
        norm = 1.0 / math.sqrt(2 * n_pairs)
        first, second = [], []
        for i in range(1, n_pairs + 1):
            odd = SmearingSpec.sinc(2 * i - 1, center, radius, dim, c)
            even = SmearingSpec.sinc(2 * i, center, radius, dim, c)
            first += [Term(norm, "phi", odd), Term(-norm, "pi", even)]
            second += [Term(norm, "pi", odd), Term(norm, "phi", even)]
        return cls(tuple(first), tuple(second))

    @property
    def dim(self) -> int:
        return self.first[0].smearing.dim

    @property
    def pure_smearing(self) -> SmearingSpec | None:
        """The smearing of a pure mode, or None for mixed modes."""
        if (len(self.first) == 1 and len(self.second) == 1
                and self.first[0].kind == "phi" and self.second[0].kind == "pi"
                and self.first[0].coef == 1.0 and self.second[0].coef == 1.0
                and self.first[0].smearing == self.second[0].smearing):
            return self.first[0].smearing
        return None

    def smearings(self) -> list:
        """Distinct smearings in order of first appearance."""
        seen = []
        for t in self.first + self.second:
            if t.smearing not in seen:
                seen.append(t.smearing)
        return seen

    def to_dict(self) -> dict:
        pure = self.pure_smearing
        if pure is not None:
            return {"smearing": pure.to_dict()}
        return {"first": [t.to_dict() for t in self.first],
                "second": [t.to_dict() for t in self.second]}

    @classmethod
    def from_dict(cls, data: dict) -> "ModeSpec":
        if "smearing" in data:
            extra = set(data) - {"smearing", "label"}
            if extra:
                raise DomainError(f"unknown mode keys: {sorted(extra)}")
            return cls.pure(SmearingSpec.from_dict(data["smearing"]))
        extra = set(data) - {"first", "second", "label"}
        if extra or "first" not in data or "second" not in data:
            raise DomainError("a mode needs either 'smearing' or both 'first' and 'second'")
        return cls(tuple(Term.from_dict(t) for t in data["first"]),
                   tuple(Term.from_dict(t) for t in data["second"]))
