"""Exception types shared across the package.

Every error carries a stable ``code`` string; the CLI maps error classes to
exit statuses.
"""

from __future__ import annotations


class HSPError(Exception):
    code = "error"


class InvalidSpecError(HSPError, ValueError):
    code = "invalid-spec"


class ParseError(InvalidSpecError):
    code = "parse"


class NotAGroupError(HSPError, ValueError):
    """Raised when a Cayley table violates a group axiom.

    ``axiom`` names the failing axiom and ``witness`` holds the offending
    element indices.
    """

    code = "not-a-group"

    def __init__(self, axiom: str, witness: tuple = (), detail: str = ""):
        self.axiom = axiom
        self.witness = tuple(witness)
        msg = f"not a group: {axiom} fails"
        if witness:
            msg += f" at {self.witness}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CatalogError(InvalidSpecError):
    code = "catalog"


class DomainError(HSPError, ValueError):
    code = "domain"


class CapacityError(HSPError):
    code = "capacity"


class NotASubgroupError(DomainError):
    code = "not-a-subgroup"


class NormalityError(HSPError, ValueError):
    """``witness`` is a pair ``(g, h)`` with ``g h g^-1`` outside the subgroup."""

    code = "not-normal"

    def __init__(self, g: int, h: int):
        self.witness = (g, h)
        super().__init__(f"subgroup is not normal: conjugate of {h} by {g} escapes it")


class InvalidDivisorError(DomainError):
    code = "invalid-divisor"


class UnsupportedGroupError(HSPError, ValueError):
    code = "unsupported"


class UnluckySeedError(HSPError, RuntimeError):
    code = "unlucky-seed"


class InstanceError(HSPError, ValueError):
    code = "instance"
