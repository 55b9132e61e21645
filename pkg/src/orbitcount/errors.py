"""Exception hierarchy shared by the whole package.

Two families matter to callers (and to the CLI exit-code mapping):

* :class:`InputError` -- the request itself is invalid: bad parameter
  domains, malformed files, poles sitting on evaluation points, censuses
  that cannot cover the requested range, or work that would blow the
  configured budget.  CLI exit code 1.
* :class:`ConvergenceError` -- the request is well formed but the numeric
  machinery cannot certify the asked-for accuracy: uncertifiable tails,
  quadrature panels that refuse to converge.  CLI exit code 2.
"""

from __future__ import annotations


class InputError(ValueError):
    """Invalid parameters, files, or domains.  Maps to CLI exit code 1."""


class DomainError(InputError):
    """A numeric argument is outside the documented domain of an operation."""


class PoleError(InputError):
    """An evaluation point sits on (or within tolerance of) a pole."""


class PoleCollisionError(PoleError):
    """Two poles that the residue calculus needs distinct have collided."""


class CoverageError(InputError):
    """The census on hand cannot cover the requested geometric range."""


class BudgetError(InputError):
    """Estimated work exceeds the configured work budget."""

    def __init__(self, estimated: int, budget: int, what: str = "enumeration"):
        self.estimated = int(estimated)
        self.budget = int(budget)
        super().__init__(
            f"{what} needs ~{estimated} candidate evaluations, over the "
            f"work budget of {budget}; raise work_budget to proceed"
        )


class ConvergenceError(RuntimeError):
    """Requested accuracy cannot be certified.  Maps to CLI exit code 2."""


class TailError(ConvergenceError):
    """A truncation-tail certificate came out above the allowed bound."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature failed to meet its panel tolerance."""
