"""Exception hierarchy. Every error carries a short machine-readable ``code``."""

from __future__ import annotations


class MacroError(Exception):
    code = "error"

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class InvalidParameter(MacroError, ValueError):
    """A physical or numerical parameter violates an invariant."""

    code = "invalid_parameter"

    def __init__(self, invariant: str, message: str | None = None):
        self.invariant = invariant
        super().__init__(message or f"invariant violated: {invariant}")

    def to_dict(self) -> dict:
        return {"code": self.code, "invariant": self.invariant, "message": str(self)}


class PusherSeparating(MacroError, ValueError):
    code = "pusher_separating"


class ConeViolation(MacroError):
    """A commanded or allocated force leaves its friction cone."""

    code = "slip_boundary_exceeded"

    def __init__(self, contact: int | str, slack: float, message: str | None = None):
        self.contact = contact
        self.slack = slack
        super().__init__(message or f"friction cone exceeded at contact {contact} (slack {slack:.3g} N)")

    def to_dict(self) -> dict:
        return {"code": self.code, "contact": self.contact, "slack": self.slack, "message": str(self)}


class ContactLost(MacroError):
    code = "contact_lost"

    def __init__(self, contact: int | str, normal: float):
        self.contact = contact
        self.normal = normal
        super().__init__(f"contact {contact} separating (normal force {normal:.3g} N)")

    def to_dict(self) -> dict:
        return {"code": self.code, "contact": self.contact, "normal": self.normal, "message": str(self)}


class BiasTooSmall(MacroError):
    """Orthogonal allocation produced a negative normal; ``required_bias`` fixes it."""

    code = "increase_f_bias"

    def __init__(self, required_bias: float):
        self.required_bias = required_bias
        super().__init__(f"allocated normal force negative; increase f_bias to at least {required_bias:.6g} N")

    def to_dict(self) -> dict:
        return {"code": self.code, "required_bias": self.required_bias, "message": str(self)}


class InfeasibleAllocation(MacroError):
    code = "infeasible_allocation"


class BudgetExceeded(MacroError):
    code = "normal_budget_exceeded"

    def __init__(self, required: float, budget: float):
        self.required = required
        self.budget = budget
        super().__init__(f"normal force budget {budget:.6g} N exceeded; {required:.6g} N required")

    def to_dict(self) -> dict:
        return {"code": self.code, "required": self.required, "budget": self.budget, "message": str(self)}


class PlanningError(MacroError):
    code = "planning_infeasible"


class InsufficientExcitation(MacroError):
    code = "insufficient_rotation"


class ModeSelectionError(MacroError):
    code = "no_feasible_mode"

    def __init__(self, failures: dict[str, list[str]]):
        self.failures = failures
        lines = "; ".join(f"{name}: {', '.join(reqs)}" for name, reqs in failures.items())
        super().__init__(f"no contact mode satisfies the task ({lines})")

    def to_dict(self) -> dict:
        return {"code": self.code, "failures": self.failures, "message": str(self)}


class ScenarioError(MacroError, ValueError):
    code = "scenario_invalid"

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")

    def to_dict(self) -> dict:
        return {"code": self.code, "path": self.path, "message": str(self)}
