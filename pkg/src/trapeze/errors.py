"""Exception types and machine-readable error codes."""

import math


class TrapezeError(Exception):
    """Base class. ``code`` is the machine-readable identifier used by the CLI."""

    code = "error"
    exit_status = 1

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class DomainError(TrapezeError, ValueError):
    code = "domain_error"


class NonSimpleCurve(TrapezeError):
    code = "non_simple_curve"


class NotSimple(NonSimpleCurve):
    code = "not_simple"


class DegenerateFamily(TrapezeError):
    code = "degenerate_family"


class NoInscriptionFound(TrapezeError):
    code = "no_inscription_found"


class WrongKind(TrapezeError):
    code = "wrong_kind"


class DiagonalTouch(TrapezeError):
    code = "diagonal_touch"


class ConstructionFailure(TrapezeError):
    code = "construction_failure"


class SeedInvalid(TrapezeError):
    code = "seed_invalid"


class StepCollapse(TrapezeError):
    code = "step_collapse"


class ProxyUnavailable(TrapezeError):
    code = "proxy_unavailable"


class MismatchedQuadrisecants(TrapezeError):
    code = "mismatched_quadrisecants"


class NotGraphical(TrapezeError):
    code = "not_graphical"


class WitnessNotFound(TrapezeError):
    code = "witness_not_found"


class VerificationFailure(TrapezeError):
    code = "verification_failure"
    exit_status = 2


def check_r(r, allow_half=True):
    r = float(r)
    if not (0.0 < r <= 0.5) or (r == 0.5 and not allow_half):
        raise DomainError("r must lie in (0, 1/2]", r=r)
    return r


def check_theta(theta, closed=False):
    theta = float(theta)
    ok = (0.0 <= theta <= math.pi) if closed else (0.0 < theta < math.pi)
    if not ok:
        raise DomainError("theta must lie in (0, pi)", theta=theta)
    return theta
