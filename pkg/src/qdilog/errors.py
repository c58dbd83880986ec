"""Exception hierarchy shared by every module."""


class QDilogError(Exception):
    """Base class for all library errors."""


class DivergentProduct(QDilogError):
    pass


class NonFinite(QDilogError):
    pass


class PoleProximity(QDilogError):
    pass


class StripExhausted(QDilogError):
    pass


class ZeroDenominator(QDilogError):
    pass


class GroupMismatch(QDilogError):
    pass


class DomainError(QDilogError):
    pass


class NoConvergence(QDilogError):
    pass


class SectorViolation(QDilogError):
    pass


class ConstraintViolated(QDilogError):
    pass


class DegenerateTriangle(QDilogError):
    pass


class ConfigError(QDilogError):
    pass
