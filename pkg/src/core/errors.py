from enum import Enum
from typing import Optional, Dict, Any


class ErrorCode(str, Enum):
    COMPOSITE_MODULUS = "COMPOSITE_MODULUS"
    ZERO_INVERSE = "ZERO_INVERSE"
    SINGULAR_CURVE = "SINGULAR_CURVE"
    EQUAL_CHARACTERISTIC = "EQUAL_CHARACTERISTIC"
    HASSE_BOUND = "HASSE_BOUND"
    CAP_EXCEEDED = "CAP_EXCEEDED"
    NOT_A_SUBGROUP = "NOT_A_SUBGROUP"
    NOT_IN_COSET = "NOT_IN_COSET"
    HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED"
    OMEGA_OUT_OF_RANGE = "OMEGA_OUT_OF_RANGE"
    DELTA_OUT_OF_RANGE = "DELTA_OUT_OF_RANGE"
    CONFIG_ERROR = "CONFIG_ERROR"
    INVARIANT_VIOLATION = "INVARIANT_VIOLATION"
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ErrorCategory(str, Enum):
    ARITHMETIC = "arithmetic"
    CURVE = "curve"
    GROUP = "group"
    SIEVE = "sieve"
    CONFIG = "config"
    INVARIANT = "invariant"
    INTERNAL = "internal"


class ErrorSeverity(str, Enum):
    CRITICAL = "critical"
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INVARIANT = 3


class AppError(Exception):
    def __init__(
        self,
        message: str,
        code: ErrorCode,
        category: ErrorCategory,
        severity: ErrorSeverity = ErrorSeverity.ERROR,
        details: Optional[Dict[str, Any]] = None,
        exit_code: int = EXIT_FAILURE,
    ):
        self.message = message
        self.code = code
        self.category = category
        self.severity = severity
        self.details = details or {}
        self.exit_code = exit_code
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.message,
            "code": self.code.value,
            "category": self.category.value,
            "severity": self.severity.value,
            "details": self.details,
        }


class CompositeModulusError(AppError):
    def __init__(self, modulus: int, witness: Optional[int] = None):
        super().__init__(
            message=f"modulus {modulus} is not prime",
            code=ErrorCode.COMPOSITE_MODULUS,
            category=ErrorCategory.ARITHMETIC,
            severity=ErrorSeverity.WARNING,
            details={"modulus": modulus, "witness": witness},
        )


class ZeroInverseError(AppError):
    def __init__(self, modulus: int):
        super().__init__(
            message=f"zero has no inverse mod {modulus}",
            code=ErrorCode.ZERO_INVERSE,
            category=ErrorCategory.ARITHMETIC,
            details={"modulus": modulus},
        )


class SingularCurveError(AppError):
    def __init__(self, a: int, b: int):
        super().__init__(
            message=f"y^2 = x^3 + {a}x + {b} is singular",
            code=ErrorCode.SINGULAR_CURVE,
            category=ErrorCategory.CURVE,
            severity=ErrorSeverity.WARNING,
            details={"a": a, "b": b},
        )


class EqualCharacteristicError(AppError):
    def __init__(self, p: int, ell: int):
        super().__init__(
            message=f"Frobenius at p={p} has no mod-{ell} char poly when p = ell",
            code=ErrorCode.EQUAL_CHARACTERISTIC,
            category=ErrorCategory.CURVE,
            severity=ErrorSeverity.WARNING,
            details={"p": p, "ell": ell},
        )


class HasseBoundError(AppError):
    def __init__(self, p: int, trace: int):
        super().__init__(
            message=f"trace {trace} violates the Hasse bound at p={p}",
            code=ErrorCode.HASSE_BOUND,
            category=ErrorCategory.INVARIANT,
            severity=ErrorSeverity.CRITICAL,
            details={"p": p, "trace": trace},
            exit_code=EXIT_INVARIANT,
        )


class CapExceededError(AppError):
    def __init__(self, cap: int, reached: int):
        super().__init__(
            message=f"closure outgrew the cap of {cap} elements",
            code=ErrorCode.CAP_EXCEEDED,
            category=ErrorCategory.GROUP,
            details={"cap": cap, "reached": reached},
        )


class NotASubgroupError(AppError):
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            code=ErrorCode.NOT_A_SUBGROUP,
            category=ErrorCategory.GROUP,
            severity=ErrorSeverity.WARNING,
            details=details,
        )


class NotInCosetError(AppError):
    def __init__(self, expected_det: int, found_det: int):
        super().__init__(
            message=f"class set leaves the det = {expected_det} coset",
            code=ErrorCode.NOT_IN_COSET,
            category=ErrorCategory.GROUP,
            severity=ErrorSeverity.WARNING,
            details={"expected_det": expected_det, "found_det": found_det},
        )


class HypothesisFailedError(AppError):
    def __init__(self, reason: str, details: Optional[Dict[str, Any]] = None):
        self.reason = reason
        super().__init__(
            message=f"hypothesis failed: {reason}",
            code=ErrorCode.HYPOTHESIS_FAILED,
            category=ErrorCategory.GROUP,
            severity=ErrorSeverity.WARNING,
            details={"reason": reason, **(details or {})},
        )


class OmegaOutOfRangeError(AppError):
    def __init__(self, prime: int, omega: Any):
        super().__init__(
            message=f"omega_{prime} = {omega} is outside [0, 1)",
            code=ErrorCode.OMEGA_OUT_OF_RANGE,
            category=ErrorCategory.SIEVE,
            severity=ErrorSeverity.WARNING,
            details={"prime": prime, "omega": str(omega)},
        )


class DeltaOutOfRangeError(AppError):
    def __init__(self, delta: Any):
        super().__init__(
            message=f"delta = {delta} must satisfy 0 <= delta < 1",
            code=ErrorCode.DELTA_OUT_OF_RANGE,
            category=ErrorCategory.SIEVE,
            severity=ErrorSeverity.WARNING,
            details={"delta": str(delta)},
        )


class ConfigError(AppError):
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            code=ErrorCode.CONFIG_ERROR,
            category=ErrorCategory.CONFIG,
            severity=ErrorSeverity.WARNING,
            details=details,
            exit_code=EXIT_CONFIG,
        )


class InvariantViolationError(AppError):
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            code=ErrorCode.INVARIANT_VIOLATION,
            category=ErrorCategory.INVARIANT,
            severity=ErrorSeverity.CRITICAL,
            details=details,
            exit_code=EXIT_INVARIANT,
        )


def handle_exception(e: Exception) -> tuple[Dict[str, Any], int]:
    if isinstance(e, AppError):
        return e.to_dict(), e.exit_code

    return {
        "error": str(e),
        "code": ErrorCode.INTERNAL_ERROR.value,
        "category": ErrorCategory.INTERNAL.value,
        "severity": ErrorSeverity.ERROR.value,
        "details": {"type": type(e).__name__},
    }, EXIT_FAILURE
