from typing import Optional


class RTSpectraError(Exception):
    exit_code = 1


class ConfigurationError(RTSpectraError):
    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.reason = message
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class DomainError(ConfigurationError, ValueError):
    pass


class NumericalError(RTSpectraError):
    exit_code = 3


class AssemblyError(NumericalError):
    pass


class BracketingError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass


class HorizonError(NumericalError):
    def __init__(self, message: str, partial_rate: Optional[float] = None):
        super().__init__(message)
        self.partial_rate = partial_rate


class VerificationError(RTSpectraError):
    exit_code = 4
