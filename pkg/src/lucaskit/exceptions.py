"""Exceptions raised by lucaskit."""
import typing


class LucaskitError(Exception):
    """Base class for all lucaskit errors."""


class NotPrimeError(LucaskitError, ValueError):
    """Exception raised when a modulus fails the primality test.

    Attributes
    ----------
    value : the rejected modulus
    witness : the primality witness path that failed
    message : The message displayed
    """

    def __init__(self, value, witness, message="Modulus is not prime"):
        self.value = value
        self.witness = witness
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return f"{self.message}: {self.value} (failed {self.witness})"


class ModulusMismatchError(LucaskitError, ValueError):
    """Exception raised when objects over different primes are combined.

    Attributes
    ----------
    moduli : the primes involved
    message : The message displayed
    """

    def __init__(self, moduli, message="Operands use different moduli"):
        self.moduli = moduli
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return f"{self.message}: {', '.join(str(p) for p in self.moduli)}"


class DigitRangeError(LucaskitError, ValueError):
    """Exception raised when a base-p digit lies outside [0, p).

    Attributes
    ----------
    digit : the offending value
    modulus : the prime p
    message : The message displayed
    """

    def __init__(self, digit, modulus, message="Digit out of range"):
        self.digit = digit
        self.modulus = modulus
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return f"{self.message}: {self.digit} is not in [0, {self.modulus})"


class CapExceededError(LucaskitError, OverflowError):
    """Exception raised when an exact computation would exceed its configured cap.

    Attributes
    ----------
    quantity : what was capped (e.g. "factorial argument")
    value : the requested size
    cap : the configured limit
    message : The message displayed
    """

    def __init__(self, quantity, value, cap, message="Configured cap exceeded"):
        self.quantity = quantity
        self.value = value
        self.cap = cap
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return f"{self.message}: {self.quantity} {self.value} > {self.cap}"


class InexactDivisionError(LucaskitError, ArithmeticError):
    """Exception raised when a quotient that must be exact leaves a remainder.

    Attributes
    ----------
    dividend : the numerator
    divisor : the denominator
    message : The message displayed
    """

    def __init__(self, dividend, divisor, message="Division is not exact"):
        self.dividend = dividend
        self.divisor = divisor
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        remainder = self.dividend % self.divisor
        return f"{self.message}: remainder {remainder} modulo divisor {self.divisor}"


class MalformedNumberError(LucaskitError, ValueError):
    """Exception raised when a string is not a plain base-10 natural number."""

    def __init__(self, text: str, message="Not a decimal natural number"):
        self.text = text
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        shown = self.text if len(self.text) <= 40 else self.text[:37] + "..."
        return f"{self.message}: {shown!r}"


class ConfigurationError(LucaskitError, ValueError):
    """Exception raised for inconsistent settings or sweep configurations."""

    def __init__(self, message: str, details: typing.Optional[str] = None):
        self.message = message
        self.details = details
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            return f"{self.message}: {self.details}"
        return self.message
