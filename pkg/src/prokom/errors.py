"""Exception hierarchy shared by all prokom modules."""


class ProkomError(Exception):
    """Base class for every error raised by prokom."""


class RingUnsupported(ProkomError):
    pass


class RingMismatch(ProkomError):
    pass


class ShapeMismatch(ProkomError):
    pass


class NotWellDefined(ProkomError):
    """A matrix does not descend to a morphism of the presented modules."""


class NotChainMap(ProkomError):
    pass


class WindowTooShort(ProkomError):
    pass


class CertificateMissing(ProkomError):
    pass


class DataInvalid(ProkomError):
    pass


class KernelNotLevelwise(ProkomError):
    pass


class TooLarge(ProkomError):
    pass


class UnknownSuite(ProkomError):
    pass


class SchemaError(ProkomError):
    """A diagram or certificate document does not match its schema."""
