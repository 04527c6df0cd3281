"""Exception types shared across the package."""


class CsBoundError(Exception):
    """Base class for all csbound errors."""


class ResourceGuardError(CsBoundError):
    """A requested computation would exceed its configured memory/size cap.

    Raised before any large allocation happens.
    """


class CertificateError(CsBoundError):
    """A certificate is semantically invalid or failed verification."""


class CertificateFormatError(CertificateError):
    """A certificate file is malformed, truncated, or fails its checksum."""
