"""Certificates: serialization, independent verification, and interpretation.

A certificate is a feasible triplet (u, r, epsilon) for the recurrence
operator at some (sigma, d, l); it witnesses gamma_{sigma,d} >= d*(r - epsilon).
Verification recomputes the defining inequality from scratch with a fresh
operator context, so a certificate read from disk stands on its own.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal
from pathlib import Path
from typing import IO
from urllib.parse import quote, unquote

import numpy as np

from .errors import CertificateError, CertificateFormatError
from .operators import OperatorContext
from .solver import TripletResult

FORMAT_MAGIC = "cs-cert 1"

# Published bounds for the two-sequence binary case, used as literal
# constants only (never recomputed here).
LUEKER_UPPER_2_2 = 0.826280
LUEKER_LOWER_2_2 = 0.788071


@dataclass
class Certificate:
    """A feasible triplet with its (sigma, d, l) header."""

    sigma: int
    d: int
    l: int
    r: float
    epsilon: float
    u: np.ndarray
    provenance: str = ""

    @property
    def bound(self) -> float:
        return self.d * (self.r - self.epsilon)

    def validate(self) -> None:
        expected = self.sigma ** (self.l * self.d)
        u = np.asarray(self.u)
        if u.ndim != 1 or u.shape[0] != expected:
            raise CertificateError(
                f"vector length {u.shape} does not match header "
                f"(sigma, d, l) = {(self.sigma, self.d, self.l)}: expected {expected}"
            )
        if not np.all(np.isfinite(u)):
            raise CertificateError("certificate vector has non-finite entries")
        if not (np.isfinite(self.r) and np.isfinite(self.epsilon)):
            raise CertificateError("certificate scalars must be finite")
        if self.epsilon < 0:
            raise CertificateError(f"epsilon must be >= 0, got {self.epsilon}")


def from_triplet(result: TripletResult, provenance: str = "") -> Certificate:
    """Wrap a solver result as a certificate."""
    return Certificate(
        sigma=result.sigma,
        d=result.d,
        l=result.l,
        r=result.r,
        epsilon=result.epsilon,
        u=np.array(result.u, dtype=np.float64),
        provenance=provenance,
    )


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    max_violation: float
    worst_coordinate: int
    bound: float
    slack: float


def verify(cert: Certificate, slack: float = 0.0) -> VerificationReport:
    """Re-check the feasibility inequality with a fresh operator context.

    Computes V = u + (d*r - epsilon)*1 - F(u + (d-1)*r*1, ..., u + r*1, u)
    and passes iff max V <= slack.  Nothing is shared with whatever produced
    the certificate; slack 0 is the certified default.
    """
    if slack < 0:
        raise ValueError("slack must be >= 0")
    cert.validate()
    ctx = OperatorContext(cert.sigma, cert.d, cert.l)
    u = np.asarray(cert.u, dtype=np.float64)
    offsets = [(cert.d - j) * cert.r for j in range(1, cert.d + 1)]
    image = ctx.apply_f([u] * cert.d, arg_offsets=offsets)
    violation = u + (cert.d * cert.r - cert.epsilon) - image
    worst = int(np.argmax(violation))
    max_violation = float(violation[worst])
    return VerificationReport(
        passed=max_violation <= slack,
        max_violation=max_violation,
        worst_coordinate=worst,
        bound=cert.bound,
        slack=slack,
    )


def simple_bound(sigma: int) -> float:
    """The uniform lower bound 1/sigma, valid for every number of strings."""
    if sigma < 2:
        raise ValueError(f"sigma must be >= 2, got {sigma}")
    return 1.0 / sigma


@dataclass(frozen=True)
class SteeleReport:
    """Comparison of a certified binary-alphabet bound against U**(d-1)."""

    d: int
    bound: float
    threshold: float
    strictly_greater: bool


def steele_check(cert: Certificate, slack: float = 0.0) -> SteeleReport:
    """Compare a verified sigma=2 bound against LUEKER_UPPER_2_2 ** (d-1).

    A strictly greater bound refutes the speculated identity
    gamma_{2,d} = gamma_{2,2}**(d-1) for that d.
    """
    if cert.sigma != 2:
        raise ValueError("the comparison is defined for sigma = 2 only")
    report = verify(cert, slack=slack)
    if not report.passed:
        raise CertificateError(
            f"certificate failed verification (max violation "
            f"{report.max_violation:.3e}); refusing the comparison"
        )
    threshold = LUEKER_UPPER_2_2 ** (cert.d - 1)
    return SteeleReport(
        d=cert.d,
        bound=cert.bound,
        threshold=threshold,
        strictly_greater=cert.bound > threshold,
    )


def floor_str(x: float, places: int = 6) -> str:
    """Format x truncated toward -inf at the given decimal places.

    Display rounding of bounds is always downward so a printed bound is
    itself a valid bound.
    """
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(x).quantize(quantum, rounding=ROUND_FLOOR))


# -- cs-cert v1 text format ---------------------------------------------------
#
#   line 1: "cs-cert 1"
#   line 2: sigma=<int> d=<int> l=<int> r=<real> epsilon=<real>
#           [provenance=<percent-encoded text>]
#   line 3: count=<int> crc32=<8 hex digits over the payload lines>
#   then count lines, one vector entry per line in encode order.
#
# Reals carry 17 significant digits, which round-trips IEEE doubles exactly.


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_certificate(cert: Certificate, destination: str | Path | IO[str]) -> None:
    """Write the v1 text format; lossless for every field."""
    cert.validate()
    u = np.asarray(cert.u, dtype=np.float64)
    payload = "".join(_fmt(x) + "\n" for x in u)
    crc = zlib.crc32(payload.encode("ascii")) & 0xFFFFFFFF
    header = (
        f"sigma={cert.sigma} d={cert.d} l={cert.l} "
        f"r={_fmt(cert.r)} epsilon={_fmt(cert.epsilon)}"
    )
    if cert.provenance:
        header += f" provenance={quote(cert.provenance, safe='')}"
    text = f"{FORMAT_MAGIC}\n{header}\ncount={u.size} crc32={crc:08x}\n{payload}"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="ascii")


def _parse_fields(line: str, lineno: int) -> dict[str, str]:
    fields: dict[str, str] = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or not key or key in fields:
            raise CertificateFormatError(f"malformed header line {lineno}: {line!r}")
        fields[key] = value
    return fields


def read_certificate(source: str | Path | IO[str]) -> Certificate:
    """Parse and integrity-check a v1 certificate file."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="ascii")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise CertificateFormatError("file too short for a cs-cert header")
    if lines[0] != FORMAT_MAGIC:
        raise CertificateFormatError(
            f"unsupported magic/version line {lines[0]!r}, expected {FORMAT_MAGIC!r}"
        )

    header = _parse_fields(lines[1], 2)
    meta = _parse_fields(lines[2], 3)
    try:
        sigma = int(header["sigma"])
        d = int(header["d"])
        l = int(header["l"])
        r = float(header["r"])
        epsilon = float(header["epsilon"])
        count = int(meta["count"])
        crc_stated = int(meta["crc32"], 16)
    except (KeyError, ValueError) as exc:
        raise CertificateFormatError(f"malformed header: {exc}") from exc
    provenance = unquote(header.get("provenance", ""))

    payload_lines = lines[3:]
    if len(payload_lines) < count:
        raise CertificateFormatError(
            f"truncated payload: {len(payload_lines)} of {count} entries"
        )
    if len(payload_lines) > count:
        raise CertificateFormatError(
            f"trailing data after the {count} payload entries"
        )
    payload = "".join(line + "\n" for line in payload_lines)
    crc_actual = zlib.crc32(payload.encode("ascii")) & 0xFFFFFFFF
    if crc_actual != crc_stated:
        raise CertificateFormatError(
            f"checksum mismatch: header says {crc_stated:08x}, "
            f"payload hashes to {crc_actual:08x}"
        )
    try:
        u = np.array([float(entry) for entry in payload_lines], dtype=np.float64)
    except ValueError as exc:
        raise CertificateFormatError(f"malformed payload entry: {exc}") from exc

    cert = Certificate(sigma=sigma, d=d, l=l, r=r, epsilon=epsilon, u=u,
                       provenance=provenance)
    cert.validate()
    return cert
