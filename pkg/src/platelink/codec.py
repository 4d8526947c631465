"""Wire format for plate records.

A record travels as the ASCII string ``Plate:<PLATE>, Link:<LINK>``:
no space after the first colon, exactly ", " before ``Link``, none after
the second colon. The decoder additionally tolerates a single space
after each colon (the spaced variant appears on receiver displays), but
trims nothing else. Commas are banned inside links so the frame stays
splittable; the whole encoded record always fits one radio payload.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

PLATE_PATTERN = re.compile(r"^[A-Z]{3}[0-9]{3}$")
MAX_LINK_LEN = 200
# Encoded overhead around the two fields: "Plate:" (6) + plate (6) + ", Link:" (7).
PREFIX_OCTETS = 19
MAX_WIRE_LEN = 240  # single LoRa payload

_DECODE_RE = re.compile(r"^Plate: ?([^,]*), Link: ?(.*)$", re.DOTALL)


class WireFormatError(ValueError):
    """Encode or decode rejection; ``token`` names the first failing part."""

    def __init__(self, token: str, message: str):
        self.token = token
        super().__init__(f"{token}: {message}")


def _check_link(link: str) -> str:
    if not link:
        raise WireFormatError("link", "must be non-empty")
    if len(link) > MAX_LINK_LEN:
        raise WireFormatError("link", f"longer than {MAX_LINK_LEN} characters")
    # a leading space would be absorbed by the decoder's space tolerance,
    # so such a link could never round-trip; reject it at construction
    if link[0] == " ":
        raise WireFormatError("link", "may not begin with a space")
    for i, ch in enumerate(link):
        if ch == ",":
            raise WireFormatError("link", f"comma not allowed (index {i})")
        if not (0x20 <= ord(ch) < 0x7F):
            raise WireFormatError("link", f"non-printable or non-ASCII character at index {i}")
    return link


@dataclass(frozen=True)
class PlateRecord:
    """A recognized plate and the link published for it."""

    plate: str
    link: str

    def __post_init__(self):
        if not PLATE_PATTERN.match(self.plate):
            raise WireFormatError("plate", f"{self.plate!r} does not match LLLDDD")
        _check_link(self.link)


def encode_record(record: PlateRecord) -> str:
    """Canonical wire string; length is always PREFIX_OCTETS + len(link)."""
    return f"Plate:{record.plate}, Link:{record.link}"


def decode_record(wire: str) -> PlateRecord:
    """Parse a wire string, canonical or single-spaced after the colons.

    Raises WireFormatError naming the first failing token: "frame" when the
    overall shape is wrong, "plate" or "link" for a bad field.
    """
    if not isinstance(wire, str):
        raise WireFormatError("frame", "expected a string")
    m = _DECODE_RE.match(wire)
    if not m:
        if not wire.startswith("Plate:"):
            raise WireFormatError("frame", "missing 'Plate:' prefix")
        raise WireFormatError("frame", "missing ', Link:' separator")
    plate, link = m.group(1), m.group(2)
    if not PLATE_PATTERN.match(plate):
        raise WireFormatError("plate", f"{plate!r} does not match LLLDDD")
    _check_link(link)
    return PlateRecord(plate, link)
