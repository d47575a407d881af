"""Text serialization of SOI streams.

Format::

    # soi-stream v1 T=<horizon> dt=<dt>
    <timestamp with 9 decimals>\t<bit>
    ...
"""

from pathlib import Path
from typing import TextIO, Union
import io
import logging
import re

import numpy as np

from .soi import SoiStream
from soisim.errors import DomainError

logger = logging.getLogger('soisim')

HEADER_RE = re.compile(r"^#\s*soi-stream\s+v1\s+T=(?P<horizon>\S+)\s+dt=(?P<dt>\S+)\s*$")


def format_stream(stream: SoiStream) -> str:
    lines = [f"# soi-stream v1 T={stream.horizon!r} dt={stream.dt!r}"]
    lines.extend(f"{t:.9f}\t{int(b)}" for t, b in zip(stream.timestamps.tolist(), stream.bits.tolist()))
    return "\n".join(lines) + "\n"


def parse_stream(text: str) -> SoiStream:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DomainError("Empty SOI stream")
    match = HEADER_RE.match(lines[0].strip())
    if not match:
        logger.error("Malformed SOI stream header: %r", lines[0])
        raise DomainError(f"Malformed SOI stream header: {lines[0]!r}")

    timestamps, bits = [], []
    for number, line in enumerate(lines[1:], start=2):
        try:
            stamp, bit = line.split("\t")
            timestamps.append(float(stamp))
            bits.append(int(bit))
        except ValueError as e:
            logger.error("Malformed SOI stream line %d: %r", number, line)
            raise DomainError(f"Malformed SOI stream line {number}: {line!r}") from e

    return SoiStream(
        timestamps=np.asarray(timestamps, dtype=float),
        bits=np.asarray(bits, dtype=np.int8),
        horizon=float(match.group("horizon")),
        dt=float(match.group("dt")),
    )


def write_stream(stream: SoiStream, destination: Union[str, Path, TextIO]) -> None:
    """Write ``stream`` to a path or an open text file."""
    text = format_stream(stream)
    if isinstance(destination, io.TextIOBase):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")
    logger.debug("Wrote SOI stream with %d events", len(stream))


def read_stream(source: Union[str, Path, TextIO]) -> SoiStream:
    """Read a stream written by ``write_stream``."""
    if isinstance(source, io.TextIOBase):
        return parse_stream(source.read())
    return parse_stream(Path(source).read_text(encoding="utf-8"))
