"""Codec package for soisim.

This package contains the sign-of-innovation encoder and decoder.
"""

from .soi import (
    SoiStream,
    EstimatePath,
    encode,
    decode,
    bit_length,
    empirical_rate,
    empirical_mse,
    grid_indices,
    time_average_square,
)
from .stream_io import write_stream, read_stream, format_stream, parse_stream

__all__ = [
    "SoiStream",
    "EstimatePath",
    "encode",
    "decode",
    "bit_length",
    "empirical_rate",
    "empirical_mse",
    "grid_indices",
    "time_average_square",
    "write_stream",
    "read_stream",
    "format_stream",
    "parse_stream",
]
