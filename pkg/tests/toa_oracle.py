"""Exact air-time oracle, written independently of the library code.

Everything is Fraction arithmetic so the reference value carries no
rounding of its own; comparisons happen after one float() at the end.

Derivation. A frame is a preamble of ``preamble + 4.25`` symbols followed
by the payload block. The payload block always spends 8 symbols, plus
ceil(max(numerator, 0) / (4 * (sf - 2 * de))) groups of ``cr_den`` symbols
where

    numerator = 8 * payload_octets - 4 * sf + 28 + 16 * crc - 20 * header

with crc in {0, 1}, header 0 for the explicit type and 1 for implicit,
and de = 1 when the low-data-rate flag is on (it doubles nothing here
beyond shrinking the divisor). One symbol lasts 2^sf / bw seconds.

The flag itself follows the usual firmware rule: on exactly when the
symbol time reaches 16 ms.
"""

from fractions import Fraction


def oracle_symbol_time(sf: int, bw_hz: int) -> Fraction:
    return Fraction(2**sf, bw_hz)


def oracle_ldro(sf: int, bw_hz: int) -> bool:
    return oracle_symbol_time(sf, bw_hz) >= Fraction(16, 1000)


def oracle_bitrate(sf: int, bw_hz: int, cr_den: int) -> Fraction:
    return Fraction(sf) * Fraction(bw_hz, 2**sf) * Fraction(4, cr_den)


def oracle_time_on_air(
    sf: int,
    bw_hz: int,
    cr_den: int,
    payload_octets: int,
    preamble_symbols: int = 8,
    explicit_header: bool = True,
    crc_on: bool = True,
    ldro: bool | None = None,
) -> Fraction:
    if ldro is None:
        ldro = oracle_ldro(sf, bw_hz)
    de = 1 if ldro else 0
    ih = 0 if explicit_header else 1
    numerator = 8 * payload_octets - 4 * sf + 28 + (16 if crc_on else 0) - 20 * ih
    divisor = 4 * (sf - 2 * de)
    if numerator > 0:
        # exact ceiling division on integers
        groups = -(-numerator // divisor)
        payload_symbols = 8 + groups * cr_den
    else:
        payload_symbols = 8
    tsym = oracle_symbol_time(sf, bw_hz)
    preamble = (Fraction(preamble_symbols) + Fraction(17, 4)) * tsym
    return preamble + payload_symbols * tsym
