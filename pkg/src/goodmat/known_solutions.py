"""Published reference solutions used as fixtures and verification targets.

Two sets of good-matrix defining rows that are known to be correct (orders
27 and 57); every claim the package makes about real solutions can be
smoke-tested against them without running any search.
"""

from __future__ import annotations

from .seqcore import DefiningQuad, parse_row, validate_quad

KNOWN_27 = validate_quad(DefiningQuad(
    parse_row("+++++++--+++-+-+---++------"),
    parse_row("+-++-+---+--++++--+---+-++-"),
    parse_row("+-+++---+--+----+--+---+++-"),
    parse_row("+----++-+---+--+---+-++----"),
))

KNOWN_57 = validate_quad(DefiningQuad(
    parse_row("+-+---++--+--+-+-+++-------++--+++++++---+-+-++-++--+++-+"),
    parse_row("+++-+--++---+---+--+-+-++++----++++-+-+--+---+---++--+-++"),
    parse_row("++++---+--+--+--+-+-+----+++--+++----+-+-+--+--+--+---+++"),
    parse_row("+++-++++++--+-+++-+-++----++--++----++-+-+++-+--++++++-++"),
))

#: The unique (up to equivalence) good-matrix quad of order 3.
KNOWN_3 = validate_quad(DefiningQuad(
    (1, 1, -1),
    (1, 1, 1),
    (1, -1, -1),
    (1, -1, -1),
))
