"""Exception types shared across the package."""


class CoverageError(ValueError):
    """A pixel is not covered by any patch of any group.

    Uncovered pixels have occurrence count zero, so the grouped lift carries
    no information about them and per-pixel normalizations divide by zero.
    """

    def __init__(self, pixel):
        self.pixel = tuple(int(v) for v in pixel)
        super().__init__(f"pixel {self.pixel} is not covered by any patch of any group")


class PgmFormatError(ValueError):
    """Malformed PGM file; `offset` is the byte position of the problem."""

    def __init__(self, message, offset):
        self.offset = int(offset)
        super().__init__(f"{message} (byte offset {self.offset})")
