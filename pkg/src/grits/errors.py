"""Exception types raised across the toolkit.

Everything derives from GritsError so callers can catch the whole family.
"""


class GritsError(Exception):
    """Base class for all toolkit errors."""


class MalformedBoxError(GritsError):
    """A bounding box has x2 < x1 or y2 < y1."""


class OutOfBoundsError(GritsError):
    """A cell extends outside the declared grid dimensions."""


class OverlapError(GritsError):
    """Two cells claim the same grid position."""


class GapError(GritsError):
    """A grid position is covered by no cell."""


class MissingBBoxError(GritsError):
    """A location matrix was requested but a cell carries no box."""


class KindMismatchError(GritsError):
    """Two property matrices of different kinds were compared."""


class TooLargeError(GritsError):
    """An input exceeds the size limit of an exhaustive routine."""


class SpanningCellError(GritsError):
    """A row/column corruption was applied to a grid with spanning cells."""


class InvalidIndexError(GritsError):
    """A kept-index list is out of range or not strictly increasing."""


class EmptyDatasetError(GritsError):
    """No usable tables remain after filtering."""


class SchemaError(GritsError):
    """A JSON table document violates the schema.

    ``pointer`` holds a JSON-pointer-style path to the offending field.
    """

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class MalformedHtmlError(GritsError):
    """HTML input does not contain exactly one well-formed table."""


class RaggedRowError(GritsError):
    """HTML table rows and spans do not tile a rectangle."""


class MissingPairError(GritsError):
    """Ground-truth files without prediction counterparts (or vice versa).

    ``stems`` lists the unpaired file stems.
    """

    def __init__(self, stems):
        self.stems = tuple(stems)
        super().__init__("unpaired table files: " + ", ".join(self.stems))
