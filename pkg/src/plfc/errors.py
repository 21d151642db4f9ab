"""Exception hierarchy shared by every stage of the pipeline."""


class PlfcError(ValueError):
    """Base class for all data errors raised by this package."""


# image model
class EmptyInput(PlfcError):
    pass


class RaggedRows(PlfcError):
    def __init__(self, line, expected, got):
        super().__init__(f"line {line}: expected {expected} fields, got {got}")
        self.line = line


class BadPixel(PlfcError):
    def __init__(self, line, column, field):
        super().__init__(f"line {line}, column {column}: bad pixel value {field!r}")
        self.line = line
        self.column = column


class DimensionMismatch(PlfcError):
    pass


# seam carving
class SeamError(PlfcError):
    pass


class TooNarrow(SeamError):
    pass


class SeamOutOfRange(SeamError):
    pass


class SeamNotConnected(SeamError):
    pass


class TooManySeams(SeamError):
    pass


# codecs
class CodecError(PlfcError):
    pass


class BadCode(CodecError):
    pass


class BadLengthTable(CodecError):
    pass


class TruncatedBits(CodecError):
    pass


class TrailingBits(CodecError):
    pass


class BadOffset(CodecError):
    pass


class BadToken(CodecError):
    pass


# container
class ContainerError(PlfcError):
    pass


class CodeTooWide(ContainerError):
    pass


class TruncatedPayload(ContainerError):
    pass


class TrailingGarbage(ContainerError):
    pass


class BadMagic(ContainerError):
    pass


class UnsupportedVersion(ContainerError):
    pass


class LengthMismatch(ContainerError):
    pass


class BadHeader(ContainerError):
    pass


# pipeline / bench
class ZeroSize(PlfcError):
    pass


class EmptyCorpus(PlfcError):
    pass


class ReportMismatch(PlfcError):
    pass
