class QRGError(Exception):
    """Base class for errors raised by this package."""


class LinalgError(QRGError, ValueError):
    pass


class ModelError(QRGError):
    """A closed-form model quantity failed its numerical self-check."""


class AnalysisError(QRGError):
    pass
