"""Exception hierarchy shared by every evaluation pathway."""


class MLPDError(Exception):
    """Base class for all errors raised by :mod:`mlpd`."""


class DomainError(MLPDError, ValueError):
    """Parameters or arguments lie outside the admissible domain."""


class PoleError(DomainError):
    """An argument sits on a pole that cannot be removed."""


class BranchError(DomainError):
    """The argument lies on the branch cut of ``(-z)^{-s}``."""


class ConfigError(MLPDError, ValueError):
    """Unknown audit name, malformed grid spec or bad config file."""


class NotConverged(MLPDError, RuntimeError):
    """Raised by :meth:`Evaluation.check` when a sum or quadrature gave up.

    The best available :class:`~mlpd.series.Evaluation` is attached as
    ``evaluation``.
    """

    def __init__(self, message, evaluation=None):
        super().__init__(message)
        self.evaluation = evaluation
