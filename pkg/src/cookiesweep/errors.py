"""Exception hierarchy shared across the pipeline."""


class CookiesweepError(Exception):
    """Base class for all pipeline errors."""


# --- DOM / selectors ------------------------------------------------


class SelectorUnresolvable(CookiesweepError):
    """No unique selector exists for the element, even with an nth-child chain."""


class EmptyPage(CookiesweepError):
    """Page has no visible elements."""


# --- driver ---------------------------------------------------------


class DriverUnreachable(CookiesweepError):
    """WebDriver endpoint could not be reached or spoke garbage."""

    def __init__(self, message, cause=None):
        super().__init__(message)
        self.cause = cause


class SessionRejected(CookiesweepError):
    """Driver refused the requested capabilities."""


class NavTimeout(CookiesweepError):
    """Navigation did not complete within page_load_timeout_ms."""


class PageCrashed(CookiesweepError):
    """The browser reported a crashed or unusable page."""


class ContainerGone(CookiesweepError):
    """A container selector no longer resolves on the live page."""


# --- detector -------------------------------------------------------


class ClassifierUnavailable(CookiesweepError):
    """External classifier endpoint failed; caller should fall back to the baseline."""


# --- analyzer / prober ----------------------------------------------


class ExplorationBudgetExceeded(CookiesweepError):
    """The per-domain click budget ran out during exploration."""


class ProbeAborted(CookiesweepError):
    """Element vanished before it could be probed."""


# --- decision engine ------------------------------------------------


class EmptyModel(CookiesweepError):
    """Notice model has no serializable elements."""


class NoticeSyntaxError(CookiesweepError):
    """Serialized-notice text does not conform to the input grammar."""


class PlanSyntaxError(CookiesweepError):
    """Plan text does not conform to the output grammar."""


class UnknownTag(CookiesweepError):
    """Plan references a tag that does not exist in the bound model."""


class PlanRejected(CookiesweepError):
    """Produced plan failed validation against its source model."""


# --- enforcement db -------------------------------------------------


class ValidationFailed(CookiesweepError):
    """Record violates its invariants."""


class StaleWrite(CookiesweepError):
    """Write carries an older timestamp than the stored record."""


class EmptyRegion(CookiesweepError):
    """No records exist for the requested region."""
