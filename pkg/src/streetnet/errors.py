"""Exception hierarchy shared across the package."""


class StreetNetError(Exception):
    """Base class for all errors raised by this package."""


# --- service client errors ---------------------------------------------------

class TransportError(StreetNetError):
    """Network-level failure talking to a remote service."""


class NetworkDisabled(StreetNetError):
    """A transport configured as offline was asked to perform a request."""


class RateLimited(TransportError):
    """Remote service refused the request; retry_after holds the server hint."""

    def __init__(self, message, retry_after=None):
        super().__init__(message)
        self.retry_after = retry_after


class ServerBusy(TransportError):
    """Remote service stayed busy through every backoff attempt."""


class NoResult(StreetNetError):
    """Geocoding query returned nothing usable."""


class ProviderAuth(StreetNetError):
    """Elevation provider rejected the configured credentials."""


class PartialFailure(StreetNetError):
    """Some inputs could not be resolved; missing_ids lists them."""

    def __init__(self, message, missing_ids=()):
        super().__init__(message)
        self.missing_ids = list(missing_ids)


class FixtureMissing(StreetNetError):
    """Fixture-only cache mode had no recorded entry for the request."""


# --- payload parsing ----------------------------------------------------------

class MalformedPayload(StreetNetError):
    """Payload could not be parsed; offset is a byte position when known."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class UnsupportedFormat(StreetNetError):
    """Requested payload format is not one this package reads."""


# --- graph construction and transforms ----------------------------------------

class DanglingRef(StreetNetError):
    """A way references a node id absent from the element set."""


class UnknownNode(StreetNetError):
    """Referenced node id is not present in the graph."""


class EmptyGraph(StreetNetError):
    """Operation requires a nonempty graph."""


class EmptyResult(StreetNetError):
    """Spatial truncation removed every node."""


class AlreadySimplified(StreetNetError):
    """Graph has already been through topology simplification."""


class AlreadyProjected(StreetNetError):
    """Graph coordinates are already in a projected CRS."""


class NotProjected(StreetNetError):
    """Operation requires projected (meter) coordinates."""


class InvalidPolygon(StreetNetError):
    """Polygon input is malformed or degenerate."""


class NotStronglyConnected(StreetNetError):
    """Measure requires a strongly connected graph."""


class Disconnected(StreetNetError):
    """Measure requires a (weakly) connected graph."""


class NonConvergence(StreetNetError):
    """Iterative computation failed to converge within its iteration cap."""


# --- routing -------------------------------------------------------------------

class NoPath(StreetNetError):
    """Target is unreachable from the source."""


class NegativeWeight(StreetNetError):
    """Edge weight attribute is negative."""


class MissingWeight(StreetNetError):
    """Edge lacks the requested numeric weight attribute."""


class MissingElevation(StreetNetError):
    """Node lacks the elevation attribute required for grade routing."""


# --- persistence ----------------------------------------------------------------

class SchemaViolation(StreetNetError):
    """Serialized graph file is missing a mandatory attribute."""


class FileParseError(StreetNetError):
    """Serialized graph file is not well-formed."""


class IoError(StreetNetError):
    """Filesystem-level failure while reading or writing."""
