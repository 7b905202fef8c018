"""Exception types shared across the package."""


class OodtError(Exception):
    """Base class for all package errors."""


# -- polygon construction --

class PolygonError(OodtError):
    pass


class SelfIntersecting(PolygonError):
    pass


class DuplicateVertex(PolygonError):
    pass


class CollinearDegenerate(PolygonError):
    pass


# -- geometric queries --

class PointOutsidePolygon(OodtError):
    pass


class NotReflex(OodtError):
    pass


class NotLRVisible(OodtError):
    pass


# -- search --

class NotSearchable(OodtError):
    """Polygon rejected by the searchability test (steps 2-9)."""


class NoUnrestrictedStart(OodtError):
    """Every reflex vertex is restricted; no legal start point."""


class SearchStalled(OodtError):
    """Search exceeded its distance bound without finishing (defect signal)."""


class MalformedSchedule(OodtError):
    pass


# -- obstacle / neighborhood --

class OutOfArea(OodtError):
    pass


class TooFewNeighbors(OodtError):
    pass


class DegenerateRing(OodtError):
    pass


class Unsalvageable(OodtError):
    """Pruning reached a triangle that is still not searchable (defect signal)."""


# -- auction --

class EmptyCandidateSet(OodtError):
    pass


class TooFewBidders(OodtError):
    pass


class NoCommonChannel(OodtError):
    pass


class TooManyCandidates(OodtError):
    pass


class AllExcluded(OodtError):
    pass


# -- simulator / cli --

class ConfigInvalid(OodtError):
    pass


class ScenarioInvalid(OodtError):
    pass


class IoFailure(OodtError):
    pass
