"""Exception taxonomy shared by all modules."""


class DehnlabError(Exception):
    """Base class for everything raised on purpose by this package."""


# -- words ------------------------------------------------------------------

class UnknownGenerator(DehnlabError):
    """A letter or name outside the session alphabet."""


class TrivialWord(DehnlabError):
    """An operation that needs a nontrivial word got the identity."""


# -- graphs of groups -------------------------------------------------------

class InvalidLabeling(DehnlabError):
    """An ordered labeling does not fit the graph it is used with."""


class Disconnected(DehnlabError):
    """The graph of groups is not connected."""


class RootUnsupported(DehnlabError):
    """Root extraction asked for in a vertex group that is not free."""


class BadEdgeIndex(DehnlabError):
    """Edge index outside the labeling."""


class BadSpec(DehnlabError):
    """Twist exponent vector does not match the edge list."""


class NotAPower(DehnlabError):
    """Slide precondition u1 = u2^p fails for every p within the bound."""


class SharedEndpointMissing(DehnlabError):
    """The two edges of a slide share no endpoint."""


class NonTermination(DehnlabError):
    """A slide loop exceeded its configured bound."""


class NotAGenerator(DehnlabError):
    """Lift asked for something that is not a vertex element or stable letter."""


class OracleBudgetExceeded(DehnlabError):
    """The group oracle ran out of budget before a verification finished."""


# -- mapping torus ----------------------------------------------------------

class NotInvertible(DehnlabError):
    """No inverse automorphism supplied or found within the search budget."""


# -- diagrams ---------------------------------------------------------------

class DiagramError(DehnlabError):
    """Structural problem in a van Kampen diagram."""


class NonPlanar(DiagramError):
    """A gluing description does not define a planar (disk) diagram."""


class BoundaryMismatch(DiagramError):
    """Built diagram's boundary differs from the declared one."""


class BadFaceLabel(DiagramError):
    """A face word is not a cyclic conjugate of any relator or its inverse."""


class SideOccupied(DiagramError):
    """Direct folding blocked: both sides of the segment carry darts."""


class CrossingPresent(DiagramError):
    """Rotated folding refused: the tracked path crosses the segment."""


class MalformedTCell(DiagramError):
    """A face tagged with a t-relator lacks exactly two t-edges."""


class NotARing(DiagramError):
    """Ring removal asked on a boundary-to-boundary corridor."""


class MissingTableEntry(DiagramError):
    """Cell filling table has no entry for a relator."""


class NotBounding(DiagramError):
    """The corridor does not bound the given room."""


class DisconnectedIntersection(DiagramError):
    """Room/corridor intersection is not a single path or point."""


# -- dehn -------------------------------------------------------------------

class NotFoundWithinBudget(DehnlabError):
    """Area search exhausted its budget (not a proof of nontriviality)."""


class OracleUnknown(DehnlabError):
    """A three-valued oracle answer of 'unknown' where a decision was needed."""


class InsufficientData(DehnlabError):
    """growth_fit needs at least three positive samples."""


# -- cli --------------------------------------------------------------------

class ParseError(DehnlabError):
    """Session or certificate file failed to parse."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = " (line %d%s)" % (line, ", col %d" % column if column is not None else "")
        super().__init__(message + where)


class InvariantViolation(DehnlabError):
    """A declared invariant failed during an experiment run."""


class UnknownObject(DehnlabError):
    """Export asked for an object the session did not produce."""
