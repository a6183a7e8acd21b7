"""Exception types shared across the package."""


class EllcommError(Exception):
    """Base class for all package errors."""


class InvalidTorus(EllcommError, ValueError):
    pass


class PoleProximity(EllcommError, ValueError):
    """An argument landed within the pole guard of a singular point."""


class WindowUnderflow(EllcommError, ValueError):
    """A stencil needs grid values outside the available window."""


class DegenerateFunction(EllcommError, ValueError):
    pass


class RankDeficient(EllcommError, ValueError):
    """A least-squares sample matrix is numerically singular."""


class DegenerateDivisor(EllcommError, ValueError):
    pass


class DegenerateState(EllcommError, ValueError):
    """A Tyurin step hit coincident slopes or a guarded argument."""


class SingularConfiguration(EllcommError, ValueError):
    """Two chain positions (or a doubled position) hit a lattice point."""


class ConfigInvalid(EllcommError, ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class SchemaMismatch(EllcommError, ValueError):
    pass
