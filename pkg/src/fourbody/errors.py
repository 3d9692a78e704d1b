"""Exception types shared across the package."""


class FourBodyError(Exception):
    pass


class FlagViolation(FourBodyError):
    """An operator mapped a basis monomial outside the polynomial space."""


class SingularPoint(FourBodyError):
    """A gauge or measure factor vanishes at the requested point."""


class NonNormalizable(FourBodyError):
    pass


class NoConvergence(FourBodyError):
    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class NegativeRoot(FourBodyError):
    def __init__(self, message, root=None, residual=None):
        super().__init__(message)
        self.root = root
        self.residual = residual


class BadLimit(FourBodyError):
    """A gauge parameter that must vanish for an infinite-mass limit does not."""


class IdentityFailure(FourBodyError):
    pass


class NoFit(FourBodyError):
    pass


class ConfigError(FourBodyError):
    pass
