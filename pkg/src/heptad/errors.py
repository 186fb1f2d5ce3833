"""Exception hierarchy shared by every heptad module."""


class HeptadError(Exception):
    """Base class for all heptad errors."""


class InvalidBlock(HeptadError):
    pass


class NotAHeptagon(HeptadError):
    pass


class InvalidHost(HeptadError):
    pass


class UnsupportedBlock(HeptadError):
    pass


class InvalidStarter(HeptadError):
    pass


class NoFixture(HeptadError):
    pass


class FixtureError(HeptadError):
    """Raised for checksum mismatches or fixtures that fail verification."""


class NotAdmissible(HeptadError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NotSelfReverse(HeptadError):
    pass


class NotSplittable(HeptadError):
    pass


class Exhausted(HeptadError):
    """A bounded search ran out of budget or proved that no solution exists."""


class UnsatisfiableWithinBudget(Exhausted):
    pass


class HostTooLarge(HeptadError):
    pass
