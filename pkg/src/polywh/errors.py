"""Exception types shared across the package."""


class DomainError(ValueError):
    """A mathematically ill-posed request.

    Raised whenever parameters or arguments fall outside the region where
    the requested object exists (wrong sign pattern, eigenstates that do
    not exist in finite dimension, points outside a convergence disk,
    moment sequences with no positive representing measure, ...).  The
    message always names the violated condition; no operation ever returns
    NaN or garbage instead of raising.
    """
