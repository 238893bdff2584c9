class SolverError(RuntimeError):
    """An integrator, root search or eigensolver did not produce a result."""


class AdmissibilityError(ValueError):
    """rho is too small for the contraction bound on the Pruefer angle."""


class BracketError(SolverError):
    """No sign change found for an eigenvalue index in the search range."""
