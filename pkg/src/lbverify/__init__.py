"""Verification and exploration toolkit for the cylindrically symmetric
massless-scalar-field spacetime with positive cosmological constant.

Every closed-form claim of the solution family is re-derived here through
independent numeric oracles (curvature residuals, ODE integration,
quadrature, eigenvalue analysis, root scans); agreements and disagreements
between quoted formulas and the family's own field equations are reported,
never assumed.
"""

__version__ = "0.1.0"
