"""Independent exact oracles (rational arithmetic)."""
from fractions import Fraction

import sympy


def exact_inertia(m):
    """(positives, negatives, zeros) of a real symmetric matrix via Descartes' rule.

    All roots of the characteristic polynomial are real, so the number of
    positive roots equals the number of sign changes of its coefficients.
    """
    a = sympy.Matrix([[sympy.Rational(Fraction(float(x))) for x in row] for row in m])
    n = a.shape[0]
    lam = sympy.Symbol("lam")
    coeffs = sympy.Poly(a.charpoly(lam).as_expr(), lam).all_coeffs()
    zeros = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    pos = changes(coeffs)
    neg = changes([c * (-1) ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs)])
    assert pos + neg + zeros == n
    return pos, neg, zeros


def exact_det(m):
    a = sympy.Matrix([[sympy.Rational(Fraction(float(x))) for x in row] for row in m])
    return a.det()
