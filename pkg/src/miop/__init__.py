"""miop: multi-indexed orthogonal polynomials, exactly.

Constructs the Laguerre/Jacobi/Wilson/Askey-Wilson multi-indexed polynomial
pairs (Xi_D, P_{D,n}) from their determinant formulas, builds the 3+2M-term
recurrence coefficient tables R^[M]_{n,k}(eta), and verifies the defining
identities in exact rational arithmetic, with a float quadrature backend for
orthogonality checks.
"""

__version__ = "0.1.0"
