"""Maximal output p-norms of Werner-Holevo channels and their tensor products."""
from .channel import WHChannel, as_schmidt, product_output, schmidt_from_state
from .linalg import hermitian_eigenvalues, kron, partial_trace, pnorm_psd, transpose
from .optimize import find_crossover, maximize_product_pnorm, multiplicativity_gap, nu_single
from .schur import majorizes, random_majorization_pair, schur_test
from .spectrum import analytic_spectrum, pnorm_decomposition, s_hat, solve_secular, symmetric_polynomials

__version__ = "0.1.0"
