"""Elementary factorization of complex symplectic matrices and the geometry of Phi_K."""

from .config import Config
from .elemsym import (ElementaryFactor, FactorWord, NotSymplectic, SymplecticMatrix, compact,
                      generator_E, generator_F, k_matrix, materialize, reconstruct, validate,
                      whitehead_diagonal, whitehead_offdiag)
from .factorizer import FactorizationResult, ResidualTooLarge, factor_bound, factorize
from .phimap import (ClassificationReport, PhiPoint, TargetVector, ZeroTarget, classify, lift_k3,
                     lift_pad, phi_eval, phi_jacobian)
from .symcore import SymmetricParam, elementary_symmetric, pack, symmetric_solve, unpack

__version__ = "0.1.0"
