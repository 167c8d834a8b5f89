from .ntheory import (
    DEFAULT_SEED,
    PrimeFactorization,
    factorize,
    fundamental_discriminant,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    squarefree_and_fundamental,
    squarefree_part,
    valuation,
)
from .poly import (
    CapabilityError,
    ModPPoly,
    RationalPoly,
    cubic_inert,
    poly_factor_mod_p,
    poly_factor_over_Q,
    rational_roots,
)

__all__ = [
    "DEFAULT_SEED",
    "CapabilityError",
    "ModPPoly",
    "PrimeFactorization",
    "RationalPoly",
    "cubic_inert",
    "factorize",
    "fundamental_discriminant",
    "is_fundamental_discriminant",
    "is_prime",
    "kronecker",
    "poly_factor_mod_p",
    "poly_factor_over_Q",
    "rational_roots",
    "squarefree_and_fundamental",
    "squarefree_part",
    "valuation",
]
