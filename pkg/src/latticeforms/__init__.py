"""Even lattices, discriminant forms, Weil representations and vector-valued modular forms."""

from .discriminant import (
    DiscriminantGroup,
    b_disc,
    discriminant_group,
    gauss_sum,
    isotropic_elements,
    milgram_signature,
    q_disc,
    torsion_and_multiples,
)
from .errors import *  # noqa: F401,F403
from .lattice import (
    EvenLattice,
    Sublattice,
    direct_sum,
    enumerate_vectors,
    rescale,
    smith_normal_form,
    sublattice,
    validate_lattice,
)
from .weil import MetaplecticWord, SL2Matrix, rho_S, rho_standard_lift, rho_T, rho_word, rho_Z

__version__ = "0.1.0"
