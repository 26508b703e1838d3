"""
artinlab - Artin functions of polynomial systems over power series rings

Exact constructions and checks around the approximation property: the
counterexample family (u_{p,k}, v_k, z_p) for X^2 - Z*Y^2, its Diophantine
reading, the square obstruction for z_p and brute-force Artin functions over
finite fields.
"""

__version__ = "1.0.0"
__author__ = "artinlab developers"

from .artin import beta_bruteforce, quadratic_lower_bound, quadratic_witness, square_obstruction
from .config import RunConfig
from .construction import build_triple, distance_to_root
from .error import ArtinLabError
from .fields import FieldDescriptor
from .parser import parse_poly
from .series import GradedSeries

__all__ = [
    'ArtinLabError',
    'FieldDescriptor',
    'GradedSeries',
    'RunConfig',
    'beta_bruteforce',
    'build_triple',
    'distance_to_root',
    'parse_poly',
    'quadratic_lower_bound',
    'quadratic_witness',
    'square_obstruction',
]
