"""Exact computations around West's stack-sorting map: valid hook
configurations, fertilitopes as integral binary nestohedra, fertility
numbers and free-to-classical cumulant conversion."""

from .errors import DomainError, FertilitopeError, ResourceError
from .perm_core import (
    DecreasingBinaryTree,
    descents,
    in_order,
    in_order_inverse,
    parse_permutation,
    peaks,
    postorder,
    stack_sort,
    standardize,
    tail_length,
)
from .vhc import (
    Hook,
    ValidHookConfiguration,
    canonical_hook_configuration,
    enumerate_vhcs,
    valid_compositions,
)
from .nestohedron import LatticePointSet, WeightedBuildingSet, fertilitope, lattice_points
from .fertility import IntPolynomial, descent_polynomial, fertility_number_search

__version__ = "0.1.0"
