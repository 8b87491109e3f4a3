"""
Exact arithmetic for affine Λ-buildings over Λ = ℚ^k with the lexicographic order.
"""
from .base_change import EpiFunctor, MonoFunctor, compose_functors, epi_complex, fiber, image_isometry, mono_complex
from .chart_complex import BuildingPoint, ChartComplex, Gluing, check_axioms, validate
from .errors import BuildingError, ValidationError
from .group_actions import IsometryAction, IsometryGenerator, fixed_point, orbit
from .model_space import AffineMap, ConvexSet, HalfApartment, ModelSpace, Point
from .ordered_groups import GroupMorphism, GroupValue, compare, leading_index
from .root_systems import RootSystem, build

__version__ = "1.0.0"
