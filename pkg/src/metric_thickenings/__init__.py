"""Vietoris-Rips and Čech metric thickenings of finite metric spaces.

Finite metric spaces, simplicial complexes, finitely-supported measures and
exact Wasserstein distances, with the product, wedge and coproduct
constructions and explicit homotopy equivalences between them.
"""
from .errors import DomainError, InputError, PreconditionError, StructuralError
from .homology import BettiVector, betti, betti_curve, boundary_matrix
from .homotopy import (
    HomotopyReport,
    product_homotopy,
    product_inject,
    product_retract,
    verify_deformation,
    wedge_homotopy,
    wedge_inject,
    wedge_retract,
)
from .measure import FiniteMeasure, delta, from_weights
from .metric_space import STAR, MetricSpace, PointedMetricSpace
from .simplicial_complex import SimplicialComplex
from .thickening import ScaleParameter, Thickening, cech, contains, vietoris_rips
from .wasserstein import TransportPlan, WassersteinConfig, wasserstein

__version__ = "0.1.0"
