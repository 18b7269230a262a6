"""Mission planning toolkit for in-space resource logistics.

Builds time-expanded multicommodity flow models with economies-of-scale
cost curves, solves them exactly with a bundled branch-and-bound over a
bounded revised simplex, and reports mission plans and cost breakdowns.
"""

__version__ = "0.1.0"

from .bnb import Solution, solve_lp, solve_milp
from .builder import (
    MilpBuilder,
    StructureSpec,
    TransportRules,
    VehicleSpec,
    encode_piecewise,
    link_product,
)
from .model import MilpModel, ModelError, VariableRef
from .mps import MpsFormatError, export_mps, import_mps, read_mps, write_mps
from .network import (
    ArcSpec,
    Commodity,
    ConcurrencyMatrix,
    NodeSpec,
    TimeExpandedNetwork,
    TransformationMatrix,
    build_time_expanded_graph,
    burn_transformation,
    isru_transformation,
    validate_network,
)
from .pwl import PiecewiseLinearConcave, PwlDomainError, from_scaling_rule

__all__ = [
    "ArcSpec",
    "Commodity",
    "ConcurrencyMatrix",
    "MilpBuilder",
    "MilpModel",
    "ModelError",
    "MpsFormatError",
    "NodeSpec",
    "PiecewiseLinearConcave",
    "PwlDomainError",
    "Solution",
    "StructureSpec",
    "TimeExpandedNetwork",
    "TransformationMatrix",
    "TransportRules",
    "VariableRef",
    "VehicleSpec",
    "build_time_expanded_graph",
    "burn_transformation",
    "encode_piecewise",
    "export_mps",
    "from_scaling_rule",
    "import_mps",
    "isru_transformation",
    "link_product",
    "read_mps",
    "solve_lp",
    "solve_milp",
    "validate_network",
    "write_mps",
    "__version__",
]
