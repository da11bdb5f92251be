"""Exact computations with weight modules over the Virasoro algebra."""

from .scalars import GaussianRational, gr, gr_arith, gr_format, gr_parse
from .algebra import (
    CENTRAL,
    LieElement,
    PBWMonomial,
    UEAElement,
    bracket,
    degree_of,
    normal_order_product,
    omega,
    parse_lie,
    parse_uea,
)
from .modules import (
    ModuleRealization,
    SubspaceFamily,
    VectorInModule,
    WeightWindow,
    act,
    build_intermediate,
    build_verma,
    dimensions,
    direct_sum,
    dual,
    quotient,
    restrict,
    submodule_generated,
)
from .analysis import (
    ClassificationReport,
    IntertwinerMap,
    PrimitivityVerdict,
    Violation,
    build_paper_example,
    check_axioms,
    classify,
    detect_trivial_factor,
    find_intertwiner,
    injectivity_diagnostic,
    is_simple_window,
    primitivity,
    strongly_primitive_space,
)

__version__ = "0.1.0"
