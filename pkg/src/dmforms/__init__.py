"""Exact q-expansions, a graded differential ring of modular forms with
Hecke operators, hardcoded Gauss-Manin connection matrices with numeric
transport, normalized elliptic period matrices, and the Ramanujan vector
field with its foliation diagnostics.
"""

from __future__ import annotations

from .config import DEFAULTS, Defaults
from .dmf import (
    G1,
    G2,
    G3,
    DmfElement,
    associated_functions,
    basis,
    derivation,
    dimension,
    hecke,
    hecke_composition_check,
    numeric_eval,
    random_element,
    slash_eval,
    to_qseries,
)
from .eisenstein import (
    discriminant_series,
    e2,
    e4,
    e6,
    eisenstein_point,
    eisenstein_series,
    j_series,
    nome,
)
from .errors import (
    DmformsError,
    OnDiscriminant,
    ParseError,
    PeriodError,
    ReconstructionFailed,
    TruncationExceeded,
)
from .foliation import (
    alt_chart,
    dist_to_sing,
    flow,
    invariant_monitors,
    leaf_uniformization,
    ra_eval,
    singular_point,
    tangency_check,
)
from .gaussmanin import (
    connection_eval,
    delta_poly,
    matrices,
    picard_fuchs_transport,
)
from .mpoly import MPoly
from .parser import parse_expression
from .periods import (
    BValues,
    PeriodMatrix,
    b2_zero_point,
    b_values,
    j_invariant,
    period_matrix,
    period_matrix_general,
    reduce_tau,
    roundtrip_check,
    scale_action,
    second_kind_ratio,
    sl2z_align,
    special_point_monitor,
    tau_close,
)
from .qseries import QSeries
from .verify import verify_all

__version__ = "0.1.0"

__all__ = [
    "DEFAULTS",
    "Defaults",
    "G1",
    "G2",
    "G3",
    "DmfElement",
    "associated_functions",
    "basis",
    "derivation",
    "dimension",
    "hecke",
    "hecke_composition_check",
    "numeric_eval",
    "random_element",
    "slash_eval",
    "to_qseries",
    "discriminant_series",
    "e2",
    "e4",
    "e6",
    "eisenstein_point",
    "eisenstein_series",
    "j_series",
    "nome",
    "DmformsError",
    "OnDiscriminant",
    "ParseError",
    "PeriodError",
    "ReconstructionFailed",
    "TruncationExceeded",
    "alt_chart",
    "dist_to_sing",
    "flow",
    "invariant_monitors",
    "leaf_uniformization",
    "ra_eval",
    "singular_point",
    "tangency_check",
    "connection_eval",
    "delta_poly",
    "matrices",
    "picard_fuchs_transport",
    "MPoly",
    "parse_expression",
    "BValues",
    "PeriodMatrix",
    "b2_zero_point",
    "b_values",
    "j_invariant",
    "period_matrix",
    "period_matrix_general",
    "reduce_tau",
    "roundtrip_check",
    "scale_action",
    "second_kind_ratio",
    "sl2z_align",
    "special_point_monitor",
    "tau_close",
    "QSeries",
    "verify_all",
    "__version__",
]
