"""Single-photon catalyzed coherent states: closed forms and a Fock-space oracle."""

__version__ = "0.1.0"

from .analytic import (
    AnalyticSPCCS,
    CatalysisParams,
    I_k,
    MomentSet,
    delta_closed,
    moments_analytic,
    p_success,
    pnd,
    spccs_coefficients,
    wigner_closed,
)
from .devices import (
    DeviceSpec,
    HeraldResult,
    bs_apply,
    catalyze_numeric,
    herald_single_photon,
    pa_apply,
)
from .errors import (
    BracketError,
    DegenerateHeraldError,
    IntegrationError,
    SpccsError,
    TruncationError,
)
from .fock import (
    FockVector,
    TruncationPolicy,
    TwoModeFockMatrix,
    coherent,
    fidelity,
    fock,
    inner,
    ladder,
    moment,
    tensor,
)
from .phase_space import NegativityResult, PhaseSpaceRegion, negativity_volume, wigner_numeric
from .scan import ExtremumResult, ScanRequest, find_extremum, locate_extremum, scan_metric
