"""Second-quantized simulation of two entangled pairs meeting at beam splitters."""
from .entanglement import (
    SchmidtResult,
    entanglement_entropy,
    entropy_ebits,
    path_amplitudes,
    reconstruct,
    schmidt,
    spatial_entropy_ebits,
)
from .fock import (
    FockState,
    ModeLabel,
    ModeMismatchError,
    Spin,
    Statistics,
    ZeroStateError,
    apply_creation,
    build_from_monomials,
    inner_product,
    mode,
    normalize,
    occupation_overlap,
)
from .measurement import (
    MeasurementOutcome,
    PathPattern,
    project_path,
    project_sx,
    project_sx_zero,
    project_sz_component,
)
from .optics import BeamSplitter, ModeMap, apply_mode_map, beam_splitter_map
from .scenarios import ScenarioSpec, initial_state, output_state, spin_space_correlation_check

__version__ = "0.1.0"
