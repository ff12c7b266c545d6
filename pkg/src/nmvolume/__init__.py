"""Non-Markovianity from the volume of dynamically accessible states."""

from .affine_map import (
    AffineBlochMap,
    MapDecomposition,
    apply,
    compose,
    decompose,
    identity_map,
    kraus_channel,
    map_from_channel,
    superoperator_channel,
    volume_factor,
)
from .gaussian_cv import (
    GaussianChannel,
    VectorizedGaussianMap,
    apply_gaussian,
    compose_gaussian,
    gaussian_nv,
    gaussian_trajectory,
    markovian_attenuation,
    vectorize_channel,
)
from .generator_basis import GeneratorBasis, build_basis, from_bloch, is_physical, to_bloch
from .model_channels import (
    DephasingModel,
    LindbladModel,
    LorentzianDecayModel,
    amplitude_damping_model,
    blp_dephasing,
    dephasing_map,
    gamma_t,
    lindblad_propagate,
    lorentzian_map,
    rhp_integrand,
)
from .tomography import (
    TomographyPlan,
    TomographyRecord,
    estimate_nv_from_records,
    estimate_volume,
    make_plan,
    simulate_record,
)
from .volume_measure import (
    NonMarkovianityResult,
    VolumeTrajectory,
    entropy_change,
    is_volume_monotone,
    measure_nv,
)

__version__ = "0.1.0"
