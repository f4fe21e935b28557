from unitaryscaling.dynamics.bloch import (
    UnitaryScalingError,
    InvalidDimensionError,
    HermiticityError,
    InvalidParameterError,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    HermitianBasis,
    BlochVector,
    HermitianDecomp,
    build_basis,
    bloch_coords,
    vectorize,
    reconstruct,
    state_from_bloch,
    is_physical_state,
    bloch_radius,
)
from unitaryscaling.dynamics.lindblad import (
    Convention,
    LindbladGenerator,
    SuperopMatrix,
    apply_generator,
    liouvillian,
    superop_matrix,
    is_unital,
    choi_matrix,
    is_completely_positive_map,
    propagator,
    is_completely_positive_semigroup,
    is_normal_superop,
    commutant_dimension,
    kernel_dimension,
    steady_state,
)
from unitaryscaling.dynamics.evolution import (
    NumericalError,
    DynamicalMatrix,
    HomogeneousMatrix,
    translation_vector,
    dynamical_matrix,
    evolve,
    homogeneous_matrix,
    family_semigroup_defect,
    semigroup_defect,
    is_contractive,
    evolve_trace,
)
from unitaryscaling.dynamics.decomposition import (
    NormalityError,
    OrientationError,
    Isotropy,
    Spheroid,
    PolarParts,
    CanonicalBlock,
    CanonicalForm,
    GeneratorForm,
    RateFit,
    TwoParameterSplit,
    polar,
    canonical_form,
    classify_isotropy,
    spheroid_class,
    generator_canonical_form,
    block_parameters,
    angle_difference,
    fit_rates,
    two_parameter_split,
)
from unitaryscaling.dynamics.entropy import (
    EntropyKind,
    EntropyTrace,
    SubspaceWeights,
    EntropySplit,
    linear_entropy,
    linear_entropy_from_bloch,
    predicted_linear_entropy,
    isotropic_entropy_curve,
    von_neumann_entropy,
    qubit_entropy_from_radius,
    qubit_vn_isotropic_curve,
    relative_entropy,
    entropy_production_exchange,
    subspace_weights,
    entropy_trace,
)
from unitaryscaling.dynamics.channels import (
    TracePreservationError,
    KrausChannel,
    NmrParams,
    compose,
    bit_flip,
    phase_flip,
    depolarizing,
    amplitude_damping,
    channel_to_affine,
    homogeneous_from_affine,
    affine_matrix,
    affine_fixed_point,
    nmr_rates,
    equilibrium_polarization,
    nmr_generator,
    nmr_matrix,
)
from unitaryscaling.dynamics.runconfig import (
    ConfigError,
    RunConfig,
    load_config,
    isotropic_generator,
    decode_complex_matrix,
    encode_complex_matrix,
)
