"""Joint antenna selection and receive beamforming for over-the-air
model aggregation, with a Monte-Carlo experiment harness."""

__version__ = "0.1.0"

from .ao import (
    AoOptions,
    AoTrace,
    DesignState,
    SolveReport,
    fixed_selection_ao,
    solve_receiver,
    transmit_deltas,
    update_transmit,
    update_transmit_scalar,
)
from .baselines import (
    OracleReport,
    all_antenna,
    brute_force_oracle,
    greedy_selection,
    random_selection,
)
from .channel import (
    ChannelConfig,
    DevicePlacement,
    correlation_matrix,
    path_loss,
    place_devices,
    sample_channel,
    sample_network,
    snr_db_to_sigma2,
)
from .dispatch import ALGORITHMS, solve_instance
from .flsim import RoundRecord, SyntheticTask, make_synthetic_task, ota_round, run_fl
from .harness import (
    ExperimentConfig,
    ResultRow,
    load_config,
    parse_config,
    rows_to_csv,
    run_sweep,
    serialize_config,
    summarize,
    write_csv,
)
from .model import (
    AggregationWeights,
    ChannelMatrix,
    NoiseModel,
    ProblemInstance,
    ReceiverVector,
    SelectionVector,
    SystemDims,
    TransmitScalars,
    aggregation_error,
    lasso_quadratic,
    receiver_normal_system,
    selection_gain_vector,
)
from .pdd import (
    DualState,
    PddOptions,
    pdd_solve,
    penalty_value,
    update_auxiliary,
    update_duals,
    update_selection_pdd,
    violation_metric,
)
from .rng import RngSeed, make_rng, mix_seed
from .sparse import (
    SparseOptions,
    binarize_top_l,
    box_lasso_subproblem,
    fista_coordinate_sweep,
    fista_solve,
    lasso_solve,
    soft_threshold,
)
