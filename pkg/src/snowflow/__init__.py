"""Seasonal river discharge forecasting from snowpack, precipitation and
temperature, with a small tanh network trained by batch momentum descent."""

from .errors import DataError, DomainError, ParseError
from .estimator import DischargeRegressor
from .ingest import (
    ClimateDaily,
    DischargeDaily,
    FeatureRecord,
    YearExclusion,
    build_feature_table,
    fahrenheit_to_rankine,
    parse_climate_csv,
    parse_discharge_csv,
    parse_feature_csv,
    write_feature_csv,
)
from .metrics import Metrics, mse_metric, pearson_r, percent_error
from .model_io import ModelFile, from_trained, load_model, save_model
from .network import (
    GradientSet,
    Network,
    TrainingHyperparams,
    batch_gradients,
    batch_loss,
    forward,
    forward_batch,
    init_network,
    momentum_step,
    tanh_activation,
    zero_gradients,
)
from .scaling import RangeScaler, Scaler, apply_scaler, column_slice, fit_scaler, invert_scaler
from .sensitivity import (
    ScanRow,
    ScanSpec,
    SensitivityTable,
    VariedInput,
    rank_input_influence,
    run_scan,
)
from .training import (
    SweepRow,
    TrainedModel,
    best_node_count,
    features_to_arrays,
    loo_metrics,
    predict,
    sweep,
    train,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "ParseError",
    "DataError",
    "DomainError",
    "DischargeRegressor",
    "RangeScaler",
    "Scaler",
    "fit_scaler",
    "apply_scaler",
    "invert_scaler",
    "column_slice",
    "Network",
    "TrainingHyperparams",
    "GradientSet",
    "tanh_activation",
    "init_network",
    "forward",
    "forward_batch",
    "batch_loss",
    "batch_gradients",
    "momentum_step",
    "zero_gradients",
    "Metrics",
    "mse_metric",
    "pearson_r",
    "percent_error",
    "ClimateDaily",
    "DischargeDaily",
    "FeatureRecord",
    "YearExclusion",
    "parse_climate_csv",
    "parse_discharge_csv",
    "parse_feature_csv",
    "write_feature_csv",
    "fahrenheit_to_rankine",
    "build_feature_table",
    "TrainedModel",
    "SweepRow",
    "features_to_arrays",
    "train",
    "predict",
    "sweep",
    "best_node_count",
    "loo_metrics",
    "VariedInput",
    "ScanSpec",
    "ScanRow",
    "SensitivityTable",
    "run_scan",
    "rank_input_influence",
    "ModelFile",
    "from_trained",
    "save_model",
    "load_model",
]
