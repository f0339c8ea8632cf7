"""Ball-flight forecasting: simulated launches, a physics baseline and a
trajectory variational auto-encoder.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from trajcast._core import (
    DataError,
    Dataset,
    DatasetEntry,
    Model,
    NumericError,
    Prediction,
    TimeGrid,
    Trajectory,
    TrainResult,
    evaluate_model,
    evaluate_physics,
    gaussian_kl,
    load_model,
    physics_predict,
    predict,
    read_dataset,
    synthesize,
    train,
    write_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "Dataset",
    "DatasetEntry",
    "Model",
    "NumericError",
    "Prediction",
    "TimeGrid",
    "Trajectory",
    "TrainResult",
    "evaluate_model",
    "evaluate_physics",
    "gaussian_kl",
    "load_model",
    "physics_predict",
    "predict",
    "read_dataset",
    "synthesize",
    "train",
    "write_dataset",
]
