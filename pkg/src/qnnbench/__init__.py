"""Continuous-variable quantum neural network vs classical MLP regression benchmark."""

from .data import Dataset, RegressionTask, make_dataset, make_task, target, uniform_grid
from .fock import CutoffConfig, expectation, leakage, matrix_exp
from .harness import (
    AggregateRow,
    ExperimentSpec,
    ModelDescriptor,
    TABLE1_CONFIGS,
    aggregate,
    depth_sweep_models,
    export,
    parameter_match_models,
    run_experiment,
    run_strategy_layers,
    run_strategy_parameters,
)
from .mlp import MlpNetwork, chain_network, make_network, param_count
from .qnn import QnnLayerParams, QnnParams
from .training import AdamConfig, MlpModel, QnnModel, RunResult, adam_step, mse, train

__version__ = "0.1.0"
