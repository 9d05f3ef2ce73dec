# Copyright 2026 the dieselnet authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Neural modelling and emission-constrained speed control of a turbocharged
diesel engine: a C++ core with Python bindings.

The main operations mirror the pipeline: simulate the surrogate plant,
identify the interconnected Output-Error sub-models, train the neural speed
controller recursively under an opacity constraint, and run closed-loop
experiments.
"""

from _dieselnet import (  # noqa: F401
    Controller,
    ControllerTrainConfig,
    CriterionWeights,
    EngineInit,
    EngineModel,
    EpochMetrics,
    ExcitationConfig,
    FitConfig,
    InputTerm,
    LmConfig,
    Mlp,
    NumericalFault,
    PlantParams,
    PlantState,
    ReferenceProfile,
    RegressorSpec,
    RlsState,
    RunMetrics,
    RunResult,
    SensitivityPair,
    SignalLog,
    SignalRecord,
    SubModel,
    ValidationError,
    assemble_engine_model,
    build_profile,
    compute_metrics,
    default_experiment_profile,
    fit_oe_model,
    fpe,
    generate_excitation,
    lm_train,
    load_engine_model,
    load_log,
    rls_update_multi,
    rls_update_single,
    run_closed_loop,
    run_closed_loop_plant,
    save_engine_model,
    save_log,
    save_run_csv,
    settle_plant,
    simulate_engine_model,
    simulate_plant,
    train_controller,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
