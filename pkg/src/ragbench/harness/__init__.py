from .config import METHODS, ConfigError, ExperimentConfig, config_from_dict, dump_config, load_config
from .failures import (
    CATEGORIES,
    FailureCase,
    categorize_failure,
    categorize_failures,
    category_histogram,
    find_failures,
    parse_category,
    sample_failures,
)
from .offline import build_providers, default_offline_rules, mock_completion
from .runner import (
    GenerationRecord,
    MethodResult,
    RunAborted,
    RunReport,
    SignificanceRow,
    answer_questions,
    build_context,
    compare_methods,
    run_experiment,
    run_method,
    summarize_generation,
)
from .sweep import AXES, SweepResult, sweep
from .workbench import Workbench

__all__ = [
    "AXES",
    "CATEGORIES",
    "ConfigError",
    "ExperimentConfig",
    "FailureCase",
    "GenerationRecord",
    "METHODS",
    "MethodResult",
    "RunAborted",
    "RunReport",
    "SignificanceRow",
    "SweepResult",
    "Workbench",
    "answer_questions",
    "build_context",
    "build_providers",
    "categorize_failure",
    "categorize_failures",
    "category_histogram",
    "compare_methods",
    "config_from_dict",
    "default_offline_rules",
    "dump_config",
    "find_failures",
    "load_config",
    "mock_completion",
    "parse_category",
    "run_experiment",
    "run_method",
    "sample_failures",
    "summarize_generation",
    "sweep",
]
