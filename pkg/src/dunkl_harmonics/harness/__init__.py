"""Configuration, suites, sweeps, reports and the command line."""
from .config import ConfigError, ExponentTuple, SuiteConfig, SweepConfig
from .report import SuiteReport
from .suites import SUITES, run_suite
from .sweeps import kato_ponce_split_sweep, kato_ponce_sweep, paraproduct_bound_sweep

__all__ = ["ConfigError", "ExponentTuple", "SuiteConfig", "SweepConfig", "SuiteReport", "SUITES",
           "run_suite", "kato_ponce_sweep", "kato_ponce_split_sweep", "paraproduct_bound_sweep"]
