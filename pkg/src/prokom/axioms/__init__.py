"""Instance generators, brute-force oracles and law suites."""
from .generators import (STABILIZING, UNKNOWN, Generator, GeneratorConfig, gen_extension, gen_ind, gen_pro,
                         gen_supercomplex)
from .oracles import brute_force_homotopy_oracle, brute_force_lift_oracle
from .suites import LawViolation, SuiteReport, bump_entry, run_suite, run_trial, suite_names

__all__ = [
    "Generator", "GeneratorConfig", "LawViolation", "STABILIZING", "SuiteReport", "UNKNOWN",
    "brute_force_homotopy_oracle", "brute_force_lift_oracle", "bump_entry", "gen_extension", "gen_ind",
    "gen_pro", "gen_supercomplex", "run_suite", "run_trial", "suite_names",
]
