from dataclasses import dataclass

__all__ = ["config"]

@dataclass
class _Config(object):
    VERBOSE: int = 0  # verbosity level
    # level budget of the semidecisions when the caller gives none
    DEFAULT_FUEL: int = 64
    # number of labels printed by the command line interface
    DEFAULT_LEVELS: int = 8
    # maximum number of residue tuples materialized for a single clopen leaf
    CLOPEN_BUDGET: int = 2_000_000
    # maximum number of cells in the finite model evaluation tensor
    FINITE_MODEL_BUDGET: int = 10 ** 7
    # ceiling of the refinement level of the sign decision with a complete diagram
    SIGN_MAX_LEVEL: int = 4096
    # depth up to which the adversaries inspect the outputs of a stub
    SEARCH_DEPTH: int = 32

config = _Config()
