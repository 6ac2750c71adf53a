"""Simulation and exhaustive verification for k-party number-in-hand collision
finding and the bit pigeonhole principle."""

from .gf2 import Gf2Matrix, enumeration_matrix, mul, rank
from .gadget import GadgetPair, column_replacement_rank, gadget_matrices, mix, verify_gadget
from .collision import CollInstance, find_collision_oracle, greedy_protocol, random_instance
from .transcript import Transcript
from .reduction import DisjInstance, ReductionArtifact, check_claims_exhaustive, decide_disjointness
from .bphp import CnfFormula, LinearSystem, cnf_to_inequalities, generate_bphp, to_dimacs
from .proofsim import (
    ProofTree,
    ThresholdDecisionTree,
    VariablePartition,
    dt_to_protocol,
    eval_dt,
    exact_gt,
    proof_to_dt,
    trivial_dt,
)
from .bounds import lower_bound_estimate

__version__ = "0.1.0"
