"""Argument construction, aggregation and defeat for the logic of argumentation."""
from .aggregation import BND, COUNT, NUM, Flattener, agg_bnd, agg_num, aggregate, flatten
from .criteria import CriteriaReport, check_acr_criteria, check_flattening_criteria, random_cases
from .defeat import (
    IN, OUT, UNDEC, ConArgument, Labelling, SignedArgumentPool, discounts, grounded_labelling,
    rebuts, selective, selective_aggregate, signed_closure,
)
from .dictionaries import combine, flip, leq, top
from .errors import (
    AggregationError, ArgueError, DatabaseError, FragmentError, ParseError, ProofError,
    SignError, UnboundVariableError,
)
from .kernel import (
    FALSUM, And, Atom, AxiomEntry, Const, Database, Formula, GroundLabel, Implies, Not, Or, Var,
    complement, load_database, normalize, parse_database, parse_formula, render, substitute,
)
from .prover import (
    Argument, Proof, SearchLimits, check_proof, depends_on, find_arguments, proof_from_json,
)

__version__ = "0.1.0"
