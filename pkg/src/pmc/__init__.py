"""Exact inference and evidential decision engine over finite
subdistribution kernels, with a string-diagram term language, canonical
conditioning operations, and a registry of machine-checked laws."""

from .errors import (
    BadDensity,
    BadParameter,
    BadSplit,
    IllTyped,
    ImpossibleEvidence,
    InferenceUndefined,
    NegativeProbability,
    NoFeasibleAction,
    NonTotalGenerator,
    NotTotal,
    PmcError,
    RowMassExceedsOne,
    SchemaError,
    TypeMismatch,
    UndefinedUtility,
    UnknownAction,
    UnknownLabel,
    UnknownLaw,
)
from .kernel import (
    Alphabet,
    Obj,
    SubKernel,
    UNIT,
    compare,
    compose,
    copy,
    dirac,
    discard,
    failure_probability,
    identity,
    is_deterministic,
    is_quasi_total,
    is_total,
    make_kernel,
    obj,
    state,
    swap,
    tensor,
)
from .conditioning import (
    bayes_invert,
    cond_compose,
    conditional,
    jeffrey_update,
    marginal,
    normalise,
    pearl_update,
)
from .diagram import (
    Compare,
    Compose,
    Copy,
    Discard,
    Gen,
    Id,
    NormalForm,
    Observe,
    Swap,
    Tensor,
    Term,
    eval_normal_form,
    evaluate,
    infer_type,
    normal_form,
    observe_as_comparator,
)
from .edt import (
    ActionValue,
    CORPUS,
    DecisionProblem,
    Prescription,
    action_state,
    conditioned_model,
    death_in_damascus,
    death_in_damascus_coin,
    expected_utility,
    model_term,
    monty_hall,
    newcomb,
    smoking_lesion,
    solve,
    transparent_newcomb,
)
from .laws import Report, check_all, check_law, random_kernel

__version__ = "0.1.0"
