from .limits import (
    Decomposition, Kind, LimitFn, LimitTrace, ScaledFn, StabilizationError,
    StabilizationPolicy, combine_odd, decompose_full, limit_additive,
    limit_additive_fn, limit_cubic, limit_cubic_fn, limit_quadratic,
    limit_quadratic_fn, stabilize,
)
from .models import (
    EvenPart, FnModel, GMap, HMap, OddPart, PadicFunction, Perturbation,
    diff_operator, eval_model, even_odd_split, g_map, h_map,
)
from .verify import (
    BoundCheck, CheckId, bound_value, diff_exact, increment_value,
    verify_additivity, verify_bound, verify_defect, verify_functional_eq,
    verify_homogeneity, verify_increment, verify_oracle,
)
