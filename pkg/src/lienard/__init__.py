"""Analysis toolkit for planar Liénard systems x'' + f(x) x' + g(x) = 0.

Works in the phase plane x' = y - F(x), y' = -g(x) with F the primitive of f.
Provides function trees over piecewise polynomials, certified root isolation,
an adaptive Runge-Kutta integrator with event detection, sufficient-condition
checks for existence and uniqueness of limit cycles, numerical cycle detection
through the return map on the positive x-axis, uniqueness-restoring
deformations, and first-order averaging for small friction.

Submodules are imported lazily so that light uses stay light.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "_kernel": (
        "backend_name",
        "use_backend",
    ),
    "avg": (
        "averaged_amplitude",
        "duff_levinson_f",
        "duff_levinson_system",
        "predict_cycles",
        "wallis_moment",
    ),
    "cycles": (
        "CycleRecord",
        "ReturnMapSample",
        "Stability",
        "classify_stability",
        "cycle_integrals",
        "default_search_range",
        "find_cycles",
        "return_map",
        "verify_crossing_direction",
    ),
    "deform": (
        "DeformOutcome",
        "balance_g",
        "center_perturbation_check",
        "deform_F",
        "deform_g",
        "friction_shift",
        "poly_deform",
        "poly_thresholds",
        "tangent_slope_bound",
    ),
    "errors": (
        "DeformRetriesExhaustedError",
        "DegenerateAmplitudeError",
        "DivergenceError",
        "EndpointRootError",
        "LienardError",
        "PreconditionError",
        "StepSizeUnderflowError",
        "UnsupportedVariantError",
        "ZeroPolynomialError",
    ),
    "funcs": (
        "LienardSystem",
        "NegHalfArgScale",
        "NegHalfFactor",
        "Poly",
        "Polynomial",
        "ScalarFn",
        "SubtractConst",
        "SubtractLinear",
        "fn_from_dict",
        "fn_to_dict",
        "poly_fn",
        "van_der_pol",
    ),
    "hypo": (
        "CheckResult",
        "Direction",
        "HypothesisReport",
        "Tristate",
        "Verdict",
        "analyze",
    ),
    "ode": (
        "PositiveXAxis",
        "State",
        "Trajectory",
        "VerticalLine",
        "integrate",
        "next_section_crossing",
        "vector_field",
    ),
    "roots": (
        "RootInterval",
        "SturmSequence",
        "count_roots",
        "isolate_roots",
        "refine_root",
        "sturm_sequence",
    ),
}

_NAME_TO_MODULE = {name: mod for mod, names in _EXPORTS.items() for name in names}

__all__ = sorted(_NAME_TO_MODULE) + ["__version__"]


def __getattr__(name: str):
    mod = _NAME_TO_MODULE.get(name)
    if mod is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(import_module(f".{mod}", __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return __all__
