"""windowalg: exact sigma-linear window algebra over truncated power-series frames."""

from .series import (
    Frame,
    FrameMismatchError,
    PrecisionError,
    SeriesElem,
    validate_frame,
)
from .witt import (
    WittPolyTable,
    WittVec,
    delta,
    from_int,
    ghost,
    kappa,
    tau,
    wadd,
    wfrob,
    witt_polys,
    wmul,
    wver,
)
from .window import (
    DecompositionError,
    SpecialFiber,
    Triple,
    Window,
    WindowMorphism,
    check_morphism,
    check_rigidity,
    lie,
    lift_window,
    make_window,
    normal_decompose,
    special_fiber,
    triple_of,
    vanishing_hom_dim,
    window_from_phi,
    window_of,
)
from .display import DDisplay, display_lie, to_display, validate_display
from .tframe import (
    HypothesisError,
    TElem,
    TWindow,
    base_change_T,
    nu,
    residual,
    solve_iso,
    t_add,
    t_mul,
    t_sigma,
)
from .isogeny import (
    IsogenyError,
    IsogenyModule,
    compose,
    group_order,
    make_module,
    order_string,
    p_length,
    validate_breuil_module,
)

__version__ = "0.1.0"

__all__ = [
    "Frame",
    "SeriesElem",
    "validate_frame",
    "FrameMismatchError",
    "PrecisionError",
    "WittVec",
    "WittPolyTable",
    "witt_polys",
    "wadd",
    "wmul",
    "wfrob",
    "wver",
    "ghost",
    "delta",
    "kappa",
    "tau",
    "from_int",
    "Window",
    "WindowMorphism",
    "Triple",
    "SpecialFiber",
    "DecompositionError",
    "make_window",
    "normal_decompose",
    "window_from_phi",
    "triple_of",
    "window_of",
    "lift_window",
    "check_morphism",
    "check_rigidity",
    "vanishing_hom_dim",
    "special_fiber",
    "lie",
    "DDisplay",
    "to_display",
    "validate_display",
    "display_lie",
    "TElem",
    "TWindow",
    "HypothesisError",
    "t_add",
    "t_mul",
    "t_sigma",
    "base_change_T",
    "solve_iso",
    "residual",
    "nu",
    "IsogenyModule",
    "IsogenyError",
    "make_module",
    "compose",
    "p_length",
    "group_order",
    "order_string",
    "validate_breuil_module",
]
