"""Misiurewicz similarity experiments for the cubic family z^3 - 3a^2 z + (2a^3 + v)."""

from ._core import (
    CsimError,
    CubicMap,
    MisiurewiczCertificate,
    PoincareEvaluator,
    bottcher_coordinate,
    eta,
    find_misiurewicz,
    green_potential,
    hausdorff_distance,
    in_filled_julia,
    iterate_n,
    landing_check,
    rasterize,
    rho_k,
    rho_k_chain_rule,
    trace_dynamic_ray,
    transversality_winding,
    verify_main_theorem,
    winding_number,
)

__all__ = [
    "CsimError",
    "CubicMap",
    "MisiurewiczCertificate",
    "PoincareEvaluator",
    "bottcher_coordinate",
    "eta",
    "find_misiurewicz",
    "green_potential",
    "hausdorff_distance",
    "in_filled_julia",
    "iterate_n",
    "landing_check",
    "rasterize",
    "rho_k",
    "rho_k_chain_rule",
    "trace_dynamic_ray",
    "transversality_winding",
    "verify_main_theorem",
    "winding_number",
]
