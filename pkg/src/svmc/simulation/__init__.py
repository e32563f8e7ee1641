"""
경로 시뮬레이션과 몬테카를로 검증 오라클
"""
from svmc.simulation.oracle import (
    McEstimate,
    VerifyResult,
    VerifySettings,
    default_grid,
    emh_check,
    mc_leadlag,
    mc_moments,
    verify_grid,
    verify_point,
)
from svmc.simulation.simulate import (
    InitMode,
    SimConfig,
    draw_correlated_pair,
    simulate_path,
    simulate_paths,
    substream,
)

__all__ = [
    "McEstimate",
    "VerifyResult",
    "VerifySettings",
    "default_grid",
    "emh_check",
    "mc_leadlag",
    "mc_moments",
    "verify_grid",
    "verify_point",
    "InitMode",
    "SimConfig",
    "draw_correlated_pair",
    "simulate_path",
    "simulate_paths",
    "substream",
]
