"""Two-phase traffic models: exact Riemann solvers (with and without a flux
constraint at x = 0), wave-front tracking and analysis campaigns."""

from ._core import (  # noqa: F401
    Model,
    PhaseTrafficError,
    WaveFan,
    analyze,
    evaluate,
    run_cli,
    simulate,
    solve,
    solve_constrained,
)
