from ._core import (
    IlcSosError,
    example_markov,
    jury_margin,
    lifted_toeplitz,
    markov_parameters,
    run_ilc,
    run_mode,
    sampled_gamma_example,
    synth_example,
    synth_nominal,
)

__all__ = [
    "IlcSosError",
    "example_markov",
    "jury_margin",
    "lifted_toeplitz",
    "markov_parameters",
    "run_ilc",
    "run_mode",
    "sampled_gamma_example",
    "synth_example",
    "synth_nominal",
]
