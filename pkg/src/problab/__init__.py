"""problab: a computational lab for three classical probability problems.

Subpackages:

- :mod:`problab.exact` — exact rational analysis of the last-one-standing
  shooting game (first-round survivor pmf, moments, the one-winner
  probability series, certified floating-point mode).
- :mod:`problab.simulate` — vectorised Monte Carlo for the same game with
  coupling and concentration diagnostics.
- :mod:`problab.waves` — oscillation detection and decay fitting for the
  one-winner probability series on the log-n axis.
- :mod:`problab.energy` — distance covariance/correlation and the
  dependent-but-uncorrelated demo density.
- :mod:`problab.analytic` — functional-equation and characteristic-function
  verification (exponential/normal characterisation, counterexamples).
- :mod:`problab.seriesio`, :mod:`problab.svgplot`, :mod:`problab.cli` —
  deterministic I/O, plotting and the command-line interface.
"""

from .exact import (
    DEFAULT_EXACT_CEILING,
    LIMIT_MEAN,
    LIMIT_VARIANCE,
    ExactModeLimitError,
    PSeries,
    SeriesEntry,
    SurvivorPMF,
    TruncationCertificate,
    exact_moments,
    expected_survivors,
    mcdiarmid_bound,
    p_recurrence,
    survivor_pmf,
)
from .simulate import (
    McEstimate,
    RoundSample,
    clt_check,
    coupling_check,
    estimate_p,
    eta_mean,
    make_stream,
    mcdiarmid_check,
    simulate_game,
    simulate_round,
)
from .waves import (
    Extremum,
    InsufficientOscillationError,
    SubseqProbe,
    TooFewPointsError,
    WaveDecayModelError,
    WaveModel,
    build_series,
    detect_waves,
    fit_wave_decay,
    subsequence_probe,
)
from .energy import (
    INTRO_C,
    DegenerateMarginalError,
    PairedSample,
    bootstrap_cov_stderr,
    cov_sym_abs_diff,
    dcor,
    dcov2_vstat,
    intro_cov_quadrature,
    intro_density,
    perm_test_dcor,
    sample_intro_density,
)
from .analytic import (
    DensityModel,
    QuadratureBudgetError,
    VerificationError,
    alpha_probe,
    cauchy_cf_identity,
    cf_modulus_identity,
    density_model,
    feq_residual,
    feq_residual_grid,
    ghat,
    inverse_fourier_nonneg,
    joint_cf,
    polya_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
