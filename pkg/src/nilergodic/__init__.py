"""Numerical experiments with nilsequences, uniformity norms and weighted
ergodic averages."""

__version__ = "0.1.0"

from .groups import (
    AbelianGroup,
    CubeGroup,
    DirectSquare,
    FilteredGroup,
    GroupElement,
    GroupError,
    Heisenberg3,
    TRIVIAL,
    cube_filtration,
    parse_group,
)
from .polyseq import PolySeq, binomial, cube_sequence, discrete_derivative
from .nilfunc import (
    NilFunction,
    bessel_check,
    heisenberg_theta,
    heisenberg_trig,
    sobolev_norm,
    trig_polynomial,
    vertical_coefficient,
)
from .uniformity import (
    FiniteSequence,
    UniformityEstimate,
    cyclic,
    ghk_orbit_estimate,
    gowers_norm_brute,
    gowers_norm_cyclic,
    gowers_u2_fft,
    orbit_sample,
)
from .systems import (
    AnzaiSkew,
    Character,
    FolnerSeq,
    HeisenbergNil,
    Rotation,
    birkhoff_average,
    interval_windows,
    orbit,
    temperedness_check,
)
from .wwengine import (
    main_estimate_ratio,
    sobolev_order,
    uniform_sup_linear,
    uniform_sup_nilsequence,
    van_der_corput_check,
    weighted_average,
    weighted_multiple_average,
)
from .counterexample import RandomTrigPoly, build, growth_experiment
