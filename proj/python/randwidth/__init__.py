"""Randomly perturbed random polytopes: mean width estimation, Orlicz norms,
and scaling/concentration probes. Thin wrapper over the C++ core."""

from randwidth._core import (  # noqa: F401
    DirectionSet,
    EquivalenceRecord,
    IsotropicModel,
    LowerBoundReport,
    OrliczFn,
    Perturbation,
    PerturbationLaw,
    PointCloud,
    RngState,
    ScalingReport,
    TailCurve,
    WidthEstimate,
    __version__,
    arbitrary_lower_bound,
    bound_vs_estimate,
    centroid_mean_width,
    centroid_support,
    concentration_probe,
    empirical_orlicz,
    equivalence_check,
    f_estimate,
    fit_rate,
    inclusion_probe,
    lipschitz_probe,
    luxemburg_norm,
    make_rng,
    mean_width_mc,
    orlicz_eval,
    rate_of,
    sample_directions,
    sample_isotropic,
    sample_perturbation,
    support,
    sweep_rate,
    tail_probe,
)
