"""frobdist: point counts, zeta numerators and Frobenius-angle statistics
for genus 1-2 curves over small finite fields."""

__version__ = "0.1.0"

from .classify import (
    Classification,
    CensusReport,
    RelationReport,
    census,
    classify,
    find_integer_relation,
    irreducible_through_extensions,
    is_irreducible_over_integers,
)
from .curves import CurveSpec, count_points, elliptic_curve, hyperelliptic_curve, validate
from .equidist import (
    DensityValue,
    DiscrepancyReport,
    DistributionReport,
    Interval,
    RatioSequence,
    count_in_interval,
    default_grid,
    distribution_report,
    kronecker_points,
    limit_density,
    monte_carlo_density,
    ratio_sequence,
    star_discrepancy,
)
from .ffield import (
    FieldElement,
    FieldSpec,
    absolute_trace,
    make_field,
    quadratic_character,
)
from .kloosterman import (
    KloostermanData,
    kappa_distribution_report,
    kappa_sequence,
    kloosterman_angle,
    kloosterman_sum,
)
from .zeta import (
    FrobeniusAngles,
    PowerSums,
    ZetaNumerator,
    extend_power_sums,
    extension_numerator,
    frobenius_angles,
    jacobian_order,
    numerator_from_curve,
    numerator_from_power_sums,
    power_sums_from_counts,
)

__all__ = [
    "__version__",
    "Classification",
    "CensusReport",
    "RelationReport",
    "census",
    "classify",
    "find_integer_relation",
    "irreducible_through_extensions",
    "is_irreducible_over_integers",
    "CurveSpec",
    "count_points",
    "elliptic_curve",
    "hyperelliptic_curve",
    "validate",
    "DensityValue",
    "DiscrepancyReport",
    "DistributionReport",
    "Interval",
    "RatioSequence",
    "count_in_interval",
    "default_grid",
    "distribution_report",
    "kronecker_points",
    "limit_density",
    "monte_carlo_density",
    "ratio_sequence",
    "star_discrepancy",
    "FieldElement",
    "FieldSpec",
    "absolute_trace",
    "make_field",
    "quadratic_character",
    "KloostermanData",
    "kappa_distribution_report",
    "kappa_sequence",
    "kloosterman_angle",
    "kloosterman_sum",
    "FrobeniusAngles",
    "PowerSums",
    "ZetaNumerator",
    "extend_power_sums",
    "extension_numerator",
    "frobenius_angles",
    "jacobian_order",
    "numerator_from_curve",
    "numerator_from_power_sums",
    "power_sums_from_counts",
]
