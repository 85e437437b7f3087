"""Exact statistics of energy quanta shared among particles."""

__version__ = "0.1.0"

from .continuum import (  # noqa: E402
    EnergySystem,
    Moments,
    boltzmann_pdf,
    finite_n_energy_pdf,
    geometric_limit_pmf,
    hyperplane_area,
    limit_convergence,
    moments,
    sample_energy_simplex,
    zone_area_density,
)
from .exactnum import binomial, factorial  # noqa: E402
from .occupancy import (  # noqa: E402
    DistTable,
    LevelState,
    StateRecord,
    conditional_occupancy_pmf,
    configurations,
    enumerate_level_states,
    gf_mean_occupancy,
    gf_total_configurations,
    level_pmf,
    mean_occupancy,
    most_probable_states,
    state_probability,
    total_configurations,
)
from .partitions import (  # noqa: E402
    QuadReport,
    partition_count,
    partition_integral,
    partition_integrand,
    restricted_partition_count,
)
from .quanta import (  # noqa: E402
    Composition,
    SampleStats,
    count_states,
    count_states_with_level,
    cross_route_check,
    enumerate_compositions,
    quanta_pmf,
    sample_state,
)
