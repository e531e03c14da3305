"""Motion planning and continuum percolation at the critical connection radius.

Subpackages and modules:

* :mod:`percoplan.geometry` - Euclidean primitives and path cost functionals
* :mod:`percoplan.sampling` - Poisson point processes with splittable seeding
* :mod:`percoplan.rgg` - radius graphs, components, shortest paths, stretch
* :mod:`percoplan.scenario` - free-space models and built-in benchmarks
* :mod:`percoplan.planners` - PRM, FMT*, BTT, RRG, RRT, path simplification
* :mod:`percoplan.lattice` - grid site percolation and the sparsified roadmap
* :mod:`percoplan.campaign` - experiment sweeps, tables, constants registry
"""

from .constants import gamma_star, gamma_star_asymptotic, connection_gamma, p_star
from .geometry import Box, Path, Segment, euclidean_distance, path_length, path_bottleneck
from .rgg import (build_rgg, connected_components, connected_components_points,
                  critical_radius, connection_critical_radius, shortest_path,
                  estimate_stretch, subcritical_component_scaling)
from .sampling import (IncrementalStream, incremental_ppp_next, make_rng,
                       poisson_draw, sample_binomial, sample_ppp, unit_box)
from .scenario import (CostMap, Scenario, clearance, is_free, load_scenario,
                       make_corridor, make_empty_hypercube, make_grid_obstacles,
                       segment_free)

__version__ = "0.1.0"
