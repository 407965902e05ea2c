"""Stencil-aware process-to-node mapping for Cartesian process grids."""

__version__ = "0.1.0"

from .evalcost import CostReport, Reduction, evaluate, induced_edges, owner_of, reduction
from .grid import Grid, coord_to_rank, dims_create, prime_factors, rank_to_coord
from .mappers import ALGORITHMS, NodeConfig, RankMapping, compute, compute_rank, run_all
from .oracle import brute_force_optimal, three_way_to_grid
from .stencil import Stencil, builtin, comm_weights, cosine_preference, extensions, parse_flat
