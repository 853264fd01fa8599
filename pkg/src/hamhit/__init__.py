"""Hitting times for Hamiltonicity in random subgraphs of pseudorandom graphs."""

__version__ = "0.1.0"

from .graph import Graph, GraphInputError, parse_edge_list, read_edge_list, write_edge_list
from .seeding import mix, rng
