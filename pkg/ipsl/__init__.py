from .organization import *
from .random_stream import RandomStream, open_streams
from .engine import (TickRecord, SimState, generate_opportunities, perceive, route_proposals, select_projects,
                     selection_probabilities, realize_outcome, backpropagate, step, run, simulate, iterate)
from .emergence import (grow_network, degree_distribution, fit_power_law, assign_tiers, to_influence_graph,
                        TierAssignment)
from .evolution import (Genome, GAConfig, FitnessReport, GenerationRecord, encode, decode, evaluate_fitness,
                        tournament_select, crossover, mutate, evolve)
from .metrics import spearman, gini, summarize, SeriesSummary
from .config import parse_config, ExperimentConfig
from .experiment import execute


__version__ = '0.1.0'
