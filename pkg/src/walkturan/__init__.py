"""Walk-counting Turán lab: digraphs with at most t walks of length k per endpoint pair."""

__version__ = "0.1.0"

from .canonical import CanonicalKey, canonical_form
from .certificates import WalkCertificate, certificate_problem
from .constructions import balanced_blowup, build_join, cycle_join_tournament, transitive_tournament
from .digraph import Digraph, degrees, girth, induced_subgraph, is_transitive_tournament, parse_digraph, render_digraph
from .search import ExtremalRecord, SearchConfig, enumerate_free, search_ex
from .thresholds import eval_thresholds
from .walks import extract_walks, is_free, max_pair_walks, walk_count_matrix
