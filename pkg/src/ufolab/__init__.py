"""ufolab: finite-ball graph construction and (m,k,r)-UFO machinery.

A (m,k,r)-UFO in a graph is a triple (U,F,O) of disjoint finite vertex sets
with |U| >= m|F|, a complete matching between U and O by paths of length at
most k, and no F-avoiding U-O path shorter than r. This package builds exact
finite balls of Cayley, Schreier, pentagon-model and explicit graphs,
verifies UFOs on them, constructs the standard families, transfers UFOs
across quasi-isometries with explicit constants, and implements the
generalized mirror-shift pattern machinery.
"""

__version__ = "0.1.0"

from .errors import (BudgetError, InputError, MarginError, RejectionError,
                     UfolabError)
from .groups import (BaumslagSolitar, DirectProduct, ExplicitGroup,
                     FreeAbelian, FreeGroup, GeneratorSet, GroupOracle,
                     britton_reduce, evaluate_word, group_from_json,
                     parse_word, shortlex_enumerate, shortlex_keys)
from .graphs import (NOT_FOUND, BoundedGraph, CayleyOracle, ExplicitOracle,
                     PentagonOracle, SchreierOracle, build_ball,
                     bs_coset_normalizer, distance_avoiding, ends_lower_bound,
                     product_factor_normalizer, schreier_ball, to_dot)
from .ufo import (MatchingResult, Ufo, UfoParams, UfoReport, amenable_ufo,
                  bounded_matching, interval_folner, lift_ufo,
                  multiended_ufo, pentagon_ufo, verify_ufo, zd_ufo)
from .qi import (DerivedConstants, QiConstants, derived_constants,
                 qi_check_on_ball, transfer_ufo)
from .mirror import (ALLOWED, COHERENCE_VIOLATION, MATCHING_VIOLATION,
                     UNIVERSAL_A, Pattern, PMatching, all_translates_coherent,
                     build_matching, enumerate_patterns,
                     greedy_matching_bound, greedy_separating_set,
                     is_coherent, is_forbidden, is_matched, p_equiv,
                     pattern_from_json)
