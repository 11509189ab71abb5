"""Desk-scale workbench for approximation-model distance arguments.

The package measures how far a Boolean function sits from the members
of an approximation model, certifies the distance with set-cover
certificates, checks the branching-distribution inequalities behind
the measure, runs semi-filter fusion covers with circuit extraction,
and localizes the certificate of an oracle circuit gate by gate.
Everything is exact over small instances: rationals, bitmask truth
tables, and canonical tie-breaking throughout.
"""

from .anf import anf_of, degree, monomials, moebius, table_from_anf
from .barrier import (BarrierCoverReport, DGCircuit, LemmaReport, LemmaRow,
                      Position, PositionWitness, barrier_cover,
                      barrier_cover_0proj, barrier_cover_depth, build_C_h,
                      build_D_g, canonical_positions, positions_cover_check,
                      verify_distr_lemma)
from .budgets import DEFAULT_BUDGET, charge, effective_budget
from .circuits import (Circuit, CircuitBuilder, Connective, Gate, connective,
                       const_gate, evaluate, gate_tables, input_gate, op_gate,
                       oracle_gate, standard_basis, subcircuit, truth_table)
from .cover import CoverSolution, exact_min_cover, greedy_cover, min_hitting_set
from .distance import (CertTuple, CoverCertificate, DepthCoverCertificate,
                       InputDistribution, RhoProbResult, RhoResult,
                       VerifyResult, asym_from_sym, cert_from_circuit,
                       rho_d_exact, rho_exact, rho_probabilistic, verify_cover)
from .enumeration import (enumerate_circuits, estimate_enumeration,
                          min_circuit_size, reachable_tables)
from .errors import (ApproxLabError, DegenerateModelError,
                     FusionDegenerateError, IncompleteModelError,
                     MalformedCertificateError, MalformedCircuitError,
                     NoAnticheckersError, NotACoverError, ParseError,
                     PreconditionError, ResourceBudgetError)
from .formats import (emit_cert, emit_circuit, emit_model, emit_semifilter_set,
                      emit_subset_cover, emit_tt, emit_universe, parse_cert,
                      parse_circuit, parse_model, parse_semifilter_set,
                      parse_subset_cover, parse_tt)
from .fusion import (ClosureTrace, DepthExtractionReport, DSemiFilter,
                     ExtractionReport, FusionRhoResult, PairCover, SemiFilter,
                     SemiFilterSet, TupleCover, anticheckers, bracket,
                     enumerate_dsemifilters, enumerate_semifilters,
                     extract_circuit, extract_depth_circuit, fz_closure,
                     closure_filters, k_preserves, monotone_families,
                     pair_covers, preserves, rho_F0, rho_F0_d_t, rho_S_F0,
                     tuple_covers)
from .localize import (LocalizationReport, LocalizationStep, OracleNote,
                       eval_oracle_circuit, localize_0proj, localize_depth,
                       localize_general, localize_projective, oracle_stats)
from .models import (ApproxModel, ErrorSetTuple, ProjectivityReport,
                     check_0_projective, check_projective, gen_exact_model,
                     gen_fusion_model, gen_rs_model)
from .presets import PRESETS, ExperimentPreset, run_preset
from .report import Report, render
from .truthtable import TruthTable, all_tables, popcount

__version__ = "0.1.0"
