"""Expander certification, structural property verifiers, low-degree
clean-up and extendability."""

from .certify import CERTIFIED, PLAUSIBLE, REFUTED, ExpanderVerdict, is_c_expander
from .cleanup import ContractionPlan, ContractViolation, PreconditionError, cleanup_contract, decontract_cycle
from .extendable import ExtendabilityQuery, extend_path_search, is_extendable
from .params import PRESETS, ExpanderParams, preset
from .properties import (
    PropertyCheck,
    PropertyReport,
    d_hat,
    small_set,
    verify_dense_properties,
    verify_h_properties,
    verify_sparse_properties,
)
