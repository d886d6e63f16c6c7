"""Sasaki filters on orthomodular lattices and collapse certificates in R^3."""
from .collapse import CollapseCertificate, refute_second_element, verify_certificate
from .filters import (
    PreValuation,
    SasakiFilter,
    UpSet,
    enumerate_prevaluations,
    enumerate_sasaki_filters,
    enumerate_upsets,
    find_valuations,
    is_prevaluation,
    is_sasaki_filter,
    sasaki_closure,
    sasaki_step,
    up,
)
from .hilbert3 import Subspace3, sasaki_sub, span
from .oml import FiniteOml, validate_oml

__version__ = "0.1.0"
