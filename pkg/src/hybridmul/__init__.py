"""Binary-field (GF(2^m)) multipliers: schoolbook, Karatsuba, overlap-free
Karatsuba and the hybrid schoolbook/Karatsuba scheme, with NIST reduction, a
gate-count model and a netlist builder/simulator."""

from .cost_model import GateCost, cost_cm, cost_hybrid, cost_km, cost_oka, estimate, optimal_threshold
from .errors import GF2Error
from .field_core import (
    CURVES,
    REGISTRY,
    BitPoly,
    FieldParams,
    clmul_oracle,
    field_mul_oracle,
    field_pow,
    field_square,
    mod_reduce_oracle,
    nist_params,
)
from .multipliers import (
    MulStats,
    MulStrategy,
    mul_cm,
    mul_hybrid,
    mul_km,
    mul_oka,
    multiply,
    multiply_many,
    split_sequence,
)
from .netlist import build_cm, build_hybrid, build_km, build_modmul, build_oka, simulate, stats
from .reduction import modmul, modmul_many, reduce, reduce_generic, reduce_tabled, reduce_unified

__version__ = "0.1.0"
