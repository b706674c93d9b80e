"""Exact toric computations of log canonical thresholds, Seshadri constants and
Donaldson-Futaki invariants of flag-ideal test configurations."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .toric import ToricFanoVariety, load_corpus, variety  # noqa: E402
from .ideals import FlagIdeal, InvariantIdeal, flag_ideal, trivial_flag  # noqa: E402
from .lct import global_lct, lct_ideal, lct_lower_oracle, lct_pair, threshold_gate  # noqa: E402
from .blowup import blowup_model, seshadri_flag, seshadri_ideal  # noqa: E402
from .dfweight import donaldson_futaki_weight  # noqa: E402
from .dfinter import donaldson_futaki_intersection  # noqa: E402

__all__ = [
    "BACKEND", "ToricFanoVariety", "load_corpus", "variety", "FlagIdeal", "InvariantIdeal",
    "flag_ideal", "trivial_flag", "global_lct", "lct_ideal", "lct_lower_oracle", "lct_pair",
    "threshold_gate", "blowup_model", "seshadri_flag", "seshadri_ideal",
    "donaldson_futaki_weight", "donaldson_futaki_intersection",
]
