"""
Bayesian Cramer-Rao bound, NMSE and MMSE-receiver BER.
"""

from thz_bgsr.metrics.bcrb import BCRBResult, bayesian_fim, bcrb, dictionary_gram, plug_in_gamma
from thz_bgsr.metrics.ber import (
    count_bit_errors,
    effective_channel,
    gray_labels,
    link_ber,
    mmse_equalize_detect,
    psk_constellation,
)
from thz_bgsr.metrics.nmse import nmse, nmse_db, to_db

__all__ = [
    "BCRBResult",
    "bayesian_fim",
    "bcrb",
    "dictionary_gram",
    "plug_in_gamma",
    "count_bit_errors",
    "effective_channel",
    "gray_labels",
    "link_ber",
    "mmse_equalize_detect",
    "psk_constellation",
    "nmse",
    "nmse_db",
    "to_db",
]
