"""
Pilot front end: hybrid RF codebooks, zero-padded pilots, the Bussgang-linearized ADC
and the stacked measurement model.
"""

from thz_bgsr.frontend.codebooks import RFCodebook, draw_codebooks, draw_quantized_phasebook
from thz_bgsr.frontend.covariance import (
    draw_noise,
    effective_noise_covariance,
    quantizer_noise_covariance,
    sample_covariance,
    signal_covariance_Q,
    stack_block_covariance,
    transmit_covariance,
)
from thz_bgsr.frontend.measurements import (
    MeasurementSet,
    measurement_operator,
    pilot_output_time_domain,
    stack_transmit,
    synthesize_measurements,
)
from thz_bgsr.frontend.pilots import PilotFrame, draw_pilot_frame
from thz_bgsr.frontend.quantization import (
    BUSSGANG_UPSILON,
    GAUSSIAN_UNIFORM_STEP,
    QuantizationModel,
    bussgang_epsilon,
    distortion_ratio,
    uniform_quantizer,
)

__all__ = [
    "RFCodebook",
    "draw_codebooks",
    "draw_quantized_phasebook",
    "PilotFrame",
    "draw_pilot_frame",
    "BUSSGANG_UPSILON",
    "GAUSSIAN_UNIFORM_STEP",
    "QuantizationModel",
    "bussgang_epsilon",
    "distortion_ratio",
    "uniform_quantizer",
    "draw_noise",
    "effective_noise_covariance",
    "quantizer_noise_covariance",
    "sample_covariance",
    "signal_covariance_Q",
    "stack_block_covariance",
    "transmit_covariance",
    "MeasurementSet",
    "measurement_operator",
    "pilot_output_time_domain",
    "stack_transmit",
    "synthesize_measurements",
]
