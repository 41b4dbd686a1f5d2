"""Skin-region detection by region growing plus a 3-3-1 colour classifier,
and a simulated pan/tilt loop that centres the detected skin."""

from ._skintrack import (
    DEFAULT_ETA,
    DEFAULT_RHO,
    DEFAULT_SEED,
    ConfigError,
    Error,
    Model,
    ParseError,
    SchemaError,
    decode_ppm,
    detect,
    displacement,
    encode_ppm,
    false_colour,
    read_ppm,
    reference_frame,
    reference_training_set,
    region_stats,
    segment,
    skin_samples,
    step,
    track,
    track_scenario,
    train,
    write_ppm,
)

__all__ = [
    "DEFAULT_ETA",
    "DEFAULT_RHO",
    "DEFAULT_SEED",
    "ConfigError",
    "Error",
    "Model",
    "ParseError",
    "SchemaError",
    "decode_ppm",
    "detect",
    "displacement",
    "encode_ppm",
    "false_colour",
    "read_ppm",
    "reference_frame",
    "reference_training_set",
    "region_stats",
    "segment",
    "skin_samples",
    "step",
    "track",
    "track_scenario",
    "train",
    "write_ppm",
]
