"""Seismic elephant-rumble detection: front-end simulation, spectrogram
enhancement, feature extraction and from-scratch classifiers."""

from ._backend import BACKEND
from .config import PipelineConfig, load_config
from .dsp import Scale, Spectrogram, db3_denoise, stft_spectrogram, to_decibel
from .enhancement import enhance_coherence, enhance_threshold, ssim
from .errors import SeisRumbleError
from .features import FeatureKind, FeatureParams, FeatureVector, Label, extract_features
from .frontend import FrontEndConfig, codes_to_signal, run_frontend
from .signals import TimeSeries, Unit
from .synthgen import RumbleSpec, gen_background, gen_labeled_corpus, gen_rumble

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FeatureKind", "FeatureParams", "FeatureVector", "FrontEndConfig", "Label",
    "PipelineConfig", "RumbleSpec", "Scale", "SeisRumbleError", "Spectrogram", "TimeSeries",
    "Unit", "codes_to_signal", "db3_denoise", "enhance_coherence", "enhance_threshold",
    "extract_features", "gen_background", "gen_labeled_corpus", "gen_rumble", "load_config",
    "run_frontend", "ssim", "stft_spectrogram", "to_decibel",
]
