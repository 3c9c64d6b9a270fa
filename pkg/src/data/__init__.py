"""Synthetic OHP corpora."""
from .generate_dataset import Plant, SynthConfig, SyntheticOhpGenerator, generate, zipf_weights

__all__ = ['Plant', 'SynthConfig', 'SyntheticOhpGenerator', 'generate', 'zipf_weights']
