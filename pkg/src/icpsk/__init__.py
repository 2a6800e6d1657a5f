"""Index-coded PSK modulation: linear index codes, side-information-aware
PSK labeling, distance analysis and AWGN simulation."""

__version__ = "0.1.0"
