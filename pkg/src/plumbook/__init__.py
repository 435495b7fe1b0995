"""plumbook: compile decorated plumbing graphs into open book / Lefschetz
fibration data, with exact hypothesis checking and numerically certified
symplectic local models."""

__version__ = "0.1.0"
