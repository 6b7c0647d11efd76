"""Unsupervised extractive summarization for long scientific documents:
signal-guided content selection followed by fluency-driven sentence search."""

__version__ = "0.1.0"
