"""HTTP inference service backing the summarizer's embedding, next-sentence
probability, and category classification contracts."""

__version__ = "0.1.0"
