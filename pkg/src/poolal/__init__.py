"""poolal: Pool-based active learning engine with a budget annotator."""

__version__ = "0.1.0"
