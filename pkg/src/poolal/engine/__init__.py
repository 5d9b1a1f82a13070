"""Active learning engine: pools, classifier, strategies, annotator, oracle, loop."""
