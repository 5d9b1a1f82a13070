"""Dataset ingestion, synthetic generation and file emission."""
