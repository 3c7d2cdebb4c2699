"""Literature exploration engine: field-of-study hierarchy graph,
hybrid sparse+dense retrieval with weighted rank fusion, rule-based
classification, grounded conversational search, and evaluation metrics."""

__version__ = "0.1.0"
