"""Full-text search over page-granular OCR corpora.

Positional inverted index with phrase search, synonym expansion,
date/journal filtering, snippet highlighting, and a parallel federated
fan-out to external search connectors.
"""

__version__ = "0.1.0"
