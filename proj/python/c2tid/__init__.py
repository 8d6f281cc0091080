"""Hierarchical codebook docids rendered as text, with trie-constrained decoding."""

try:
    from ._c2t import *  # noqa: F401,F403  (installed wheel layout)
    from ._c2t import __doc__ as _doc
except ImportError:  # in-tree layout: the extension sits on PYTHONPATH directly
    from _c2t import *  # noqa: F401,F403
    from _c2t import __doc__ as _doc

__doc__ = _doc
__all__ = [
    "C2TError",
    "Corpus",
    "ClusterTree",
    "Document",
    "Index",
    "build_docids",
    "hits_at_k",
    "ingest_jsonl",
    "mrr_at_k",
    "parse_corpus_jsonl",
    "run_experiment",
    "synth_corpus",
]
