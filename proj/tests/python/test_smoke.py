"""Smoke tests for the c2tid Python bindings."""

import pytest

import c2tid


@pytest.fixture(scope="module")
def small_corpus():
    corpus, queries = c2tid.synth_corpus(seed=7, n_docs=80, n_topics=4, queries_per_doc=3)
    return corpus, queries


def test_synth_corpus_is_deterministic(small_corpus):
    corpus, queries = small_corpus
    again, again_queries = c2tid.synth_corpus(seed=7, n_docs=80, n_topics=4, queries_per_doc=3)
    assert len(corpus) == 80
    assert len(queries) == 240
    assert corpus.to_jsonl() == again.to_jsonl()
    assert queries == again_queries


def test_documents_round_trip_through_jsonl():
    doc = c2tid.Document()
    doc.doc_id = "d1"
    doc.title = "Solar Panels"
    doc.text = "a page about solar panels"
    doc.metadata = {"categories": ["energy", "solar"]}
    corpus = c2tid.Corpus([doc])
    parsed = c2tid.parse_corpus_jsonl(corpus.to_jsonl())
    assert parsed.to_jsonl() == corpus.to_jsonl()


def test_build_docids_produces_unique_ids(small_corpus):
    corpus, _ = small_corpus
    docids, intra_sep, level_sep = c2tid.build_docids(
        corpus, scheme="c2t", c=12, seed=7, embed_dim=64
    )
    assert len(docids) == len(corpus)
    assert len(set(docids.values())) == len(corpus)
    assert (intra_sep, level_sep) == ("-", "-")
    atomic, _, _ = c2tid.build_docids(corpus, scheme="atomic", c=12, seed=7, embed_dim=64)
    assert sorted(atomic.values(), key=int) == [str(i) for i in range(len(corpus))]


def test_index_trains_and_decodes_valid_docids(small_corpus):
    corpus, queries = small_corpus
    docids, intra_sep, level_sep = c2tid.build_docids(
        corpus, scheme="c2t", c=12, seed=7, embed_dim=64
    )
    index = c2tid.Index(docids, intra_sep=intra_sep, level_sep=level_sep)
    assert index.terminal_count == len(corpus)
    index.train(queries)
    ranked = index.decode(queries[0][0], beam_width=10)
    assert 1 <= len(ranked) <= 10
    assert all(doc_id in docids for doc_id, _ in ranked)
    assert all(ranked[i][1] >= ranked[i + 1][1] for i in range(len(ranked) - 1))
    # a trained index should place the gold document near the top for its own query
    assert c2tid.hits_at_k([d for d, _ in ranked], queries[0][1], 10) == 1


def test_trie_navigation_follows_the_docid_strings(small_corpus):
    corpus, _ = small_corpus
    docids, intra_sep, level_sep = c2tid.build_docids(
        corpus, scheme="c2t", c=12, seed=7, embed_dim=64
    )
    index = c2tid.Index(docids, intra_sep=intra_sep, level_sep=level_sep)
    some_docid = next(iter(docids.values()))
    tokens = index.tokenize(some_docid)
    assert index.detokenize(tokens) == some_docid
    prefix = []
    for token in tokens:
        assert token in index.allowed_next(prefix)
        prefix.append(token)
    assert index.allowed_next(prefix) == []


def test_metrics_match_hand_computation():
    assert c2tid.hits_at_k(["a", "b", "c"], "b", 5) == 1
    assert c2tid.hits_at_k(["a", "b", "c"], "b", 1) == 0
    assert c2tid.mrr_at_k(["a", "b", "c"], "b", 20) == 0.5
    assert c2tid.mrr_at_k(["a", "b", "c"], "zzz", 20) == 0.0


def test_run_experiment_reports_all_schemes(small_corpus):
    corpus, queries = small_corpus
    report = c2tid.run_experiment(
        corpus, queries, ["atomic", "c2t"], seed=7, c=12, beam_width=10
    )
    assert set(report) == {"atomic", "c2t"}
    for metrics in report.values():
        assert set(metrics) == {"hits@5", "hits@20", "mrr@20"}
        assert 0.0 <= metrics["hits@5"] <= metrics["hits@20"] <= 100.0


def test_errors_surface_as_c2t_error():
    with pytest.raises(c2tid.C2TError):
        c2tid.parse_corpus_jsonl('{"title": "missing ids"}')
    with pytest.raises(c2tid.C2TError):
        c2tid.Index({"d1": "same", "d2": "same"})
