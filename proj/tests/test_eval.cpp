#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "c2t/eval.hpp"

using namespace c2t;

TEST_CASE("hits_at_k is 1 exactly when the target appears within the cutoff") {
  std::vector<std::string> ranked = {"a", "b", "c", "d", "e", "f"};
  CHECK(hits_at_k(ranked, "a", 5) == 1);
  CHECK(hits_at_k(ranked, "e", 5) == 1);  // rank 5 is inside k=5
  CHECK(hits_at_k(ranked, "f", 5) == 0);  // rank 6 is not
  CHECK(hits_at_k(ranked, "missing", 5) == 0);
  CHECK(hits_at_k({}, "a", 5) == 0);
  CHECK_THROWS_AS(hits_at_k(ranked, "a", 0), Error);
}

TEST_CASE("mrr_at_k is the reciprocal rank, zero beyond the cutoff") {
  std::vector<std::string> ranked = {"a", "b", "c"};
  CHECK(mrr_at_k(ranked, "a", 20) == doctest::Approx(1.0));
  CHECK(mrr_at_k(ranked, "b", 20) == doctest::Approx(0.5));
  CHECK(mrr_at_k(ranked, "c", 2) == doctest::Approx(0.0));
  std::vector<std::string> deep;
  for (int i = 0; i < 25; ++i) deep.push_back("x" + std::to_string(i));
  CHECK(mrr_at_k(deep, "x20", 20) == doctest::Approx(0.0));  // rank 21
  CHECK(mrr_at_k(deep, "x19", 20) == doctest::Approx(1.0 / 20.0));
  CHECK_THROWS_AS(mrr_at_k(ranked, "a", -1), Error);
}

TEST_CASE("averaging three hand-scored queries gives the expected percentages") {
  std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"t", "x"}, "t"},  // rank 1
      {{"x", "t"}, "t"},  // rank 2
      {{"x", "y"}, "t"},  // absent
  };
  double hits5 = 0.0, mrr20 = 0.0;
  for (const auto& [ranked, target] : cases) {
    hits5 += hits_at_k(ranked, target, 5);
    mrr20 += mrr_at_k(ranked, target, 20);
  }
  CHECK(100.0 * hits5 / 3.0 == doctest::Approx(200.0 / 3.0));
  CHECK(100.0 * mrr20 / 3.0 == doctest::Approx(50.0));
}

TEST_CASE("synthetic corpus generation is deterministic per seed") {
  SynthParams sp;
  sp.seed = 99;
  sp.n_docs = 60;
  auto [c1, q1] = synth_corpus(sp);
  auto [c2, q2] = synth_corpus(sp);
  CHECK(corpus_to_jsonl(c1) == corpus_to_jsonl(c2));
  CHECK(query_set_to_jsonl(q1) == query_set_to_jsonl(q2));
  sp.seed = 100;
  auto [c3, q3] = synth_corpus(sp);
  CHECK(corpus_to_jsonl(c1) != corpus_to_jsonl(c3));
}

TEST_CASE("synthetic corpus has the requested shape and rejects bad parameters") {
  SynthParams sp;
  sp.seed = 4;
  sp.n_docs = 50;
  sp.queries_per_doc = 3;
  auto [corpus, queries] = synth_corpus(sp);
  CHECK(corpus.size() == 50);
  CHECK(queries.entries.size() == 150);
  for (const auto& [query, target] : queries.entries) CHECK(corpus.contains(target));

  SynthParams bad;
  bad.n_topics = 1;
  CHECK_THROWS_AS(synth_corpus(bad), Error);
  bad = SynthParams{};
  bad.vocab_size = 10;
  CHECK_THROWS_AS(synth_corpus(bad), Error);
  bad = SynthParams{};
  bad.n_docs = 5;  // fewer docs than topics
  CHECK_THROWS_AS(synth_corpus(bad), Error);
}

TEST_CASE("documents in the same latent subtopic share more keywords than strangers") {
  SynthParams sp;
  sp.seed = 11;
  sp.n_docs = 200;
  auto [corpus, queries] = synth_corpus(sp);
  auto table = extract_table(corpus, default_category_extractor());

  // the first three text tokens identify the latent subtopic
  auto subtopic_of = [](const Document& d) {
    auto words = word_tokens(d.text);
    return words[0] + " " + words[1] + " " + words[2];
  };
  std::map<std::string, std::set<std::string>> kw_sets;
  std::map<std::string, std::string> subtopics;
  for (const auto& doc : corpus.documents()) {
    subtopics[doc.doc_id] = subtopic_of(doc);
    for (const auto& [kw, count] : table.per_doc.at(doc.doc_id)) kw_sets[doc.doc_id].insert(kw);
  }
  auto jaccard = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t inter = 0;
    for (const auto& w : a) inter += b.count(w);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
  };
  double same_sum = 0.0, cross_sum = 0.0;
  int same_n = 0, cross_n = 0;
  std::vector<std::string> doc_ids;
  for (const auto& doc : corpus.documents()) doc_ids.push_back(doc.doc_id);
  Rng rng(11);
  for (int trial = 0; trial < 4000; ++trial) {
    const auto& x = doc_ids[rng.next_index(doc_ids.size())];
    const auto& y = doc_ids[rng.next_index(doc_ids.size())];
    if (x == y) continue;
    double j = jaccard(kw_sets.at(x), kw_sets.at(y));
    if (subtopics.at(x) == subtopics.at(y)) {
      same_sum += j;
      ++same_n;
    } else {
      cross_sum += j;
      ++cross_n;
    }
  }
  REQUIRE(same_n > 0);
  REQUIRE(cross_n > 0);
  CHECK(same_sum / same_n > cross_sum / cross_n);
}

TEST_CASE("every query shares vocabulary with its target document") {
  SynthParams sp;
  sp.seed = 15;
  sp.n_docs = 150;
  auto [corpus, queries] = synth_corpus(sp);
  int at_least_two = 0;
  for (const auto& [query, target] : queries.entries) {
    const auto& doc = corpus.at(target);
    std::set<std::string> fields;
    for (const auto& w : word_tokens(doc.title + " " + doc.text)) fields.insert(w);
    for (const auto& [field, values] : doc.metadata)
      for (const auto& v : values)
        for (const auto& w : word_tokens(v)) fields.insert(w);
    int overlap = 0;
    for (const auto& w : word_tokens(query)) overlap += fields.count(w) ? 1 : 0;
    CHECK(overlap >= 1);
    if (overlap >= 2) ++at_least_two;
  }
  // most queries carry at least two grounded terms (attribute, spec, or both)
  CHECK(at_least_two > static_cast<int>(0.8 * queries.entries.size()));
}

TEST_CASE("run_experiment produces deterministic, internally consistent reports") {
  SynthParams sp;
  sp.seed = 33;
  sp.n_docs = 60;
  sp.n_topics = 3;
  sp.queries_per_doc = 2;
  auto [corpus, queries] = synth_corpus(sp);
  ExperimentParams params;
  params.cluster.seed = 33;
  params.extractor = default_category_extractor();
  params.cluster.c = 10;
  params.embed_dim = 64;
  params.beam_width = 10;

  auto r1 = run_experiment(corpus, queries, {"atomic", "c2t"}, params, EvalMode::Supervised);
  auto r2 = run_experiment(corpus, queries, {"atomic", "c2t"}, params, EvalMode::Supervised);
  CHECK(r1.to_json() == r2.to_json());
  CHECK(r1.query_count == static_cast<std::size_t>(0.2 * 120));
  REQUIRE(r1.per_scheme.count("atomic") == 1);
  REQUIRE(r1.per_scheme.count("c2t") == 1);
  for (const auto& [name, m] : r1.per_scheme) {
    CHECK(m.hits5 >= 0.0);
    CHECK(m.hits20 <= 100.0);
    CHECK(m.hits5 <= m.hits20);
    CHECK(m.mrr20 <= m.hits20);
  }
  auto table = r1.to_table();
  CHECK(table.find("atomic") != std::string::npos);
  CHECK(table.find("Hits@5") != std::string::npos);

  CHECK_THROWS_AS(run_experiment(corpus, queries, {"nope"}, params, EvalMode::Supervised), Error);
  QuerySet orphan;
  orphan.entries = {{"q", "not-a-doc"}};
  CHECK_THROWS_AS(run_experiment(corpus, orphan, {"atomic"}, params, EvalMode::Supervised), Error);
}

TEST_CASE("zero-shot mode evaluates the same held-out queries as supervised mode") {
  SynthParams sp;
  sp.seed = 34;
  sp.n_docs = 50;
  sp.n_topics = 3;
  sp.queries_per_doc = 2;
  auto [corpus, queries] = synth_corpus(sp);
  ExperimentParams params;
  params.cluster.seed = 34;
  params.extractor = default_category_extractor();
  params.cluster.c = 10;
  params.embed_dim = 64;
  params.beam_width = 10;
  auto sup = run_experiment(corpus, queries, {"c2t"}, params, EvalMode::Supervised);
  auto zs = run_experiment(corpus, queries, {"c2t"}, params, EvalMode::ZeroShot);
  CHECK(sup.query_count == zs.query_count);
  CHECK(sup.config_echo.find("supervised") != std::string::npos);
  CHECK(zs.config_echo.find("zero_shot") != std::string::npos);
}

TEST_CASE("query sets round-trip through JSONL") {
  QuerySet qs;
  qs.entries = {{"blue phone case", "d1"}, {"wolf facts", "d2"}};
  auto again = query_set_from_jsonl(query_set_to_jsonl(qs));
  CHECK(again.entries == qs.entries);
  CHECK(query_set_to_jsonl(again) == query_set_to_jsonl(qs));
}
