#include "c2t/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "c2t/smoothing.hpp"
#include "c2t/trie.hpp"

namespace c2t {

using nlohmann::json;

int hits_at_k(const std::vector<std::string>& ranked, const std::string& target, int k) {
  if (k < 1) throw Error("hits_at_k: k must be >= 1");
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(k); ++i)
    if (ranked[i] == target) return 1;
  return 0;
}

double mrr_at_k(const std::vector<std::string>& ranked, const std::string& target, int k) {
  if (k < 1) throw Error("mrr_at_k: k must be >= 1");
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(k); ++i)
    if (ranked[i] == target) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

namespace {

std::vector<std::string> make_vocab(int size) {
  static const char* syllables[] = {"ka", "lo", "mi", "ren", "tu", "ba", "zor", "fel",
                                    "nid", "sa", "vu", "pex", "gri", "hal", "ost", "dra",
                                    "wem", "cy", "jun", "qua"};
  constexpr int n_syl = 20;
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  int i = 0;
  while (static_cast<int>(vocab.size()) < size) {
    std::string w = std::string(syllables[(i * 7 + 3) % n_syl]) + syllables[(i * 13 + 5) % n_syl];
    if (i % 3 == 0) w += syllables[i % n_syl];
    if (!seen.insert(w).second) {
      w += std::to_string(i);
      seen.insert(w);
    }
    vocab.push_back(w);
    ++i;
  }
  return vocab;
}

}  // namespace

std::pair<Corpus, QuerySet> synth_corpus(const SynthParams& p) {
  if (p.n_topics < 2 || p.n_docs < p.n_topics)
    throw Error("synth_corpus: need n_docs >= n_topics >= 2");
  constexpr int kSubtopics = 2;
  constexpr int kSigWords = 3;    // shared signature words per subtopic
  constexpr int kSpecPool = 16;    // subtopic pool of secondary keywords
  constexpr int kCommonWords = 10;
  constexpr int kAttrWords = 15;  // corpus-wide attribute vocabulary
  int needed =
      kAttrWords + p.n_topics * (kCommonWords + kSubtopics * (kSigWords + kSpecPool)) + 20;
  if (p.vocab_size < needed)
    throw Error("synth_corpus: vocab_size must be >= " + std::to_string(needed) + " for " +
                std::to_string(p.n_topics) + " topics");
  if (p.queries_per_doc < 0) throw Error("synth_corpus: queries_per_doc must be >= 0");

  Rng rng(p.seed * 0x9e3779b97f4a7c15ull + 0xC27ull);
  auto vocab = make_vocab(p.vocab_size);

  struct Subtopic {
    std::vector<std::string> sig;   // in every member's text and metadata
    std::vector<std::string> pool;  // document keywords come from here
    std::vector<std::string> pref;  // attributes this subtopic's documents favour
  };
  struct Topic {
    std::vector<std::string> common;
    std::vector<Subtopic> subs;
  };
  std::size_t cursor = 0;
  auto take = [&vocab, &cursor](int n) {
    std::vector<std::string> out(vocab.begin() + cursor, vocab.begin() + cursor + n);
    cursor += static_cast<std::size_t>(n);
    return out;
  };
  std::vector<std::string> attrs = take(kAttrWords);
  std::vector<Topic> topics(p.n_topics);
  for (auto& topic : topics) {
    topic.common = take(kCommonWords);
    topic.subs.resize(kSubtopics);
    for (auto& sub : topic.subs) {
      sub.sig = take(kSigWords);
      sub.pool = take(kSpecPool);
    }
  }
  for (auto& topic : topics)
    for (auto& sub : topic.subs)
      while (sub.pref.size() < 4) {
        const std::string& w = attrs[rng.next_index(attrs.size())];
        if (std::find(sub.pref.begin(), sub.pref.end(), w) == sub.pref.end())
          sub.pref.push_back(w);
      }
  std::vector<std::string> noise = take(static_cast<int>(vocab.size() - cursor));

  auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
    return pool[rng.next_index(pool.size())];
  };

  std::vector<Document> docs;
  std::vector<std::pair<std::string, std::string>> queries;
  int digits = static_cast<int>(std::to_string(p.n_docs - 1).size());
  for (int i = 0; i < p.n_docs; ++i) {
    int t = static_cast<int>(rng.next_index(static_cast<std::size_t>(p.n_topics)));
    int s = static_cast<int>(rng.next_index(kSubtopics));
    const Topic& topic = topics[t];
    const Subtopic& sub = topic.subs[s];

    // the primary attribute comes from the subtopic's favoured subset, so
    // subtopic neighbours tend to share it; the secondary one is corpus-wide
    std::vector<std::string> own_attrs;
    own_attrs.push_back(pick(sub.pref));
    while (own_attrs.size() < 2) {
      const std::string& w = pick(attrs);
      if (w != own_attrs[0]) own_attrs.push_back(w);
    }
    const std::string& spec = pick(sub.pool);

    Document d;
    std::ostringstream id;
    id << "d" << std::setw(digits) << std::setfill('0') << i;
    d.doc_id = id.str();
    d.title = sub.sig[0] + " " + own_attrs[0] + " " + pick(topic.common);

    // text carries the subtopic signature and topic vocabulary; attributes
    // live in metadata and queries only
    std::ostringstream text;
    text << sub.sig[0] << " " << sub.sig[1] << " " << sub.sig[2] << " ";
    if (rng.next_double() < 0.30) text << own_attrs[0] << " ";
    if (rng.next_double() < 0.15) text << own_attrs[1] << " ";
    if (rng.next_double() < 0.5) text << spec << " ";
    for (int w = 0; w < 22; ++w) {
      double r = rng.next_double();
      if (r < 0.20)
        text << pick(sub.pool);
      else if (r < 0.40)
        text << pick(sub.sig);
      else if (r < 0.90)
        text << pick(topic.common);
      else
        text << pick(noise);
      text << " ";
    }
    d.text = trim(text.str());

    // counts chosen so the document's top keywords are its attributes while
    // node-level aggregation is dominated by the shared signature words
    std::vector<std::string> categories;
    for (int rep = 0; rep < 6; ++rep) categories.push_back(own_attrs[0]);
    for (int rep = 0; rep < 5; ++rep) categories.push_back(spec);
    for (int rep = 0; rep < 4; ++rep) categories.push_back(sub.sig[0]);
    for (int rep = 0; rep < 3; ++rep)
      for (int sg = 0; sg < kSigWords; ++sg) categories.push_back(sub.sig[sg]);
    categories.push_back(pick(topic.common));
    if (rng.next_double() < 0.3) categories.push_back("all pages");
    d.metadata["categories"] = categories;

    for (int q = 0; q < p.queries_per_doc; ++q) {
      std::ostringstream query;
      // the primary attribute is the most salient in how users phrase queries
      query << own_attrs[rng.next_double() < 0.8 ? 0 : 1] << " ";
      if (rng.next_double() < 0.55) query << spec << " ";
      query << sub.sig[rng.next_index(kSigWords)] << " " << pick(topic.common);
      if (rng.next_double() < 0.85) query << " " << pick(noise);
      if (rng.next_double() < 0.35) query << " " << pick(noise);
      queries.emplace_back(query.str(), d.doc_id);
    }
    docs.push_back(std::move(d));
  }

  QuerySet qs;
  qs.entries = std::move(queries);
  return {Corpus(std::move(docs)), std::move(qs)};
}

ExtractorConfig default_category_extractor() {
  ExtractorConfig cfg;
  cfg.strategy = ExtractorStrategy::Category;
  cfg.fields = {"categories"};
  cfg.blocklist = {"all pages", "uncategorized"};
  return cfg;
}

SchemeArtifacts build_scheme_docids(const std::string& scheme, const Corpus& corpus,
                                    const ClusterTree& tree,
                                    const std::map<std::string, NumericPath>& paths,
                                    const KeywordTable& table, const ExperimentParams& params) {
  SchemeArtifacts art;
  art.intra_sep = params.label.intra_sep;
  art.level_sep = params.label.level_sep;
  if (scheme == "atomic" || scheme == "codebook" || scheme == "title") {
    auto set = render_baseline_schemes(corpus, paths);
    if (scheme == "atomic") art.docids = std::move(set.atomic);
    if (scheme == "codebook") {
      art.docids = std::move(set.codebook);
      art.intra_sep = ".";
      art.level_sep = ".";
    }
    if (scheme == "title") art.docids = std::move(set.title);
  } else if (scheme == "c2t" || scheme == "c2t_smoothed") {
    auto ids = render_c2t_ids(tree, paths, table, params.label);
    if (scheme == "c2t") {
      for (const auto& [doc_id, id] : ids) art.docids[doc_id] = id.full;
    } else {
      MockRewriter rw;
      auto smoothed = smooth_ids(ids, tree, rw);
      art.docids = std::move(smoothed.docids);
      art.intra_sep = " ";
      art.level_sep = " ";
    }
  } else {
    throw Error("unknown docid scheme \"" + scheme + "\"");
  }
  return art;
}

EvalReport run_experiment(const Corpus& corpus, const QuerySet& queries,
                          const std::vector<std::string>& schemes, const ExperimentParams& params,
                          EvalMode mode) {
  for (const auto& [query, target] : queries.entries)
    if (!corpus.contains(target))
      throw Error("run_experiment: query target \"" + target + "\" not in corpus");

  auto emb = embed_corpus(corpus, static_cast<std::size_t>(params.embed_dim), params.cluster.seed);
  auto tree = build_tree(emb, corpus, params.cluster);
  auto paths = assign_numeric_paths(tree);
  auto table = extract_table(corpus, params.extractor);

  // held-out split: seeded shuffle, first train_fraction for training
  std::vector<std::size_t> order(queries.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(params.cluster.seed ^ 0x51a3b2c4d5e6f708ull);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_index(i)]);
  std::size_t n_train = static_cast<std::size_t>(
      static_cast<double>(order.size()) * params.train_fraction);
  std::vector<std::pair<std::string, std::string>> train_queries, test_queries;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? train_queries : test_queries).push_back(queries.entries[order[i]]);

  EvalReport report;
  report.seed = params.cluster.seed;
  report.query_count = test_queries.size();

  for (const auto& scheme : schemes) {
    auto art = build_scheme_docids(scheme, corpus, tree, paths, table, params);
    auto tok = Tokenizer::build(
        [&] {
          std::vector<std::string> all;
          for (const auto& [doc_id, docid] : art.docids) all.push_back(docid);
          return all;
        }(),
        TokenizerMode::Word, art.intra_sep, art.level_sep);
    auto trie = DocidTrie::build(art.docids, tok);

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& doc : corpus.documents())
      pairs.emplace_back(doc.title + " " + doc.text, doc.doc_id);  // document-docid pairs
    if (mode == EvalMode::Supervised)
      pairs.insert(pairs.end(), train_queries.begin(), train_queries.end());
    auto model = train_ngram(pairs, art.docids, tok, params.alpha);

    SchemeMetrics m;
    for (const auto& [query, target] : test_queries) {
      auto result = beam_search(query, model, trie, params.beam_width, params.max_len);
      std::vector<std::string> ranked;
      for (const auto& [doc_id, lp] : result.ranked) ranked.push_back(doc_id);
      m.hits5 += hits_at_k(ranked, target, 5);
      m.hits20 += hits_at_k(ranked, target, 20);
      m.mrr20 += mrr_at_k(ranked, target, 20);
    }
    double n = std::max<std::size_t>(test_queries.size(), 1);
    m.hits5 = 100.0 * m.hits5 / n;
    m.hits20 = 100.0 * m.hits20 / n;
    m.mrr20 = 100.0 * m.mrr20 / n;
    report.per_scheme[scheme] = m;
  }

  json echo;
  echo["k"] = params.cluster.k;
  echo["c"] = params.cluster.c;
  echo["K"] = params.label.top_k;
  echo["beam_width"] = params.beam_width;
  echo["alpha"] = params.alpha;
  echo["mode"] = mode == EvalMode::Supervised ? "supervised" : "zero_shot";
  report.config_echo = echo.dump();
  return report;
}

std::string EvalReport::to_json() const {
  json doc;
  doc["seed"] = seed;
  doc["query_count"] = query_count;
  doc["config"] = config_echo.empty() ? json::object() : json::parse(config_echo);
  json schemes = json::object();
  for (const auto& [name, m] : per_scheme) {
    json rec;
    rec["hits@5"] = m.hits5;
    rec["hits@20"] = m.hits20;
    rec["mrr@20"] = m.mrr20;
    schemes[name] = rec;
  }
  doc["schemes"] = schemes;
  return doc.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "Method" << std::right << std::setw(9) << "Hits@5"
      << std::setw(9) << "Hits@20" << std::setw(9) << "MRR@20" << "\n";
  out << std::string(43, '-') << "\n";
  out << std::fixed << std::setprecision(1);
  for (const auto& [name, m] : per_scheme)
    out << std::left << std::setw(16) << name << std::right << std::setw(9) << m.hits5
        << std::setw(9) << m.hits20 << std::setw(9) << m.mrr20 << "\n";
  return out.str();
}

std::string query_set_to_jsonl(const QuerySet& queries) {
  std::ostringstream out;
  for (const auto& [query, target] : queries.entries) {
    json rec;
    rec["query"] = query;
    rec["target_doc_id"] = target;
    out << rec.dump() << "\n";
  }
  return out.str();
}

QuerySet query_set_from_jsonl(const std::string& content) {
  QuerySet qs;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json rec = json::parse(line);
    qs.entries.emplace_back(rec.at("query").get<std::string>(),
                            rec.at("target_doc_id").get<std::string>());
  }
  return qs;
}

}  // namespace c2t
