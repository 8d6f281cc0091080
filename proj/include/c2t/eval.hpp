#pragma once

#include <map>
#include <string>
#include <vector>

#include "c2t/cluster.hpp"
#include "c2t/corpus.hpp"
#include "c2t/decoder.hpp"
#include "c2t/keywords.hpp"
#include "c2t/labels.hpp"

namespace c2t {

enum class EvalMode { Supervised, ZeroShot };

struct QuerySet {
  std::vector<std::pair<std::string, std::string>> entries;  // (query, target doc_id)
  EvalMode mode = EvalMode::Supervised;
};

int hits_at_k(const std::vector<std::string>& ranked, const std::string& target, int k);
double mrr_at_k(const std::vector<std::string>& ranked, const std::string& target, int k);

struct SynthParams {
  std::uint64_t seed = 7;
  int n_docs = 500;
  int n_topics = 10;
  int vocab_size = 600;
  int queries_per_doc = 5;
};

// Two-level latent topic hierarchy; text, metadata and queries all draw from
// the target document's topic distribution. Deterministic per seed.
std::pair<Corpus, QuerySet> synth_corpus(const SynthParams& params);

struct SchemeMetrics {
  double hits5 = 0.0;   // percent
  double hits20 = 0.0;  // percent
  double mrr20 = 0.0;   // percent
};

struct EvalReport {
  std::map<std::string, SchemeMetrics> per_scheme;
  std::size_t query_count = 0;
  std::uint64_t seed = 0;
  std::string config_echo;

  std::string to_json() const;
  std::string to_table() const;
};

struct ExperimentParams {
  ClusterParams cluster;
  LabelConfig label;
  ExtractorConfig extractor;
  int embed_dim = 512;
  int beam_width = 20;
  int max_len = 64;
  double alpha = 0.1;
  double train_fraction = 0.8;
};

ExtractorConfig default_category_extractor();

// Full pipeline per scheme over a shared clustering tree. Valid scheme names:
// atomic | codebook | title | c2t | c2t_smoothed.
EvalReport run_experiment(const Corpus& corpus, const QuerySet& queries,
                          const std::vector<std::string>& schemes, const ExperimentParams& params,
                          EvalMode mode);

// Docid map plus the tokenizer separators a scheme decodes with.
struct SchemeArtifacts {
  std::map<std::string, std::string> docids;
  std::string intra_sep;
  std::string level_sep;
};

SchemeArtifacts build_scheme_docids(const std::string& scheme, const Corpus& corpus,
                                    const ClusterTree& tree,
                                    const std::map<std::string, NumericPath>& paths,
                                    const KeywordTable& table, const ExperimentParams& params);

std::string query_set_to_jsonl(const QuerySet& queries);
QuerySet query_set_from_jsonl(const std::string& content);

}  // namespace c2t
