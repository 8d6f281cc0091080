#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c2t/cluster.hpp"
#include "c2t/keywords.hpp"

namespace c2t {

struct LabelConfig {
  int top_k = 3;               // keywords per node
  std::string intra_sep = "-";
  std::string level_sep = "-";
  bool ancestor_dedup = false;
};

struct NodeLabel {
  int node_id = -1;
  std::vector<std::string> ranked_keywords;  // length <= K
  std::string rendered;                      // joined by intra_sep
};

struct C2TId {
  std::string doc_id;
  NumericPath numeric_path;
  std::vector<std::string> segments;              // rendered, one per path position
  std::vector<std::vector<std::string>> segment_keywords;  // ranked keywords per segment
  std::vector<int> segment_nodes;                 // node_id per segment; -1 for the final doc segment
  std::string full;                               // level_sep-joined, unique corpus-wide
  std::optional<int> disambiguator;
};

struct DocidSchemeSet {
  std::map<std::string, std::string> atomic;
  std::map<std::string, std::string> codebook;
  std::map<std::string, std::string> title;
  std::map<std::string, std::string> c2t;
};

std::map<int, std::map<std::string, int>> aggregate_node_keywords(const ClusterTree& tree,
                                                                  const KeywordTable& table);

std::vector<std::string> select_top_k(const std::map<std::string, int>& counts, int k);

std::map<int, NodeLabel> compute_node_labels(const ClusterTree& tree, const KeywordTable& table,
                                             const LabelConfig& cfg);

std::map<std::string, C2TId> render_c2t_ids(const ClusterTree& tree,
                                            const std::map<std::string, NumericPath>& paths,
                                            const KeywordTable& table, const LabelConfig& cfg);

DocidSchemeSet render_baseline_schemes(const Corpus& corpus,
                                       const std::map<std::string, NumericPath>& paths);

// doc_id<TAB>docid per line
std::string docid_map_to_tsv(const std::map<std::string, std::string>& docids);
std::map<std::string, std::string> docid_map_from_tsv(const std::string& content);

}  // namespace c2t
