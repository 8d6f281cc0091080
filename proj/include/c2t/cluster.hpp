#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "c2t/corpus.hpp"

namespace c2t {

struct ClusterParams {
  int k = 30;         // max children per internal split
  int c = 30;         // max documents per leaf
  std::uint64_t seed = 0;
  int max_iters = 50;
};

struct ClusterNode {
  int node_id = 0;
  int parent = -1;                       // -1 for root
  int depth = 0;
  int label = 0;                         // sibling label, 0 for root
  std::vector<std::string> member_doc_ids;  // ascending doc_id
  std::vector<int> children;             // ordered by label
  bool is_leaf() const { return children.empty(); }
};

struct ClusterTree {
  std::vector<ClusterNode> nodes;  // node_id == index
  int root = 0;

  const ClusterNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
};

struct NumericPath {
  std::string doc_id;
  std::vector<int> labels;  // sibling labels along the path, then within-leaf index
};

// Single-level Lloyd's algorithm with seeded k-means++ initialization.
// Cluster indices are relabeled 0..(#nonempty-1) by ascending smallest member id;
// assignment ties break toward the lower cluster index. If the number of
// distinct points is <= k, each distinct point becomes its own cluster.
std::map<std::string, int> kmeans(const std::vector<std::pair<std::string, std::vector<double>>>& points,
                                  int k, std::uint64_t seed, int max_iters);

// Same, recording the per-iteration objective.
std::map<std::string, int> kmeans_traced(
    const std::vector<std::pair<std::string, std::vector<double>>>& points, int k,
    std::uint64_t seed, int max_iters, std::vector<double>& sse_history);

ClusterTree build_tree(const EmbeddingMatrix& emb, const Corpus& corpus, const ClusterParams& params);

std::map<std::string, NumericPath> assign_numeric_paths(const ClusterTree& tree);

std::string tree_to_json(const ClusterTree& tree);
ClusterTree tree_from_json(const std::string& content);

// doc_id<TAB>r_0.r_1.....r_m per line
std::string paths_to_tsv(const std::map<std::string, NumericPath>& paths);
std::map<std::string, NumericPath> paths_from_tsv(const std::string& content);

// Within-cluster sum of squared distances to centroids; exposed for the
// monotonicity property test.
double kmeans_sse(const std::vector<std::vector<double>>& points,
                  const std::vector<std::vector<double>>& centroids,
                  const std::vector<int>& assignment);

}  // namespace c2t
