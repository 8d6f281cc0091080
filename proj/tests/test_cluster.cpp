#include <doctest.h>

#include <algorithm>
#include <set>

#include "c2t/cluster.hpp"
#include "c2t/eval.hpp"

using namespace c2t;

namespace {

using Points = std::vector<std::pair<std::string, std::vector<double>>>;

Corpus tiny_corpus(const std::vector<std::string>& ids) {
  std::vector<Document> docs;
  for (const auto& id : ids) docs.push_back({id, "", "text of " + id, {}});
  return Corpus(std::move(docs));
}

std::set<std::set<std::string>> partition_of(const std::map<std::string, int>& assignment) {
  std::map<int, std::set<std::string>> by_cluster;
  for (const auto& [id, cl] : assignment) by_cluster[cl].insert(id);
  std::set<std::set<std::string>> out;
  for (auto& [cl, members] : by_cluster) out.insert(members);
  return out;
}

void check_tree_invariants(const ClusterTree& tree, const Corpus& corpus, const ClusterParams& p) {
  std::set<std::string> seen;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) {
      CHECK(static_cast<int>(node.member_doc_ids.size()) <= p.c);
      for (const auto& id : node.member_doc_ids) CHECK(seen.insert(id).second);
    } else {
      CHECK(node.children.size() >= 2);
      CHECK(static_cast<int>(node.children.size()) <= p.k);
      // children partition the parent's members and labels are 0..n-1
      std::set<std::string> child_union;
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const auto& child = tree.node(node.children[i]);
        CHECK(child.label == static_cast<int>(i));
        CHECK(child.parent == node.node_id);
        for (const auto& id : child.member_doc_ids) CHECK(child_union.insert(id).second);
      }
      CHECK(child_union ==
            std::set<std::string>(node.member_doc_ids.begin(), node.member_doc_ids.end()));
    }
  }
  CHECK(seen.size() == corpus.size());
}

}  // namespace

TEST_CASE("kmeans recovers the two well-separated pairs") {
  Points pts = {{"p1", {0, 0}}, {"p2", {0, 1}}, {"p3", {10, 10}}, {"p4", {10, 11}}};
  auto assignment = kmeans(pts, 2, 1, 50);
  // oracle: of the three 2-partitions into non-empty groups, {p1,p2}|{p3,p4}
  // uniquely minimizes within-cluster SSE
  std::set<std::set<std::string>> expected = {{"p1", "p2"}, {"p3", "p4"}};
  CHECK(partition_of(assignment) == expected);
}

TEST_CASE("kmeans with k=1 is a single cluster") {
  Points pts = {{"a", {1, 2}}, {"b", {3, 4}}, {"c", {5, 6}}};
  auto assignment = kmeans(pts, 1, 0, 50);
  for (const auto& [id, cl] : assignment) CHECK(cl == 0);
}

TEST_CASE("kmeans with more clusters than distinct points yields singletons") {
  Points pts = {{"a", {0, 0}}, {"b", {1, 0}}, {"c", {2, 0}}};
  auto assignment = kmeans(pts, 5, 0, 50);
  std::set<int> clusters;
  for (const auto& [id, cl] : assignment) clusters.insert(cl);
  CHECK(clusters.size() == 3);
  // relabeled compactly by ascending smallest member id
  CHECK(assignment.at("a") == 0);
  CHECK(assignment.at("b") == 1);
  CHECK(assignment.at("c") == 2);
}

TEST_CASE("kmeans rejects bad arguments") {
  Points pts = {{"a", {0.0}}};
  CHECK_THROWS_AS(kmeans(pts, 0, 0, 50), Error);
  CHECK_THROWS_AS(kmeans({}, 2, 0, 50), Error);
}

TEST_CASE("kmeans SSE is non-increasing across Lloyd iterations") {
  Points pts;
  Rng rng(99);
  for (int i = 0; i < 120; ++i) {
    std::vector<double> v = {rng.next_double(), rng.next_double(), rng.next_double()};
    pts.emplace_back("p" + std::to_string(100 + i), std::move(v));
  }
  std::vector<double> history;
  kmeans_traced(pts, 8, 4, 50, history);
  REQUIRE(history.size() >= 1);
  for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-9);
}

TEST_CASE("build_tree on four points with k=2 c=1 is the hand-traced depth-2 tree") {
  Corpus corpus = tiny_corpus({"p1", "p2", "p3", "p4"});
  EmbeddingMatrix emb;
  emb.dim = 2;
  emb.rows = {{"p1", {0, 0}}, {"p2", {0, 1}}, {"p3", {10, 10}}, {"p4", {10, 11}}};
  ClusterParams p;
  p.k = 2;
  p.c = 1;
  auto tree = build_tree(emb, corpus, p);
  int leaves = 0, max_depth = 0;
  for (const auto& node : tree.nodes)
    if (node.is_leaf()) {
      ++leaves;
      CHECK(node.member_doc_ids.size() == 1);
      max_depth = std::max(max_depth, node.depth);
    }
  CHECK(leaves == 4);
  CHECK(max_depth == 2);
  check_tree_invariants(tree, corpus, p);
}

TEST_CASE("build_tree with N <= c is a single leaf") {
  Corpus corpus = tiny_corpus({"a", "b", "c"});
  auto emb = embed_corpus(corpus, 16, 0);
  ClusterParams p;
  p.k = 5;
  p.c = 10;
  auto tree = build_tree(emb, corpus, p);
  CHECK(tree.nodes.size() == 1);
  CHECK(tree.node(tree.root).is_leaf());
}

TEST_CASE("build_tree rejects empty corpora and missing embeddings") {
  Corpus corpus = tiny_corpus({"a", "b"});
  EmbeddingMatrix emb;
  emb.dim = 4;
  emb.rows["a"] = {1, 0, 0, 0};  // "b" missing
  CHECK_THROWS_AS(build_tree(emb, corpus, ClusterParams{}), Error);
}

TEST_CASE("900-doc tree satisfies all invariants and serializes identically across runs") {
  SynthParams sp;
  sp.seed = 13;
  sp.n_docs = 900;
  auto [corpus, queries] = synth_corpus(sp);
  auto emb = embed_corpus(corpus, 128, 13);
  ClusterParams p;
  p.seed = 13;
  auto tree1 = build_tree(emb, corpus, p);
  auto tree2 = build_tree(emb, corpus, p);
  CHECK(tree_to_json(tree1) == tree_to_json(tree2));
  check_tree_invariants(tree1, corpus, p);

  auto paths = assign_numeric_paths(tree1);
  CHECK(paths.size() == corpus.size());
  std::set<std::vector<int>> unique_paths;
  for (const auto& [id, path] : paths) CHECK(unique_paths.insert(path.labels).second);

  // round-trips for the serialized forms
  auto tree_again = tree_from_json(tree_to_json(tree1));
  CHECK(tree_to_json(tree_again) == tree_to_json(tree1));
  auto paths_again = paths_from_tsv(paths_to_tsv(paths));
  CHECK(paths_to_tsv(paths_again) == paths_to_tsv(paths));
}

TEST_CASE("assign_numeric_paths on a single leaf indexes docs in ascending order") {
  Corpus corpus = tiny_corpus({"d1", "d2", "d3"});
  auto emb = embed_corpus(corpus, 16, 0);
  ClusterParams p;
  p.c = 10;
  auto tree = build_tree(emb, corpus, p);
  auto paths = assign_numeric_paths(tree);
  CHECK(paths.at("d1").labels == std::vector<int>{0});
  CHECK(paths.at("d2").labels == std::vector<int>{1});
  CHECK(paths.at("d3").labels == std::vector<int>{2});
}

TEST_CASE("assign_numeric_paths on the depth-2 example gives length-2 paths") {
  Corpus corpus = tiny_corpus({"p1", "p2", "p3", "p4"});
  EmbeddingMatrix emb;
  emb.dim = 2;
  emb.rows = {{"p1", {0, 0}}, {"p2", {0, 1}}, {"p3", {10, 10}}, {"p4", {10, 11}}};
  ClusterParams p;
  p.k = 2;
  p.c = 1;
  auto tree = build_tree(emb, corpus, p);
  auto paths = assign_numeric_paths(tree);
  for (const auto& [id, path] : paths) {
    CHECK(path.labels.size() == 3);  // two split labels plus the within-leaf index
    CHECK(path.labels.back() == 0);  // singleton leaves
  }
}
