#include "c2t/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

using Points = std::vector<std::pair<std::string, std::vector<double>>>;

// k-means++ seeding: first centroid uniform, the rest D^2-weighted.
std::vector<std::vector<double>> kmeanspp_init(const Points& pts, int k, Rng& rng) {
  std::vector<std::vector<double>> centroids;
  centroids.push_back(pts[rng.next_index(pts.size())].second);
  std::vector<double> d2(pts.size());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centroids) best = std::min(best, sqdist(pts[i].second, c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) break;  // every remaining point coincides with a centroid
    double r = rng.next_double() * total;
    double acc = 0.0;
    std::size_t chosen = pts.size() - 1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      acc += d2[i];
      if (r < acc) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(pts[chosen].second);
  }
  return centroids;
}

std::map<std::string, int> relabel_by_smallest_member(const Points& pts,
                                                      const std::vector<int>& assignment) {
  // smallest member id per cluster, then rank clusters by it
  std::map<int, std::string> smallest;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto it = smallest.find(assignment[i]);
    if (it == smallest.end() || pts[i].first < it->second) smallest[assignment[i]] = pts[i].first;
  }
  std::vector<std::pair<std::string, int>> order;
  for (const auto& [cl, id] : smallest) order.emplace_back(id, cl);
  std::sort(order.begin(), order.end());
  std::map<int, int> remap;
  for (std::size_t r = 0; r < order.size(); ++r) remap[order[r].second] = static_cast<int>(r);
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out[pts[i].first] = remap.at(assignment[i]);
  return out;
}

std::map<std::string, int> kmeans_impl(const Points& points_in, int k, std::uint64_t seed,
                                       int max_iters, std::vector<double>* sse_history) {
  if (k < 1) throw Error("kmeans: k must be >= 1");
  if (points_in.empty()) throw Error("kmeans: empty point set");
  Points pts = points_in;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t dim = pts[0].second.size();
  for (const auto& [id, v] : pts)
    if (v.size() != dim) throw Error("kmeans: inconsistent vector dimensions");

  // distinct points <= k: each distinct point its own cluster
  std::map<std::vector<double>, int> distinct;
  for (const auto& [id, v] : pts)
    if (!distinct.count(v)) {
      int next = static_cast<int>(distinct.size());
      distinct[v] = next;
    }
  if (static_cast<int>(distinct.size()) <= k) {
    std::vector<int> assignment(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) assignment[i] = distinct.at(pts[i].second);
    return relabel_by_smallest_member(pts, assignment);
  }

  Rng rng(seed);
  auto centroids = kmeanspp_init(pts, k, rng);
  std::vector<int> assignment(pts.size(), -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      int best = 0;
      double best_d = sqdist(pts[i].second, centroids[0]);
      for (std::size_t cl = 1; cl < centroids.size(); ++cl) {
        double d = sqdist(pts[i].second, centroids[cl]);
        if (d < best_d) {  // ties keep the lower cluster index
          best_d = d;
          best = static_cast<int>(cl);
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (sse_history) {
      double sse = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        sse += sqdist(pts[i].second, centroids[assignment[i]]);
      sse_history->push_back(sse);
    }
    if (!changed) break;

    // recompute centroids, dropping clusters that went empty
    std::vector<std::vector<double>> sums(centroids.size(), std::vector<double>(dim, 0.0));
    std::vector<int> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t d = 0; d < dim; ++d) sums[assignment[i]][d] += pts[i].second[d];
      ++counts[assignment[i]];
    }
    std::vector<std::vector<double>> next;
    std::vector<int> remap(centroids.size(), -1);
    for (std::size_t cl = 0; cl < centroids.size(); ++cl) {
      if (counts[cl] == 0) continue;
      remap[cl] = static_cast<int>(next.size());
      for (std::size_t d = 0; d < dim; ++d) sums[cl][d] /= counts[cl];
      next.push_back(std::move(sums[cl]));
    }
    centroids = std::move(next);
    for (auto& a : assignment) a = remap[a];
  }
  return relabel_by_smallest_member(pts, assignment);
}

}  // namespace

std::map<std::string, int> kmeans(const Points& points, int k, std::uint64_t seed, int max_iters) {
  return kmeans_impl(points, k, seed, max_iters, nullptr);
}

std::map<std::string, int> kmeans_traced(const Points& points, int k, std::uint64_t seed,
                                         int max_iters, std::vector<double>& sse_history) {
  return kmeans_impl(points, k, seed, max_iters, &sse_history);
}

double kmeans_sse(const std::vector<std::vector<double>>& points,
                  const std::vector<std::vector<double>>& centroids,
                  const std::vector<int>& assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += sqdist(points[i], centroids[assignment[i]]);
  return s;
}

namespace {

void split_node(ClusterTree& tree, int node_id, const EmbeddingMatrix& emb,
                const ClusterParams& params) {
  std::vector<std::string> members = tree.nodes[node_id].member_doc_ids;  // already sorted
  if (static_cast<int>(members.size()) <= params.c) return;  // leaf

  Points pts;
  pts.reserve(members.size());
  for (const auto& id : members) pts.emplace_back(id, emb.rows.at(id));
  // vary the seed per node so sibling subtrees do not repeat draws
  std::uint64_t node_seed = params.seed ^ hash64("node:" + std::to_string(node_id), params.seed + 1);
  // "at most k" children: use the smallest branching factor that can satisfy
  // the leaf capacity, so a node barely above c splits in two instead of
  // splintering into near-singleton clusters
  int k_eff = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(params.k),
      (members.size() + params.c - 1) / static_cast<std::size_t>(params.c)));
  k_eff = std::max(k_eff, 2);
  auto assignment = kmeans(pts, k_eff, node_seed, params.max_iters);

  int n_clusters = 0;
  for (const auto& [id, cl] : assignment) n_clusters = std::max(n_clusters, cl + 1);

  std::vector<std::vector<std::string>> groups;
  if (n_clusters <= 1) {
    // degenerate split (e.g. all points identical): even round-robin by doc_id
    int parts = std::min<std::size_t>(
        params.k, (members.size() + params.c - 1) / static_cast<std::size_t>(params.c));
    parts = std::max(parts, 2);
    groups.assign(parts, {});
    for (std::size_t i = 0; i < members.size(); ++i) groups[i % parts].push_back(members[i]);
  } else {
    groups.assign(n_clusters, {});
    for (const auto& id : members) groups[assignment.at(id)].push_back(id);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    ClusterNode child;
    child.node_id = static_cast<int>(tree.nodes.size());
    child.parent = node_id;
    child.depth = tree.nodes[node_id].depth + 1;
    child.label = static_cast<int>(g);
    child.member_doc_ids = std::move(groups[g]);
    tree.nodes[node_id].children.push_back(child.node_id);
    tree.nodes.push_back(std::move(child));
    split_node(tree, tree.nodes.back().node_id, emb, params);
  }
}

}  // namespace

ClusterTree build_tree(const EmbeddingMatrix& emb, const Corpus& corpus,
                       const ClusterParams& params) {
  if (corpus.size() == 0) throw Error("build_tree: empty corpus");
  if (params.k < 2) throw Error("build_tree: k must be >= 2");
  if (params.c < 1) throw Error("build_tree: c must be >= 1");
  for (const auto& d : corpus.documents())
    if (!emb.rows.count(d.doc_id))
      throw Error("build_tree: missing embedding for doc_id \"" + d.doc_id + "\"");

  ClusterTree tree;
  ClusterNode root;
  root.node_id = 0;
  for (const auto& d : corpus.documents()) root.member_doc_ids.push_back(d.doc_id);
  tree.nodes.push_back(std::move(root));
  split_node(tree, 0, emb, params);
  return tree;
}

std::map<std::string, NumericPath> assign_numeric_paths(const ClusterTree& tree) {
  std::map<std::string, NumericPath> out;
  for (const auto& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    std::vector<int> prefix;
    for (int cur = node.node_id; tree.node(cur).parent != -1; cur = tree.node(cur).parent)
      prefix.push_back(tree.node(cur).label);
    std::reverse(prefix.begin(), prefix.end());
    for (std::size_t i = 0; i < node.member_doc_ids.size(); ++i) {
      NumericPath p;
      p.doc_id = node.member_doc_ids[i];
      p.labels = prefix;
      p.labels.push_back(static_cast<int>(i));  // within-leaf index, ascending doc_id
      out.emplace(p.doc_id, std::move(p));
    }
  }
  return out;
}

std::string tree_to_json(const ClusterTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    json rec;
    rec["node_id"] = n.node_id;
    rec["parent"] = n.parent;
    rec["depth"] = n.depth;
    rec["label"] = n.label;
    rec["members"] = n.member_doc_ids;
    rec["children"] = n.children;
    nodes.push_back(rec);
  }
  json doc;
  doc["root"] = tree.root;
  doc["nodes"] = nodes;
  return doc.dump(2) + "\n";
}

ClusterTree tree_from_json(const std::string& content) {
  json doc = json::parse(content);
  ClusterTree tree;
  tree.root = doc.at("root").get<int>();
  for (const auto& rec : doc.at("nodes")) {
    ClusterNode n;
    n.node_id = rec.at("node_id").get<int>();
    n.parent = rec.at("parent").get<int>();
    n.depth = rec.at("depth").get<int>();
    n.label = rec.at("label").get<int>();
    n.member_doc_ids = rec.at("members").get<std::vector<std::string>>();
    n.children = rec.at("children").get<std::vector<int>>();
    if (n.node_id != static_cast<int>(tree.nodes.size()))
      throw Error("tree_from_json: node ids must be dense and ordered");
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

std::string paths_to_tsv(const std::map<std::string, NumericPath>& paths) {
  std::ostringstream out;
  for (const auto& [doc_id, p] : paths) {
    out << doc_id << "\t";
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
      if (i) out << ".";
      out << p.labels[i];
    }
    out << "\n";
  }
  return out.str();
}

std::map<std::string, NumericPath> paths_from_tsv(const std::string& content) {
  std::map<std::string, NumericPath> out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("paths_from_tsv: missing tab in line: " + line);
    NumericPath p;
    p.doc_id = line.substr(0, tab);
    std::istringstream labels(line.substr(tab + 1));
    std::string part;
    while (std::getline(labels, part, '.')) p.labels.push_back(std::stoi(part));
    out.emplace(p.doc_id, std::move(p));
  }
  return out;
}

}  // namespace c2t
