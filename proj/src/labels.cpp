#include "c2t/labels.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace c2t {

namespace {

std::vector<std::pair<std::string, int>> ranked_pairs(const std::map<std::string, int>& counts) {
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<std::string> pick_top(const std::vector<std::pair<std::string, int>>& ranked, int k,
                                  const std::set<std::string>& excluded) {
  std::vector<std::string> out;
  for (const auto& [kw, count] : ranked) {
    if (static_cast<int>(out.size()) >= k) break;
    if (excluded.count(kw)) continue;
    out.push_back(kw);
  }
  if (out.empty() && !ranked.empty()) out.push_back(ranked.front().first);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::map<int, std::map<std::string, int>> aggregate_node_keywords(const ClusterTree& tree,
                                                                  const KeywordTable& table) {
  std::map<int, std::map<std::string, int>> out;
  for (const auto& node : tree.nodes) {
    std::map<std::string, int> counts;
    for (const auto& doc_id : node.member_doc_ids) {
      auto it = table.per_doc.find(doc_id);
      if (it == table.per_doc.end())
        throw Error("aggregate_node_keywords: no keywords for doc_id \"" + doc_id + "\"");
      for (const auto& [kw, count] : it->second) counts[kw] += count;
    }
    out.emplace(node.node_id, std::move(counts));
  }
  return out;
}

std::vector<std::string> select_top_k(const std::map<std::string, int>& counts, int k) {
  if (k < 1) throw Error("select_top_k: K must be >= 1");
  if (counts.empty()) throw Error("select_top_k: empty count map");
  auto ranked = ranked_pairs(counts);
  if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
  std::vector<std::string> out;
  for (const auto& [kw, count] : ranked) out.push_back(kw);
  return out;
}

std::map<int, NodeLabel> compute_node_labels(const ClusterTree& tree, const KeywordTable& table,
                                             const LabelConfig& cfg) {
  auto agg = aggregate_node_keywords(tree, table);
  std::map<int, NodeLabel> labels;
  std::map<int, std::set<std::string>> used_above;  // node_id -> keywords used by ancestors
  std::map<int, std::set<std::string>> sibling_leads;  // parent -> lead keywords taken
  // nodes are stored in preorder, so parents precede children
  for (const auto& node : tree.nodes) {
    std::set<std::string> excluded;
    if (cfg.ancestor_dedup && node.parent != -1) {
      excluded = used_above.at(node.parent);
      for (const auto& kw : labels.at(node.parent).ranked_keywords) excluded.insert(kw);
    }
    auto ranked = ranked_pairs(agg.at(node.node_id));
    NodeLabel lab;
    lab.node_id = node.node_id;
    lab.ranked_keywords = pick_top(ranked, cfg.top_k, excluded);
    // sibling labels must stay distinguishable by their lead keyword, or the
    // rendered segments could not recover the numeric path; backfill with the
    // next-ranked keywords until this node leads with an unclaimed one
    if (node.parent != -1) {
      auto& taken = sibling_leads[node.parent];
      std::size_t budget = ranked.size();
      while (!lab.ranked_keywords.empty() && taken.count(lab.ranked_keywords.front()) &&
             budget-- > 0) {
        excluded.insert(lab.ranked_keywords.front());
        lab.ranked_keywords = pick_top(ranked, cfg.top_k, excluded);
      }
      if (!lab.ranked_keywords.empty()) taken.insert(lab.ranked_keywords.front());
    }
    lab.rendered = join(lab.ranked_keywords, cfg.intra_sep);
    if (cfg.ancestor_dedup) used_above[node.node_id] = excluded;
    labels.emplace(node.node_id, std::move(lab));
  }
  return labels;
}

std::map<std::string, C2TId> render_c2t_ids(const ClusterTree& tree,
                                            const std::map<std::string, NumericPath>& paths,
                                            const KeywordTable& table, const LabelConfig& cfg) {
  auto labels = compute_node_labels(tree, table, cfg);
  std::map<std::string, C2TId> out;
  for (const auto& [doc_id, path] : paths) {
    C2TId id;
    id.doc_id = doc_id;
    id.numeric_path = path;
    std::set<std::string> used;
    int node = tree.root;
    // a single-leaf tree still names its one cluster before the document
    if (tree.node(tree.root).is_leaf()) {
      const NodeLabel& lab = labels.at(tree.root);
      id.segments.push_back(lab.rendered);
      id.segment_keywords.push_back(lab.ranked_keywords);
      id.segment_nodes.push_back(tree.root);
      if (cfg.ancestor_dedup)
        for (const auto& kw : lab.ranked_keywords) used.insert(kw);
    }
    // positions 0..m-1 name tree nodes; the last position is the document itself
    for (std::size_t i = 0; i + 1 < path.labels.size(); ++i) {
      node = tree.node(node).children.at(static_cast<std::size_t>(path.labels[i]));
      const NodeLabel& lab = labels.at(node);
      id.segments.push_back(lab.rendered);
      id.segment_keywords.push_back(lab.ranked_keywords);
      id.segment_nodes.push_back(node);
      if (cfg.ancestor_dedup)
        for (const auto& kw : lab.ranked_keywords) used.insert(kw);
    }
    auto it = table.per_doc.find(doc_id);
    if (it == table.per_doc.end())
      throw Error("render_c2t_ids: no keywords for doc_id \"" + doc_id + "\"");
    std::vector<std::string> doc_kws =
        pick_top(it->second, cfg.top_k, cfg.ancestor_dedup ? used : std::set<std::string>{});
    id.segments.push_back(join(doc_kws, cfg.intra_sep));
    id.segment_keywords.push_back(std::move(doc_kws));
    id.segment_nodes.push_back(-1);
    id.full = join(id.segments, cfg.level_sep);
    out.emplace(doc_id, std::move(id));
  }
  // collision resolution, first occupant unsuffixed, then #1, #2, ... in doc_id order
  std::set<std::string> taken;
  for (auto& [doc_id, id] : out) {
    if (taken.insert(id.full).second) continue;
    int n = 1;
    std::string candidate;
    do {
      candidate = id.full + "#" + std::to_string(n);
      ++n;
    } while (!taken.insert(candidate).second);
    id.disambiguator = n - 1;
    id.full = candidate;
  }
  return out;
}

DocidSchemeSet render_baseline_schemes(const Corpus& corpus,
                                       const std::map<std::string, NumericPath>& paths) {
  DocidSchemeSet set;
  std::size_t index = 0;
  std::set<std::string> titles_taken;
  for (const auto& doc : corpus.documents()) {
    set.atomic[doc.doc_id] = std::to_string(index++);
    auto it = paths.find(doc.doc_id);
    if (it == paths.end())
      throw Error("render_baseline_schemes: no path for doc_id \"" + doc.doc_id + "\"");
    std::ostringstream cb;
    for (std::size_t i = 0; i < it->second.labels.size(); ++i) {
      if (i) cb << ".";
      cb << it->second.labels[i];
    }
    set.codebook[doc.doc_id] = cb.str();
    std::string title = lowercase(trim(doc.title));
    if (title.empty()) title = "untitled";
    if (!titles_taken.insert(title).second) {
      int n = 1;
      std::string candidate;
      do {
        candidate = title + "#" + std::to_string(n);
        ++n;
      } while (!titles_taken.insert(candidate).second);
      title = candidate;
    }
    set.title[doc.doc_id] = title;
  }
  return set;
}

std::string docid_map_to_tsv(const std::map<std::string, std::string>& docids) {
  std::ostringstream out;
  for (const auto& [doc_id, docid] : docids) out << doc_id << "\t" << docid << "\n";
  return out.str();
}

std::map<std::string, std::string> docid_map_from_tsv(const std::string& content) {
  std::map<std::string, std::string> out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("docid_map_from_tsv: missing tab in line: " + line);
    out.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

}  // namespace c2t
