#include "c2t/smoothing.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool is_single_word(const std::string& w) {
  if (w.empty()) return false;
  for (char ch : w)
    if (ch == ' ' || ch == '-' || ch == '\t') return false;
  return true;
}

void check_words(const std::vector<std::string>& words, const std::string& where) {
  if (words.empty()) throw Error("smooth_ids: rewriter produced empty phrase at " + where);
  for (const auto& w : words)
    if (!is_single_word(w))
      throw Error("smooth_ids: rewriter word \"" + w + "\" contains a separator at " + where);
}

}  // namespace

std::vector<std::string> MockRewriter::rewrite_phrase(int,
                                                      const std::vector<std::string>& keywords) const {
  if (keywords.size() < 2) return keywords;
  std::vector<std::string> out(keywords.begin() + 1, keywords.end());
  out.push_back("for");
  out.push_back(keywords.front());
  return out;
}

ReplayRewriter ReplayRewriter::from_jsonl(const std::string& content) {
  ReplayRewriter rw;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json rec = json::parse(line);
    int node_id = rec.at("node_id").get<int>();
    std::vector<std::string> words;
    for (const auto& w : word_tokens(rec.at("phrase").get<std::string>())) words.push_back(w);
    std::string conn = rec.value("connective", std::string("with"));
    rw.entries_[node_id] = {std::move(words), std::move(conn)};
  }
  return rw;
}

std::vector<std::string> ReplayRewriter::rewrite_phrase(int node_id,
                                                        const std::vector<std::string>& keywords) const {
  auto it = entries_.find(node_id);
  if (it == entries_.end() || it->second.first.empty()) return keywords;
  return it->second.first;
}

std::string ReplayRewriter::connective(const std::string&, const std::string&) const {
  return "with";
}

SmoothedIds smooth_ids(const std::map<std::string, C2TId>& ids, const ClusterTree& tree,
                       const Rewriter& rw) {
  SmoothedIds out;

  // collect per-node keyword lists from the rendered ids
  std::map<int, std::vector<std::string>> node_keywords;
  for (const auto& [doc_id, id] : ids) {
    if (id.segments.size() != id.segment_nodes.size() ||
        id.segments.size() != id.segment_keywords.size())
      throw Error("smooth_ids: C2TId for \"" + doc_id + "\" lacks segment provenance");
    for (std::size_t i = 0; i < id.segment_nodes.size(); ++i)
      if (id.segment_nodes[i] >= 0) node_keywords[id.segment_nodes[i]] = id.segment_keywords[i];
  }

  // each node is rewritten exactly once; all documents share the cached span
  std::map<int, std::vector<std::string>> phrases;
  for (const auto& [node_id, kws] : node_keywords) {
    auto words = rw.rewrite_phrase(node_id, kws);
    check_words(words, "node " + std::to_string(node_id));
    phrases[node_id] = std::move(words);
  }

  // sibling spans must stay distinguishable at their first token, otherwise
  // the rewrite would move a branch point into the middle of a span
  for (const auto& node : tree.nodes) {
    if (node.children.size() < 2) continue;
    for (int round = 0; round < 3; ++round) {
      std::map<std::string, std::vector<int>> by_first;
      for (int child : node.children)
        if (phrases.count(child)) by_first[phrases.at(child).front()].push_back(child);
      bool collided = false;
      for (const auto& [first, group] : by_first) {
        if (group.size() < 2) continue;
        collided = true;
        for (std::size_t g = 0; g < group.size(); ++g) {
          int child = group[g];
          if (round < 2) {
            // prepend the sibling's own rank-1 keyword unless it already leads;
            // rank-1 keywords are distinct among siblings, so this converges
            const std::string& lead = node_keywords.at(child).front();
            if (phrases.at(child).front() != lead)
              phrases.at(child).insert(phrases.at(child).begin(), lead);
          } else if (g > 0) {
            phrases.at(child) = node_keywords.at(child);  // give up, keep original order
          }
        }
      }
      if (!collided) break;
    }
  }

  // connective word per parent node, shared by all of its children
  std::map<int, std::string> connectives;
  for (const auto& node : tree.nodes) {
    std::string child_phrase;
    if (!node.children.empty() && phrases.count(node.children.front()))
      child_phrase = join(phrases.at(node.children.front()), " ");
    std::string parent_phrase = phrases.count(node.node_id) ? join(phrases.at(node.node_id), " ") : "";
    std::string conn = rw.connective(parent_phrase, child_phrase);
    if (!is_single_word(conn))
      throw Error("smooth_ids: connective \"" + conn + "\" is not a single word at node " +
                  std::to_string(node.node_id));
    connectives[node.node_id] = conn;
  }

  for (const auto& [node_id, phrase] : phrases) {
    out.node_spans[node_id] = phrase;
    // every cluster node span is followed by a deeper level (at minimum the
    // per-document segment), so it always carries its connective
    out.node_spans[node_id].push_back(connectives.at(node_id));
  }

  // per-document final spans
  for (const auto& [doc_id, id] : ids) {
    auto words = rw.rewrite_phrase(-1, id.segment_keywords.back());
    check_words(words, "document " + doc_id);
    out.doc_spans[doc_id] = std::move(words);
  }

  // document spans are not sibling spans: they may share first tokens and
  // branch mid-span, since the tree's no-new-branch-points guarantee only
  // covers cluster node spans; residual duplicates get "#n" below

  // assemble docids; disambiguators ride on the last word verbatim
  for (const auto& [doc_id, id] : ids) {
    std::vector<std::string> tokens;
    std::vector<int> seq;
    for (int node_id : id.segment_nodes)
      if (node_id >= 0) {
        seq.push_back(node_id);
        const auto& span = out.node_spans.at(node_id);
        tokens.insert(tokens.end(), span.begin(), span.end());
      }
    const auto& doc_span = out.doc_spans.at(doc_id);
    tokens.insert(tokens.end(), doc_span.begin(), doc_span.end());
    if (id.disambiguator) {
      std::string suffix = "#" + std::to_string(*id.disambiguator);
      tokens.back() += suffix;
      out.doc_spans.at(doc_id).back() += suffix;
    }
    out.doc_node_seq[doc_id] = std::move(seq);
    out.docids[doc_id] = join(tokens, " ");
  }

  // residual collisions get the same #n treatment as the forge
  std::set<std::string> taken;
  for (auto& [doc_id, docid] : out.docids) {
    if (taken.insert(docid).second) continue;
    int n = 1;
    std::string candidate;
    do {
      candidate = docid + "#" + std::to_string(n);
      ++n;
    } while (!taken.insert(candidate).second);
    docid = candidate;
    out.doc_spans.at(doc_id).back() += "#" + std::to_string(n - 1);
  }
  return out;
}

TopologyReport verify_topology(const DocidTrie& original, const DocidTrie& smoothed,
                               const ClusterTree& tree, const SmoothedIds& spans,
                               const Tokenizer& smoothed_tok) {
  TopologyReport report;
  auto violation = [&report](const std::string& msg) {
    report.ok = false;
    report.violations.push_back(msg);
  };

  if (original.terminal_count() != smoothed.terminal_count())
    violation("terminal count mismatch: " + std::to_string(original.terminal_count()) + " vs " +
              std::to_string(smoothed.terminal_count()));

  // sibling spans must branch exactly at their first token
  for (const auto& node : tree.nodes) {
    std::map<std::string, std::vector<int>> by_first;
    for (int child : node.children)
      if (auto it = spans.node_spans.find(child); it != spans.node_spans.end())
        by_first[it->second.front()].push_back(child);
    for (const auto& [first, group] : by_first)
      if (group.size() > 1) {
        std::string msg = "sibling-prefix-collision under node " + std::to_string(node.node_id) +
                          " on token \"" + first + "\":";
        for (int child : group) msg += " " + std::to_string(child);
        violation(msg);
      }
  }

  // walk every docid and check fanout inside spans and at boundaries
  std::set<std::pair<int, std::size_t>> checked;  // (node_id, offset) pairs already verified
  for (const auto& [doc_id, docid] : spans.docids) {
    std::vector<TokenId> tokens = smoothed_tok.tokenize(docid);
    std::vector<TokenId> prefix;
    std::size_t pos = 0;
    const auto& seq = spans.doc_node_seq.at(doc_id);
    for (std::size_t level = 0; level < seq.size(); ++level) {
      int node_id = seq[level];
      const auto& span = spans.node_spans.at(node_id);

      // branch structure at the span boundary must match the cluster tree
      int parent = tree.node(node_id).parent;
      auto fanout = smoothed.allowed_next(prefix).size();
      std::size_t expected =
          parent == -1 ? 1 : tree.node(parent).children.size();
      if (checked.insert({node_id, 0}).second && fanout != expected)
        violation("boundary fanout " + std::to_string(fanout) + " != " + std::to_string(expected) +
                  " entering node " + std::to_string(node_id));

      for (std::size_t i = 0; i < span.size(); ++i) {
        if (i > 0 && checked.insert({node_id, i}).second) {
          auto interior = smoothed.allowed_next(prefix).size();
          if (interior != 1)
            violation("interior fanout " + std::to_string(interior) + " inside node " +
                      std::to_string(node_id) + " at offset " + std::to_string(i));
        }
        if (pos >= tokens.size() || smoothed_tok.token_text(tokens[pos]) != span[i]) {
          violation("span mismatch for doc \"" + doc_id + "\" at node " + std::to_string(node_id));
          return report;
        }
        prefix.push_back(tokens[pos]);
        ++pos;
      }
    }
    // remaining tokens are the document span plus EOS; they must reach the
    // right terminal
    while (pos < tokens.size()) prefix.push_back(tokens[pos++]);
    if (smoothed.complete(prefix) != doc_id)
      violation("doc \"" + doc_id + "\" does not reach its terminal in the smoothed trie");
  }
  return report;
}

}  // namespace c2t
