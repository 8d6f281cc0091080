#pragma once

#include <map>
#include <string>
#include <vector>

#include "c2t/labels.hpp"
#include "c2t/trie.hpp"

namespace c2t {

// Phrase rewriting confined to a single node's keywords plus a one-word
// connective between hierarchy levels.
class Rewriter {
 public:
  virtual ~Rewriter() = default;
  // node_id is -1 for the per-document final segment
  virtual std::vector<std::string> rewrite_phrase(int node_id,
                                                  const std::vector<std::string>& keywords) const = 0;
  virtual std::string connective(const std::string& parent_phrase,
                                 const std::string& child_phrase) const = 0;
};

// Deterministic offline rewriter: rotates the lead keyword to the back behind
// "for" ([phone, battery, charger] -> "battery charger for phone"); the
// connective is always "with".
class MockRewriter : public Rewriter {
 public:
  std::vector<std::string> rewrite_phrase(int, const std::vector<std::string>& keywords) const override;
  std::string connective(const std::string&, const std::string&) const override { return "with"; }
};

class IdentityRewriter : public Rewriter {
 public:
  std::vector<std::string> rewrite_phrase(int, const std::vector<std::string>& keywords) const override {
    return keywords;
  }
  std::string connective(const std::string&, const std::string&) const override { return "with"; }
};

// node_id -> {phrase, connective}, loaded from JSONL; nodes absent from the
// file keep their hyphen-form keywords
class ReplayRewriter : public Rewriter {
 public:
  static ReplayRewriter from_jsonl(const std::string& content);
  std::vector<std::string> rewrite_phrase(int node_id,
                                          const std::vector<std::string>& keywords) const override;
  std::string connective(const std::string& parent_phrase,
                         const std::string& child_phrase) const override;

 private:
  std::map<int, std::pair<std::vector<std::string>, std::string>> entries_;
};

struct SmoothedIds {
  std::map<std::string, std::string> docids;
  // token spans per cluster node (trailing connective included when the node
  // is followed by a deeper level)
  std::map<int, std::vector<std::string>> node_spans;
  std::map<std::string, std::vector<std::string>> doc_spans;  // final per-document span
  // doc -> node ids along its path, root excluded, in order
  std::map<std::string, std::vector<int>> doc_node_seq;
};

SmoothedIds smooth_ids(const std::map<std::string, C2TId>& ids, const ClusterTree& tree,
                       const Rewriter& rw);

struct TopologyReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// True iff smoothing kept the decoding-tree topology: equal terminal counts,
// fanout 1 strictly inside every node span, and branch structure at span
// boundaries matching the cluster tree's child structure.
TopologyReport verify_topology(const DocidTrie& original, const DocidTrie& smoothed,
                               const ClusterTree& tree, const SmoothedIds& spans,
                               const Tokenizer& smoothed_tok);

}  // namespace c2t
