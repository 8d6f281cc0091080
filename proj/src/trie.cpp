#include "c2t/trie.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

// split on any of the separator strings plus whitespace, dropping empties
std::vector<std::string> split_on(const std::string& s, const std::vector<std::string>& seps) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  while (i < s.size()) {
    bool boundary = false;
    for (const auto& sep : seps) {
      if (!sep.empty() && s.compare(i, sep.size(), sep) == 0) {
        i += sep.size();
        boundary = true;
        break;
      }
    }
    if (!boundary && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      boundary = true;
    }
    if (boundary) {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
      continue;
    }
    cur.push_back(s[i]);
    ++i;
  }
  if (!cur.empty()) out.push_back(std::move(cur));
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

std::vector<std::string> Tokenizer::split_words(const std::string& docid) const {
  return split_on(docid, {intra_sep_, level_sep_});
}

std::vector<std::vector<std::string>> Tokenizer::split_segments(const std::string& docid) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& seg : split_on(docid, {level_sep_})) out.push_back(split_on(seg, {intra_sep_}));
  return out;
}

Tokenizer Tokenizer::build(const std::vector<std::string>& docids, TokenizerMode mode,
                           const std::string& intra_sep, const std::string& level_sep) {
  if (intra_sep.empty() || level_sep.empty())
    throw Error("Tokenizer: separators must be non-empty");
  Tokenizer tok;
  tok.mode_ = mode;
  tok.intra_sep_ = intra_sep;
  tok.level_sep_ = level_sep;

  std::set<std::string> words;
  for (const auto& docid : docids) {
    if (docid.empty()) throw Error("Tokenizer: empty docid");
    for (const auto& w : tok.split_words(docid)) words.insert(w);
  }
  tok.token_texts_ = {"<bos>", "<eos>", "<sep>"};
  for (const auto& w : words) {
    tok.vocab_.emplace(w, static_cast<TokenId>(tok.token_texts_.size()));
    tok.token_texts_.push_back(w);
  }

  if (mode == TokenizerMode::Word) {
    // pick the joiner that makes detokenize an exact inverse on this docid set
    std::vector<std::string> candidates = {intra_sep, level_sep, " "};
    bool found = false;
    for (const auto& cand : candidates) {
      bool ok = true;
      for (const auto& docid : docids) {
        if (join(tok.split_words(docid), cand) != docid) {
          ok = false;
          break;
        }
      }
      if (ok) {
        tok.joiner_ = cand;
        found = true;
        break;
      }
    }
    if (!found) throw Error("Tokenizer: docid set is not invertible in word mode");
  } else {
    for (const auto& docid : docids)
      if (tok.detokenize(tok.tokenize(docid)) != docid)
        throw Error("Tokenizer: docid \"" + docid + "\" is not invertible in segment mode");
  }
  return tok;
}

TokenId Tokenizer::lookup(const std::string& token) const {
  auto it = vocab_.find(token);
  if (it == vocab_.end()) throw Error("Tokenizer: unknown token \"" + token + "\"");
  return it->second;
}

std::vector<TokenId> Tokenizer::tokenize(const std::string& docid) const {
  if (docid.empty()) throw Error("Tokenizer: cannot tokenize empty docid");
  std::vector<TokenId> out;
  if (mode_ == TokenizerMode::Word) {
    for (const auto& w : split_words(docid)) out.push_back(lookup(w));
  } else {
    auto segments = split_segments(docid);
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (s) out.push_back(kSep);
      for (const auto& w : segments[s]) out.push_back(lookup(w));
    }
  }
  out.push_back(kEos);
  return out;
}

std::string Tokenizer::detokenize(const std::vector<TokenId>& tokens) const {
  std::vector<std::string> segments;
  std::vector<std::string> cur;
  for (TokenId t : tokens) {
    if (t == kEos) break;
    if (t == kSep) {
      segments.push_back(join(cur, intra_sep_));
      cur.clear();
      continue;
    }
    cur.push_back(token_text(t));
  }
  if (mode_ == TokenizerMode::Word) return join(cur, joiner_);
  segments.push_back(join(cur, intra_sep_));
  return join(segments, level_sep_);
}

const std::string& Tokenizer::token_text(TokenId id) const {
  if (id < 0 || id >= static_cast<TokenId>(token_texts_.size()))
    throw Error("Tokenizer: token id out of range: " + std::to_string(id));
  return token_texts_[static_cast<std::size_t>(id)];
}

std::string Tokenizer::vocab_to_tsv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < token_texts_.size(); ++i) out << token_texts_[i] << "\t" << i << "\n";
  return out.str();
}

void DocidTrie::insert(const std::vector<TokenId>& tokens, const std::string& doc_id) {
  int cur = 0;
  for (TokenId t : tokens) {
    auto it = nodes_[cur].children.find(t);
    if (it == nodes_[cur].children.end()) {
      int next = static_cast<int>(nodes_.size());
      nodes_[cur].children.emplace(t, next);
      nodes_.push_back(Node{});
      cur = next;
    } else {
      cur = it->second;
    }
  }
  nodes_[cur].doc_id = doc_id;
  ++terminals_;
}

DocidTrie DocidTrie::build(const std::map<std::string, std::string>& docids, const Tokenizer& tok) {
  std::set<std::string> strings;
  for (const auto& [doc_id, docid] : docids)
    if (!strings.insert(docid).second)
      throw Error("DocidTrie: duplicate docid string \"" + docid + "\"");
  DocidTrie trie;
  for (const auto& [doc_id, docid] : docids) trie.insert(tok.tokenize(docid), doc_id);
  return trie;
}

int DocidTrie::walk(const std::vector<TokenId>& prefix) const {
  int cur = 0;
  for (TokenId t : prefix) {
    auto it = nodes_[cur].children.find(t);
    if (it == nodes_[cur].children.end()) return -1;
    cur = it->second;
  }
  return cur;
}

std::set<TokenId> DocidTrie::allowed_next(const std::vector<TokenId>& prefix) const {
  int node = walk(prefix);
  std::set<TokenId> out;
  if (node < 0) return out;
  for (const auto& [t, child] : nodes_[node].children) out.insert(t);
  return out;
}

std::string DocidTrie::complete(const std::vector<TokenId>& tokens) const {
  int node = walk(tokens);
  if (node < 0) return {};
  return nodes_[node].doc_id;
}

std::size_t DocidTrie::edge_count() const {
  std::size_t edges = 0;
  for (const auto& n : nodes_) edges += n.children.size();
  return edges;
}

std::string DocidTrie::to_json() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    json rec;
    json children = json::object();
    for (const auto& [t, child] : n.children) children[std::to_string(t)] = child;
    rec["children"] = children;
    if (!n.doc_id.empty()) rec["doc_id"] = n.doc_id;
    nodes.push_back(rec);
  }
  json doc;
  doc["nodes"] = nodes;
  return doc.dump(2) + "\n";
}

}  // namespace c2t
