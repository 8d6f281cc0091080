#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "c2t/util.hpp"

namespace c2t {

using TokenId = int;

inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kSep = 2;

enum class TokenizerMode { Segment, Word };

// Self-contained docid tokenizer. The vocab is defined by the docid set it is
// built from; query-time tokenization of an unknown token is an error.
class Tokenizer {
 public:
  // separators are removed and imply token boundaries (whitespace always splits).
  // In segment mode level_sep marks segment boundaries (emitted as SEP) and
  // intra_sep splits keywords inside a segment.
  static Tokenizer build(const std::vector<std::string>& docids, TokenizerMode mode,
                         const std::string& intra_sep = "-", const std::string& level_sep = "-");

  std::vector<TokenId> tokenize(const std::string& docid) const;
  std::string detokenize(const std::vector<TokenId>& tokens) const;

  TokenizerMode mode() const { return mode_; }
  const std::map<std::string, TokenId>& vocab() const { return vocab_; }
  const std::string& token_text(TokenId id) const;
  std::string vocab_to_tsv() const;

 private:
  TokenizerMode mode_ = TokenizerMode::Word;
  std::string intra_sep_ = "-";
  std::string level_sep_ = "-";
  std::string joiner_ = "-";  // word-mode detokenization joiner, detected at build
  std::map<std::string, TokenId> vocab_;
  std::vector<std::string> token_texts_;

  std::vector<std::string> split_words(const std::string& docid) const;
  std::vector<std::vector<std::string>> split_segments(const std::string& docid) const;
  TokenId lookup(const std::string& token) const;
  friend class TokenizerBuilder;
};

class DocidTrie {
 public:
  static DocidTrie build(const std::map<std::string, std::string>& docids, const Tokenizer& tok);

  // exact set of tokens extending the prefix; empty if the prefix is dead
  std::set<TokenId> allowed_next(const std::vector<TokenId>& prefix) const;
  // doc_id iff tokens exactly matches an inserted sequence, else empty
  std::string complete(const std::vector<TokenId>& tokens) const;

  std::size_t terminal_count() const { return terminals_; }
  std::size_t edge_count() const;
  std::string to_json() const;

 private:
  struct Node {
    std::map<TokenId, int> children;
    std::string doc_id;  // non-empty at terminals
  };
  std::vector<Node> nodes_{Node{}};
  std::size_t terminals_ = 0;

  int walk(const std::vector<TokenId>& prefix) const;
  void insert(const std::vector<TokenId>& tokens, const std::string& doc_id);
};

}  // namespace c2t
