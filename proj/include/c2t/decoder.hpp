#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "c2t/trie.hpp"

namespace c2t {

// Next-token distribution restricted to the allowed set. Implementations must
// return a score for exactly the allowed tokens, normalized over that set.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::map<TokenId, double> score_next(const std::string& query,
                                               const std::vector<TokenId>& prefix,
                                               const std::set<TokenId>& allowed) const = 0;
};

std::unique_ptr<Scorer> uniform_scorer();

// Conditional count model: (query term, token context of length <= 2, next token).
// Desk-scale stand-in for a fine-tuned generative backbone.
class NgramScorerModel : public Scorer {
 public:
  explicit NgramScorerModel(double alpha = 0.1) : alpha_(alpha) {}

  // one observation: for each position in the gold token sequence, every query
  // term is crossed with the context (suffix of length min(2, pos)) and gold token
  void observe(const std::string& query, const std::vector<TokenId>& gold_tokens);

  std::map<TokenId, double> score_next(const std::string& query,
                                       const std::vector<TokenId>& prefix,
                                       const std::set<TokenId>& allowed) const override;

  double alpha() const { return alpha_; }
  // exposed for protocol assertions and serialization
  const std::map<std::string, std::map<std::string, std::map<TokenId, int>>>& counts() const {
    return counts_;
  }
  bool has_term(const std::string& term) const { return counts_.count(term) > 0; }

  std::string to_json() const;
  static NgramScorerModel from_json(const std::string& content);

 private:
  double alpha_;
  // term -> context key -> next token -> count
  std::map<std::string, std::map<std::string, std::map<TokenId, int>>> counts_;

  static std::string context_key(const std::vector<TokenId>& prefix);
};

NgramScorerModel train_ngram(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::map<std::string, std::string>& docids,
                             const Tokenizer& tok, double alpha);

struct DecodeResult {
  std::string query;
  int beam_width = 0;
  std::vector<std::pair<std::string, double>> ranked;  // (doc_id, total log-prob), non-increasing
};

DecodeResult beam_search(const std::string& query, const Scorer& scorer, const DocidTrie& trie,
                         int beam_width, int max_len);

}  // namespace c2t
