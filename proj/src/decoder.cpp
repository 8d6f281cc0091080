#include "c2t/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

constexpr double kLogZero = -1e9;  // finite stand-in for log(0)

double logsumexp(const std::map<TokenId, double>& scores) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& [t, v] : scores) mx = std::max(mx, v);
  double s = 0.0;
  for (const auto& [t, v] : scores) s += std::exp(v - mx);
  return mx + std::log(s);
}

void normalize(std::map<TokenId, double>& scores) {
  double z = logsumexp(scores);
  for (auto& [t, v] : scores) v -= z;
}

class UniformScorer : public Scorer {
 public:
  std::map<TokenId, double> score_next(const std::string&, const std::vector<TokenId>&,
                                       const std::set<TokenId>& allowed) const override {
    if (allowed.empty()) throw Error("uniform_scorer: empty allowed set");
    std::map<TokenId, double> out;
    double lp = -std::log(static_cast<double>(allowed.size()));
    for (TokenId t : allowed) out[t] = lp;
    return out;
  }
};

std::vector<std::string> query_terms(const std::string& query) {
  auto toks = word_tokens(query);
  std::sort(toks.begin(), toks.end());
  toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
  return toks;
}

}  // namespace

std::unique_ptr<Scorer> uniform_scorer() { return std::make_unique<UniformScorer>(); }

std::string NgramScorerModel::context_key(const std::vector<TokenId>& prefix) {
  std::size_t n = std::min<std::size_t>(2, prefix.size());
  std::string key;
  for (std::size_t i = prefix.size() - n; i < prefix.size(); ++i) {
    if (!key.empty()) key += ",";
    key += std::to_string(prefix[i]);
  }
  return key;
}

void NgramScorerModel::observe(const std::string& query, const std::vector<TokenId>& gold_tokens) {
  auto terms = query_terms(query);
  std::vector<TokenId> prefix;
  for (TokenId gold : gold_tokens) {
    std::string ctx = context_key(prefix);
    for (const auto& term : terms) ++counts_[term][ctx][gold];
    prefix.push_back(gold);
  }
}

std::map<TokenId, double> NgramScorerModel::score_next(const std::string& query,
                                                       const std::vector<TokenId>& prefix,
                                                       const std::set<TokenId>& allowed) const {
  if (allowed.empty()) throw Error("NgramScorerModel: empty allowed set");
  auto terms = query_terms(query);
  std::string ctx = context_key(prefix);
  double uniform_p = 1.0 / static_cast<double>(allowed.size());
  std::map<TokenId, double> mix;
  for (TokenId t : allowed) mix[t] = 0.0;
  // weighted geometric pooling over query terms: log-conditionals combine
  // with weights that sum to one and favour the terms whose conditional is
  // most concentrated at this step, so the decisive terms keep their full
  // sharpness while flat, evidence-free terms barely dilute them; with a
  // single term the weight is one and this is that term's conditional exactly
  struct TermVote {
    std::map<TokenId, double> logp;
    double weight = 0.0;
  };
  std::vector<TermVote> votes;
  for (const auto& term : terms) {
    auto term_it = counts_.find(term);
    const std::map<TokenId, int>* ctx_counts = nullptr;
    if (term_it != counts_.end()) {
      auto ctx_it = term_it->second.find(ctx);
      if (ctx_it != term_it->second.end()) ctx_counts = &ctx_it->second;
    }
    double denom = alpha_ * static_cast<double>(allowed.size());
    if (ctx_counts)
      for (TokenId t : allowed) {
        auto it = ctx_counts->find(t);
        if (it != ctx_counts->end()) denom += it->second;
      }
    TermVote vote;
    double concentration = 0.0;
    for (TokenId t : allowed) {
      double c = alpha_;
      if (ctx_counts) {
        auto it = ctx_counts->find(t);
        if (it != ctx_counts->end()) c += it->second;
      }
      double p = denom > 0.0 ? c / denom : uniform_p;
      vote.logp[t] = p > 0.0 ? std::log(p) : kLogZero;
      concentration += p * p;
    }
    // participation-ratio concentration, raised so the sharpest terms dominate
    vote.weight = std::pow(concentration, 6.0);
    votes.push_back(std::move(vote));
  }
  std::map<TokenId, double> total;
  double weight_sum = 0.0;
  for (const auto& vote : votes) weight_sum += vote.weight;
  if (terms.empty() || weight_sum <= 0.0) {
    for (TokenId t : allowed) total[t] = std::log(uniform_p);
    return total;
  }
  for (const auto& vote : votes)
    for (const auto& [t, lp] : vote.logp) mix[t] += (vote.weight / weight_sum) * lp;
  for (const auto& [t, lp] : mix) total[t] = lp;
  normalize(total);
  return total;
}

std::string NgramScorerModel::to_json() const {
  json doc;
  doc["alpha"] = alpha_;
  json terms = json::object();
  for (const auto& [term, ctxs] : counts_) {
    json ctx_obj = json::object();
    for (const auto& [ctx, toks] : ctxs) {
      json tok_obj = json::object();
      for (const auto& [t, c] : toks) tok_obj[std::to_string(t)] = c;
      ctx_obj[ctx.empty() ? "^" : ctx] = tok_obj;
    }
    terms[term] = ctx_obj;
  }
  doc["counts"] = terms;
  return doc.dump() + "\n";
}

NgramScorerModel NgramScorerModel::from_json(const std::string& content) {
  json doc = json::parse(content);
  NgramScorerModel model(doc.at("alpha").get<double>());
  for (const auto& [term, ctxs] : doc.at("counts").items())
    for (const auto& [ctx, toks] : ctxs.items())
      for (const auto& [t, c] : toks.items())
        model.counts_[term][ctx == "^" ? "" : ctx][std::stoi(t)] = c.get<int>();
  return model;
}

NgramScorerModel train_ngram(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::map<std::string, std::string>& docids,
                             const Tokenizer& tok, double alpha) {
  NgramScorerModel model(alpha);
  for (const auto& [query, doc_id] : pairs) {
    auto it = docids.find(doc_id);
    if (it == docids.end()) throw Error("train_ngram: unknown doc_id \"" + doc_id + "\"");
    model.observe(query, tok.tokenize(it->second));
  }
  return model;
}

DecodeResult beam_search(const std::string& query, const Scorer& scorer, const DocidTrie& trie,
                         int beam_width, int max_len) {
  if (beam_width < 1) throw Error("beam_search: beam_width must be >= 1");
  if (trie.terminal_count() == 0) throw Error("beam_search: empty trie");

  struct Beam {
    std::vector<TokenId> tokens;
    double logp = 0.0;
    bool finished = false;
    std::string doc_id;
  };
  std::vector<Beam> beams{Beam{}};

  for (int step = 0; step < max_len; ++step) {
    struct Candidate {
      Beam beam;
      TokenId last = -1;
      std::size_t order = 0;
    };
    std::vector<Candidate> candidates;
    bool any_live = false;
    for (const auto& b : beams) {
      if (b.finished) {
        candidates.push_back({b, -1, candidates.size()});
        continue;
      }
      auto allowed = trie.allowed_next(b.tokens);
      if (allowed.empty()) continue;  // dead prefix, prune
      any_live = true;
      auto scores = scorer.score_next(query, b.tokens, allowed);
      // scorer contract: exactly the allowed set, finite, normalized over it
      if (scores.size() != allowed.size())
        throw Error("beam_search: scorer returned a wrong token set");
      for (const auto& [t, lp] : scores) {
        if (!allowed.count(t)) throw Error("beam_search: scorer scored a disallowed token");
        if (!std::isfinite(lp)) throw Error("beam_search: scorer returned non-finite score");
      }
      if (std::abs(logsumexp(scores)) > 1e-6)
        throw Error("beam_search: scorer distribution not normalized over the allowed set");
      for (const auto& [t, lp] : scores) {
        Candidate c;
        c.beam = b;
        c.beam.tokens.push_back(t);
        c.beam.logp += lp;
        if (t == kEos) {
          c.beam.doc_id = trie.complete(c.beam.tokens);
          c.beam.finished = !c.beam.doc_id.empty();
        }
        c.last = t;
        c.order = candidates.size();
        candidates.push_back(std::move(c));
      }
    }
    if (!any_live) break;
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.beam.logp != b.beam.logp) return a.beam.logp > b.beam.logp;
      if (a.last != b.last) return a.last < b.last;
      return a.order < b.order;
    });
    if (static_cast<int>(candidates.size()) > beam_width)
      candidates.resize(static_cast<std::size_t>(beam_width));
    beams.clear();
    for (auto& c : candidates) beams.push_back(std::move(c.beam));
  }

  DecodeResult result;
  result.query = query;
  result.beam_width = beam_width;
  std::vector<Beam> done;
  for (auto& b : beams)
    if (b.finished) done.push_back(std::move(b));
  std::sort(done.begin(), done.end(), [](const Beam& a, const Beam& b) {
    if (a.logp != b.logp) return a.logp > b.logp;
    return a.tokens < b.tokens;
  });
  for (auto& b : done) result.ranked.emplace_back(std::move(b.doc_id), b.logp);
  return result;
}

}  // namespace c2t
