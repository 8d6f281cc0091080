#include <doctest.h>

#include <algorithm>
#include <set>

#include "c2t/eval.hpp"
#include "c2t/labels.hpp"
#include "c2t/trie.hpp"

using namespace c2t;

namespace {

const std::map<std::string, std::string> kThreeDocids = {
    {"d1", "a-b"}, {"d2", "a-c"}, {"d3", "d"}};

std::set<TokenId> brute_force_allowed(const std::vector<std::vector<TokenId>>& sequences,
                                      const std::vector<TokenId>& prefix) {
  std::set<TokenId> out;
  for (const auto& seq : sequences) {
    if (seq.size() <= prefix.size()) continue;
    if (std::equal(prefix.begin(), prefix.end(), seq.begin())) out.insert(seq[prefix.size()]);
  }
  return out;
}

}  // namespace

TEST_CASE("word-mode tokenize splits on separators and appends EOS") {
  auto tok = Tokenizer::build({"phone-case"}, TokenizerMode::Word);
  auto tokens = tok.tokenize("phone-case");
  REQUIRE(tokens.size() == 3);
  CHECK(tok.token_text(tokens[0]) == "phone");
  CHECK(tok.token_text(tokens[1]) == "case");
  CHECK(tokens[2] == kEos);
}

TEST_CASE("tokenizing the empty string is an error, as is an unknown token") {
  auto tok = Tokenizer::build({"phone-case"}, TokenizerMode::Word);
  CHECK_THROWS_AS(tok.tokenize(""), Error);
  CHECK_THROWS_AS(tok.tokenize("tablet"), Error);
}

TEST_CASE("detokenize inverts tokenize on all docids of a 900-doc synthetic set") {
  SynthParams sp;
  sp.seed = 23;
  sp.n_docs = 900;
  auto [corpus, queries] = synth_corpus(sp);
  auto emb = embed_corpus(corpus, 128, 23);
  ClusterParams p;
  p.seed = 23;
  auto tree = build_tree(emb, corpus, p);
  auto paths = assign_numeric_paths(tree);
  auto table = extract_table(corpus, default_category_extractor());
  auto ids = render_c2t_ids(tree, paths, table, LabelConfig{});
  std::vector<std::string> docids;
  for (const auto& [doc_id, id] : ids) docids.push_back(id.full);
  for (auto mode : {TokenizerMode::Word, TokenizerMode::Segment}) {
    auto tok = Tokenizer::build(docids, mode);
    for (const auto& docid : docids) CHECK(tok.detokenize(tok.tokenize(docid)) == docid);
  }
}

TEST_CASE("three-docid trie has 3 terminals and root fanout {a, d}") {
  auto tok = Tokenizer::build({"a-b", "a-c", "d"}, TokenizerMode::Word);
  auto trie = DocidTrie::build(kThreeDocids, tok);
  CHECK(trie.terminal_count() == 3);
  auto root_fanout = trie.allowed_next({});
  std::set<std::string> texts;
  for (TokenId t : root_fanout) texts.insert(tok.token_text(t));
  CHECK(texts == std::set<std::string>{"a", "d"});
}

TEST_CASE("allowed_next after [a] is {b, c} in word mode") {
  auto tok = Tokenizer::build({"a-b", "a-c", "d"}, TokenizerMode::Word);
  auto trie = DocidTrie::build(kThreeDocids, tok);
  auto after_a = trie.allowed_next({tok.tokenize("a-b")[0]});
  std::set<std::string> texts;
  for (TokenId t : after_a) texts.insert(tok.token_text(t));
  CHECK(texts == std::set<std::string>{"b", "c"});
}

TEST_CASE("segment mode inserts SEP tokens at level boundaries") {
  auto tok = Tokenizer::build({"a-b", "a-c", "d"}, TokenizerMode::Segment);
  auto trie = DocidTrie::build(kThreeDocids, tok);
  auto after_a = trie.allowed_next({tok.tokenize("a-b")[0]});
  CHECK(after_a == std::set<TokenId>{kSep});
}

TEST_CASE("allowed_next on an exhausted or dead prefix is empty") {
  auto tok = Tokenizer::build({"a-b", "a-c", "d"}, TokenizerMode::Word);
  auto trie = DocidTrie::build(kThreeDocids, tok);
  auto full = tok.tokenize("a-b");  // includes EOS
  CHECK(trie.allowed_next(full).empty());
  CHECK(trie.allowed_next({9999}).empty());
}

TEST_CASE("complete returns the doc_id only for exact inserted sequences") {
  auto tok = Tokenizer::build({"a-b", "a-c", "d"}, TokenizerMode::Word);
  auto trie = DocidTrie::build(kThreeDocids, tok);
  auto full = tok.tokenize("a-b");
  CHECK(trie.complete(full) == "d1");
  auto prefix = full;
  prefix.pop_back();
  CHECK(trie.complete(prefix).empty());
  CHECK(trie.complete({9999, 9998}).empty());
}

TEST_CASE("a single docid builds a chain trie with interior fanout 1") {
  std::map<std::string, std::string> one = {{"d", "x-y-z"}};
  auto tok = Tokenizer::build({"x-y-z"}, TokenizerMode::Word);
  auto trie = DocidTrie::build(one, tok);
  CHECK(trie.terminal_count() == 1);
  std::vector<TokenId> prefix;
  auto tokens = tok.tokenize("x-y-z");
  for (TokenId t : tokens) {
    auto allowed = trie.allowed_next(prefix);
    CHECK(allowed == std::set<TokenId>{t});
    prefix.push_back(t);
  }
  CHECK(trie.allowed_next(prefix).empty());
}

TEST_CASE("duplicate docid strings are rejected") {
  std::map<std::string, std::string> dup = {{"d1", "same"}, {"d2", "same"}};
  auto tok = Tokenizer::build({"same"}, TokenizerMode::Word);
  CHECK_THROWS_AS(DocidTrie::build(dup, tok), Error);
}

TEST_CASE("allowed_next matches a brute-force scan on 1000 random prefixes") {
  SynthParams sp;
  sp.seed = 41;
  sp.n_docs = 300;
  auto [corpus, queries] = synth_corpus(sp);
  auto emb = embed_corpus(corpus, 64, 41);
  ClusterParams p;
  p.seed = 41;
  auto tree = build_tree(emb, corpus, p);
  auto paths = assign_numeric_paths(tree);
  auto table = extract_table(corpus, default_category_extractor());
  auto ids = render_c2t_ids(tree, paths, table, LabelConfig{});
  std::map<std::string, std::string> docids;
  std::vector<std::string> strings;
  for (const auto& [doc_id, id] : ids) {
    docids[doc_id] = id.full;
    strings.push_back(id.full);
  }
  auto tok = Tokenizer::build(strings, TokenizerMode::Word);
  auto trie = DocidTrie::build(docids, tok);
  std::vector<std::vector<TokenId>> sequences;
  for (const auto& s : strings) sequences.push_back(tok.tokenize(s));

  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& base = sequences[rng.next_index(sequences.size())];
    std::vector<TokenId> prefix(base.begin(),
                                base.begin() + static_cast<long>(rng.next_index(base.size() + 1)));
    if (rng.next_double() < 0.3 && !prefix.empty())
      prefix.back() = static_cast<TokenId>(rng.next_index(tok.vocab().size()));  // corruption
    CHECK(trie.allowed_next(prefix) == brute_force_allowed(sequences, prefix));
  }

  // complete() round-trips every docid
  for (std::size_t i = 0; i < strings.size(); ++i) {
    std::string expect;
    for (const auto& [doc_id, s] : docids)
      if (s == strings[i]) expect = doc_id;
    CHECK(trie.complete(sequences[i]) == expect);
  }

  // shape bound: edges never exceed total inserted tokens
  std::size_t total_tokens = 0;
  for (const auto& seq : sequences) total_tokens += seq.size();
  CHECK(trie.edge_count() <= total_tokens);
}
