#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "c2t/corpus.hpp"

namespace c2t {

enum class ExtractorStrategy { Category, Attribute };

struct ExtractorConfig {
  ExtractorStrategy strategy = ExtractorStrategy::Category;
  std::vector<std::string> fields;
  std::set<std::string> blocklist;  // whole labels, compared lowercase
  std::set<std::string> stopwords;
  int max_keywords_per_doc = 16;
};

struct KeywordTable {
  // doc_id -> keywords sorted (count desc, keyword asc)
  std::map<std::string, std::vector<std::pair<std::string, int>>> per_doc;
};

std::vector<std::pair<std::string, int>> extract_category_keywords(const Document& doc,
                                                                   const ExtractorConfig& cfg);
std::vector<std::pair<std::string, int>> extract_attribute_keywords(const Document& doc,
                                                                    const ExtractorConfig& cfg);
KeywordTable extract_table(const Corpus& corpus, const ExtractorConfig& cfg);

std::set<std::string> load_wordlist(const std::string& path);
std::string keyword_table_to_jsonl(const KeywordTable& table);
KeywordTable keyword_table_from_jsonl(const std::string& content);

}  // namespace c2t
