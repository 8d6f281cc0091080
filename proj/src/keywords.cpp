#include "c2t/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

std::vector<std::pair<std::string, int>> rank_and_truncate(const std::map<std::string, int>& counts,
                                                           int cap) {
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(out.size()) > cap) out.resize(static_cast<std::size_t>(cap));
  return out;
}

}  // namespace

std::vector<std::pair<std::string, int>> extract_category_keywords(const Document& doc,
                                                                   const ExtractorConfig& cfg) {
  std::map<std::string, int> counts;
  for (const auto& field : cfg.fields) {
    auto it = doc.metadata.find(field);
    if (it == doc.metadata.end()) continue;
    for (const auto& value : it->second) {
      // whole labels, already lowercased at ingest
      if (cfg.blocklist.count(value)) continue;
      ++counts[value];
    }
  }
  return rank_and_truncate(counts, cfg.max_keywords_per_doc);
}

std::vector<std::pair<std::string, int>> extract_attribute_keywords(const Document& doc,
                                                                    const ExtractorConfig& cfg) {
  std::map<std::string, int> counts;
  for (const auto& field : cfg.fields) {
    auto it = doc.metadata.find(field);
    if (it == doc.metadata.end()) continue;
    for (const auto& value : it->second) {
      for (const auto& tok : word_tokens(value)) {
        if (tok.size() < 2) continue;
        if (cfg.stopwords.count(tok)) continue;
        ++counts[tok];
      }
    }
  }
  return rank_and_truncate(counts, cfg.max_keywords_per_doc);
}

KeywordTable extract_table(const Corpus& corpus, const ExtractorConfig& cfg) {
  if (cfg.fields.empty()) throw Error("extract_table: field list must be non-empty");
  if (cfg.max_keywords_per_doc < 1) throw Error("extract_table: max_keywords_per_doc must be >= 1");
  KeywordTable table;
  for (const auto& doc : corpus.documents()) {
    auto kws = cfg.strategy == ExtractorStrategy::Category ? extract_category_keywords(doc, cfg)
                                                           : extract_attribute_keywords(doc, cfg);
    if (kws.empty()) {
      // fallback: title tokens under the attribute rules, else the constant "doc"
      std::map<std::string, int> counts;
      for (const auto& tok : word_tokens(doc.title)) {
        if (tok.size() < 2 || cfg.stopwords.count(tok)) continue;
        ++counts[tok];
      }
      kws = rank_and_truncate(counts, cfg.max_keywords_per_doc);
      if (kws.empty()) kws = {{"doc", 1}};
    }
    table.per_doc.emplace(doc.doc_id, std::move(kws));
  }
  return table;
}

std::set<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open wordlist: " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = lowercase(trim(line));
    if (!entry.empty()) out.insert(entry);
  }
  return out;
}

std::string keyword_table_to_jsonl(const KeywordTable& table) {
  std::ostringstream out;
  for (const auto& [doc_id, kws] : table.per_doc) {
    json rec;
    rec["doc_id"] = doc_id;
    json arr = json::array();
    for (const auto& [kw, count] : kws) arr.push_back(json::array({kw, count}));
    rec["keywords"] = arr;
    out << rec.dump() << "\n";
  }
  return out.str();
}

KeywordTable keyword_table_from_jsonl(const std::string& content) {
  KeywordTable table;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json rec = json::parse(line);
    std::vector<std::pair<std::string, int>> kws;
    for (const auto& pair : rec.at("keywords"))
      kws.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<int>());
    table.per_doc.emplace(rec.at("doc_id").get<std::string>(), std::move(kws));
  }
  return table;
}

}  // namespace c2t
