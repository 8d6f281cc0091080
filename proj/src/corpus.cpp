#include "c2t/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  std::sort(docs_.begin(), docs_.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    auto [it, inserted] = index_.emplace(docs_[i].doc_id, i);
    if (!inserted) throw Error("duplicate doc_id \"" + docs_[i].doc_id + "\"");
  }
}

const Document& Corpus::at(const std::string& doc_id) const {
  auto it = index_.find(doc_id);
  if (it == index_.end()) throw Error("unknown doc_id \"" + doc_id + "\"");
  return docs_[it->second];
}

bool Corpus::contains(const std::string& doc_id) const { return index_.count(doc_id) > 0; }

static std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus parse_corpus_jsonl(const std::string& content, const std::string& origin) {
  std::vector<Document> docs;
  std::map<std::string, std::size_t> seen;  // doc_id -> first line number
  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(origin + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("doc_id") || !rec["doc_id"].is_string())
      throw Error(origin + ":" + std::to_string(lineno) + ": record missing string \"doc_id\"");
    if (!rec.contains("text") || !rec["text"].is_string())
      throw Error(origin + ":" + std::to_string(lineno) + ": record missing string \"text\"");
    Document d;
    d.doc_id = trim(rec["doc_id"].get<std::string>());
    if (d.doc_id.empty())
      throw Error(origin + ":" + std::to_string(lineno) + ": empty doc_id");
    if (auto it = seen.find(d.doc_id); it != seen.end())
      throw Error(origin + ": duplicate doc_id \"" + d.doc_id + "\" on lines " +
                  std::to_string(it->second) + " and " + std::to_string(lineno));
    seen.emplace(d.doc_id, lineno);
    d.text = trim(rec["text"].get<std::string>());
    if (rec.contains("title")) {
      if (!rec["title"].is_string())
        throw Error(origin + ":" + std::to_string(lineno) + ": \"title\" must be a string");
      d.title = trim(rec["title"].get<std::string>());
    }
    if (rec.contains("metadata")) {
      if (!rec["metadata"].is_object())
        throw Error(origin + ":" + std::to_string(lineno) + ": \"metadata\" must be an object");
      for (auto& [field, values] : rec["metadata"].items()) {
        if (trim(field).empty())
          throw Error(origin + ":" + std::to_string(lineno) + ": empty metadata field name");
        if (!values.is_array())
          throw Error(origin + ":" + std::to_string(lineno) + ": metadata field \"" + field +
                      "\" must be a list of strings");
        std::vector<std::string> vs;
        for (const auto& v : values) {
          if (!v.is_string())
            throw Error(origin + ":" + std::to_string(lineno) + ": metadata field \"" + field +
                        "\" must be a list of strings");
          std::string norm = lowercase(trim(v.get<std::string>()));
          if (!norm.empty()) vs.push_back(std::move(norm));
        }
        if (!vs.empty()) d.metadata[trim(field)] = std::move(vs);
      }
    }
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw Error(origin + ": empty corpus");
  return Corpus(std::move(docs));
}

Corpus ingest_jsonl(const std::string& path) {
  return parse_corpus_jsonl(read_file(path), path);
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const auto& d : corpus.documents()) {
    json rec;
    rec["doc_id"] = d.doc_id;
    rec["title"] = d.title;
    rec["text"] = d.text;
    json meta = json::object();
    for (const auto& [field, values] : d.metadata) meta[field] = values;
    rec["metadata"] = meta;
    out << rec.dump() << "\n";
  }
  return out.str();
}

void write_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << corpus_to_jsonl(corpus);
}

EmbeddingMatrix embed_corpus(const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw Error("embed_corpus: dim must be >= 2");
  if (corpus.size() == 0) throw Error("embed_corpus: empty corpus");
  EmbeddingMatrix m;
  m.dim = dim;
  for (const auto& d : corpus.documents()) {
    std::vector<double> row(dim, 0.0);
    auto tokens = word_tokens(d.title + " " + d.text);
    if (tokens.empty()) throw Error("embed_corpus: document \"" + d.doc_id + "\" has no tokens");
    for (const auto& t : tokens) row[hash64(t, seed) % dim] += 1.0;
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : row) v /= norm;
    m.rows.emplace(d.doc_id, std::move(row));
  }
  return m;
}

EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus) {
  EmbeddingMatrix m;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    std::string doc_id = rec.at("doc_id").get<std::string>();
    std::vector<double> vec = rec.at("vector").get<std::vector<double>>();
    if (m.dim == 0) m.dim = vec.size();
    if (vec.size() != m.dim || m.dim == 0)
      throw Error(path + ":" + std::to_string(lineno) + ": inconsistent vector dimension");
    for (double v : vec)
      if (!std::isfinite(v))
        throw Error(path + ":" + std::to_string(lineno) + ": non-finite vector value");
    if (!m.rows.emplace(doc_id, std::move(vec)).second)
      throw Error(path + ": duplicate vector for doc_id \"" + doc_id + "\"");
  }
  for (const auto& d : corpus.documents())
    if (!m.rows.count(d.doc_id))
      throw Error(path + ": missing vector for doc_id \"" + d.doc_id + "\"");
  return m;
}

}  // namespace c2t
