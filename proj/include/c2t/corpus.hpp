#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "c2t/util.hpp"

namespace c2t {

struct Document {
  std::string doc_id;
  std::string title;
  std::string text;
  // field name -> values, normalized (lowercased, trimmed) at ingest
  std::map<std::string, std::vector<std::string>> metadata;
};

// Immutable after construction; documents sorted by doc_id.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> docs);

  std::size_t size() const { return docs_.size(); }
  const std::vector<Document>& documents() const { return docs_; }
  const Document& at(const std::string& doc_id) const;
  bool contains(const std::string& doc_id) const;

 private:
  std::vector<Document> docs_;
  std::map<std::string, std::size_t> index_;
};

struct EmbeddingMatrix {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> rows;
};

Corpus ingest_jsonl(const std::string& path);
Corpus parse_corpus_jsonl(const std::string& content, const std::string& origin);
void write_corpus_jsonl(const Corpus& corpus, const std::string& path);
std::string corpus_to_jsonl(const Corpus& corpus);

// Seeded hashed term-frequency embedding over title+text, L2-normalized.
EmbeddingMatrix embed_corpus(const Corpus& corpus, std::size_t dim, std::uint64_t seed);

// External vectors, one JSON record per line: {"doc_id":..., "vector":[...]}
EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus);

}  // namespace c2t
