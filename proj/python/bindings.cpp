#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "c2t/config.hpp"
#include "c2t/smoothing.hpp"
#include "c2t/trie.hpp"

namespace py = pybind11;
using namespace c2t;

namespace {

// convenience wrapper holding one scheme's decode stack
struct Index {
  std::map<std::string, std::string> docids;
  Tokenizer tok;
  DocidTrie trie;
  NgramScorerModel model;

  Index(std::map<std::string, std::string> docids_in, const std::string& intra_sep,
        const std::string& level_sep, double alpha)
      : docids(std::move(docids_in)),
        tok(Tokenizer::build(
            [this] {
              std::vector<std::string> all;
              for (const auto& [doc_id, docid] : docids) all.push_back(docid);
              return all;
            }(),
            TokenizerMode::Word, intra_sep, level_sep)),
        trie(DocidTrie::build(docids, tok)),
        model(alpha) {}

  void train(const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [query, doc_id] : pairs) {
      auto it = docids.find(doc_id);
      if (it == docids.end()) throw Error("train: unknown doc_id \"" + doc_id + "\"");
      model.observe(query, tok.tokenize(it->second));
    }
  }

  std::vector<std::pair<std::string, double>> decode(const std::string& query, int beam_width,
                                                     int max_len) const {
    return beam_search(query, model, trie, beam_width, max_len).ranked;
  }
};

}  // namespace

PYBIND11_MODULE(_c2t, m) {
  m.doc() = "C2T-ID toolkit: hierarchical codebook docids and trie-constrained decoding";

  py::register_exception<Error>(m, "C2TError");

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def_readwrite("doc_id", &Document::doc_id)
      .def_readwrite("title", &Document::title)
      .def_readwrite("text", &Document::text)
      .def_readwrite("metadata", &Document::metadata);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<std::vector<Document>>())
      .def("__len__", &Corpus::size)
      .def("documents", &Corpus::documents)
      .def("to_jsonl", [](const Corpus& c) { return corpus_to_jsonl(c); });

  m.def("parse_corpus_jsonl",
        [](const std::string& content) { return parse_corpus_jsonl(content, "<memory>"); });
  m.def("ingest_jsonl", &ingest_jsonl);

  py::class_<ClusterTree>(m, "ClusterTree")
      .def("to_json", &tree_to_json)
      .def_property_readonly("node_count",
                             [](const ClusterTree& t) { return t.nodes.size(); });

  m.def(
      "synth_corpus",
      [](std::uint64_t seed, int n_docs, int n_topics, int vocab_size, int queries_per_doc) {
        SynthParams p{seed, n_docs, n_topics, vocab_size, queries_per_doc};
        auto [corpus, queries] = synth_corpus(p);
        return std::make_pair(corpus, queries.entries);
      },
      py::arg("seed") = 7, py::arg("n_docs") = 500, py::arg("n_topics") = 10,
      py::arg("vocab_size") = 600, py::arg("queries_per_doc") = 5);

  m.def(
      "build_docids",
      [](const Corpus& corpus, const std::string& scheme, int k, int c, std::uint64_t seed,
         int top_k, int embed_dim) {
        ExperimentParams params;
        params.cluster.k = k;
        params.cluster.c = c;
        params.cluster.seed = seed;
        params.label.top_k = top_k;
        params.embed_dim = embed_dim;
        params.extractor = default_category_extractor();
        auto emb = embed_corpus(corpus, static_cast<std::size_t>(embed_dim), seed);
        auto tree = build_tree(emb, corpus, params.cluster);
        auto paths = assign_numeric_paths(tree);
        auto table = extract_table(corpus, params.extractor);
        auto art = build_scheme_docids(scheme, corpus, tree, paths, table, params);
        return std::make_tuple(art.docids, art.intra_sep, art.level_sep);
      },
      py::arg("corpus"), py::arg("scheme") = "c2t", py::arg("k") = 30, py::arg("c") = 30,
      py::arg("seed") = 7, py::arg("top_k") = 3, py::arg("embed_dim") = 512);

  py::class_<Index>(m, "Index")
      .def(py::init<std::map<std::string, std::string>, const std::string&, const std::string&,
                    double>(),
           py::arg("docids"), py::arg("intra_sep") = "-", py::arg("level_sep") = "-",
           py::arg("alpha") = 0.1)
      .def("train", &Index::train)
      .def("decode", &Index::decode, py::arg("query"), py::arg("beam_width") = 20,
           py::arg("max_len") = 64)
      .def("allowed_next",
           [](const Index& idx, const std::vector<TokenId>& prefix) {
             auto allowed = idx.trie.allowed_next(prefix);
             return std::vector<TokenId>(allowed.begin(), allowed.end());
           })
      .def("tokenize", [](const Index& idx, const std::string& s) { return idx.tok.tokenize(s); })
      .def("detokenize",
           [](const Index& idx, const std::vector<TokenId>& t) { return idx.tok.detokenize(t); })
      .def_property_readonly("terminal_count",
                             [](const Index& idx) { return idx.trie.terminal_count(); });

  m.def("hits_at_k", &hits_at_k);
  m.def("mrr_at_k", &mrr_at_k);

  m.def(
      "run_experiment",
      [](const Corpus& corpus, const std::vector<std::pair<std::string, std::string>>& queries,
         const std::vector<std::string>& schemes, std::uint64_t seed, int k, int c, int beam_width,
         const std::string& mode) {
        ExperimentParams params;
        params.cluster.seed = seed;
        params.cluster.k = k;
        params.cluster.c = c;
        params.beam_width = beam_width;
        params.extractor = default_category_extractor();
        QuerySet qs;
        qs.entries = queries;
        EvalMode m = mode == "zero_shot" ? EvalMode::ZeroShot : EvalMode::Supervised;
        auto report = run_experiment(corpus, qs, schemes, params, m);
        std::map<std::string, std::map<std::string, double>> out;
        for (const auto& [name, sm] : report.per_scheme)
          out[name] = {{"hits@5", sm.hits5}, {"hits@20", sm.hits20}, {"mrr@20", sm.mrr20}};
        return out;
      },
      py::arg("corpus"), py::arg("queries"), py::arg("schemes"), py::arg("seed") = 7,
      py::arg("k") = 30, py::arg("c") = 30, py::arg("beam_width") = 20,
      py::arg("mode") = "supervised");
}
