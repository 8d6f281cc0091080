#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "c2t/config.hpp"
#include "c2t/smoothing.hpp"
#include "c2t/trie.hpp"

namespace fs = std::filesystem;
using namespace c2t;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

PipelineConfig resolve_config(const std::string& config_path, std::optional<std::uint64_t> seed) {
  PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  if (cfg.experiment.extractor.fields.empty()) cfg.experiment.extractor = default_category_extractor();
  if (seed) {
    cfg.experiment.cluster.seed = *seed;
    cfg.source.synth.seed = *seed;
  }
  return cfg;
}

std::pair<Corpus, QuerySet> load_source(const PipelineConfig& cfg) {
  if (cfg.source.kind == CorpusSource::Kind::Synth) {
    SynthParams p = cfg.source.synth;
    p.seed = cfg.experiment.cluster.seed;
    return synth_corpus(p);
  }
  Corpus corpus = ingest_jsonl(cfg.source.corpus_path);
  QuerySet queries;
  if (!cfg.source.queries_path.empty())
    queries = query_set_from_jsonl(read_file(cfg.source.queries_path));
  return {std::move(corpus), std::move(queries)};
}

EmbeddingMatrix load_embeddings(const PipelineConfig& cfg, const Corpus& corpus) {
  if (cfg.source.kind == CorpusSource::Kind::Jsonl && !cfg.source.embeddings_path.empty())
    return import_embeddings(cfg.source.embeddings_path, corpus);
  return embed_corpus(corpus, static_cast<std::size_t>(cfg.experiment.embed_dim),
                      cfg.experiment.cluster.seed);
}

TokenizerMode parse_tok_mode(const std::string& mode) {
  if (mode == "word") return TokenizerMode::Word;
  if (mode == "segment") return TokenizerMode::Segment;
  throw Error("tokenizer mode must be \"word\" or \"segment\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C2T-ID corpus-to-docid toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // --config/--seed may appear after the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  app.add_option("--config", config_path, "pipeline config JSON");
  app.add_option("--seed", seed_override, "override the config seed everywhere");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate and normalize a JSONL corpus");
  std::string ingest_in, ingest_out;
  ingest->add_option("--input", ingest_in, "corpus JSONL")->required();
  ingest->add_option("--output", ingest_out, "normalized corpus JSONL")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "build the hierarchical k-means tree");
  std::string cluster_tree_out = "tree.json", cluster_paths_out = "paths.tsv";
  cluster->add_option("--output-tree", cluster_tree_out, "tree JSON output");
  cluster->add_option("--output-paths", cluster_paths_out, "numeric path TSV output");

  // extract
  auto* extract = app.add_subcommand("extract", "extract per-document keyword priors");
  std::string extract_out = "keywords.jsonl";
  extract->add_option("--output", extract_out, "keyword table JSONL output");

  // forge
  auto* forge = app.add_subcommand("forge", "render docids for a scheme");
  std::string forge_scheme = "c2t", forge_out = "docids.tsv";
  forge->add_option("--scheme", forge_scheme, "atomic|codebook|title|c2t|c2t_smoothed");
  forge->add_option("--output", forge_out, "docid map TSV output");

  // smooth
  auto* smooth = app.add_subcommand("smooth", "apply two-level semantic smoothing to C2T-IDs");
  std::string smooth_out = "docids_smoothed.tsv", smooth_spans_out, smooth_replay;
  smooth->add_option("--output", smooth_out, "smoothed docid map TSV output");
  smooth->add_option("--spans", smooth_spans_out, "span table JSON output");
  smooth->add_option("--replay", smooth_replay, "replay rewriter JSONL (default: mock rewriter)");

  // build-trie
  auto* build_trie_cmd = app.add_subcommand("build-trie", "compile a docid set into a prefix trie");
  std::string trie_docids, trie_out = "trie.json", trie_vocab_out, trie_mode = "word";
  std::string trie_intra = "-", trie_level = "-";
  build_trie_cmd->add_option("--docids", trie_docids, "docid map TSV")->required();
  build_trie_cmd->add_option("--output", trie_out, "trie JSON output");
  build_trie_cmd->add_option("--vocab", trie_vocab_out, "vocab TSV output");
  build_trie_cmd->add_option("--mode", trie_mode, "word|segment");
  build_trie_cmd->add_option("--intra-sep", trie_intra, "intra-segment separator");
  build_trie_cmd->add_option("--level-sep", trie_level, "level separator");

  // train
  auto* train = app.add_subcommand("train", "train the n-gram scorer");
  std::string train_pairs, train_docids, train_out = "model.json";
  std::string train_mode_intra = "-", train_mode_level = "-";
  train->add_option("--pairs", train_pairs, "training pairs JSONL (query/target_doc_id)")->required();
  train->add_option("--docids", train_docids, "docid map TSV")->required();
  train->add_option("--output", train_out, "model JSON output");
  train->add_option("--intra-sep", train_mode_intra, "intra-segment separator");
  train->add_option("--level-sep", train_mode_level, "level separator");

  // decode
  auto* decode = app.add_subcommand("decode", "constrained beam search for queries");
  std::string decode_model, decode_docids, decode_query, decode_queries, decode_out;
  std::string decode_intra = "-", decode_level = "-";
  decode->add_option("--model", decode_model, "trained model JSON")->required();
  decode->add_option("--docids", decode_docids, "docid map TSV")->required();
  decode->add_option("--query", decode_query, "single query string");
  decode->add_option("--queries", decode_queries, "query JSONL file");
  decode->add_option("--output", decode_out, "ranking JSONL output (default stdout)");
  decode->add_option("--intra-sep", decode_intra, "intra-segment separator");
  decode->add_option("--level-sep", decode_level, "level separator");

  // eval / pipeline
  auto* eval_cmd = app.add_subcommand("eval", "run the scheme-vs-scheme experiment");
  std::string eval_out;
  eval_cmd->add_option("--output", eval_out, "report JSON output (default <output_dir>/report.json)");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage and emit the final report");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = resolve_config(config_path, seed_override);

    if (*ingest) {
      Corpus corpus = ingest_jsonl(ingest_in);
      write_file(ingest_out, corpus_to_jsonl(corpus));
      std::cout << "ingested " << corpus.size() << " documents\n";
      return 0;
    }

    auto [corpus, queries] = load_source(cfg);
    queries.mode = cfg.mode;

    if (*cluster) {
      auto emb = load_embeddings(cfg, corpus);
      auto tree = build_tree(emb, corpus, cfg.experiment.cluster);
      auto paths = assign_numeric_paths(tree);
      write_file(cluster_tree_out, tree_to_json(tree));
      write_file(cluster_paths_out, paths_to_tsv(paths));
      std::cout << "tree with " << tree.nodes.size() << " nodes over " << corpus.size()
                << " documents\n";
      return 0;
    }
    if (*extract) {
      auto table = extract_table(corpus, cfg.experiment.extractor);
      write_file(extract_out, keyword_table_to_jsonl(table));
      std::cout << "keywords for " << table.per_doc.size() << " documents\n";
      return 0;
    }

    auto build_stage = [&](const std::string& scheme) {
      auto emb = load_embeddings(cfg, corpus);
      auto tree = build_tree(emb, corpus, cfg.experiment.cluster);
      auto paths = assign_numeric_paths(tree);
      auto table = extract_table(corpus, cfg.experiment.extractor);
      auto art = build_scheme_docids(scheme, corpus, tree, paths, table, cfg.experiment);
      return std::tuple{std::move(tree), std::move(paths), std::move(table), std::move(art)};
    };

    if (*forge) {
      auto [tree, paths, table, art] = build_stage(forge_scheme);
      write_file(forge_out, docid_map_to_tsv(art.docids));
      std::cout << art.docids.size() << " docids (" << forge_scheme << ")\n";
      return 0;
    }
    if (*smooth) {
      auto emb = load_embeddings(cfg, corpus);
      auto tree = build_tree(emb, corpus, cfg.experiment.cluster);
      auto paths = assign_numeric_paths(tree);
      auto table = extract_table(corpus, cfg.experiment.extractor);
      auto ids = render_c2t_ids(tree, paths, table, cfg.experiment.label);
      SmoothedIds smoothed;
      if (smooth_replay.empty()) {
        smoothed = smooth_ids(ids, tree, MockRewriter{});
      } else {
        smoothed = smooth_ids(ids, tree, ReplayRewriter::from_jsonl(read_file(smooth_replay)));
      }
      write_file(smooth_out, docid_map_to_tsv(smoothed.docids));
      if (!smooth_spans_out.empty()) {
        nlohmann::json spans;
        for (const auto& [node_id, span] : smoothed.node_spans)
          spans["node_spans"][std::to_string(node_id)] = span;
        for (const auto& [doc_id, span] : smoothed.doc_spans) spans["doc_spans"][doc_id] = span;
        write_file(smooth_spans_out, spans.dump(2) + "\n");
      }
      std::cout << smoothed.docids.size() << " smoothed docids\n";
      return 0;
    }
    if (*build_trie_cmd) {
      auto docids = docid_map_from_tsv(read_file(trie_docids));
      std::vector<std::string> strings;
      for (const auto& [doc_id, docid] : docids) strings.push_back(docid);
      auto tok = Tokenizer::build(strings, parse_tok_mode(trie_mode), trie_intra, trie_level);
      auto trie = DocidTrie::build(docids, tok);
      write_file(trie_out, trie.to_json());
      if (!trie_vocab_out.empty()) write_file(trie_vocab_out, tok.vocab_to_tsv());
      std::cout << trie.terminal_count() << " terminals, " << trie.edge_count() << " edges\n";
      return 0;
    }
    if (*train) {
      auto docids = docid_map_from_tsv(read_file(train_docids));
      std::vector<std::string> strings;
      for (const auto& [doc_id, docid] : docids) strings.push_back(docid);
      auto tok = Tokenizer::build(strings, TokenizerMode::Word, train_mode_intra, train_mode_level);
      auto pairs_set = query_set_from_jsonl(read_file(train_pairs));
      auto model = train_ngram(pairs_set.entries, docids, tok, cfg.experiment.alpha);
      write_file(train_out, model.to_json());
      std::cout << "trained on " << pairs_set.entries.size() << " pairs\n";
      return 0;
    }
    if (*decode) {
      auto docids = docid_map_from_tsv(read_file(decode_docids));
      std::vector<std::string> strings;
      for (const auto& [doc_id, docid] : docids) strings.push_back(docid);
      auto tok = Tokenizer::build(strings, TokenizerMode::Word, decode_intra, decode_level);
      auto trie = DocidTrie::build(docids, tok);
      auto model = NgramScorerModel::from_json(read_file(decode_model));
      std::vector<std::string> query_list;
      if (!decode_query.empty()) query_list.push_back(decode_query);
      if (!decode_queries.empty())
        for (const auto& [q, target] : query_set_from_jsonl(read_file(decode_queries)).entries)
          query_list.push_back(q);
      if (query_list.empty()) throw Error("decode: provide --query or --queries");
      std::ostringstream out;
      for (const auto& q : query_list) {
        auto result = beam_search(q, model, trie, cfg.experiment.beam_width, cfg.experiment.max_len);
        nlohmann::json rec;
        rec["query"] = q;
        nlohmann::json ranked = nlohmann::json::array();
        for (const auto& [doc_id, lp] : result.ranked)
          ranked.push_back(nlohmann::json::array({doc_id, lp}));
        rec["ranked"] = ranked;
        out << rec.dump() << "\n";
      }
      if (decode_out.empty())
        std::cout << out.str();
      else
        write_file(decode_out, out.str());
      return 0;
    }
    if (*eval_cmd || *pipeline) {
      if (queries.entries.empty()) throw Error("eval: no queries available for this corpus source");
      std::vector<std::string> schemes = cfg.schemes;
      if (cfg.smoothing &&
          std::find(schemes.begin(), schemes.end(), "c2t_smoothed") == schemes.end())
        schemes.push_back("c2t_smoothed");
      if (*pipeline) {
        // persist every intermediate artifact for inspection and replay
        fs::create_directories(cfg.output_dir);
        write_file(cfg.output_dir + "/config.json", config_to_json(cfg));
        write_file(cfg.output_dir + "/corpus.jsonl", corpus_to_jsonl(corpus));
        write_file(cfg.output_dir + "/queries.jsonl", query_set_to_jsonl(queries));
        auto emb = load_embeddings(cfg, corpus);
        auto tree = build_tree(emb, corpus, cfg.experiment.cluster);
        auto paths = assign_numeric_paths(tree);
        auto table = extract_table(corpus, cfg.experiment.extractor);
        write_file(cfg.output_dir + "/tree.json", tree_to_json(tree));
        write_file(cfg.output_dir + "/paths.tsv", paths_to_tsv(paths));
        write_file(cfg.output_dir + "/keywords.jsonl", keyword_table_to_jsonl(table));
        for (const auto& scheme : schemes) {
          auto art = build_scheme_docids(scheme, corpus, tree, paths, table, cfg.experiment);
          write_file(cfg.output_dir + "/docids_" + scheme + ".tsv", docid_map_to_tsv(art.docids));
        }
      }
      auto report = run_experiment(corpus, queries, schemes, cfg.experiment, cfg.mode);
      std::string out_path = eval_out.empty() ? cfg.output_dir + "/report.json" : eval_out;
      write_file(out_path, report.to_json());
      write_file(cfg.output_dir + "/report.txt", report.to_table());
      std::cout << report.to_table();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
