#include "c2t/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace c2t {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw Error("config: unknown key \"" + key + "\" in " + where);
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  json doc = json::parse(json_text);
  PipelineConfig cfg;
  cfg.experiment.extractor = default_category_extractor();
  cfg.experiment.cluster.seed = 7;

  reject_unknown(doc,
                 {"seed", "embed_dim", "cluster", "label", "extractor", "beam_width", "max_len",
                  "alpha", "train_fraction", "schemes", "smoothing", "mode", "corpus",
                  "output_dir"},
                 "top level");

  if (doc.contains("seed")) cfg.experiment.cluster.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("embed_dim")) cfg.experiment.embed_dim = doc["embed_dim"].get<int>();
  if (doc.contains("beam_width")) cfg.experiment.beam_width = doc["beam_width"].get<int>();
  if (doc.contains("max_len")) cfg.experiment.max_len = doc["max_len"].get<int>();
  if (doc.contains("alpha")) cfg.experiment.alpha = doc["alpha"].get<double>();
  if (doc.contains("train_fraction"))
    cfg.experiment.train_fraction = doc["train_fraction"].get<double>();
  if (doc.contains("schemes")) cfg.schemes = doc["schemes"].get<std::vector<std::string>>();
  if (doc.contains("smoothing")) cfg.smoothing = doc["smoothing"].get<bool>();
  if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
  if (doc.contains("mode")) {
    std::string mode = doc["mode"].get<std::string>();
    if (mode == "supervised")
      cfg.mode = EvalMode::Supervised;
    else if (mode == "zero_shot")
      cfg.mode = EvalMode::ZeroShot;
    else
      throw Error("config: mode must be \"supervised\" or \"zero_shot\"");
  }

  if (doc.contains("cluster")) {
    const json& cl = doc["cluster"];
    reject_unknown(cl, {"k", "c", "max_iters"}, "cluster");
    if (cl.contains("k")) cfg.experiment.cluster.k = cl["k"].get<int>();
    if (cl.contains("c")) cfg.experiment.cluster.c = cl["c"].get<int>();
    if (cl.contains("max_iters")) cfg.experiment.cluster.max_iters = cl["max_iters"].get<int>();
  }
  if (doc.contains("label")) {
    const json& lb = doc["label"];
    reject_unknown(lb, {"K", "intra_sep", "level_sep", "ancestor_dedup"}, "label");
    if (lb.contains("K")) cfg.experiment.label.top_k = lb["K"].get<int>();
    if (lb.contains("intra_sep")) cfg.experiment.label.intra_sep = lb["intra_sep"].get<std::string>();
    if (lb.contains("level_sep")) cfg.experiment.label.level_sep = lb["level_sep"].get<std::string>();
    if (lb.contains("ancestor_dedup"))
      cfg.experiment.label.ancestor_dedup = lb["ancestor_dedup"].get<bool>();
  }
  if (doc.contains("extractor")) {
    const json& ex = doc["extractor"];
    reject_unknown(ex, {"strategy", "fields", "blocklist", "stopwords", "blocklist_file",
                        "stopwords_file", "max_keywords_per_doc"},
                   "extractor");
    auto& ecfg = cfg.experiment.extractor;
    if (ex.contains("strategy")) {
      std::string s = ex["strategy"].get<std::string>();
      if (s == "category")
        ecfg.strategy = ExtractorStrategy::Category;
      else if (s == "attribute")
        ecfg.strategy = ExtractorStrategy::Attribute;
      else
        throw Error("config: extractor strategy must be \"category\" or \"attribute\"");
    }
    if (ex.contains("fields")) ecfg.fields = ex["fields"].get<std::vector<std::string>>();
    if (ex.contains("blocklist")) {
      ecfg.blocklist.clear();
      for (const auto& b : ex["blocklist"]) ecfg.blocklist.insert(lowercase(b.get<std::string>()));
    }
    if (ex.contains("stopwords")) {
      ecfg.stopwords.clear();
      for (const auto& s : ex["stopwords"]) ecfg.stopwords.insert(lowercase(s.get<std::string>()));
    }
    if (ex.contains("blocklist_file"))
      for (const auto& b : load_wordlist(ex["blocklist_file"].get<std::string>()))
        ecfg.blocklist.insert(b);
    if (ex.contains("stopwords_file"))
      for (const auto& s : load_wordlist(ex["stopwords_file"].get<std::string>()))
        ecfg.stopwords.insert(s);
    if (ex.contains("max_keywords_per_doc"))
      ecfg.max_keywords_per_doc = ex["max_keywords_per_doc"].get<int>();
  }
  if (doc.contains("corpus")) {
    const json& co = doc["corpus"];
    reject_unknown(co,
                   {"type", "path", "queries_path", "embeddings_path", "n_docs", "n_topics",
                    "vocab_size", "queries_per_doc"},
                   "corpus");
    std::string type = co.value("type", std::string("synth"));
    if (type == "synth") {
      cfg.source.kind = CorpusSource::Kind::Synth;
      if (co.contains("n_docs")) cfg.source.synth.n_docs = co["n_docs"].get<int>();
      if (co.contains("n_topics")) cfg.source.synth.n_topics = co["n_topics"].get<int>();
      if (co.contains("vocab_size")) cfg.source.synth.vocab_size = co["vocab_size"].get<int>();
      if (co.contains("queries_per_doc"))
        cfg.source.synth.queries_per_doc = co["queries_per_doc"].get<int>();
    } else if (type == "jsonl") {
      cfg.source.kind = CorpusSource::Kind::Jsonl;
      cfg.source.corpus_path = co.at("path").get<std::string>();
      if (co.contains("queries_path"))
        cfg.source.queries_path = co["queries_path"].get<std::string>();
      if (co.contains("embeddings_path"))
        cfg.source.embeddings_path = co["embeddings_path"].get<std::string>();
    } else {
      throw Error("config: corpus type must be \"synth\" or \"jsonl\"");
    }
  }
  cfg.source.synth.seed = cfg.experiment.cluster.seed;
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
  json doc;
  doc["seed"] = cfg.experiment.cluster.seed;
  doc["embed_dim"] = cfg.experiment.embed_dim;
  doc["cluster"] = {{"k", cfg.experiment.cluster.k},
                    {"c", cfg.experiment.cluster.c},
                    {"max_iters", cfg.experiment.cluster.max_iters}};
  doc["label"] = {{"K", cfg.experiment.label.top_k},
                  {"intra_sep", cfg.experiment.label.intra_sep},
                  {"level_sep", cfg.experiment.label.level_sep},
                  {"ancestor_dedup", cfg.experiment.label.ancestor_dedup}};
  json ex;
  ex["strategy"] =
      cfg.experiment.extractor.strategy == ExtractorStrategy::Category ? "category" : "attribute";
  ex["fields"] = cfg.experiment.extractor.fields;
  ex["blocklist"] = cfg.experiment.extractor.blocklist;
  ex["stopwords"] = cfg.experiment.extractor.stopwords;
  ex["max_keywords_per_doc"] = cfg.experiment.extractor.max_keywords_per_doc;
  doc["extractor"] = ex;
  doc["beam_width"] = cfg.experiment.beam_width;
  doc["max_len"] = cfg.experiment.max_len;
  doc["alpha"] = cfg.experiment.alpha;
  doc["train_fraction"] = cfg.experiment.train_fraction;
  doc["schemes"] = cfg.schemes;
  doc["smoothing"] = cfg.smoothing;
  doc["mode"] = cfg.mode == EvalMode::Supervised ? "supervised" : "zero_shot";
  if (cfg.source.kind == CorpusSource::Kind::Synth) {
    doc["corpus"] = {{"type", "synth"},
                     {"n_docs", cfg.source.synth.n_docs},
                     {"n_topics", cfg.source.synth.n_topics},
                     {"vocab_size", cfg.source.synth.vocab_size},
                     {"queries_per_doc", cfg.source.synth.queries_per_doc}};
  } else {
    json co = {{"type", "jsonl"}, {"path", cfg.source.corpus_path}};
    if (!cfg.source.queries_path.empty()) co["queries_path"] = cfg.source.queries_path;
    if (!cfg.source.embeddings_path.empty()) co["embeddings_path"] = cfg.source.embeddings_path;
    doc["corpus"] = co;
  }
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2) + "\n";
}

}  // namespace c2t
