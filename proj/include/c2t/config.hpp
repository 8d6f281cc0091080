#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c2t/eval.hpp"

namespace c2t {

struct CorpusSource {
  enum class Kind { Synth, Jsonl } kind = Kind::Synth;
  SynthParams synth;
  std::string corpus_path;
  std::string queries_path;
  std::string embeddings_path;  // optional external vectors
};

struct PipelineConfig {
  ExperimentParams experiment;
  CorpusSource source;
  std::vector<std::string> schemes = {"atomic", "codebook", "title", "c2t"};
  bool smoothing = false;
  EvalMode mode = EvalMode::Supervised;
  std::string output_dir = "out";
};

// Parses the config document; unknown keys are rejected. The defaults mirror
// the experiment setup (k=30, c=30, K=3, beam 20).
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace c2t
