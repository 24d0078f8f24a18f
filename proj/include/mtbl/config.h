#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtbl/eval.h"
#include "mtbl/schema.h"
#include "mtbl/trainer.h"

namespace mtbl {

// Everything a command run needs, read from a key=value config file with
// [section] headers and then overridden by command-line flags (flags win).
struct RunConfig {
  // [paths]
  std::string train_path;
  std::string test_path;
  std::string templates_path;
  std::string model_path;
  std::string out_path;

  // [schema], column order. Empty means "take the schema from the model".
  std::vector<StreamDecl> streams;

  // [train]
  TrainConfig::Mode mode = TrainConfig::Mode::kJoint;
  std::vector<std::string> task_order;  // sequential phases; empty = schema order
  Rational min_score{1};
  size_t max_rules = 0;  // 0 = unlimited
  TrainConfig::Scorer scorer = TrainConfig::Scorer::kIndexed;
  int workers = 1;

  // [synth]
  size_t sentences = 0;
  double noise = 0.0;
  uint64_t seed = 0;

  // [eval]
  std::vector<TaskEval> eval_tasks;  // empty = token accuracy for every task
  Rational beta{1};
  std::string word_pos_seg;   // both set: word-level POS from character tags
  std::string word_pos_task;

  // [analyze]
  std::string analyze_task;  // empty = first task
  std::vector<std::pair<std::string, std::string>> systems;  // name, path
  size_t buckets = 4;

  Schema schema() const;  // throws ConfigError when [schema] is empty
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config_file(const std::string& path);

}  // namespace mtbl
