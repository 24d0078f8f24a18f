#include "mtbl/commands.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mtbl/corpus.h"
#include "mtbl/diagnostics.h"
#include "mtbl/engine.h"
#include "mtbl/errors.h"
#include "mtbl/eval.h"
#include "mtbl/model.h"
#include "mtbl/synth.h"
#include "mtbl/template.h"
#include "mtbl/trainer.h"

namespace mtbl {

namespace {

void require_file(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError(std::string(what) + " file does not exist: " + path);
  }
}

void require_path(const std::string& path, const char* flag, const char* what) {
  if (path.empty()) {
    throw ConfigError(std::string(what) + " is required: pass " + flag +
                      " or set it under [paths]");
  }
}

// Output sink: a file when a path is configured, stdout otherwise.
struct OutFile {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit OutFile(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file: " + path);
      out = &file;
    }
  }
};

std::string format_4dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Copies the prediction corpus's task columns into base's current layer.
// The prediction file carries system tags in its (gold) task columns.
void overlay_predictions(Corpus& base, const Corpus& pred) {
  const Schema& schema = base.schema();
  bool aligned = pred.token_count() == base.token_count() &&
                 pred.sentence_count() == base.sentence_count();
  for (size_t s = 0; aligned && s < base.sentence_count(); ++s) {
    aligned = pred.sentence_begin(s) == base.sentence_begin(s);
  }
  for (size_t st = 0; aligned && st < schema.stream_count(); ++st) {
    if (schema.is_task(st)) continue;
    for (size_t pos = 0; aligned && pos < base.token_count(); ++pos) {
      aligned = pred.gold(st, pos) == base.gold(st, pos);
    }
  }
  if (!aligned) {
    throw DataError("prediction corpus is not aligned with the gold corpus");
  }
  for (size_t t = 0; t < schema.task_count(); ++t) {
    size_t stream = schema.task_streams()[t];
    for (size_t pos = 0; pos < base.token_count(); ++pos) {
      base.set_current(t, pos, pred.gold(stream, pos));
    }
  }
}

bool debug_logging() {
  const char* env = std::getenv("MTBL_LOG");
  return env != nullptr && std::string(env) == "debug";
}

}  // namespace

void cmd_train(const RunConfig& config) {
  require_path(config.train_path, "--train", "a training corpus");
  require_path(config.model_path, "--model", "a model output path");
  require_file(config.train_path, "corpus");
  Schema schema = config.schema();
  Corpus corpus = read_column_corpus_file(config.train_path, schema);

  TrainConfig tc;
  if (!config.templates_path.empty()) {
    require_file(config.templates_path, "template");
    tc.templates = parse_template_file(config.templates_path, schema);
  } else {
    tc.templates = default_templates(schema);
  }
  tc.min_score = config.min_score;
  tc.max_rules = config.max_rules;
  tc.mode = config.mode;
  tc.task_order = config.task_order;
  tc.scorer = config.scorer;
  tc.workers = static_cast<size_t>(config.workers);
  tc.cross_check = debug_logging();

  TrainResult result = train(corpus, tc);
  save_model(result.model, config.model_path);
  std::string log_path =
      config.out_path.empty() ? config.model_path + ".log" : config.out_path;
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw ConfigError("cannot write training log: " + log_path);
  write_train_log(result, log);

  const Rational final_error =
      result.log.empty() ? result.initial_error : result.log.back().weighted_error;
  std::cout << "rules learned: " << result.model.rules.size() << '\n';
  std::cout << "weighted error: " << format_rational(result.initial_error)
            << " -> " << format_rational(final_error) << '\n';
  for (size_t t = 0; t < schema.task_count(); ++t) {
    double final_acc = result.log.empty() ? result.initial_accuracy[t]
                                          : result.log.back().task_accuracy[t];
    std::cout << "task " << schema.task_name(t)
              << " accuracy: " << format_4dp(result.initial_accuracy[t])
              << " -> " << format_4dp(final_acc) << '\n';
  }
  if (result.hit_max_rules) std::cout << "stopped: max_rules reached\n";
  std::cout << "model: " << config.model_path << '\n';
  std::cout << "log: " << log_path << '\n';
}

void cmd_apply(const RunConfig& config) {
  require_path(config.model_path, "--model", "a model");
  require_path(config.test_path, "--test", "an input corpus");
  require_file(config.model_path, "model");
  require_file(config.test_path, "corpus");
  Model model = load_model_file(config.model_path);
  Corpus corpus = read_column_corpus_file(config.test_path, model.schema);
  ApplyStats stats = apply_model(model, corpus);
  OutFile out(config.out_path);
  write_column_corpus(corpus, *out.out, Layer::kCurrent);
  if (!config.out_path.empty()) {
    size_t total = 0;
    for (size_t c : stats.rule_changes) total += c;
    std::cout << "initialized " << stats.init_changes << " tags, "
              << stats.rule_changes.size() << " rules changed " << total
              << " tags\n";
    std::cout << "out: " << config.out_path << '\n';
  }
}

void cmd_eval(const RunConfig& config) {
  require_path(config.test_path, "--test", "a gold corpus");
  require_file(config.test_path, "corpus");
  Schema schema;
  Model model;
  bool have_model = !config.model_path.empty();
  if (have_model) {
    require_file(config.model_path, "model");
    model = load_model_file(config.model_path);
    schema = model.schema;
  } else {
    schema = config.schema();
  }
  Corpus scored = read_column_corpus_file(config.test_path, schema);
  if (have_model) {
    apply_model(model, scored);
  } else if (!config.train_path.empty()) {
    require_file(config.train_path, "corpus");
    Corpus pred = read_column_corpus_file(config.train_path, schema);
    overlay_predictions(scored, pred);
  } else {
    throw ConfigError(
        "eval scores either a model (--model) or a system output corpus "
        "passed via --train");
  }

  EvalSpec spec;
  spec.tasks = config.eval_tasks;
  if (spec.tasks.empty()) {
    for (size_t t = 0; t < schema.task_count(); ++t) {
      spec.tasks.push_back({schema.task_name(t), TaskEval::Style::kToken});
    }
  }
  spec.beta = config.beta;
  spec.word_pos_seg = config.word_pos_seg;
  spec.word_pos_task = config.word_pos_task;
  EvalReport report = evaluate(scored, spec);
  write_eval_table(report, std::cout);
  if (!config.out_path.empty()) {
    OutFile out(config.out_path);
    write_eval_machine(report, *out.out);
  }
}

void cmd_analyze(const RunConfig& config) {
  require_path(config.train_path, "--train", "a training corpus");
  require_path(config.test_path, "--test", "a test corpus");
  require_file(config.train_path, "corpus");
  require_file(config.test_path, "corpus");
  Schema schema;
  Model model;
  bool have_model = !config.model_path.empty();
  if (have_model) {
    require_file(config.model_path, "model");
    model = load_model_file(config.model_path);
    schema = model.schema;
  } else {
    schema = config.schema();
  }
  Corpus train = read_column_corpus_file(config.train_path, schema);
  Corpus test = read_column_corpus_file(config.test_path, schema);

  std::vector<std::string> names;
  std::vector<Corpus> outputs;
  for (const auto& [name, path] : config.systems) {
    require_file(path, "system corpus");
    Corpus pred = read_column_corpus_file(path, schema);
    Corpus scored = test;
    overlay_predictions(scored, pred);
    names.push_back(name);
    outputs.push_back(std::move(scored));
  }
  if (have_model) {
    Corpus scored = test;
    apply_model(model, scored);
    names.push_back("model");
    outputs.push_back(std::move(scored));
  }
  if (outputs.empty()) {
    throw ConfigError(
        "analyze wants at least one system: [analyze] system lines or --model");
  }
  std::vector<std::pair<std::string, const Corpus*>> systems;
  for (size_t i = 0; i < outputs.size(); ++i) {
    systems.emplace_back(names[i], &outputs[i]);
  }
  std::string task =
      config.analyze_task.empty() ? schema.task_name(0) : config.analyze_task;
  DivergenceReport report =
      divergence_report(train, test, task, systems, config.buckets);
  write_divergence_report(report, std::cout);
  if (!config.out_path.empty()) {
    OutFile out(config.out_path);
    write_divergence_report(report, *out.out);
  }
}

void cmd_synth(const RunConfig& config) {
  SynthConfig sc;
  sc.sentences = config.sentences;
  sc.noise = config.noise;
  sc.seed = config.seed;
  Corpus corpus = synth_corpus(sc);
  OutFile out(config.out_path);
  write_column_corpus(corpus, *out.out, Layer::kGold);
  if (!config.out_path.empty()) {
    std::cout << "sentences: " << corpus.sentence_count() << '\n';
    std::cout << "out: " << config.out_path << '\n';
  }
}

namespace {

struct Flags {
  std::string config, train, test, templates, model, out;
  std::string mode, scorer, min_score;
  uint64_t max_rules = 0;
  uint64_t workers = 1;
  uint64_t seed = 0;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "run config file (key = value, [section] headers)");
  cmd->add_option("--train", f.train, "training corpus, or the system output scored by eval");
  cmd->add_option("--test", f.test, "test / input corpus");
  cmd->add_option("--templates", f.templates, "rule template file (default: built-in inventory)");
  cmd->add_option("--model", f.model, "model file");
  cmd->add_option("--out", f.out, "output file (default: stdout, or <model>.log for train)");
  cmd->add_option("--mode", f.mode, "training mode: joint|sequential");
  cmd->add_option("--min-score", f.min_score, "stop once no rule scores this much (integer or n/d)");
  cmd->add_option("--max-rules", f.max_rules, "rule cap, 0 = unlimited");
  cmd->add_option("--scorer", f.scorer, "rule scorer: indexed|naive");
  cmd->add_option("--workers", f.workers, "scoring threads; results are identical for any value");
  cmd->add_option("--seed", f.seed, "synthetic corpus seed");
}

RunConfig resolve(const CLI::App* cmd, const Flags& f) {
  RunConfig rc;
  if (cmd->count("--config") > 0) rc = load_run_config_file(f.config);
  if (cmd->count("--train") > 0) rc.train_path = f.train;
  if (cmd->count("--test") > 0) rc.test_path = f.test;
  if (cmd->count("--templates") > 0) rc.templates_path = f.templates;
  if (cmd->count("--model") > 0) rc.model_path = f.model;
  if (cmd->count("--out") > 0) rc.out_path = f.out;
  if (cmd->count("--mode") > 0) {
    if (f.mode == "joint") rc.mode = TrainConfig::Mode::kJoint;
    else if (f.mode == "sequential") rc.mode = TrainConfig::Mode::kSequential;
    else throw ConfigError("--mode wants joint or sequential, got '" + f.mode + "'");
  }
  if (cmd->count("--min-score") > 0) rc.min_score = parse_rational(f.min_score);
  if (cmd->count("--max-rules") > 0) rc.max_rules = static_cast<size_t>(f.max_rules);
  if (cmd->count("--scorer") > 0) {
    if (f.scorer == "naive") rc.scorer = TrainConfig::Scorer::kNaive;
    else if (f.scorer == "indexed") rc.scorer = TrainConfig::Scorer::kIndexed;
    else throw ConfigError("--scorer wants naive or indexed, got '" + f.scorer + "'");
  }
  if (cmd->count("--workers") > 0) {
    if (f.workers == 0 || f.workers > 1024) throw ConfigError("--workers wants 1..1024");
    rc.workers = static_cast<int>(f.workers);
  }
  if (cmd->count("--seed") > 0) rc.seed = f.seed;
  return rc;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"transformation-based learning over multiple tag streams"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* train_cmd = app.add_subcommand("train", "learn a rule list from a corpus");
  CLI::App* apply_cmd = app.add_subcommand("apply", "run a model over a corpus");
  CLI::App* eval_cmd = app.add_subcommand("eval", "score system output against gold tags");
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "bucket test words by train/test divergence");
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate the two-task benchmark corpus");
  for (CLI::App* cmd : {train_cmd, apply_cmd, eval_cmd, analyze_cmd, synth_cmd}) {
    add_flags(cmd, f);
  }

  std::vector<const char*> argv;
  argv.push_back("mtbl");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    for (CLI::App* cmd : {train_cmd, apply_cmd, eval_cmd, analyze_cmd, synth_cmd}) {
      if (!cmd->parsed()) continue;
      RunConfig rc = resolve(cmd, f);
      if (cmd == train_cmd) cmd_train(rc);
      else if (cmd == apply_cmd) cmd_apply(rc);
      else if (cmd == eval_cmd) cmd_eval(rc);
      else if (cmd == analyze_cmd) cmd_analyze(rc);
      else cmd_synth(rc);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mtbl
