#include "mtbl/config.h"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "mtbl/errors.h"

namespace mtbl {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

uint64_t parse_u64(size_t line, const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value[0] == '-') throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    fail(line, key + " wants a non-negative integer, got '" + value + "'");
  }
}

double parse_unit_interval(size_t line, const std::string& key,
                           const std::string& value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size() || v < 0.0 || v >= 1.0) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    fail(line, key + " wants a number in [0, 1), got '" + value + "'");
  }
}

StreamDecl parse_stream(size_t line, const std::string& value) {
  std::vector<std::string> parts = split_ws(value);
  if (parts.empty()) fail(line, "stream wants: <name> [task] [weight=R] [cond=STREAM]");
  StreamDecl decl;
  decl.name = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p == "task") {
      decl.is_task = true;
    } else if (p.rfind("weight=", 0) == 0) {
      decl.weight = parse_rational(p.substr(7));
    } else if (p.rfind("cond=", 0) == 0) {
      decl.condition_on = p.substr(5);
    } else {
      fail(line, "unknown stream attribute '" + p + "'");
    }
  }
  if (!decl.is_task && (decl.weight != Rational(1) || !decl.condition_on.empty())) {
    fail(line, "weight and cond apply to task streams only");
  }
  return decl;
}

TaskEval parse_style(size_t line, const std::string& value) {
  std::vector<std::string> parts = split_ws(value);
  if (parts.size() != 2) fail(line, "style wants: <task> token|chunk|segmentation");
  TaskEval eval;
  eval.task = parts[0];
  if (parts[1] == "token") {
    eval.style = TaskEval::Style::kToken;
  } else if (parts[1] == "chunk") {
    eval.style = TaskEval::Style::kChunk;
  } else if (parts[1] == "segmentation") {
    eval.style = TaskEval::Style::kSegmentation;
  } else {
    fail(line, "unknown eval style '" + parts[1] + "'");
  }
  return eval;
}

}  // namespace

Schema RunConfig::schema() const {
  if (streams.empty()) {
    throw ConfigError("no [schema] section: declare the corpus columns");
  }
  return Schema(streams);
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::string section;
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "paths" && section != "schema" && section != "train" &&
          section != "synth" && section != "eval" && section != "analyze") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key '" + key + "' outside any section");

    if (section == "paths") {
      if (key == "train") config.train_path = value;
      else if (key == "test") config.test_path = value;
      else if (key == "templates") config.templates_path = value;
      else if (key == "model") config.model_path = value;
      else if (key == "out") config.out_path = value;
      else fail(line_no, "unknown [paths] key '" + key + "'");
    } else if (section == "schema") {
      if (key == "stream") config.streams.push_back(parse_stream(line_no, value));
      else fail(line_no, "unknown [schema] key '" + key + "'");
    } else if (section == "train") {
      if (key == "mode") {
        if (value == "joint") config.mode = TrainConfig::Mode::kJoint;
        else if (value == "sequential") config.mode = TrainConfig::Mode::kSequential;
        else fail(line_no, "mode wants joint or sequential, got '" + value + "'");
      } else if (key == "task_order") {
        config.task_order = split_ws(value);
      } else if (key == "min_score") {
        config.min_score = parse_rational(value);
      } else if (key == "max_rules") {
        config.max_rules = static_cast<size_t>(parse_u64(line_no, key, value));
      } else if (key == "scorer") {
        if (value == "naive") config.scorer = TrainConfig::Scorer::kNaive;
        else if (value == "indexed") config.scorer = TrainConfig::Scorer::kIndexed;
        else fail(line_no, "scorer wants naive or indexed, got '" + value + "'");
      } else if (key == "workers") {
        uint64_t w = parse_u64(line_no, key, value);
        if (w == 0 || w > 1024) fail(line_no, "workers wants 1..1024");
        config.workers = static_cast<int>(w);
      } else {
        fail(line_no, "unknown [train] key '" + key + "'");
      }
    } else if (section == "synth") {
      if (key == "sentences") {
        config.sentences = static_cast<size_t>(parse_u64(line_no, key, value));
      } else if (key == "noise") {
        config.noise = parse_unit_interval(line_no, key, value);
      } else if (key == "seed") {
        config.seed = parse_u64(line_no, key, value);
      } else {
        fail(line_no, "unknown [synth] key '" + key + "'");
      }
    } else if (section == "eval") {
      if (key == "style") {
        config.eval_tasks.push_back(parse_style(line_no, value));
      } else if (key == "beta") {
        config.beta = parse_rational(value);
      } else if (key == "word_pos") {
        std::vector<std::string> parts = split_ws(value);
        if (parts.size() != 2) fail(line_no, "word_pos wants: <seg_task> <pos_task>");
        config.word_pos_seg = parts[0];
        config.word_pos_task = parts[1];
      } else {
        fail(line_no, "unknown [eval] key '" + key + "'");
      }
    } else {  // analyze
      if (key == "task") {
        config.analyze_task = value;
      } else if (key == "system") {
        std::vector<std::string> parts = split_ws(value);
        if (parts.size() != 2) fail(line_no, "system wants: <name> <path>");
        config.systems.emplace_back(parts[0], parts[1]);
      } else if (key == "buckets") {
        uint64_t b = parse_u64(line_no, key, value);
        if (b == 0 || b > 64) fail(line_no, "buckets wants 1..64");
        config.buckets = static_cast<size_t>(b);
      } else {
        fail(line_no, "unknown [analyze] key '" + key + "'");
      }
    }
  }
  return config;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config = parse_run_config(in);
  return config;
}

}  // namespace mtbl
