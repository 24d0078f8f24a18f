#include "mtbl/model.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include "mtbl/errors.h"
#include "mtbl/rational.h"

namespace mtbl {

namespace {

constexpr const char* kSchemaHeader = "## SCHEMA";
constexpr const char* kLexiconHeader = "## LEXICON";
constexpr const char* kRulesHeader = "## RULES";
constexpr const char* kPhasePrefix = "#phase ";

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(size_t line_no, const std::string& msg) {
  throw DataError("model line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  out << kSchemaHeader << '\n';
  for (const StreamDecl& s : model.schema.streams()) {
    if (s.is_task) {
      out << "task " << s.name << ' ' << format_rational(s.weight) << ' '
          << s.condition_on << '\n';
    } else {
      out << "feature " << s.name << '\n';
    }
  }
  out << kLexiconHeader << '\n';
  for (size_t t = 0; t < model.lexicon.task_count(); ++t) {
    const std::string& task = model.schema.task_name(t);
    for (const auto& [key, tags] : model.lexicon.entries(t)) {
      for (const auto& [tag, count] : tags) {
        out << task << ' ' << key << ' ' << tag << ' ' << count << '\n';
      }
    }
  }
  out << kRulesHeader << '\n';
  size_t next_phase = 0;
  for (size_t i = 0; i <= model.rules.size(); ++i) {
    while (next_phase < model.phases.size() &&
           model.phases[next_phase].first == i) {
      out << kPhasePrefix << model.phases[next_phase].second << '\n';
      ++next_phase;
    }
    if (i < model.rules.size()) out << print_rule(model.rules[i]) << '\n';
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  save_model(model, out);
  if (!out) throw DataError("failed writing model file: " + path);
}

Model load_model(std::istream& in) {
  Model model;
  std::vector<StreamDecl> decls;
  // 0 = before SCHEMA, then the index of the section being read.
  int section = 0;
  size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == kSchemaHeader) {
      if (section != 0) fail(line_no, "duplicate or misplaced section");
      section = 1;
      continue;
    }
    if (line == kLexiconHeader) {
      if (section != 1) fail(line_no, "expected sections in order SCHEMA, LEXICON, RULES");
      try {
        model.schema = Schema(decls);
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
      model.lexicon = Lexicon(model.schema.task_count());
      section = 2;
      continue;
    }
    if (line == kRulesHeader) {
      if (section != 2) fail(line_no, "expected sections in order SCHEMA, LEXICON, RULES");
      section = 3;
      continue;
    }
    try {
      switch (section) {
        case 0:
          fail(line_no, "expected '" + std::string(kSchemaHeader) + "'");
        case 1: {
          auto tok = split_ws(line);
          if (tok.size() == 2 && tok[0] == "feature") {
            decls.push_back({tok[1], false, Rational(1), ""});
          } else if (tok.size() == 4 && tok[0] == "task") {
            decls.push_back({tok[1], true, parse_rational(tok[2]), tok[3]});
          } else {
            fail(line_no, "expected 'feature <name>' or 'task <name> <weight> <condition>'");
          }
          break;
        }
        case 2: {
          auto tok = split_ws(line);
          if (tok.size() != 4) fail(line_no, "expected 'task key tag count'");
          size_t stream = model.schema.stream_index(tok[0]);
          if (stream == Schema::npos || !model.schema.is_task(stream)) {
            fail(line_no, "unknown task '" + tok[0] + "'");
          }
          long long count = 0;
          try {
            size_t used = 0;
            count = std::stoll(tok[3], &used);
            if (used != tok[3].size()) throw std::invalid_argument(tok[3]);
          } catch (const std::logic_error&) {
            fail(line_no, "bad count '" + tok[3] + "'");
          }
          model.lexicon.add(model.schema.task_of_stream(stream), tok[1],
                            tok[2], count);
          break;
        }
        default: {
          if (line.rfind(kPhasePrefix, 0) == 0) {
            std::string task = line.substr(std::string(kPhasePrefix).size());
            size_t stream = model.schema.stream_index(task);
            if (stream == Schema::npos || !model.schema.is_task(stream)) {
              fail(line_no, "unknown phase task '" + task + "'");
            }
            model.phases.emplace_back(model.rules.size(), task);
          } else {
            model.rules.push_back(parse_rule(line, model.schema));
          }
          break;
        }
      }
    } catch (const ConfigError& e) {
      fail(line_no, e.what());
    } catch (const DataError& e) {
      std::string what = e.what();
      if (what.rfind("model line ", 0) == 0) throw;
      fail(line_no, what);
    }
  }
  if (section != 3) throw DataError("model file is missing required sections");
  return model;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model file: " + path);
  return load_model(in);
}

}  // namespace mtbl
