#include "mtbl/template.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "mtbl/errors.h"

namespace mtbl {

namespace {

void validate_slots(const std::vector<Predicate>& slots, const std::string& target,
                    const Schema& schema, int offset_bound) {
  if (slots.empty()) throw DataError("template has no condition slots");
  size_t target_idx = schema.stream_index(target);
  if (target_idx == Schema::npos || !schema.is_task(target_idx)) {
    throw DataError("template target '" + target + "' is not a task stream");
  }
  int windows = 0;
  for (size_t i = 0; i < slots.size(); ++i) {
    const Predicate& p = slots[i];
    if (schema.stream_index(p.stream) == Schema::npos) {
      throw DataError("template references unknown stream '" + p.stream + "'");
    }
    if (p.kind == Predicate::Kind::kEquality) {
      if (p.lo < -offset_bound || p.lo > offset_bound) {
        throw DataError("offset " + std::to_string(p.lo) + " outside bound " +
                        std::to_string(offset_bound));
      }
      for (size_t j = 0; j < i; ++j) {
        if (slots[j].kind == Predicate::Kind::kEquality && slots[j].stream == p.stream &&
            slots[j].lo == p.lo) {
          throw DataError("duplicate slot " + p.stream + "[" + std::to_string(p.lo) + "]");
        }
      }
    } else {
      if (++windows > 1) throw DataError("template has more than one window slot");
      if (p.lo > p.hi) throw DataError("window range is empty");
      if (!(p.hi < 0 || p.lo > 0)) {
        throw DataError("window range must be entirely negative or entirely positive");
      }
      if (p.lo < -offset_bound || p.hi > offset_bound) {
        throw DataError("window range outside bound " + std::to_string(offset_bound));
      }
    }
  }
}

struct Cursor {
  const std::string& text;
  size_t i = 0;

  void skip_ws() {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  }
  bool eof() const { return i >= text.size(); }
  char peek() const { return text[i]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError("column " + std::to_string(i + 1) + ": " + msg);
  }
};

int parse_int(Cursor& c) {
  size_t start = c.i;
  if (!c.eof() && (c.peek() == '-' || c.peek() == '+')) ++c.i;
  while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') ++c.i;
  if (c.i == start || (c.i == start + 1 && !(c.text[start] >= '0' && c.text[start] <= '9'))) {
    c.fail("expected an integer");
  }
  try {
    return std::stoi(c.text.substr(start, c.i - start));
  } catch (const std::out_of_range&) {
    c.fail("offset out of range");
  }
}

std::string parse_name(Cursor& c) {
  size_t start = c.i;
  while (!c.eof()) {
    char ch = c.peek();
    if (ch == '[' || ch == ' ' || ch == '\t' || ch == ',' || ch == '=' || ch == '>') break;
    ++c.i;
  }
  if (c.i == start) c.fail("expected a stream name");
  return c.text.substr(start, c.i - start);
}

// STREAM "[" INT "]" or STREAM "[" INT ".." INT "]".
Predicate parse_slot(Cursor& c) {
  Predicate p;
  p.stream = parse_name(c);
  c.skip_ws();
  if (c.eof() || c.peek() != '[') c.fail("expected '['");
  ++c.i;
  c.skip_ws();
  p.lo = parse_int(c);
  c.skip_ws();
  if (!c.eof() && c.peek() == '.') {
    if (c.i + 1 >= c.text.size() || c.text[c.i + 1] != '.') c.fail("expected '..'");
    c.i += 2;
    c.skip_ws();
    p.kind = Predicate::Kind::kWindowAny;
    p.hi = parse_int(c);
    c.skip_ws();
  } else {
    p.hi = p.lo;
  }
  if (c.eof() || c.peek() != ']') c.fail("expected ']'");
  ++c.i;
  return p;
}

std::string slot_text(const Predicate& p) {
  std::string s = p.stream + "[" + std::to_string(p.lo);
  if (p.kind == Predicate::Kind::kWindowAny) s += ".." + std::to_string(p.hi);
  return s + "]";
}

}  // namespace

Template make_template(std::vector<Predicate> slots, const std::string& target,
                       const Schema& schema, int offset_bound, bool include_target_value) {
  if (include_target_value) {
    bool present = false;
    for (const Predicate& p : slots) {
      if (p.kind == Predicate::Kind::kEquality && p.stream == target && p.lo == 0) present = true;
    }
    if (!present) slots.push_back({Predicate::Kind::kEquality, target, 0, 0});
  }
  validate_slots(slots, target, schema, offset_bound);
  return Template{std::move(slots), target};
}

Template parse_template(const std::string& text, const Schema& schema, int offset_bound) {
  Cursor c{text};
  Template t;
  c.skip_ws();
  t.slots.push_back(parse_slot(c));
  c.skip_ws();
  while (!c.eof() && c.peek() == ',') {
    ++c.i;
    c.skip_ws();
    t.slots.push_back(parse_slot(c));
    c.skip_ws();
  }
  if (c.eof() || c.peek() != '=') c.fail("expected '=>'");
  ++c.i;
  if (c.eof() || c.peek() != '>') c.fail("expected '=>'");
  ++c.i;
  c.skip_ws();
  t.target = parse_name(c);
  c.skip_ws();
  if (!c.eof()) c.fail("trailing characters after template");
  validate_slots(t.slots, t.target, schema, offset_bound);
  return t;
}

std::string print_template(const Template& t) {
  std::string out;
  for (size_t i = 0; i < t.slots.size(); ++i) {
    if (i > 0) out += ",";
    out += slot_text(t.slots[i]);
  }
  return out + " => " + t.target;
}

std::vector<Template> parse_template_file(const std::string& path, const Schema& schema,
                                          int offset_bound) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open template file: " + path);
  std::vector<Template> out;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    Template t;
    try {
      t = parse_template(line, schema, offset_bound);
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (seen.insert(print_template(t)).second) out.push_back(std::move(t));
  }
  if (out.empty()) throw DataError(path + ": no templates");
  return out;
}

std::vector<Template> default_templates(const Schema& schema, int offset_bound) {
  std::vector<Template> out;
  std::set<std::string> seen;
  auto add = [&](std::vector<Predicate> slots, const std::string& target) {
    Template t = make_template(std::move(slots), target, schema, offset_bound, true);
    if (seen.insert(print_template(t)).second) out.push_back(std::move(t));
  };
  auto eq = [&](size_t s, int off) -> Predicate {
    return {Predicate::Kind::kEquality, schema.stream_name(s), off, off};
  };

  // Per target: every single-stream probe in range, short same-stream
  // context pairs, and one value-anywhere window to each side. Every slot
  // set also carries the implicit current-value condition on the target.
  for (size_t task = 0; task < schema.task_count(); ++task) {
    const std::string& target = schema.task_name(task);
    size_t target_stream = schema.task_streams()[task];
    for (size_t s = 0; s < schema.stream_count(); ++s) {
      for (int off = -offset_bound; off <= offset_bound; ++off) {
        // The bare target value is already every template's implicit slot.
        if (s == target_stream && off == 0) continue;
        add({eq(s, off)}, target);
      }
      if (offset_bound >= 2) {
        add({eq(s, -2), eq(s, -1)}, target);
        add({eq(s, 1), eq(s, 2)}, target);
      }
      if (offset_bound >= 1) {
        add({eq(s, -1), eq(s, 1)}, target);
        add({{Predicate::Kind::kWindowAny, schema.stream_name(s), -offset_bound, -1}},
            target);
        add({{Predicate::Kind::kWindowAny, schema.stream_name(s), 1, offset_bound}},
            target);
      }
    }
  }
  return out;
}

std::string escape_value(const std::string& v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    if (c == ' ' || c == '=' || c == ',' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

namespace {

// Splits on unescaped spaces. Escapes are resolved later, per field.
std::vector<std::string> split_rule_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      cur += c;
      cur += text[++i];
    } else if (c == ' ') {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

std::string unescape_value(const std::string& v, const std::string& context) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '\\') {
      if (i + 1 >= v.size()) throw DataError("dangling escape in '" + context + "'");
      out += v[++i];
    } else {
      out += v[i];
    }
  }
  if (out.empty()) throw DataError("empty value in '" + context + "'");
  return out;
}

// Finds the '=' that separates slot syntax from the value, then parses both.
Condition parse_grounded_condition(const std::string& token, const Schema& schema) {
  size_t close = token.find(']');
  if (close == std::string::npos || close + 1 >= token.size() || token[close + 1] != '=') {
    throw DataError("malformed rule condition '" + token + "'");
  }
  std::string slot_part = token.substr(0, close + 1);
  Cursor c{slot_part};
  Predicate p = parse_slot(c);
  if (!c.eof()) throw DataError("malformed rule condition '" + token + "'");
  if (schema.stream_index(p.stream) == Schema::npos) {
    throw DataError("rule references unknown stream '" + p.stream + "'");
  }
  return Condition{p, unescape_value(token.substr(close + 2), token)};
}

}  // namespace

std::string print_rule(const Rule& r) {
  std::string out;
  for (const Condition& c : r.conditions) {
    out += slot_text(c.pred) + "=" + escape_value(c.value) + " ";
  }
  return out + "=> " + r.target + "=" + escape_value(r.new_value);
}

Rule parse_rule(const std::string& text, const Schema& schema) {
  std::vector<std::string> tokens = split_rule_tokens(text);
  Rule r;
  size_t arrow = SIZE_MAX;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "=>") {
      arrow = i;
      break;
    }
  }
  if (arrow == SIZE_MAX || arrow == 0 || arrow + 2 != tokens.size()) {
    throw DataError("malformed rule '" + text + "'");
  }
  for (size_t i = 0; i < arrow; ++i) {
    r.conditions.push_back(parse_grounded_condition(tokens[i], schema));
  }
  const std::string& action = tokens[arrow + 1];
  size_t eq = action.find('=');
  if (eq == std::string::npos || eq == 0) throw DataError("malformed rule action '" + action + "'");
  r.target = action.substr(0, eq);
  r.new_value = unescape_value(action.substr(eq + 1), action);
  size_t target_idx = schema.stream_index(r.target);
  if (target_idx == Schema::npos || !schema.is_task(target_idx)) {
    throw DataError("rule target '" + r.target + "' is not a task stream");
  }
  for (const Condition& c : r.conditions) {
    if (c.pred.kind == Predicate::Kind::kEquality && c.pred.stream == r.target &&
        c.pred.lo == 0 && c.value == r.new_value) {
      throw DataError("rule rewrites to its own target condition value: " + text);
    }
  }
  return r;
}

bool rule_matches(const Rule& rule, const Corpus& corpus, size_t sent, size_t pos) {
  const Schema& schema = corpus.schema();
  size_t begin = corpus.sentence_begin(sent);
  size_t end = corpus.sentence_end(sent);
  size_t abs = begin + pos;
  if (abs >= end) throw DataError("position out of sentence");
  for (const Condition& c : rule.conditions) {
    size_t stream = schema.stream_index(c.pred.stream);
    if (stream == Schema::npos) {
      throw DataError("rule references unknown stream '" + c.pred.stream + "'");
    }
    uint32_t want = corpus.pool().find(c.value);
    if (c.pred.kind == Predicate::Kind::kEquality) {
      long long at = static_cast<long long>(abs) + c.pred.lo;
      uint32_t have = (at < static_cast<long long>(begin) || at >= static_cast<long long>(end))
                          ? StringPool::kOob
                          : corpus.value_id(stream, static_cast<size_t>(at));
      if (have != want) return false;
    } else {
      bool found = false;
      for (int off = c.pred.lo; off <= c.pred.hi && !found; ++off) {
        long long at = static_cast<long long>(abs) + off;
        uint32_t have = (at < static_cast<long long>(begin) || at >= static_cast<long long>(end))
                            ? StringPool::kOob
                            : corpus.value_id(stream, static_cast<size_t>(at));
        found = have == want;
      }
      if (!found) return false;
    }
  }
  return true;
}

std::vector<Rule> ground_candidates(const Template& t, const Corpus& corpus) {
  corpus.require_initialized();
  const Schema& schema = corpus.schema();
  size_t target_stream = schema.stream_index(t.target);
  if (target_stream == Schema::npos || !schema.is_task(target_stream)) {
    throw DataError("template target '" + t.target + "' is not a task stream");
  }
  size_t task = schema.task_of_stream(target_stream);

  std::vector<size_t> slot_streams;
  for (const Predicate& p : t.slots) {
    size_t s = schema.stream_index(p.stream);
    if (s == Schema::npos) throw DataError("template references unknown stream '" + p.stream + "'");
    slot_streams.push_back(s);
  }

  std::set<std::string> seen;
  std::vector<std::pair<std::string, Rule>> found;
  for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
    size_t begin = corpus.sentence_begin(sent);
    size_t end = corpus.sentence_end(sent);
    for (size_t abs = begin; abs < end; ++abs) {
      if (corpus.current_id(task, abs) == corpus.gold_id(target_stream, abs)) continue;
      auto value_at = [&](size_t stream, int off) -> uint32_t {
        long long at = static_cast<long long>(abs) + off;
        if (at < static_cast<long long>(begin) || at >= static_cast<long long>(end)) {
          return StringPool::kOob;
        }
        return corpus.value_id(stream, static_cast<size_t>(at));
      };

      // Window slots contribute one candidate per distinct value in range.
      std::vector<std::vector<uint32_t>> choices(t.slots.size());
      for (size_t i = 0; i < t.slots.size(); ++i) {
        const Predicate& p = t.slots[i];
        if (p.kind == Predicate::Kind::kEquality) {
          choices[i].push_back(value_at(slot_streams[i], p.lo));
        } else {
          for (int off = p.lo; off <= p.hi; ++off) {
            uint32_t v = value_at(slot_streams[i], off);
            if (std::find(choices[i].begin(), choices[i].end(), v) == choices[i].end()) {
              choices[i].push_back(v);
            }
          }
        }
      }

      std::vector<size_t> pick(t.slots.size(), 0);
      while (true) {
        Rule r;
        r.target = t.target;
        r.new_value = corpus.gold(target_stream, abs);
        for (size_t i = 0; i < t.slots.size(); ++i) {
          r.conditions.push_back({t.slots[i], corpus.text(choices[i][pick[i]])});
        }
        std::string serial = print_rule(r);
        if (seen.insert(serial).second) {
          found.emplace_back(std::move(serial), std::move(r));
        }
        size_t k = 0;
        while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rule> out;
  out.reserve(found.size());
  for (auto& [serial, rule] : found) out.push_back(std::move(rule));
  return out;
}

}  // namespace mtbl
