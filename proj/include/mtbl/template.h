#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtbl/corpus.h"
#include "mtbl/schema.h"

namespace mtbl {

// One condition slot. Equality tests the value at a single offset; WindowAny
// tests whether the value occurs anywhere in [lo, hi]. Offsets outside the
// sentence compare against the reserved boundary value.
struct Predicate {
  enum class Kind { kEquality, kWindowAny };
  Kind kind = Kind::kEquality;
  std::string stream;
  int lo = 0;  // equality uses lo as the offset and ignores hi
  int hi = 0;

  bool operator==(const Predicate& other) const {
    return kind == other.kind && stream == other.stream && lo == other.lo &&
           (kind == Kind::kEquality || hi == other.hi);
  }
};

// Ungrounded rule shape: condition slots and the task stream it rewrites.
// Slots are instantiated with values observed at error positions. A slot on
// the target at offset 0 makes rules condition on the tag being replaced;
// make_template adds one by default.
struct Template {
  std::vector<Predicate> slots;
  std::string target;

  bool operator==(const Template& other) const {
    return slots == other.slots && target == other.target;
  }
};

// A grounded condition: the slot plus the value it requires.
struct Condition {
  Predicate pred;
  std::string value;

  bool operator==(const Condition& other) const {
    return pred == other.pred && value == other.value;
  }
};

// Ordered rewrite rule: when all conditions hold at a position, the target
// task's tag becomes new_value.
struct Rule {
  std::vector<Condition> conditions;
  std::string target;
  std::string new_value;

  bool operator==(const Rule& other) const {
    return conditions == other.conditions && target == other.target &&
           new_value == other.new_value;
  }
};

// Validates slots against the schema and offset bound; when
// include_target_value is set, appends an equality slot on (target, 0) unless
// one is already present.
Template make_template(std::vector<Predicate> slots, const std::string& target,
                       const Schema& schema, int offset_bound = 3,
                       bool include_target_value = true);

// Grammar: COND ("," COND)* "=>" STREAM with COND := STREAM "[" INT "]" or
// STREAM "[" INT ".." INT "]". Whitespace is allowed around tokens. Exactly
// what is written is kept: no implicit target slot is added. Syntax errors
// report a 1-based column.
Template parse_template(const std::string& text, const Schema& schema, int offset_bound = 3);
std::string print_template(const Template& t);

// One template per line; blank lines and lines starting with '#' are skipped.
std::vector<Template> parse_template_file(const std::string& path, const Schema& schema,
                                          int offset_bound = 3);

// Per task and stream: every single slot at offsets within the bound, short
// same-stream context pairs, and one WindowAny over [-bound,-1] and [1,bound],
// each with the target value slot included. Deduplicated.
std::vector<Template> default_templates(const Schema& schema, int offset_bound = 3);

// Serialization: GCOND (" " GCOND)* " => " STREAM "=" VALUE where GCOND is
// STREAM "[" INT "]" "=" VALUE or STREAM "[" INT ".." INT "]" "=" VALUE.
// Backslash escapes space, '=', ',' and backslash inside values.
std::string print_rule(const Rule& r);
Rule parse_rule(const std::string& text, const Schema& schema);

// True when every condition holds at token pos of sentence sent.
bool rule_matches(const Rule& rule, const Corpus& corpus, size_t sent, size_t pos);

// Grounds the template at every position where the target task's current tag
// is wrong, instantiating equality slots with observed values, window slots
// with each distinct value in their window, and new_value with the gold tag.
// Every returned rule fixes at least one error. Deduplicated and sorted by
// serialization.
std::vector<Rule> ground_candidates(const Template& t, const Corpus& corpus);

std::string escape_value(const std::string& v);

}  // namespace mtbl
