#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mtbl/lexicon.h"
#include "mtbl/schema.h"
#include "mtbl/template.h"

namespace mtbl {

// A trained tagger: initial-state lexicon plus the ordered rule list.
// Sequential training records where each task's phase starts; joint models
// have no phase marks.
struct Model {
  Schema schema;
  Lexicon lexicon;
  std::vector<Rule> rules;
  // (rule index the phase starts at, task name), in training order.
  std::vector<std::pair<size_t, std::string>> phases;
};

// Text format, three sections in fixed order:
//   ## SCHEMA    one stream per line, schema order
//   ## LEXICON   "task key tag count", tasks in order, keys and tags sorted
//   ## RULES     one rule per line; "#phase <task>" lines mark phase starts
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::string& path);

Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

}  // namespace mtbl
