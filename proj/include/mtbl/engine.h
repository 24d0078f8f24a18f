#pragma once

#include <cstddef>
#include <vector>

#include "mtbl/corpus.h"
#include "mtbl/lexicon.h"
#include "mtbl/model.h"

namespace mtbl {

// Sets every current task tag from the lexicon: the first key stream reads
// gold features, dependent tasks read the tags this call just assigned.
// Returns the number of tags that changed; a second run changes nothing.
size_t initialize(Corpus& corpus, const Lexicon& lexicon);

// Applies one rule with snapshot semantics: matches are found against the
// pre-application state of each sentence, then all matched positions are
// set at once. Returns the number of tags that actually changed; matches
// already holding new_value count zero.
size_t apply_rule(const Rule& rule, Corpus& corpus);

struct ApplyStats {
  size_t init_changes = 0;
  std::vector<size_t> rule_changes;  // aligned with model.rules
};

// Initializes, then applies each rule in learned order. The corpus schema
// must equal the model schema.
ApplyStats apply_model(const Model& model, Corpus& corpus);

}  // namespace mtbl
