#pragma once

#include <cstddef>
#include <cstdint>

#include "mtbl/corpus.h"

namespace mtbl {

// Parameters for the two-task benchmark generator.
struct SynthConfig {
  size_t sentences = 0;
  double noise = 0.0;  // per-tag flip probability, in [0, 1)
  uint64_t seed = 0;
};

// word feature plus tasks a (lexicon keyed on word) and b (keyed on a's
// initial tag).
Schema synth_schema();

// Fixed-shape sentences whose tag streams depend on each other: a coin drawn
// per sentence is visible in the words only at the first token, so task a's
// coin-bearing slot is recoverable within the offset bound only through b's
// tags, and b's coin-bearing slot only through a's. noise flips each gold tag
// to a uniformly chosen other tag of the task's alphabet.
Corpus synth_corpus(const SynthConfig& config);

}  // namespace mtbl
