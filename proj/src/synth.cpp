#include "mtbl/synth.h"

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "mtbl/errors.h"
#include "mtbl/rng.h"

namespace mtbl {

namespace {

// Sentence shape: s mk mk mk d f f e. The coin word at slot 0 sits outside
// the default offset bound of the d slot (distance 4), which is what forces
// the d tag to be read off task b's mk tags.
constexpr size_t kSentenceLength = 8;

const std::array<std::string, 6> kTagsA = {"AS", "AM", "A1",
                                           "A2", "AF", "AE"};
const std::array<std::string, 7> kTagsB = {"BS", "BX", "BY", "BD",
                                           "BF", "B1", "B2"};

std::string numbered(const char* prefix, uint64_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%02u", prefix, static_cast<unsigned>(n));
  return buf;
}

// Gold tag after the noise channel: lane 2t decides whether position pos of
// task t flips, lane 2t+1 picks the replacement among the other tags.
template <size_t N>
std::string noisy(const std::array<std::string, N>& tags, size_t gold,
                  const SynthConfig& config, uint64_t pos, uint64_t task) {
  if (counter_unit(config.seed, pos, 2 * task) >= config.noise) {
    return tags[gold];
  }
  auto pick = static_cast<size_t>(counter_unit(config.seed, pos, 2 * task + 1) *
                                  static_cast<double>(N - 1));
  if (pick >= N - 1) pick = N - 2;  // guard the open upper bound
  return tags[pick < gold ? pick : pick + 1];
}

}  // namespace

Schema synth_schema() {
  StreamDecl word{"word", false, Rational(1), ""};
  StreamDecl a{"a", true, Rational(1), "word"};
  StreamDecl b{"b", true, Rational(1), "a"};
  return Schema({word, a, b});
}

Corpus synth_corpus(const SynthConfig& config) {
  if (config.sentences == 0) {
    throw ConfigError("synthetic corpus needs a positive sentence count");
  }
  if (config.noise < 0.0 || config.noise >= 1.0) {
    throw ConfigError("noise must be in [0, 1)");
  }

  Corpus corpus(synth_schema());
  Rng rng(config.seed);
  uint64_t pos = 0;
  for (size_t s = 0; s < config.sentences; ++s) {
    bool heads = rng.below(2) == 0;
    std::vector<std::string> words = {heads ? "sx" : "sy",
                                      "mk",
                                      "mk",
                                      "mk",
                                      numbered("da", rng.below(30)),
                                      numbered("fw", rng.below(40)),
                                      numbered("fw", rng.below(40)),
                                      numbered("eb", rng.below(30))};
    // Indices into kTagsA / kTagsB per slot.
    std::array<size_t, kSentenceLength> a = {0, 1, 1, 1, heads ? 2u : 3u,
                                             4, 4, 5};
    std::array<size_t, kSentenceLength> b = {0, heads ? 1u : 2u,
                                             heads ? 1u : 2u,
                                             heads ? 1u : 2u,
                                             3, 4, 4, heads ? 5u : 6u};
    std::vector<std::vector<std::string>> tokens;
    for (size_t i = 0; i < kSentenceLength; ++i, ++pos) {
      tokens.push_back({words[i], noisy(kTagsA, a[i], config, pos, 0),
                        noisy(kTagsB, b[i], config, pos, 1)});
    }
    corpus.add_sentence(tokens);
  }
  return corpus;
}

}  // namespace mtbl
