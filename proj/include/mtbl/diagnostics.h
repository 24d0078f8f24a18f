#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtbl/corpus.h"

namespace mtbl {

// Tag distribution conditioned on one word. Probabilities are non-negative
// and sum to 1 within 1e-9.
struct ConditionalDist {
  std::string key;
  std::map<std::string, double> probs;
};

// Natural-log KL divergence D(p || q). Terms with p(c)=0 contribute 0;
// a q zero (or missing tag) under positive p is an error, not infinity.
double kl_divergence(const ConditionalDist& p, const ConditionalDist& q);

inline constexpr double kDistSmoothing = 0.5;

// Add-0.5 smoothed distribution over the alphabet; zero counts everywhere
// yield the uniform distribution.
ConditionalDist smoothed_conditional(const std::string& word,
                                     const std::map<std::string, long long>& counts,
                                     const std::set<std::string>& alphabet);

// Relative frequencies of the task's current tags per word of word_stream,
// smoothed over the alphabet. The corpus current tags must hold the initial
// state (initialize with no rules applied).
std::map<std::string, ConditionalDist> build_conditionals(
    const Corpus& corpus, const std::string& task, const std::string& word_stream,
    const std::set<std::string>& alphabet);

struct DivergenceBucket {
  size_t index = 0;
  double min_divergence = 0.0;
  double max_divergence = 0.0;
  long long tokens = 0;
  std::vector<double> accuracy;  // one per system
  std::vector<double> chunk_f;   // one per system; empty when tags aren't B/I/O
};

struct DivergenceReport {
  std::vector<std::string> systems;
  std::vector<DivergenceBucket> buckets;
  bool has_chunk_f = false;
};

// Buckets the test vocabulary by divergence of train-vs-test initial tag
// distributions (equal token mass per bucket, each word kept whole) and
// reports each system's token accuracy per bucket, plus chunk F over spans
// lying entirely inside one bucket when the task's tags decode as B/I/O.
// Each system is a test-aligned corpus holding that system's output tags.
DivergenceReport divergence_report(
    const Corpus& train, const Corpus& test, const std::string& task,
    const std::vector<std::pair<std::string, const Corpus*>>& systems,
    size_t bucket_count = 4);

void write_divergence_report(const DivergenceReport& report, std::ostream& out);

}  // namespace mtbl
