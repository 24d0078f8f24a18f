#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtbl/corpus.h"
#include "mtbl/model.h"
#include "mtbl/rational.h"
#include "mtbl/template.h"

namespace mtbl {

struct TrainConfig {
  std::vector<Template> templates;
  // Learning stops once no candidate reaches it; must stay positive.
  Rational min_score{1};
  size_t max_rules = 0;  // 0 = unlimited

  enum class Mode { kJoint, kSequential };
  Mode mode = Mode::kJoint;
  // Sequential phase order; empty means schema task order.
  std::vector<std::string> task_order;

  enum class Scorer { kNaive, kIndexed };
  Scorer scorer = Scorer::kIndexed;
  size_t workers = 1;
  // Verify every indexed selection against the naive scorer.
  bool cross_check = false;
};

struct TrainIteration {
  size_t iteration = 0;  // 1-based, global across sequential phases
  std::string rule;      // serialized form
  Rational score;
  size_t changes = 0;
  // State after applying this rule.
  std::vector<double> task_accuracy;
  Rational weighted_error;
};

struct TrainResult {
  Model model;
  std::vector<TrainIteration> log;
  // State right after initialization.
  std::vector<double> initial_accuracy;
  Rational initial_error;
  bool hit_max_rules = false;
};

// Exact objective value of one rule on the current state: the target task's
// weight times (errors fixed minus correct tags broken). Every other task's
// term cancels because a rule rewrites only its target stream.
Rational score_rule_naive(const Rule& rule, const Corpus& corpus);

// Grounds every template at the current error positions, scores all
// candidates, and returns the best one if it reaches config.min_score.
// Ties go to the lexicographically smallest rule serialization.
std::optional<std::pair<Rule, Rational>> best_rule(const Corpus& corpus,
                                                   const TrainConfig& config);

// Greedy training; dispatches on config.mode. The corpus is left in the
// model's output state on the training data.
TrainResult train(Corpus& training, const TrainConfig& config);
TrainResult train_joint(Corpus& training, const TrainConfig& config);
TrainResult train_sequential(Corpus& training, const TrainConfig& config);

// One tab-separated line per iteration: iteration, rule, score, then each
// task's cumulative accuracy to four decimals. A '#' header names the
// columns; a trailing '#' line reports the max_rules stop when it happened.
void write_train_log(const TrainResult& result, std::ostream& out);

// Incremental scorer. Tracks every candidate ever grounded together with
// its exact objective score on the current state of the corpus; scores are
// repaired in place around rule applications instead of being recomputed.
// The corpus must outlive the board and may only change through apply().
class ScoreBoard {
 public:
  ScoreBoard(Corpus& corpus, std::vector<Template> templates,
             size_t workers = 1);
  ~ScoreBoard();
  ScoreBoard(const ScoreBoard&) = delete;
  ScoreBoard& operator=(const ScoreBoard&) = delete;

  // Grounds candidates at the current error positions and scores the ones
  // not yet tracked. Returns how many were added. Any rule that can still
  // reach a positive score is grounded here, so stale entries never win.
  size_t refresh();

  // Best tracked candidate reaching min_score, ties to the smallest
  // serialization.
  std::optional<std::pair<Rule, Rational>> best(const Rational& min_score) const;

  // Applies a tracked rule to the corpus, repairing affected scores only
  // inside the changed positions' condition neighborhoods. Returns the
  // number of tags changed.
  size_t apply(const std::string& serialization);

  // Stored score of a tracked rule, for equivalence audits.
  std::optional<Rational> stored_score(const std::string& serialization) const;
  size_t tracked() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mtbl
