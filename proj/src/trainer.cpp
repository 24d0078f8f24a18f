#include "mtbl/trainer.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mtbl/engine.h"
#include "mtbl/errors.h"
#include "mtbl/lexicon.h"
#include "mtbl/parallel.h"
#include "mtbl/string_pool.h"

namespace mtbl {

namespace {

// Rule with interned condition values, so matching compares ids only.
struct CompiledCond {
  size_t stream = 0;
  int lo = 0;
  int hi = 0;
  bool window = false;
  uint32_t value = 0;
};

struct CompiledRule {
  std::vector<CompiledCond> conds;
  size_t target_stream = 0;
  size_t task = 0;
  uint32_t new_id = 0;
};

CompiledRule compile_rule(const Rule& rule, const Corpus& corpus) {
  const Schema& schema = corpus.schema();
  CompiledRule cr;
  cr.target_stream = schema.stream_index(rule.target);
  if (cr.target_stream == Schema::npos || !schema.is_task(cr.target_stream)) {
    throw DataError("rule target '" + rule.target + "' is not a task stream");
  }
  cr.task = schema.task_of_stream(cr.target_stream);
  cr.new_id = corpus.pool().find(rule.new_value);
  for (const Condition& c : rule.conditions) {
    size_t stream = schema.stream_index(c.pred.stream);
    if (stream == Schema::npos) {
      throw DataError("rule references unknown stream '" + c.pred.stream + "'");
    }
    cr.conds.push_back({stream, c.pred.lo, c.pred.hi,
                        c.pred.kind == Predicate::Kind::kWindowAny,
                        corpus.pool().find(c.value)});
  }
  return cr;
}

uint32_t value_or_oob(const Corpus& corpus, size_t stream, size_t begin,
                      size_t end, long long at) {
  if (at < static_cast<long long>(begin) || at >= static_cast<long long>(end)) {
    return StringPool::kOob;
  }
  return corpus.value_id(stream, static_cast<size_t>(at));
}

bool cmatches(const CompiledRule& r, const Corpus& corpus, size_t begin,
              size_t end, size_t abs) {
  for (const CompiledCond& c : r.conds) {
    if (!c.window) {
      if (value_or_oob(corpus, c.stream, begin, end,
                       static_cast<long long>(abs) + c.lo) != c.value) {
        return false;
      }
    } else {
      bool found = false;
      for (int off = c.lo; off <= c.hi && !found; ++off) {
        found = value_or_oob(corpus, c.stream, begin, end,
                             static_cast<long long>(abs) + off) == c.value;
      }
      if (!found) return false;
    }
  }
  return true;
}

// Objective contribution of one matched position, in {-1, 0, +1}.
long long contrib_at(const CompiledRule& r, const Corpus& corpus, size_t abs) {
  uint32_t gold = corpus.gold_id(r.target_stream, abs);
  uint32_t cur = corpus.current_id(r.task, abs);
  return static_cast<long long>(r.new_id == gold) -
         static_cast<long long>(cur == gold);
}

// One grouped sweep scores every candidate of one template. Positions are
// bucketed by their grounded slot values; for a candidate with new value n,
// fixed - broken = gold_hist[n] - correct, because the hist term counts
// matches whose gold is n and the correct term counts matches that are
// right already (positions where both hold contribute zero either way).
struct Bucket {
  std::unordered_map<uint32_t, long long> gold_hist;
  long long correct = 0;
};

using BucketMap = std::unordered_map<std::string, Bucket>;

void append_id(std::string& key, uint32_t id) {
  char bytes[4];
  std::memcpy(bytes, &id, 4);
  key.append(bytes, 4);
}

BucketMap sweep_template(const Corpus& corpus, const Template& t,
                         size_t workers) {
  const Schema& schema = corpus.schema();
  size_t target_stream = schema.stream_index(t.target);
  size_t task = schema.task_of_stream(target_stream);
  std::vector<size_t> slot_streams;
  for (const Predicate& p : t.slots) {
    slot_streams.push_back(schema.stream_index(p.stream));
  }

  std::vector<BucketMap> maps(workers);
  parallel_for(
      corpus.sentence_count(), static_cast<int>(workers),
      [&](int worker, size_t sent_begin, size_t sent_end) {
        BucketMap& m = maps[worker];
        std::string key;
        std::vector<std::vector<uint32_t>> choices(t.slots.size());
        for (size_t sent = sent_begin; sent < sent_end; ++sent) {
          size_t begin = corpus.sentence_begin(sent);
          size_t end = corpus.sentence_end(sent);
          for (size_t abs = begin; abs < end; ++abs) {
            // Same value enumeration as candidate grounding: equality slots
            // pin one value, window slots one per distinct value in range.
            for (size_t i = 0; i < t.slots.size(); ++i) {
              const Predicate& p = t.slots[i];
              choices[i].clear();
              if (p.kind == Predicate::Kind::kEquality) {
                choices[i].push_back(value_or_oob(
                    corpus, slot_streams[i], begin, end,
                    static_cast<long long>(abs) + p.lo));
              } else {
                for (int off = p.lo; off <= p.hi; ++off) {
                  uint32_t v = value_or_oob(corpus, slot_streams[i], begin,
                                            end,
                                            static_cast<long long>(abs) + off);
                  if (std::find(choices[i].begin(), choices[i].end(), v) ==
                      choices[i].end()) {
                    choices[i].push_back(v);
                  }
                }
              }
            }
            uint32_t gold = corpus.gold_id(target_stream, abs);
            long long right = corpus.current_id(task, abs) == gold ? 1 : 0;
            std::vector<size_t> pick(t.slots.size(), 0);
            while (true) {
              key.clear();
              for (size_t i = 0; i < t.slots.size(); ++i) {
                append_id(key, choices[i][pick[i]]);
              }
              Bucket& b = m[key];
              b.gold_hist[gold] += 1;
              b.correct += right;
              size_t k = 0;
              while (k < pick.size() && ++pick[k] == choices[k].size()) {
                pick[k++] = 0;
              }
              if (k == pick.size()) break;
            }
          }
        }
      });

  // Integer sums, so merge order cannot affect the result.
  for (size_t w = 1; w < maps.size(); ++w) {
    for (auto& [key, b] : maps[w]) {
      Bucket& dst = maps[0][key];
      dst.correct += b.correct;
      for (auto& [gold, count] : b.gold_hist) dst.gold_hist[gold] += count;
    }
  }
  return std::move(maps[0]);
}

// Scores grounded candidates of one template; candidate conditions must be
// aligned with the template slots, which is how grounding emits them.
std::vector<long long> score_candidates(const Corpus& corpus,
                                        const Template& t,
                                        const std::vector<Rule>& cands,
                                        size_t workers) {
  if (cands.empty()) return {};
  BucketMap buckets = sweep_template(corpus, t, workers);
  std::vector<long long> nets;
  nets.reserve(cands.size());
  std::string key;
  for (const Rule& r : cands) {
    key.clear();
    for (const Condition& c : r.conditions) {
      append_id(key, corpus.pool().find(c.value));
    }
    auto it = buckets.find(key);
    if (it == buckets.end()) {
      nets.push_back(0);
      continue;
    }
    auto hit = it->second.gold_hist.find(corpus.pool().find(r.new_value));
    long long hist = hit == it->second.gold_hist.end() ? 0 : hit->second;
    nets.push_back(hist - it->second.correct);
  }
  return nets;
}

std::vector<long long> correct_counts(const Corpus& corpus) {
  const Schema& schema = corpus.schema();
  std::vector<long long> counts(schema.task_count(), 0);
  for (size_t t = 0; t < schema.task_count(); ++t) {
    size_t stream = schema.task_streams()[t];
    for (size_t pos = 0; pos < corpus.token_count(); ++pos) {
      counts[t] += corpus.current_id(t, pos) == corpus.gold_id(stream, pos);
    }
  }
  return counts;
}

std::vector<double> to_accuracies(const std::vector<long long>& counts,
                                  size_t tokens) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (long long c : counts) {
    out.push_back(static_cast<double>(c) / static_cast<double>(tokens));
  }
  return out;
}

Rational weighted_error_of(const std::vector<long long>& counts,
                           const Corpus& corpus) {
  const Schema& schema = corpus.schema();
  long long tokens = static_cast<long long>(corpus.token_count());
  Rational error(0);
  for (size_t t = 0; t < counts.size(); ++t) {
    error += schema.task_weight(t) * Rational(tokens - counts[t]);
  }
  return error;
}

}  // namespace

Rational score_rule_naive(const Rule& rule, const Corpus& corpus) {
  corpus.require_initialized();
  CompiledRule cr = compile_rule(rule, corpus);
  long long net = 0;
  for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
    size_t begin = corpus.sentence_begin(sent);
    size_t end = corpus.sentence_end(sent);
    for (size_t abs = begin; abs < end; ++abs) {
      if (cmatches(cr, corpus, begin, end, abs)) {
        net += contrib_at(cr, corpus, abs);
      }
    }
  }
  return corpus.schema().task_weight(cr.task) * Rational(net);
}

std::optional<std::pair<Rule, Rational>> best_rule(const Corpus& corpus,
                                                   const TrainConfig& config) {
  corpus.require_initialized();
  const Schema& schema = corpus.schema();
  size_t workers = std::max<size_t>(1, config.workers);

  bool found = false;
  Rule best;
  std::string best_serial;
  Rational best_score;
  for (const Template& t : config.templates) {
    std::vector<Rule> cands = ground_candidates(t, corpus);
    if (cands.empty()) continue;
    std::vector<long long> nets = score_candidates(corpus, t, cands, workers);
    // Candidates are serialization-sorted, so the first strict maximum is
    // already the tie-break winner within this template.
    size_t best_i = 0;
    for (size_t i = 1; i < nets.size(); ++i) {
      if (nets[i] > nets[best_i]) best_i = i;
    }
    size_t task = schema.task_of_stream(schema.stream_index(t.target));
    Rational score = schema.task_weight(task) * Rational(nets[best_i]);
    if (score < config.min_score) continue;
    std::string serial = print_rule(cands[best_i]);
    if (!found || score > best_score ||
        (score == best_score && serial < best_serial)) {
      found = true;
      best = cands[best_i];
      best_serial = std::move(serial);
      best_score = score;
    }
  }
  if (!found) return std::nullopt;
  return std::make_pair(best, best_score);
}

// ---------------------------------------------------------------------------
// Incremental scorer.

struct ScoreBoard::Impl {
  Corpus& corpus;
  std::vector<Template> templates;
  size_t workers;
  // Conditions never read past this many tokens from a position, so a
  // changed position can only disturb scores inside its +/- bound slice.
  int bound = 0;

  struct Cand {
    Rule rule;
    std::string serial;
    CompiledRule cr;
    long long net = 0;
  };
  std::deque<Cand> cands;  // stable addresses; index is the candidate id
  std::unordered_map<std::string, uint32_t> by_serial;
  // (stream, offset, value) of each candidate's first condition -> ids.
  // Enumerating every (stream, offset) pair around a position therefore
  // reaches a superset of the candidates matching there.
  std::unordered_map<uint64_t, std::vector<uint32_t>> anchors;
  std::vector<uint32_t> stamps;  // dedups candidates within one visit
  uint32_t stamp_cur = 0;

  Impl(Corpus& c, std::vector<Template> ts, size_t w)
      : corpus(c), templates(std::move(ts)), workers(std::max<size_t>(1, w)) {
    for (const Template& t : templates) {
      for (const Predicate& p : t.slots) {
        bound = std::max({bound, std::abs(p.lo), std::abs(p.hi)});
      }
    }
  }

  static uint64_t pack(size_t stream, int off, uint32_t value) {
    return (static_cast<uint64_t>(stream) << 48) |
           (static_cast<uint64_t>(static_cast<uint16_t>(off + 0x8000)) << 32) |
           value;
  }

  void insert(Rule rule, std::string serial, long long net) {
    CompiledRule cr = compile_rule(rule, corpus);
    if (cr.new_id == StringPool::kUnset - 1) {
      throw std::logic_error("candidate rewrites to a value missing from the pool");
    }
    uint32_t id = static_cast<uint32_t>(cands.size());
    const CompiledCond& a = cr.conds.front();  // rules carry >= 1 condition
    for (int off = a.lo; off <= a.hi; ++off) {
      anchors[pack(a.stream, off, a.value)].push_back(id);
    }
    cands.push_back({std::move(rule), std::move(serial), std::move(cr), net});
    by_serial.emplace(cands.back().serial, id);
    stamps.push_back(0);
  }

  size_t refresh() {
    size_t added = 0;
    std::vector<Rule> fresh;
    std::vector<std::string> serials;
    for (const Template& t : templates) {
      std::vector<Rule> ground = ground_candidates(t, corpus);
      fresh.clear();
      serials.clear();
      for (Rule& r : ground) {
        std::string serial = print_rule(r);
        if (by_serial.count(serial) != 0) continue;
        fresh.push_back(std::move(r));
        serials.push_back(std::move(serial));
      }
      if (fresh.empty()) continue;
      std::vector<long long> nets = score_candidates(corpus, t, fresh, workers);
      for (size_t i = 0; i < fresh.size(); ++i) {
        insert(std::move(fresh[i]), std::move(serials[i]), nets[i]);
      }
      added += fresh.size();
    }
    return added;
  }

  std::optional<std::pair<Rule, Rational>> best(const Rational& min_score) const {
    const Schema& schema = corpus.schema();
    bool positive_min = min_score > Rational(0);
    const Cand* champ = nullptr;
    Rational champ_score;
    for (const Cand& c : cands) {
      if (positive_min && c.net <= 0) continue;
      Rational score = schema.task_weight(c.cr.task) * Rational(c.net);
      if (score < min_score) continue;
      if (champ == nullptr || score > champ_score ||
          (score == champ_score && c.serial < champ->serial)) {
        champ = &c;
        champ_score = score;
      }
    }
    if (champ == nullptr) return std::nullopt;
    return std::make_pair(champ->rule, champ_score);
  }

  // Adds sign * contribution of position q to every candidate matching
  // there, under the corpus state current at call time.
  void visit(size_t q, long long sign) {
    size_t sent = corpus.sentence_of(q);
    size_t begin = corpus.sentence_begin(sent);
    size_t end = corpus.sentence_end(sent);
    if (++stamp_cur == 0) {
      std::fill(stamps.begin(), stamps.end(), 0);
      stamp_cur = 1;
    }
    const Schema& schema = corpus.schema();
    for (size_t s = 0; s < schema.stream_count(); ++s) {
      for (int off = -bound; off <= bound; ++off) {
        uint32_t v = value_or_oob(corpus, s, begin, end,
                                  static_cast<long long>(q) + off);
        auto it = anchors.find(pack(s, off, v));
        if (it == anchors.end()) continue;
        for (uint32_t id : it->second) {
          if (stamps[id] == stamp_cur) continue;
          stamps[id] = stamp_cur;
          Cand& c = cands[id];
          if (cmatches(c.cr, corpus, begin, end, q)) {
            c.net += sign * contrib_at(c.cr, corpus, q);
          }
        }
      }
    }
  }

  size_t apply(const std::string& serial) {
    auto it = by_serial.find(serial);
    if (it == by_serial.end()) throw DataError("rule is not tracked: " + serial);
    const CompiledRule cr = cands[it->second].cr;

    // Snapshot semantics: the full match set is collected before any write.
    std::vector<size_t> changed;
    for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
      size_t begin = corpus.sentence_begin(sent);
      size_t end = corpus.sentence_end(sent);
      for (size_t abs = begin; abs < end; ++abs) {
        if (corpus.current_id(cr.task, abs) != cr.new_id &&
            cmatches(cr, corpus, begin, end, abs)) {
          changed.push_back(abs);
        }
      }
    }
    if (changed.empty()) return 0;

    std::vector<size_t> area;
    for (size_t p : changed) {
      size_t sent = corpus.sentence_of(p);
      long long lo = std::max<long long>(corpus.sentence_begin(sent),
                                         static_cast<long long>(p) - bound);
      long long hi = std::min<long long>(corpus.sentence_end(sent) - 1,
                                         static_cast<long long>(p) + bound);
      for (long long q = lo; q <= hi; ++q) area.push_back(static_cast<size_t>(q));
    }
    std::sort(area.begin(), area.end());
    area.erase(std::unique(area.begin(), area.end()), area.end());

    // Retract affected contributions, rewrite the tags, add them back.
    for (size_t q : area) visit(q, -1);
    for (size_t p : changed) corpus.set_current_id(cr.task, p, cr.new_id);
    for (size_t q : area) visit(q, +1);
    return changed.size();
  }
};

ScoreBoard::ScoreBoard(Corpus& corpus, std::vector<Template> templates,
                       size_t workers)
    : impl_(std::make_unique<Impl>(corpus, std::move(templates), workers)) {}

ScoreBoard::~ScoreBoard() = default;

size_t ScoreBoard::refresh() { return impl_->refresh(); }

std::optional<std::pair<Rule, Rational>> ScoreBoard::best(
    const Rational& min_score) const {
  return impl_->best(min_score);
}

size_t ScoreBoard::apply(const std::string& serialization) {
  return impl_->apply(serialization);
}

std::optional<Rational> ScoreBoard::stored_score(
    const std::string& serialization) const {
  auto it = impl_->by_serial.find(serialization);
  if (it == impl_->by_serial.end()) return std::nullopt;
  const Impl::Cand& c = impl_->cands[it->second];
  return impl_->corpus.schema().task_weight(c.cr.task) * Rational(c.net);
}

size_t ScoreBoard::tracked() const { return impl_->cands.size(); }

// ---------------------------------------------------------------------------
// Training loops.

namespace {

void run_phase(Corpus& corpus, const TrainConfig& config,
               const std::vector<Template>& templates, TrainResult& res) {
  TrainConfig local = config;
  local.templates = templates;
  std::unique_ptr<ScoreBoard> board;
  if (config.scorer == TrainConfig::Scorer::kIndexed && !templates.empty()) {
    board = std::make_unique<ScoreBoard>(corpus, templates,
                                         std::max<size_t>(1, config.workers));
  }
  while (true) {
    if (config.max_rules != 0 && res.model.rules.size() >= config.max_rules) {
      res.hit_max_rules = true;
      break;
    }
    std::optional<std::pair<Rule, Rational>> sel;
    if (board != nullptr) {
      board->refresh();
      sel = board->best(config.min_score);
      if (config.cross_check) {
        auto naive = best_rule(corpus, local);
        bool same =
            naive.has_value() == sel.has_value() &&
            (!sel || (print_rule(naive->first) == print_rule(sel->first) &&
                      naive->second == sel->second));
        if (!same) {
          throw std::logic_error("indexed scorer diverged from the naive scorer");
        }
      }
    } else {
      sel = best_rule(corpus, local);
    }
    if (!sel) break;
    if (config.cross_check &&
        score_rule_naive(sel->first, corpus) != sel->second) {
      throw std::logic_error("selected rule score does not match its naive score");
    }

    size_t changes = board != nullptr ? board->apply(print_rule(sel->first))
                                      : apply_rule(sel->first, corpus);
    std::vector<long long> counts = correct_counts(corpus);
    TrainIteration iter;
    iter.iteration = res.log.size() + 1;
    iter.rule = print_rule(sel->first);
    iter.score = sel->second;
    iter.changes = changes;
    iter.task_accuracy = to_accuracies(counts, corpus.token_count());
    iter.weighted_error = weighted_error_of(counts, corpus);
    res.model.rules.push_back(sel->first);
    res.log.push_back(std::move(iter));
  }
}

void validate_train_config(const TrainConfig& config) {
  if (config.templates.empty()) {
    throw ConfigError("training requires at least one template");
  }
  if (config.min_score <= Rational(0)) {
    throw ConfigError("min_score must be positive");
  }
}

TrainResult start_training(Corpus& training) {
  TrainResult res;
  res.model.schema = training.schema();
  res.model.lexicon = build_lexicon(training);
  initialize(training, res.model.lexicon);
  std::vector<long long> counts = correct_counts(training);
  res.initial_accuracy = to_accuracies(counts, training.token_count());
  res.initial_error = weighted_error_of(counts, training);
  return res;
}

}  // namespace

TrainResult train_joint(Corpus& training, const TrainConfig& config) {
  validate_train_config(config);
  TrainResult res = start_training(training);
  run_phase(training, config, config.templates, res);
  return res;
}

TrainResult train_sequential(Corpus& training, const TrainConfig& config) {
  validate_train_config(config);
  const Schema& schema = training.schema();

  std::vector<std::string> order = config.task_order;
  if (order.empty()) {
    for (size_t t = 0; t < schema.task_count(); ++t) {
      order.push_back(schema.task_name(t));
    }
  }
  std::set<std::string> want;
  for (size_t t = 0; t < schema.task_count(); ++t) want.insert(schema.task_name(t));
  if (std::set<std::string>(order.begin(), order.end()) != want ||
      order.size() != schema.task_count()) {
    throw ConfigError("sequential task order must be a permutation of the schema's tasks");
  }

  TrainResult res = start_training(training);
  // Streams a phase may condition on: features plus tasks already trained,
  // plus the phase's own task. Later tasks stay invisible.
  std::set<size_t> allowed;
  for (size_t s = 0; s < schema.stream_count(); ++s) {
    if (!schema.is_task(s)) allowed.insert(s);
  }
  for (const std::string& task : order) {
    allowed.insert(schema.stream_index(task));
    std::vector<Template> phase;
    for (const Template& t : config.templates) {
      if (t.target != task) continue;
      bool ok = true;
      for (const Predicate& p : t.slots) {
        ok = ok && allowed.count(schema.stream_index(p.stream)) != 0;
      }
      if (ok) phase.push_back(t);
    }
    res.model.phases.emplace_back(res.model.rules.size(), task);
    run_phase(training, config, phase, res);
  }
  return res;
}

TrainResult train(Corpus& training, const TrainConfig& config) {
  return config.mode == TrainConfig::Mode::kSequential
             ? train_sequential(training, config)
             : train_joint(training, config);
}

void write_train_log(const TrainResult& result, std::ostream& out) {
  const Schema& schema = result.model.schema;
  out << "# iteration\trule\tscore";
  for (size_t t = 0; t < schema.task_count(); ++t) {
    out << "\tacc:" << schema.task_name(t);
  }
  out << '\n';
  char buf[32];
  for (const TrainIteration& iter : result.log) {
    out << iter.iteration << '\t' << iter.rule << '\t'
        << format_rational(iter.score);
    for (double a : iter.task_accuracy) {
      std::snprintf(buf, sizeof buf, "%.4f", a);
      out << '\t' << buf;
    }
    out << '\n';
  }
  if (result.hit_max_rules) out << "# stopped: max_rules reached\n";
}

}  // namespace mtbl
