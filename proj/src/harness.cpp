#include "smash/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

#include "smash/error.hpp"
#include "smash/evaluate.hpp"
#include "smash/ml/selection.hpp"
#include "smash/rewriter.hpp"

namespace smash {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Strategy strategy_from_string(const std::string& s) {
  if (s == "Base") return Strategy::Base;
  if (s == "Rewriting") return Strategy::Rewriting;
  throw Error(ErrorCode::MissingStrategy, "unknown strategy '" + s + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

const char* to_string(Strategy s) { return s == Strategy::Base ? "Base" : "Rewriting"; }

std::string result_checksum(const Relation& rel) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto& row : canonical_rows(rel)) {
    for (const auto& v : row) mix(to_text(v));
    mix("\n");
  }
  return hex64(h);
}

const RunEntry* RunLog::find(const std::string& id, Strategy s) const {
  for (const auto& e : entries)
    if (e.query_id == id && e.strategy == s) return &e;
  return nullptr;
}

std::vector<std::string> RunLog::query_ids() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : entries)
    if (seen.insert(e.query_id).second) out.push_back(e.query_id);
  return out;
}

bool RunLog::excluded(const std::string& id) const {
  const auto* b = find(id, Strategy::Base);
  const auto* r = find(id, Strategy::Rewriting);
  return b != nullptr && r != nullptr && b->timed_out && r->timed_out;
}

nlohmann::ordered_json RunLog::to_json(bool with_timing) const {
  nlohmann::ordered_json j;
  j["config"] = {{"repeats", config.repeats}, {"timeout_s", config.timeout_s}, {"seed", config.seed}};
  j["clock"] = "steady_clock";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json o;
    o["query_id"] = e.query_id;
    o["strategy"] = to_string(e.strategy);
    if (with_timing) {
      o["warmup_s"] = e.warmup_s;
      o["rep_times_s"] = e.rep_times_s;
      o["mean_s"] = e.mean_s;
    }
    o["timed_out"] = e.timed_out;
    o["result_rows"] = e.result_rows;
    o["result_checksum"] = e.result_checksum;
    if (!e.error.empty()) o["error"] = e.error;
    arr.push_back(std::move(o));
  }
  j["entries"] = std::move(arr);
  auto sk = nlohmann::ordered_json::array();
  for (const auto& s : skipped) sk.push_back({{"query_id", s.query_id}, {"reason", s.reason}});
  j["skipped"] = std::move(sk);
  return j;
}

RunLog RunLog::from_json(const nlohmann::json& j) {
  RunLog log;
  const auto& c = j.at("config");
  log.config.repeats = c.at("repeats").get<std::size_t>();
  log.config.timeout_s = c.at("timeout_s").get<double>();
  log.config.seed = c.at("seed").get<std::uint64_t>();
  for (const auto& o : j.at("entries")) {
    RunEntry e;
    e.query_id = o.at("query_id").get<std::string>();
    e.strategy = strategy_from_string(o.at("strategy").get<std::string>());
    e.warmup_s = o.value("warmup_s", 0.0);
    if (o.contains("rep_times_s")) e.rep_times_s = o["rep_times_s"].get<std::vector<double>>();
    e.mean_s = o.value("mean_s", 0.0);
    e.timed_out = o.at("timed_out").get<bool>();
    e.result_rows = o.value("result_rows", std::size_t{0});
    e.result_checksum = o.value("result_checksum", std::string());
    e.error = o.value("error", std::string());
    log.entries.push_back(std::move(e));
  }
  if (j.contains("skipped"))
    for (const auto& s : j["skipped"]) log.skipped.push_back({s.at("query_id").get<std::string>(), s.at("reason").get<std::string>()});
  return log;
}

RunEntry run_strategy(const std::string& id, const QuerySpec& q, const Database& db, Strategy s,
                      const HarnessConfig& config) {
  const auto catalog = db.catalog();
  const auto cq = normalize(q, &catalog);
  const auto tree = make_join_tree(cq);
  RunEntry e;
  e.query_id = id;
  e.strategy = s;
  const auto budget = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.timeout_s));

  // Returns false on timeout.
  auto run = [&](double& elapsed, Relation* result) {
    ExecContext ctx;
    const auto t0 = Clock::now();
    ctx.deadline = t0 + budget;
    try {
      Relation r = s == Strategy::Base ? evaluate_baseline(cq, db, &ctx)
                                       : interpret_sequence(rewrite(tree, cq), db, &ctx);
      elapsed = seconds_since(t0);
      if (result != nullptr) *result = std::move(r);
    } catch (const Error& err) {
      elapsed = seconds_since(t0);
      if (err.code() == ErrorCode::Timeout) return false;
      // Aggregating an empty join is a legitimate empty answer.
      if (err.code() != ErrorCode::EmptyAggregate) throw;
      if (result != nullptr) *result = Relation();
    }
    return true;
  };

  try {
    Relation result;
    if (!run(e.warmup_s, &result)) {
      e.timed_out = true;
      e.mean_s = config.timeout_s;
      return e;
    }
    e.result_rows = result.size();
    e.result_checksum = result_checksum(result);
    for (std::size_t i = 0; i < config.repeats; ++i) {
      double t = 0.0;
      if (!run(t, nullptr)) {
        e.timed_out = true;
        break;
      }
      e.rep_times_s.push_back(t);
    }
  } catch (const std::exception& err) {
    e.error = err.what();
  }
  if (e.timed_out) {
    e.mean_s = config.timeout_s;
  } else if (!e.rep_times_s.empty()) {
    double sum = 0.0;
    for (double t : e.rep_times_s) sum += t;
    e.mean_s = sum / static_cast<double>(e.rep_times_s.size());
  }
  return e;
}

RunLog run_workload(const Database& db, const std::vector<std::string>& ids, const std::vector<QuerySpec>& queries,
                    const HarnessConfig& config) {
  if (ids.size() != queries.size()) throw Error(ErrorCode::LengthMismatch, "query ids and queries differ in length");
  RunLog log;
  log.config = config;
  const auto catalog = db.catalog();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    try {
      make_join_tree(normalize(queries[i], &catalog));
    } catch (const std::exception& err) {
      log.skipped.push_back({ids[i], err.what()});
      continue;
    }
    for (auto s : {Strategy::Base, Strategy::Rewriting}) log.entries.push_back(run_strategy(ids[i], queries[i], db, s, config));
  }
  return log;
}

std::vector<ml::LabeledExample> build_dataset(const RunLog& log, const std::map<std::string, FeatureVector>& features) {
  std::vector<ml::LabeledExample> out;
  for (const auto& id : log.query_ids()) {
    const auto* b = log.find(id, Strategy::Base);
    const auto* r = log.find(id, Strategy::Rewriting);
    if (b == nullptr || r == nullptr) throw Error(ErrorCode::MissingStrategy, "query '" + id + "' lacks a strategy");
    if (log.excluded(id) || !b->error.empty() || !r->error.empty()) continue;
    auto f = features.find(id);
    if (f == features.end()) throw Error(ErrorCode::MissingStrategy, "query '" + id + "' has no feature vector");
    out.push_back(ml::label(f->second, b->mean_s, r->mean_s, id));
  }
  return out;
}

E2eReport smash_e2e(const Database& db, const std::vector<std::string>& ids, const std::vector<QuerySpec>& queries,
                    const ml::CartModel& model, double threshold, const RunLog& log, const StatsCatalog& stats) {
  if (ids.size() != queries.size()) throw Error(ErrorCode::LengthMismatch, "query ids and queries differ in length");
  if (model.feature_names.size() != kFeatureCount)
    throw Error(ErrorCode::UnseenFeatureDimension, "model was trained on " + std::to_string(model.feature_names.size()) +
                                                       " features, expected " + std::to_string(kFeatureCount));
  E2eReport rep;
  rep.threshold = threshold;
  rep.clock_resolution_s = static_cast<double>(Clock::period::num) / static_cast<double>(Clock::period::den);
  const auto catalog = db.catalog();
  const char* names[] = {"Base", "Rewriting", "SMASH", "OracleBest"};
  for (const char* n : names) rep.strategies[n] = {};

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& id = ids[i];
    const auto* b = log.find(id, Strategy::Base);
    const auto* r = log.find(id, Strategy::Rewriting);
    if (b == nullptr || r == nullptr || log.excluded(id) || !b->error.empty() || !r->error.empty()) {
      rep.excluded_query_ids.push_back(id);
      continue;
    }
    const auto t0 = Clock::now();
    const auto cq = normalize(queries[i], &catalog);
    const auto tree = make_reduction_tree(cq);
    const auto fv = extract_features(cq, tree, estimate_cardinalities(cq, db, &stats));
    const auto choice = ml::decide(model, fv.values(), threshold);
    const double latency = seconds_since(t0);

    QueryOutcome o;
    o.query_id = id;
    o.is_0ma = tree.oma;
    o.base_s = b->mean_s;
    o.rewriting_s = r->mean_s;
    o.chosen = choice == ml::EvalMethod::Rewritten ? "Rewriting" : "Base";
    o.decision_s = latency;
    const double chosen_s = choice == ml::EvalMethod::Rewritten ? o.rewriting_s : o.base_s;
    o.smash_s = chosen_s + latency;

    const double times[] = {o.base_s, o.rewriting_s, o.smash_s, std::min(o.base_s, o.rewriting_s)};
    const double compared[] = {o.base_s, o.rewriting_s, chosen_s, std::min(o.base_s, o.rewriting_s)};
    for (std::size_t k = 0; k < 4; ++k) {
      auto& t = rep.strategies[names[k]];
      t.total_seconds += times[k];
      (o.is_0ma ? t.oma_seconds : t.enum_seconds) += times[k];
      if (compared[k] > o.base_s) ++t.slowdowns;
    }
    rep.max_decision_s = std::max(rep.max_decision_s, latency);
    rep.mean_decision_s += latency;
    rep.queries.push_back(std::move(o));
  }
  if (!rep.queries.empty()) {
    const auto n = static_cast<double>(rep.queries.size());
    rep.mean_decision_s /= n;
    for (auto& [name, t] : rep.strategies) t.slowdown_fraction = static_cast<double>(t.slowdowns) / n;
  }
  return rep;
}

nlohmann::ordered_json E2eReport::to_json() const {
  nlohmann::ordered_json j;
  j["clock_resolution_s"] = clock_resolution_s;
  j["threshold"] = threshold;
  j["n_queries"] = queries.size();
  j["mean_decision_s"] = mean_decision_s;
  j["max_decision_s"] = max_decision_s;
  auto st = nlohmann::ordered_json::object();
  for (const char* n : {"Base", "Rewriting", "SMASH", "OracleBest"}) {
    const auto& t = strategies.at(n);
    st[n] = {{"total_seconds", t.total_seconds},
             {"oma_seconds", t.oma_seconds},
             {"enum_seconds", t.enum_seconds},
             {"slowdowns", t.slowdowns},
             {"slowdown_fraction", t.slowdown_fraction}};
  }
  j["strategies"] = std::move(st);
  j["excluded_query_ids"] = excluded_query_ids;
  auto qs = nlohmann::ordered_json::array();
  for (const auto& q : queries)
    qs.push_back({{"query_id", q.query_id},
                  {"is_0ma", q.is_0ma},
                  {"base_s", q.base_s},
                  {"rewriting_s", q.rewriting_s},
                  {"chosen", q.chosen},
                  {"decision_s", q.decision_s},
                  {"smash_s", q.smash_s}});
  j["queries"] = std::move(qs);
  return j;
}

std::string E2eReport::text() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "queries: %zu (excluded %zu), threshold %g, clock resolution %g s\n", queries.size(),
                excluded_query_ids.size(), threshold, clock_resolution_s);
  out += line;
  std::snprintf(line, sizeof line, "%-12s %12s %12s %12s %10s\n", "strategy", "0MA [s]", "Enum [s]", "Total [s]", "slowdowns");
  out += line;
  for (const char* n : {"Base", "Rewriting", "SMASH", "OracleBest"}) {
    const auto& t = strategies.at(n);
    std::snprintf(line, sizeof line, "%-12s %12.4f %12.4f %12.4f %9.1f%%\n", n, t.oma_seconds, t.enum_seconds,
                  t.total_seconds, 100.0 * t.slowdown_fraction);
    out += line;
  }
  std::snprintf(line, sizeof line, "decision latency: mean %.3f ms, max %.3f ms\n", mean_decision_s * 1e3, max_decision_s * 1e3);
  out += line;
  return out;
}

}  // namespace smash
