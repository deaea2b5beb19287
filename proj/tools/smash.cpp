// Command-line front end: query analysis, rewriting, workload runs, model
// training and algorithm selection.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "smash/augmentation.hpp"
#include "smash/csv.hpp"
#include "smash/error.hpp"
#include "smash/features.hpp"
#include "smash/harness.hpp"
#include "smash/ml/selection.hpp"
#include "smash/rewriter.hpp"
#include "smash/stats.hpp"
#include "smash/workload_io.hpp"

namespace fs = std::filesystem;
using namespace smash;

namespace {

std::string default_data_dir() {
  const char* env = std::getenv("SMASH_DATA_DIR");
  return env != nullptr ? env : "data";
}

/// A query given inline or as a path to a .sql file.
std::string query_text(const std::string& arg) {
  if (arg.ends_with(".sql") && fs::exists(arg)) return read_text(arg);
  return arg;
}

struct Loaded {
  std::vector<std::string> ids;
  std::vector<QuerySpec> queries;
};

Loaded load_queries(const std::string& path) {
  Loaded l;
  parse_query_files(read_query_files(path), l.ids, l.queries);
  return l;
}

void dump(const nlohmann::ordered_json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << "\n";
  else
    write_text(out, j.dump(2) + "\n");
}

nlohmann::ordered_json metrics_json(const ml::Metrics& m) {
  nlohmann::ordered_json j;
  j["acc"] = m.acc;
  j["prec"] = m.prec_defined ? nlohmann::ordered_json(m.prec) : nlohmann::ordered_json(nullptr);
  j["prec_defined"] = m.prec_defined;
  j["rec"] = m.rec_defined ? nlohmann::ordered_json(m.rec) : nlohmann::ordered_json(nullptr);
  j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}};
  if (m.has_regression) {
    j["mse"] = m.mse;
    j["mae"] = m.mae;
  }
  return j;
}

std::map<std::string, FeatureVector> features_of(const Database& db, const Loaded& l) {
  const auto catalog = db.catalog();
  const auto stats = StatsCatalog::analyze(db);
  std::vector<NormalizedCQ> cqs;
  for (const auto& q : l.queries) cqs.push_back(normalize(q, &catalog));
  const auto fvs = extract_batch_parallel(cqs, db, stats);
  std::map<std::string, FeatureVector> out;
  for (std::size_t i = 0; i < l.ids.size(); ++i) out[l.ids[i]] = fvs[i];
  return out;
}

ml::Task parse_task(const std::string& s) {
  if (s == "classify") return ml::Task::Classify;
  if (s == "regress") return ml::Task::Regress;
  throw CLI::ValidationError("--task", "expected classify or regress");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclic query analysis, rewriting and evaluation-method selection"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string data_dir = default_data_dir();
  std::uint64_t seed = 42;
  double timeout = 100.0;
  std::size_t repeats = 5;
  app.add_option("--data", data_dir, "Data directory (CSV tables); defaults to $SMASH_DATA_DIR");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--timeout", timeout, "Per-run timeout in seconds")->capture_default_str();
  app.add_option("--repeats", repeats, "Timed repetitions after the warm-up")->capture_default_str();

  std::string sql, out, model_path, runlog_path, queries_path, dataset_path;
  bool json = false, with_drops = false, no_unlogged = false, csv = false;
  double threshold = 0.0;

  auto* parse = app.add_subcommand("parse", "Parse a query and print its normalized form");
  parse->add_option("query", sql, "SQL text or .sql file")->required();

  auto* jointree = app.add_subcommand("jointree", "Print the join tree of an acyclic query");
  jointree->add_option("query", sql, "SQL text or .sql file")->required();
  jointree->add_flag("--json", json, "JSON output");

  auto* rewrite_cmd = app.add_subcommand("rewrite", "Print the rewritten statement sequence");
  rewrite_cmd->add_option("query", sql, "SQL text or .sql file")->required();
  rewrite_cmd->add_flag("--with-drops", with_drops, "Append DROP statements");
  rewrite_cmd->add_flag("--no-unlogged", no_unlogged, "Plain CREATE TABLE");

  auto* features_cmd = app.add_subcommand("features", "Feature vector of a query");
  features_cmd->add_option("query", sql, "SQL text or .sql file")->required();
  features_cmd->add_flag("--csv", csv, "CSV header and row instead of JSON");

  std::vector<std::string> augment_inputs;
  auto* augment = app.add_subcommand("augment", "Write filter, aggregate-attribute and enumeration variants");
  augment->add_option("inputs", augment_inputs, "SQL files or directories")->required();
  augment->add_option("--out", out, "Output directory")->required();

  WorkloadSpec wspec;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic database and workload");
  generate->add_option("--out", out, "Output directory (tables in <out>/data, queries in <out>/queries)")->required();
  generate->add_option("--queries", wspec.n_base_queries, "Number of queries")->capture_default_str();
  generate->add_option("--min-relations", wspec.min_relations)->capture_default_str();
  generate->add_option("--max-relations", wspec.max_relations)->capture_default_str();
  generate->add_option("--min-rows", wspec.min_rows)->capture_default_str();
  generate->add_option("--max-rows", wspec.max_rows)->capture_default_str();
  generate->add_option("--dangling", wspec.dangling_fraction)->capture_default_str();
  generate->add_option("--fanout", wspec.fanout)->capture_default_str();
  generate->add_option("--mix", wspec.regime_mix, "Fraction of fan-out MIN queries")->capture_default_str();

  auto* run = app.add_subcommand("run", "Time both strategies on a workload");
  run->add_option("--queries", queries_path, "Query directory")->required();
  run->add_option("--out", out, "RunLog JSON path");

  std::string task_name = "classify";
  auto* train = app.add_subcommand("train", "Train the decision-tree selector");
  train->add_option("--queries", queries_path, "Query directory")->required();
  train->add_option("--runlog", runlog_path, "RunLog JSON")->required();
  train->add_option("--out", model_path, "Model JSON path")->required();
  train->add_option("--task", task_name, "classify or regress")->capture_default_str();
  train->add_option("--dataset-out", dataset_path, "Also write the labeled dataset CSV");

  std::vector<double> grid;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics of a model on a labeled dataset");
  evaluate_cmd->add_option("--model", model_path, "Model JSON")->required();
  evaluate_cmd->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  evaluate_cmd->add_option("--threshold", threshold)->capture_default_str();
  evaluate_cmd->add_option("--sweep", grid, "Threshold grid for a regression model");

  auto* decide_cmd = app.add_subcommand("decide", "Choose the evaluation method for one query");
  decide_cmd->add_option("query", sql, "SQL text or .sql file")->required();
  decide_cmd->add_option("--model", model_path, "Model JSON")->required();
  decide_cmd->add_option("--threshold", threshold)->capture_default_str();

  auto* e2e = app.add_subcommand("e2e", "End-to-end comparison of Base, Rewriting and the selector");
  e2e->add_option("--queries", queries_path, "Test query directory")->required();
  e2e->add_option("--runlog", runlog_path, "RunLog JSON")->required();
  e2e->add_option("--model", model_path, "Model JSON")->required();
  e2e->add_option("--threshold", threshold)->capture_default_str();
  e2e->add_option("--out", out, "E2E report JSON path");

  std::string strategy_a = "Base", strategy_b = "Rewriting";
  std::string report_path;
  auto* significance = app.add_subcommand("significance", "Signed-rank and paired t tests between two strategies");
  significance->add_option("input", report_path, "RunLog or E2E report JSON")->required();
  significance->add_option("--a", strategy_a)->capture_default_str();
  significance->add_option("--b", strategy_b)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      const auto q = parse_query(query_text(sql));
      const auto cq = normalize(q);
      nlohmann::ordered_json j;
      j["sql"] = to_sql(q);
      j["aggregate"] = q.is_aggregate();
      j["relations"] = q.tables.size();
      j["join_conditions"] = q.join_conds.size();
      j["filters"] = q.filters.size();
      j["classes"] = cq.class_names;
      auto atoms = nlohmann::ordered_json::array();
      for (const auto& a : cq.atoms) {
        nlohmann::ordered_json o;
        o["alias"] = a.alias;
        o["table"] = a.table;
        auto cols = nlohmann::ordered_json::object();
        for (const auto& [attr, c] : a.columns) cols[attr] = class_column(c);
        o["columns"] = std::move(cols);
        atoms.push_back(std::move(o));
      }
      j["atoms"] = std::move(atoms);
      dump(j, "");
    } else if (jointree->parsed()) {
      const auto cq = normalize(parse_query(query_text(sql)));
      const auto tree = make_join_tree(cq);
      if (json)
        dump(join_tree_json(tree, cq), "");
      else
        std::cout << join_tree_text(tree, cq);
    } else if (rewrite_cmd->parsed()) {
      const auto q = parse_query(query_text(sql));
      std::optional<Database> db;
      if (fs::is_directory(data_dir)) db = load_database(data_dir);
      const auto catalog = db ? db->catalog() : Catalog{};
      const auto cq = normalize(q, db ? &catalog : nullptr);
      RewriteOptions opt;
      opt.unlogged = !no_unlogged;
      opt.with_drops = with_drops;
      opt.db = db ? &*db : nullptr;
      std::cout << rewrite(make_join_tree(cq), cq, opt).script();
    } else if (features_cmd->parsed()) {
      const auto db = load_database(data_dir);
      const auto fv = features_for(parse_query(query_text(sql)), db, db.catalog(), StatsCatalog::analyze(db));
      if (csv)
        std::cout << features_csv_header() << "\n" << features_csv_row(fv) << "\n";
      else
        dump(features_json(fv), "");
    } else if (augment->parsed()) {
      const auto db = load_database(data_dir);
      const auto catalog = db.catalog();
      std::vector<std::string> ids;
      std::vector<QuerySpec> variants;
      for (const auto& input : augment_inputs) {
        const auto l = load_queries(input);
        for (std::size_t i = 0; i < l.ids.size(); ++i) {
          const auto filtered = augment_filters(l.queries[i], db);
          for (std::size_t f = 0; f < filtered.size(); ++f) {
            const auto base = l.ids[i] + (f == 0 ? "" : "-augF" + std::to_string(f));
            ids.push_back(base);
            variants.push_back(filtered[f]);
            const auto more = filtered[f].is_aggregate() ? augment_aggregate_attribute(filtered[f], catalog)
                              : filtered[f].join_conds.empty() ? std::vector<QuerySpec>{}
                                                               : augment_enumeration(filtered[f], seed + i * 31 + f);
            const char* tag = filtered[f].is_aggregate() ? "-augA" : "-augE";
            for (std::size_t k = 0; k < more.size(); ++k) {
              ids.push_back(base + tag + std::to_string(k + 1));
              variants.push_back(more[k]);
            }
          }
        }
      }
      write_query_files(out, ids, variants);
      std::cout << "wrote " << ids.size() << " queries to " << out << "\n";
    } else if (generate->parsed()) {
      wspec.seed = seed;
      const auto w = generate_workload(wspec);
      save_database(w.db, fs::path(out) / "data");
      write_query_files(fs::path(out) / "queries", w.ids, w.queries);
      std::cout << "wrote " << w.db.tables.size() << " tables and " << w.queries.size() << " queries to " << out << "\n";
    } else if (run->parsed()) {
      const auto db = load_database(data_dir);
      const auto l = load_queries(queries_path);
      const auto log = run_workload(db, l.ids, l.queries, {repeats, timeout, seed});
      dump(log.to_json(), out);
    } else if (train->parsed()) {
      const auto task = parse_task(task_name);
      const auto db = load_database(data_dir);
      const auto l = load_queries(queries_path);
      const auto log = RunLog::from_json(nlohmann::json::parse(read_text(runlog_path)));
      const auto examples = build_dataset(log, features_of(db, l));
      if (!dataset_path.empty()) ml::write_dataset_csv(dataset_path, examples);
      const auto splits = ml::split_dataset(examples.size(), seed);
      const auto cv = ml::cross_validate_parallel(examples, splits.folds, task, {});
      const auto model = ml::train_selector(ml::subset(examples, splits.train), task);
      write_text(model_path, model.to_json().dump(2) + "\n");
      nlohmann::ordered_json j;
      j["examples"] = examples.size();
      j["cv_accuracy"] = ml::mean_accuracy(cv);
      j["validation"] = metrics_json(ml::evaluate(model, ml::subset(examples, splits.validation)));
      j["test"] = metrics_json(ml::evaluate(model, ml::subset(examples, splits.test)));
      auto imp = nlohmann::ordered_json::array();
      if (task == ml::Task::Classify)
        for (const auto& [name, v] : ml::gini_importances(model)) imp.push_back({name, v});
      j["importances"] = std::move(imp);
      dump(j, "");
    } else if (evaluate_cmd->parsed()) {
      const auto model = ml::CartModel::from_json(nlohmann::json::parse(read_text(model_path)));
      const auto examples = ml::read_dataset_csv(dataset_path);
      nlohmann::ordered_json j;
      j["metrics"] = metrics_json(ml::evaluate(model, examples, threshold));
      if (!grid.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : ml::threshold_sweep(model, examples, grid))
          arr.push_back({{"threshold", p.threshold}, {"metrics", metrics_json(p.metrics)}, {"e2e_seconds", p.e2e_seconds}});
        j["sweep"] = std::move(arr);
      }
      dump(j, "");
    } else if (decide_cmd->parsed()) {
      const auto db = load_database(data_dir);
      const auto catalog = db.catalog();
      const auto stats = StatsCatalog::analyze(db);
      const auto model = ml::CartModel::from_json(nlohmann::json::parse(read_text(model_path)));
      const auto t0 = std::chrono::steady_clock::now();
      const auto fv = features_for(parse_query(query_text(sql)), db, catalog, stats);
      const auto choice = ml::decide(model, fv.values(), threshold);
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::cout << (choice == ml::EvalMethod::Rewritten ? "Rewriting" : "Base") << "\t" << ms << " ms\n";
    } else if (e2e->parsed()) {
      const auto db = load_database(data_dir);
      const auto l = load_queries(queries_path);
      const auto log = RunLog::from_json(nlohmann::json::parse(read_text(runlog_path)));
      const auto model = ml::CartModel::from_json(nlohmann::json::parse(read_text(model_path)));
      const auto rep = smash_e2e(db, l.ids, l.queries, model, threshold, log, StatsCatalog::analyze(db));
      if (!out.empty()) dump(rep.to_json(), out);
      std::cout << rep.text();
    } else if (significance->parsed()) {
      const auto j = nlohmann::json::parse(read_text(report_path));
      std::map<std::string, std::map<std::string, double>> times;  // strategy -> id -> seconds
      if (j.contains("queries")) {
        for (const auto& q : j["queries"]) {
          const auto id = q.at("query_id").get<std::string>();
          times["Base"][id] = q.at("base_s").get<double>();
          times["Rewriting"][id] = q.at("rewriting_s").get<double>();
          times["SMASH"][id] = q.at("smash_s").get<double>();
          times["OracleBest"][id] = std::min(times["Base"][id], times["Rewriting"][id]);
        }
      } else {
        const auto log = RunLog::from_json(j);
        for (const auto& e : log.entries)
          if (e.error.empty() && !log.excluded(e.query_id)) times[to_string(e.strategy)][e.query_id] = e.mean_s;
      }
      std::vector<double> a, b;
      for (const auto& [id, t] : times[strategy_a]) {
        auto it = times[strategy_b].find(id);
        if (it == times[strategy_b].end()) continue;
        a.push_back(t);
        b.push_back(it->second);
      }
      const auto w = stats::wilcoxon_signed_rank(a, b);
      const auto t = stats::paired_t_test(a, b);
      std::printf("%-24s %8s %16s %16s\n", "comparison", "pairs", "median test p", "mean test p");
      std::printf("%-24s %8zu %16.6g %16.6g\n", (strategy_a + " vs " + strategy_b).c_str(), a.size(), w.p_two_sided,
                  t.p_two_sided);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
