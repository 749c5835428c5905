// Copyright 2026 The CCDF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Pipeline driver: ingest -> train -> eval / build-index -> recommend ->
// report, all wired through one flat config file (command-line --set
// overrides win).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccdf/checkpoint.hpp"
#include "ccdf/config.hpp"
#include "ccdf/eval.hpp"
#include "ccdf/ingest.hpp"
#include "ccdf/itemmatch.hpp"
#include "ccdf/model.hpp"
#include "ccdf/samples.hpp"
#include "ccdf/train.hpp"
#include "ccdf/types.hpp"

namespace fs = std::filesystem;
using namespace ccdf;

namespace {

const std::vector<std::string> kKnownKeys = {
    "paths.log", "paths.workdir", "paths.checkpoint", "paths.index",
    "split.train_end", "split.valid_end", "split.test_end",
    "ingest.max_users", "ingest.max_rows",
    "sample.history_cap", "sample.per_user", "sample.min_history", "sample.dump",
    "model.d_model", "model.d_cat_in", "model.d_cross", "model.d_prof",
    "model.heads", "model.d_head", "model.d_match", "model.ffn_hidden",
    "train.batch_size", "train.learning_rate", "train.n_neg", "train.n_nei",
    "train.margin", "train.lambda", "train.max_epochs",
    "train.beta1", "train.beta2", "train.epsilon", "train.logq",
    "eval.ks", "pipeline.ks", "pipeline.m",
    "index.n", "index.alpha",
    "seed",
};

// Removes this command's outputs when it fails partway.
class OutputTracker {
 public:
  void add(const fs::path& p) { created_.push_back(p); }
  void keep() { created_.clear(); }
  ~OutputTracker() {
    for (const auto& p : created_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  std::vector<fs::path> created_;
};

// One process mutates a work dir at a time.
class WorkdirLock {
 public:
  explicit WorkdirLock(const fs::path& workdir) : path_(workdir / ".lock") {
    if (fs::exists(path_))
      throw CcdfError(ErrorCode::kInternal, "workdir-locked",
                      "lock file present: " + path_.string());
    std::ofstream(path_) << "locked\n";
  }
  ~WorkdirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  fs::path path_;
};

struct Context {
  config::Config cfg;
  fs::path workdir;

  fs::path checkpoint_path() const {
    return cfg.has("paths.checkpoint") ? fs::path(cfg.get_string("paths.checkpoint", ""))
                                       : workdir / "checkpoint.du2c";
  }
  fs::path index_path() const {
    return cfg.has("paths.index") ? fs::path(cfg.get_string("paths.index", ""))
                                  : workdir / "index.bin";
  }
  SplitSpec split_spec() const {
    SplitSpec spec;
    spec.train_end = cfg.require_int("split.train_end");
    spec.valid_end = cfg.require_int("split.valid_end");
    spec.test_end = cfg.require_int("split.test_end");
    return spec;
  }
  model::HyperParams hyper_params() const {
    model::HyperParams hp;
    hp.history_cap = static_cast<int>(cfg.get_int("sample.history_cap", hp.history_cap));
    hp.d_model = static_cast<int>(cfg.get_int("model.d_model", hp.d_model));
    hp.d_cat_in = static_cast<int>(cfg.get_int("model.d_cat_in", hp.d_cat_in));
    hp.d_cross = static_cast<int>(cfg.get_int("model.d_cross", hp.d_cross));
    hp.d_prof = static_cast<int>(cfg.get_int("model.d_prof", hp.d_prof));
    hp.heads = static_cast<int>(cfg.get_int("model.heads", hp.heads));
    hp.d_head = static_cast<int>(cfg.get_int("model.d_head", hp.d_head));
    hp.d_match = static_cast<int>(cfg.get_int("model.d_match", hp.d_match));
    hp.ffn_hidden = static_cast<int>(cfg.get_int("model.ffn_hidden", hp.ffn_hidden));
    return hp;
  }
  train::TrainConfig train_config() const {
    train::TrainConfig tc;
    tc.batch_size = static_cast<int>(cfg.get_int("train.batch_size", tc.batch_size));
    tc.learning_rate = cfg.get_double("train.learning_rate", tc.learning_rate);
    tc.n_neg = static_cast<int>(cfg.get_int("train.n_neg", tc.n_neg));
    tc.n_nei = static_cast<int>(cfg.get_int("train.n_nei", tc.n_nei));
    tc.margin = cfg.get_double("train.margin", tc.margin);
    tc.lambda = cfg.get_double("train.lambda", tc.lambda);
    tc.max_epochs = static_cast<int>(cfg.get_int("train.max_epochs", tc.max_epochs));
    tc.beta1 = cfg.get_double("train.beta1", tc.beta1);
    tc.beta2 = cfg.get_double("train.beta2", tc.beta2);
    tc.epsilon = cfg.get_double("train.epsilon", tc.epsilon);
    tc.logq_correction = cfg.get_bool("train.logq", tc.logq_correction);
    tc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    return tc;
  }
  samples::SampleConfig sample_config() const {
    samples::SampleConfig sc;
    sc.history_cap = static_cast<int>(cfg.get_int("sample.history_cap", sc.history_cap));
    sc.per_user_samples = static_cast<int>(cfg.get_int("sample.per_user", sc.per_user_samples));
    sc.min_history = static_cast<int>(cfg.get_int("sample.min_history", sc.min_history));
    sc.n_neg = static_cast<int>(cfg.get_int("train.n_neg", sc.n_neg));
    sc.n_nei = static_cast<int>(cfg.get_int("train.n_nei", sc.n_nei));
    sc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    return sc;
  }
};

void echo_config(const Context& ctx, const std::string& command) {
  std::ofstream out(ctx.workdir / (command + ".resolved.cfg"), std::ios::trunc);
  out << ctx.cfg.echo();
}

void write_split_csv(const fs::path& path, const ingest::DaySplit& split,
                     std::vector<Interaction> ingest::UserSplit::*member) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CcdfError(ErrorCode::kData, "unwritable-file", "cannot write " + path.string());
  for (const auto& [user, s] : split.users) {
    for (const auto& e : s.*member) {
      out << e.user_id << ',' << e.item_id << ',' << e.category_id << ','
          << behavior_string(e.behavior) << ',' << e.timestamp << '\n';
    }
  }
}

struct WorkdirData {
  std::vector<Interaction> interactions;  // all splits merged
  Catalog catalog;
  std::map<UserId, UserHistory> histories;
  ingest::DaySplit split;
};

WorkdirData load_workdir(const Context& ctx) {
  fs::path dir = ctx.workdir / "splits";
  for (const char* name : {"train.csv", "valid.csv", "test.csv"}) {
    if (!fs::exists(dir / name))
      throw CcdfError(ErrorCode::kData, "missing-splits",
                      "run ingest first; missing " + (dir / name).string());
  }
  WorkdirData data;
  for (const char* name : {"train.csv", "valid.csv", "test.csv"}) {
    fs::path p = dir / name;
    if (fs::file_size(p) == 0) continue;
    ingest::ParseResult part = ingest::parse_log(p.string());
    data.interactions.insert(data.interactions.end(), part.interactions.begin(),
                             part.interactions.end());
  }
  // Split files are canonical, so the catalog rebuild sees no conflicts.
  for (const auto& e : data.interactions) {
    auto [it, inserted] = data.catalog.item_to_category.try_emplace(e.item_id, e.category_id);
    if (inserted) {
      data.catalog.items.push_back(e.item_id);
      data.catalog.categories.push_back(e.category_id);
      data.catalog.items_by_category[e.category_id].push_back(e.item_id);
    }
  }
  data.catalog.finalize();
  data.histories = ingest::build_histories(data.interactions);
  data.split = ingest::split_by_day(data.histories, ctx.split_spec());
  return data;
}

int cmd_ingest(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "ingest");

  ingest::ParseLimits limits;
  if (ctx.cfg.has("ingest.max_users"))
    limits.max_users = static_cast<std::size_t>(ctx.cfg.get_int("ingest.max_users", 0));
  if (ctx.cfg.has("ingest.max_rows"))
    limits.max_rows = static_cast<std::size_t>(ctx.cfg.get_int("ingest.max_rows", 0));

  ingest::ParseResult parsed = ingest::parse_log(ctx.cfg.require_string("paths.log"), limits);
  auto histories = ingest::build_histories(parsed.interactions);
  ingest::DaySplit split = ingest::split_by_day(histories, ctx.split_spec());

  fs::path dir = ctx.workdir / "splits";
  fs::create_directories(dir);
  outputs.add(dir / "train.csv");
  write_split_csv(dir / "train.csv", split, &ingest::UserSplit::train);
  outputs.add(dir / "valid.csv");
  write_split_csv(dir / "valid.csv", split, &ingest::UserSplit::valid);
  outputs.add(dir / "test.csv");
  write_split_csv(dir / "test.csv", split, &ingest::UserSplit::test);

  samples::UserCategoryGraph graph = samples::build_graph(split, parsed.catalog);
  outputs.add(ctx.workdir / "graph.tsv");
  {
    std::ofstream out(ctx.workdir / "graph.tsv", std::ios::trunc);
    for (const auto& [user, edges] : graph.edges())
      for (const auto& [cat, count] : edges) out << user << '\t' << cat << '\t' << count << '\n';
  }

  std::fprintf(stderr,
               "ingest: rows=%zu kept=%zu skipped=%zu conflicts=%zu capped=%zu "
               "train=%zu valid=%zu test=%zu dropped=%zu users=%zu\n",
               parsed.stats.rows_read, parsed.stats.rows_kept, parsed.stats.rows_skipped,
               parsed.stats.category_conflicts, parsed.stats.rows_dropped_by_cap,
               split.train_size(), split.valid_size(), split.test_size(), split.dropped,
               split.users.size());
  outputs.keep();
  return 0;
}

int cmd_train(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "train");

  WorkdirData data = load_workdir(ctx);
  samples::UserCategoryGraph graph = samples::build_graph(data.split, data.catalog);
  samples::SampleConfig sc = ctx.sample_config();
  auto training = samples::make_training_samples(data.split, data.catalog, graph, sc);
  auto validation = samples::make_eval_samples(data.histories, ctx.split_spec(),
                                               samples::EvalSplit::kValid, data.catalog,
                                               sc.history_cap);

  if (ctx.cfg.has("sample.dump")) {
    fs::path dump = ctx.cfg.require_string("sample.dump");
    outputs.add(dump);
    std::ofstream out(dump, std::ios::trunc);
    for (const auto& s : training) out << samples::dump_sample(s) << '\n';
  }

  train::TrainResult result =
      train::train(training, validation, data.catalog, graph, ctx.hyper_params(),
                   ctx.train_config());

  outputs.add(ctx.checkpoint_path());
  model::save_checkpoint(result.params, ctx.checkpoint_path().string());

  outputs.add(ctx.workdir / "metrics.tsv");
  {
    std::ofstream out(ctx.workdir / "metrics.tsv", std::ios::trunc);
    out << "epoch\tmean_ce\tmean_triplet\tval_hr5_u\tval_hr5_n\tval_hr5_pooled\n";
    char line[256];
    for (const auto& m : result.metrics) {
      std::snprintf(line, sizeof(line), "%d\t%.9f\t%.9f\t%.6f\t%.6f\t%.6f\n", m.epoch, m.mean_ce,
                    m.mean_triplet, m.val_hr5_u, m.val_hr5_n, m.val_hr5_pooled);
      out << line;
    }
  }
  std::fprintf(stderr, "train: samples=%zu best_epoch=%d diverged=%d\n", training.size(),
               result.best_epoch, result.diverged ? 1 : 0);
  if (result.diverged)
    std::fprintf(stderr, "train: loss diverged; kept the last good checkpoint\n");
  outputs.keep();
  return 0;
}

std::string format_hr(const eval::TaskReport& report, int k) {
  auto it = report.hr.find(k);
  if (it == report.hr.end()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", it->second);
  return buf;
}

int cmd_eval(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "eval");

  if (!fs::exists(ctx.checkpoint_path()))
    throw CcdfError(ErrorCode::kModel, "missing-checkpoint",
                    "no checkpoint at " + ctx.checkpoint_path().string());
  WorkdirData data = load_workdir(ctx);
  samples::UserCategoryGraph graph = samples::build_graph(data.split, data.catalog);
  model::ModelParams params = model::load_checkpoint(ctx.checkpoint_path().string());

  int history_cap = static_cast<int>(ctx.cfg.get_int("sample.history_cap", 20));
  auto test = samples::make_eval_samples(data.histories, ctx.split_spec(),
                                         samples::EvalSplit::kTest, data.catalog, history_cap);
  std::vector<int> ks = ctx.cfg.get_int_list("eval.ks", {5, 15, 30});

  eval::EvalReport deep = eval::evaluate_model(test, params, data.catalog, graph, ks);
  eval::EvalReport stats = eval::evaluate_statistics(test, data.catalog, ks);

  std::ostringstream table;
  table << "task\tmethod\tcount";
  for (int k : ks) table << "\tHR@" << k;
  table << '\n';
  auto row = [&](const char* task, const char* method, const eval::TaskReport& r) {
    table << task << '\t' << method << '\t' << r.count;
    for (int k : ks) table << '\t' << format_hr(r, k);
    table << '\n';
  };
  row("U", "Statistics", stats.u);
  row("U", "DeepU2C", deep.u);
  row("N", "Statistics", stats.n);
  row("N", "DeepU2C", deep.n);
  std::cout << table.str();

  outputs.add(ctx.workdir / "eval_report.txt");
  std::ofstream(ctx.workdir / "eval_report.txt", std::ios::trunc) << table.str();

  outputs.add(ctx.workdir / "eval_records.tsv");
  {
    std::ofstream out(ctx.workdir / "eval_records.tsv", std::ios::trunc);
    out << "method\ttask\tk\thr\tcount\n";
    auto rows = [&](const char* method, const eval::EvalReport& r) {
      for (int k : ks) {
        out << method << "\tU\t" << k << '\t' << format_hr(r.u, k) << '\t' << r.u.count << '\n';
        out << method << "\tN\t" << k << '\t' << format_hr(r.n, k) << '\t' << r.n.count << '\n';
      }
    };
    rows("DeepU2C", deep);
    rows("Statistics", stats);
  }
  outputs.keep();
  return 0;
}

int cmd_build_index(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "build-index");

  WorkdirData data = load_workdir(ctx);
  auto stats = itemmatch::compute_item_stats(data.split);
  int top_n = static_cast<int>(ctx.cfg.get_int("index.n", 300));
  double alpha = ctx.cfg.get_double("index.alpha", 10.0);
  itemmatch::CategoryIndex index = itemmatch::build_index(stats, data.catalog, top_n, alpha);
  outputs.add(ctx.index_path());
  itemmatch::save_index(index, ctx.index_path().string());
  std::fprintf(stderr, "build-index: categories=%zu n=%d\n", index.lists.size(), top_n);
  outputs.keep();
  return 0;
}

// Users are recommended from their train+valid window (last T events before
// valid_end).
std::map<UserId, std::vector<ItemId>> recommendation_histories(const WorkdirData& data,
                                                               int history_cap) {
  std::map<UserId, std::vector<ItemId>> histories;
  for (const auto& [user, s] : data.split.users) {
    std::vector<ItemId> items;
    for (const auto& e : s.train) items.push_back(e.item_id);
    for (const auto& e : s.valid) items.push_back(e.item_id);
    if (items.empty()) continue;
    if (items.size() > static_cast<std::size_t>(history_cap))
      items.erase(items.begin(),
                  items.end() - static_cast<std::ptrdiff_t>(history_cap));
    histories[user] = std::move(items);
  }
  return histories;
}

int cmd_recommend(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "recommend");

  if (!fs::exists(ctx.checkpoint_path()))
    throw CcdfError(ErrorCode::kModel, "missing-checkpoint",
                    "no checkpoint at " + ctx.checkpoint_path().string());
  WorkdirData data = load_workdir(ctx);
  samples::UserCategoryGraph graph = samples::build_graph(data.split, data.catalog);
  model::ModelParams params = model::load_checkpoint(ctx.checkpoint_path().string());
  itemmatch::CategoryIndex index = itemmatch::load_index(ctx.index_path().string());
  model::Mat category_vectors = model::all_category_vectors(params);

  int history_cap = static_cast<int>(ctx.cfg.get_int("sample.history_cap", 20));
  int m = static_cast<int>(ctx.cfg.get_int("pipeline.m", 50));
  std::vector<int> ks = ctx.cfg.get_int_list("pipeline.ks", {10, 20, 30});
  auto histories = recommendation_histories(data, history_cap);

  for (int k : ks) {
    fs::path path = ctx.workdir / ("recommend_K" + std::to_string(k) + ".tsv");
    outputs.add(path);
    std::ofstream out(path, std::ios::trunc);
    out << "user_id\trank\titem_id\tcategory_id\tscore\n";
    char line[160];
    for (const auto& [user, history] : histories) {
      itemmatch::Recommendation rec =
          itemmatch::recommend_pipeline(history, 0, user, params, data.catalog, graph,
                                        category_vectors, index, k, m);
      for (std::size_t rank = 0; rank < rec.items.size(); ++rank) {
        const auto& item = rec.items[rank];
        std::snprintf(line, sizeof(line), "%lld\t%zu\t%lld\t%lld\t%.6f\n",
                      static_cast<long long>(user), rank + 1,
                      static_cast<long long>(item.item_id),
                      static_cast<long long>(item.category_id),
                      static_cast<double>(item.score));
        out << line;
      }
    }
  }
  std::fprintf(stderr, "recommend: users=%zu ks=%zu m=%d\n", histories.size(), ks.size(), m);
  outputs.keep();
  return 0;
}

int cmd_report(const Context& ctx) {
  WorkdirLock lock(ctx.workdir);
  OutputTracker outputs;
  echo_config(ctx, "report");

  WorkdirData data = load_workdir(ctx);
  int history_cap = static_cast<int>(ctx.cfg.get_int("sample.history_cap", 20));
  std::vector<int> ks = ctx.cfg.get_int_list("pipeline.ks", {10, 20, 30});

  // N-diversity is judged against the same train+valid window the
  // recommendations were generated from.
  std::map<UserId, std::set<CategoryId>> history_categories;
  for (const auto& [user, history] : recommendation_histories(data, history_cap)) {
    auto& cats = history_categories[user];
    for (ItemId item : history) cats.insert(data.catalog.category_of(item));
  }

  std::ostringstream table;
  table << "K\tusers\tavg_exposed_categories\tavg_exposed_n_categories\n";
  for (int k : ks) {
    fs::path path = ctx.workdir / ("recommend_K" + std::to_string(k) + ".tsv");
    if (!fs::exists(path))
      throw CcdfError(ErrorCode::kData, "missing-recommendations",
                      "run recommend first; missing " + path.string());
    std::map<UserId, std::vector<CategoryId>> recommended;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string user_s, rank_s, item_s, cat_s;
      std::getline(ss, user_s, '\t');
      std::getline(ss, rank_s, '\t');
      std::getline(ss, item_s, '\t');
      std::getline(ss, cat_s, '\t');
      recommended[std::stoll(user_s)].push_back(std::stoll(cat_s));
    }
    eval::DiversityReport report = eval::diversity_report(recommended, history_categories);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d\t%zu\t%.6f\t%.6f\n", k, report.users,
                  report.avg_exposed_categories, report.avg_exposed_n_categories);
    table << buf;
  }
  std::cout << table.str();
  outputs.add(ctx.workdir / "diversity_report.tsv");
  std::ofstream(ctx.workdir / "diversity_report.tsv", std::ios::trunc) << table.str();
  outputs.keep();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllable category diversity pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "flat key=value config file")->expected(1);
  app.add_option("--set", overrides, "override a config key, e.g. --set train.margin=0.4");

  std::map<std::string, CLI::App*> commands;
  for (const char* name :
       {"ingest", "train", "eval", "build-index", "recommend", "report"}) {
    commands[name] = app.add_subcommand(name);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    config::Config cfg = config_path.empty()
                             ? config::Config::from_entries({}, kKnownKeys)
                             : config::Config::from_file(config_path, kKnownKeys);
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw CcdfError(ErrorCode::kConfig, "bad-override", "--set expects key=value");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    Context ctx{std::move(cfg), fs::path()};
    ctx.workdir = ctx.cfg.require_string("paths.workdir");
    std::filesystem::create_directories(ctx.workdir);

    for (auto& [name, cmd] : commands) {
      if (!cmd->parsed()) continue;
      if (name == "ingest") return cmd_ingest(ctx);
      if (name == "train") return cmd_train(ctx);
      if (name == "eval") return cmd_eval(ctx);
      if (name == "build-index") return cmd_build_index(ctx);
      if (name == "recommend") return cmd_recommend(ctx);
      if (name == "report") return cmd_report(ctx);
    }
    return static_cast<int>(ErrorCode::kInternal);
  } catch (const CcdfError& e) {
    std::cerr << "error: " << e.tag() << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return static_cast<int>(ErrorCode::kInternal);
  }
}
