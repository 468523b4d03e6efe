/*
 * Copyright 2026 The logratio Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "logratio/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "logratio/checkpoint.h"
#include "logratio/dataset_io.h"
#include "logratio/losses.h"
#include "logratio/mining.h"
#include "logratio/rng.h"

namespace logratio {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_out(const RunConfig& config) {
  const fs::path out = config.get("out");
  if (out.empty()) throw ValidationError("config key 'out' must not be empty");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ValidationError("cannot create output directory " + out.string() + ": " + ec.message());
  std::ofstream echo(out / "effective_config.txt");
  echo << config.to_text();
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::uint64_t split_seed(std::uint64_t seed) { return splitmix64(seed ^ 0x73706c6974ULL); }

double relative_error(ConstVec analytic, ConstVec numeric) {
  double diff = 0.0, a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    diff += (analytic[k] - numeric[k]) * (analytic[k] - numeric[k]);
    a += analytic[k] * analytic[k];
    b += numeric[k] * numeric[k];
  }
  const double scale = std::max({std::sqrt(a), std::sqrt(b), 1e-10});
  return std::sqrt(diff) / scale;
}

Vector random_vector(std::size_t dim, Rng& rng) {
  Vector v(dim);
  for (double& x : v) x = rng.normal();
  return v;
}

json per_k_json(const std::vector<std::size_t>& ks, const Vector& ndcg, const Vector& dist) {
  json j = json::object();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    j[std::to_string(ks[i])] = {{"mean_ndcg", ndcg[i]}, {"mean_label_distance", dist[i]}};
  }
  return j;
}

}  // namespace

ExperimentData prepare_data(const RunConfig& config) {
  ExperimentData data;
  const std::string path = config.get("dataset");
  data.full = path.empty() ? generate(generator_spec(config)) : load_dataset(path);
  data.metric = label_metric(config, data.full);
  for (std::size_t i = 0; i < data.full.size(); ++i) {
    try {
      data.metric.validate(data.full[i].label);
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  data.parts = split(data.full, config.get_double("train_fraction"), config.get_size("query_count"),
                     split_seed(config.get_u64("seed")));
  return data;
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kLogRatioDense: return "L(Log-ratio)+M(Dense)";
    case Method::kTripletDense: return "L(Triplet)+M(Dense)";
    case Method::kTripletBinary: return "L(Triplet)+M(Binary)";
  }
  return "unknown";
}

TrainConfig method_train_config(const RunConfig& config, Method method) {
  TrainConfig tc = train_config(config);
  tc.loss.margin.reset();
  tc.unit_norm.reset();
  switch (method) {
    case Method::kLogRatioDense:
      tc.loss.kind = LossKind::kLogRatio;
      tc.mining = MiningKind::kDense;
      break;
    case Method::kTripletDense:
      tc.loss.kind = LossKind::kDenseTriplet;
      tc.mining = MiningKind::kDense;
      break;
    case Method::kTripletBinary:
      tc.loss.kind = LossKind::kTriplet;
      tc.mining = MiningKind::kBinary;
      break;
  }
  tc.validate();
  return tc;
}

MethodRun run_method(const ExperimentData& data, const RunConfig& config, Method method) {
  const TrainConfig tc = method_train_config(config, method);
  MethodRun run{method, {}, {}};
  run.training = train(data.parts.train, data.metric, tc,
                       {&data.parts.queries, &data.parts.gallery});
  run.report = evaluate(run.training.model, data.parts.queries, data.parts.gallery, data.metric,
                        config.get_size_list("k_list"), nullptr, std::string(method_name(method)));
  return run;
}

GradcheckReport run_gradcheck(const RunConfig& config) {
  const std::size_t trials = config.get_size("gradcheck_trials");
  const std::size_t dim = config.get_size("gradcheck_dim");
  const double h = config.get_double("gradcheck_step");
  const bool corrupt = config.get_bool("gradcheck_corrupt");
  if (trials == 0 || dim == 0 || !(h > 0.0)) {
    throw ValidationError("gradcheck: trials, dim and step must be positive");
  }
  GradcheckReport report;
  report.tolerance = config.get_double("gradcheck_tolerance");
  const Rng root(config.get_u64("seed"));
  const double corruption = corrupt ? 1.0 + 1e-2 : 1.0;

  const LossKind kinds[] = {LossKind::kTriplet, LossKind::kDenseTriplet, LossKind::kLogRatio};
  for (LossKind kind : kinds) {
    Rng rng = root.fork(static_cast<std::uint64_t>(kind) + 1);
    GradcheckEntry entry;
    entry.name = std::string(loss_kind_name(kind));
    LossConfig lc;
    lc.kind = kind;
    const double margin = lc.effective_margin();
    while (entry.trials < trials) {
      Vector f[3] = {random_vector(dim, rng), random_vector(dim, rng), random_vector(dim, rng)};
      const Vector ya = random_vector(3, rng), yi = random_vector(3, rng), yj = random_vector(3, rng);
      const double dai = squared_euclidean(ya, yi);
      const double daj = squared_euclidean(ya, yj);
      auto value = [&](const Vector (&g)[3]) {
        switch (kind) {
          case LossKind::kTriplet: return triplet_loss(g[0], g[1], g[2], margin).value;
          case LossKind::kDenseTriplet: return dense_triplet_loss(g[0], g[1], g[2], margin).value;
          case LossKind::kLogRatio: return log_ratio_loss(g[0], g[1], g[2], dai, daj).value;
        }
        return 0.0;
      };
      if (kind != LossKind::kLogRatio) {
        // The hinge has no derivative at its kink; redraw instances near it.
        const double arg = squared_euclidean(f[0], f[1]) - squared_euclidean(f[0], f[2]) + margin;
        if (std::abs(arg) < 1e-3) continue;
      }
      TripletLossOutput out;
      switch (kind) {
        case LossKind::kTriplet: out = triplet_loss(f[0], f[1], f[2], margin); break;
        case LossKind::kDenseTriplet: out = dense_triplet_loss(f[0], f[1], f[2], margin); break;
        case LossKind::kLogRatio: out = log_ratio_loss(f[0], f[1], f[2], dai, daj); break;
      }
      const Vector* analytic[3] = {&out.grad_a, &out.grad_i, &out.grad_j};
      for (int v = 0; v < 3; ++v) {
        Vector numeric(dim);
        for (std::size_t k = 0; k < dim; ++k) {
          const double saved = f[v][k];
          f[v][k] = saved + h;
          const double up = value(f);
          f[v][k] = saved - h;
          const double down = value(f);
          f[v][k] = saved;
          numeric[k] = (up - down) / (2.0 * h);
        }
        Vector reported = *analytic[v];
        for (double& g : reported) g *= corruption;
        entry.max_relative_error = std::max(entry.max_relative_error, relative_error(reported, numeric));
      }
      for (std::size_t k = 0; k < dim; ++k) {
        entry.max_sum_residual =
            std::max(entry.max_sum_residual, std::abs(out.grad_a[k] + out.grad_i[k] + out.grad_j[k]));
      }
      ++entry.trials;
    }
    report.entries.push_back(entry);
  }

  // Backpropagation through a small network, one log-ratio and one triplet
  // objective per trial, against differences over every parameter.
  for (bool unit_norm : {false, true}) {
    Rng rng = root.fork(unit_norm ? 11 : 10);
    GradcheckEntry entry;
    entry.name = unit_norm ? "backprop_unit_norm" : "backprop";
    const std::size_t model_trials = std::max<std::size_t>(1, trials / 20);
    while (entry.trials < model_trials) {
      const std::size_t dims[] = {6, 5, dim};
      EmbeddingModel model = EmbeddingModel::initialize(dims, unit_norm, rng);
      for (double& p : model.mutable_parameters()) p += 0.1 * rng.normal();
      const Vector x[3] = {random_vector(6, rng), random_vector(6, rng), random_vector(6, rng)};
      const double dai = 0.5 + rng.uniform(), daj = 0.5 + rng.uniform();
      auto objective = [&](const EmbeddingModel& m) {
        const Vector a = m.forward(x[0]), i = m.forward(x[1]), j = m.forward(x[2]);
        return log_ratio_loss(a, i, j, dai, daj).value +
               triplet_loss(a, i, j, kTripletMargin + 1.0).value;
      };
      ForwardCache cache[3];
      Vector e[3];
      for (int v = 0; v < 3; ++v) e[v] = model.forward(x[v], &cache[v]);
      const double hinge_arg =
          squared_euclidean(e[0], e[1]) - squared_euclidean(e[0], e[2]) + kTripletMargin + 1.0;
      if (std::abs(hinge_arg) < 1e-3) continue;
      const TripletLossOutput lr = log_ratio_loss(e[0], e[1], e[2], dai, daj);
      const TripletLossOutput tl = triplet_loss(e[0], e[1], e[2], kTripletMargin + 1.0);
      Vector analytic(model.parameter_count(), 0.0);
      const Vector* grads[2][3] = {{&lr.grad_a, &lr.grad_i, &lr.grad_j},
                                   {&tl.grad_a, &tl.grad_i, &tl.grad_j}};
      for (int v = 0; v < 3; ++v) {
        Vector g(dim);
        for (std::size_t k = 0; k < dim; ++k) g[k] = (*grads[0][v])[k] + (*grads[1][v])[k];
        model.backward(cache[v], g, analytic);
      }
      for (double& g : analytic) g *= corruption;
      Vector numeric(model.parameter_count());
      for (std::size_t p = 0; p < numeric.size(); ++p) {
        const double saved = model.parameters()[p];
        model.mutable_parameters()[p] = saved + h;
        const double up = objective(model);
        model.mutable_parameters()[p] = saved - h;
        const double down = objective(model);
        model.mutable_parameters()[p] = saved;
        numeric[p] = (up - down) / (2.0 * h);
      }
      entry.max_relative_error = std::max(entry.max_relative_error, relative_error(analytic, numeric));
      ++entry.trials;
    }
    report.entries.push_back(entry);
  }

  report.passed = std::all_of(report.entries.begin(), report.entries.end(), [&](const auto& e) {
    return e.max_relative_error <= report.tolerance;
  });
  return report;
}

CompareReport run_compare(const RunConfig& config) {
  const std::size_t seed_count = config.get_size("compare_seeds");
  if (seed_count == 0) throw ValidationError("compare_seeds must be positive");
  CompareReport report;
  report.ks = config.get_size_list("k_list");
  for (Method m : kAllMethods) report.rows.push_back({std::string(method_name(m)), {}, {}, {}, {}});
  report.rows.push_back({"Oracle", {}, {}, {}, {}});
  report.rows.push_back({"Untrained", {}, {}, {}, {}});

  const std::uint64_t base = config.get_u64("seed");
  for (std::size_t s = 0; s < seed_count; ++s) {
    RunConfig seeded = config;
    seeded.set("seed", std::to_string(base + s));
    report.seeds.push_back(base + s);
    const ExperimentData data = prepare_data(seeded);
    const EmbeddingModel untrained = initial_model(
        data.parts.train.feature_dim(), method_train_config(seeded, Method::kLogRatioDense));
    std::size_t row = 0;
    EvaluationReport last;
    for (Method m : kAllMethods) {
      MethodRun run = run_method(data, seeded, m);
      report.rows[row].ndcg_per_seed.push_back(run.report.model.mean_ndcg);
      report.rows[row].distance_per_seed.push_back(run.report.model.mean_label_distance);
      ++row;
      last = std::move(run.report);
    }
    const EvaluationReport bounds = evaluate(untrained, data.parts.queries, data.parts.gallery,
                                             data.metric, report.ks);
    report.rows[row].ndcg_per_seed.push_back(bounds.oracle.mean_ndcg);
    report.rows[row].distance_per_seed.push_back(bounds.oracle.mean_label_distance);
    ++row;
    report.rows[row].ndcg_per_seed.push_back(bounds.model.mean_ndcg);
    report.rows[row].distance_per_seed.push_back(bounds.model.mean_label_distance);
  }
  for (CompareRow& r : report.rows) {
    r.mean_ndcg.assign(report.ks.size(), 0.0);
    r.mean_label_distance.assign(report.ks.size(), 0.0);
    for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
      Vector nd, ld;
      for (std::size_t s = 0; s < seed_count; ++s) {
        nd.push_back(r.ndcg_per_seed[s][ki]);
        ld.push_back(r.distance_per_seed[s][ki]);
      }
      r.mean_ndcg[ki] = pairwise_sum(nd) / static_cast<double>(seed_count);
      r.mean_label_distance[ki] = pairwise_sum(ld) / static_cast<double>(seed_count);
    }
  }
  return report;
}

std::string report_json(const EvaluationReport& report, std::string_view metric) {
  json j;
  j["model"] = report.model.name;
  j["metric"] = metric;
  j["per_K"] = per_k_json(report.ks, report.model.mean_ndcg, report.model.mean_label_distance);
  j["oracle"] = {{"name", report.oracle.name},
                 {"per_K", per_k_json(report.ks, report.oracle.mean_ndcg,
                                      report.oracle.mean_label_distance)}};
  if (!report.baseline.name.empty()) {
    j["baseline"] = {{"name", report.baseline.name},
                     {"per_K", per_k_json(report.ks, report.baseline.mean_ndcg,
                                          report.baseline.mean_label_distance)}};
  }
  j["query_count"] = report.per_query.size();
  return j.dump(2) + "\n";
}

std::string report_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "K,model,mean_ndcg,mean_label_distance\n";
  for (const MethodScores* s : {&report.model, &report.oracle, &report.baseline}) {
    if (s->name.empty()) continue;
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
      out << report.ks[i] << ',' << s->name << ',' << s->mean_ndcg[i] << ','
          << s->mean_label_distance[i] << '\n';
    }
  }
  return out.str();
}

std::string compare_json(const CompareReport& report) {
  json j;
  j["seeds"] = report.seeds;
  j["ks"] = report.ks;
  json rows = json::array();
  for (const CompareRow& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"per_K", per_k_json(report.ks, r.mean_ndcg, r.mean_label_distance)},
                    {"ndcg_per_seed", r.ndcg_per_seed},
                    {"label_distance_per_seed", r.distance_per_seed}});
  }
  j["methods"] = rows;
  return j.dump(2) + "\n";
}

std::string compare_csv(const CompareReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "K,model,mean_ndcg,mean_label_distance\n";
  for (const CompareRow& r : report.rows) {
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
      out << report.ks[i] << ",\"" << r.method << "\"," << r.mean_ndcg[i] << ','
          << r.mean_label_distance[i] << '\n';
    }
  }
  return out.str();
}

void cmd_generate(const RunConfig& config, std::ostream& log) {
  const GeneratorSpec spec = generator_spec(config);
  const Dataset dataset = generate(spec);
  const fs::path out = prepare_out(config);
  save_dataset(out / "dataset.jsonl", dataset);
  write_text(out / "dataset.spec.json", spec.to_json() + "\n");
  log << "generated " << dataset.size() << " " << generator_kind_name(spec.kind)
      << " samples -> " << (out / "dataset.jsonl").string() << "\n";
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  const TrainConfig tc = train_config(config);
  const ExperimentData data = prepare_data(config);
  const fs::path out = prepare_out(config);
  const TrainResult result =
      train(data.parts.train, data.metric, tc, {&data.parts.queries, &data.parts.gallery});
  save_checkpoint(out / "model.ckpt.json", result.model);
  write_text(out / "train_log.jsonl", training_log_jsonl(result.log));
  log << "trained " << loss_kind_name(tc.loss.kind) << " + " << mining_kind_name(tc.mining)
      << " for " << tc.epochs << " epochs: loss " << result.log.front().mean_loss << " -> "
      << result.log.back().mean_loss << ", checksum " << checkpoint_checksum(result.model) << "\n";
}

void cmd_mine(const RunConfig& config, std::ostream& log) {
  const ExperimentData data = prepare_data(config);
  const TrainConfig tc = train_config(config);
  const std::size_t anchor = config.get_size("anchor");
  if (anchor >= data.full.size()) {
    throw ValidationError("anchor " + std::to_string(anchor) + " out of range for " +
                          std::to_string(data.full.size()) + " samples");
  }
  const Matrix labels = pairwise_label_matrix(data.full, data.metric);
  Rng rng(config.get_u64("seed"));
  const fs::path out = prepare_out(config);
  std::ostringstream lines;
  auto id = [&](std::size_t i) { return data.full[i].id; };
  std::size_t count = 0;
  std::size_t flagged = 0;
  if (tc.mining == MiningKind::kDense) {
    const Minibatch batch = build_minibatch(anchor, tc.batch_size, tc.k, labels, rng);
    for (const Triplet& t : mine_dense(batch, labels)) {
      lines << json{{"a", id(t.a)}, {"i", id(t.i)}, {"j", id(t.j)},
                    {"d_ai", labels(t.a, t.i)}, {"d_aj", labels(t.a, t.j)}}.dump() << '\n';
      ++count;
    }
    json members = json::array();
    for (std::size_t m : batch.members) members.push_back(id(m));
    write_text(out / "minibatch.json",
               json{{"anchor", id(anchor)}, {"members", members}, {"k_nearest", batch.k_nearest}}.dump(2) + "\n");
  } else {
    for (const BinaryTriplet& t : mine_binary(anchor, labels, tc.positive_count,
                                              tc.effective_binary_triplets(), rng)) {
      lines << json{{"a", id(t.a)}, {"i", id(t.p)}, {"j", id(t.n)},
                    {"d_ai", labels(t.a, t.p)}, {"d_aj", labels(t.a, t.n)},
                    {"violation", t.violates()}}.dump() << '\n';
      ++count;
      flagged += t.violates() ? 1 : 0;
    }
  }
  write_text(out / "triplets.jsonl", lines.str());
  log << "mined " << count << " " << mining_kind_name(tc.mining) << " triplets for anchor "
      << anchor;
  if (tc.mining == MiningKind::kBinary) log << " (" << flagged << " flagged)";
  log << " -> " << (out / "triplets.jsonl").string() << "\n";
}

bool cmd_gradcheck(const RunConfig& config, std::ostream& log) {
  const GradcheckReport report = run_gradcheck(config);
  const fs::path out = prepare_out(config);
  json j;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  json entries = json::array();
  for (const GradcheckEntry& e : report.entries) {
    entries.push_back({{"name", e.name}, {"trials", e.trials},
                       {"max_relative_error", e.max_relative_error},
                       {"max_sum_residual", e.max_sum_residual}});
    log << e.name << ": max relative error " << e.max_relative_error << " over " << e.trials
        << " trials\n";
  }
  j["checks"] = entries;
  write_text(out / "gradcheck.json", j.dump(2) + "\n");
  log << (report.passed ? "PASS" : "FAIL") << " (tolerance " << report.tolerance << ")\n";
  return report.passed;
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const fs::path out_dir = config.get("out");
  const fs::path ckpt = config.get("checkpoint").empty() ? out_dir / "model.ckpt.json"
                                                          : fs::path(config.get("checkpoint"));
  const EmbeddingModel model = load_checkpoint(ckpt);
  const ExperimentData data = prepare_data(config);

  TrainConfig arch = train_config(config);
  arch.hidden.clear();
  for (std::size_t l = 0; l + 1 < model.layers().size(); ++l) arch.hidden.push_back(model.layers()[l].out);
  arch.embedding_dim = model.output_dim();
  arch.unit_norm = model.unit_norm_output();
  const EmbeddingModel baseline = initial_model(model.input_dim(), arch);

  const EvaluationReport report = evaluate(model, data.parts.queries, data.parts.gallery,
                                           data.metric, config.get_size_list("k_list"), &baseline,
                                           ckpt.filename().string());
  const fs::path out = prepare_out(config);
  write_text(out / "eval_report.json", report_json(report, data.metric.name()));
  if (config.get_bool("write_csv")) write_text(out / "eval_curves.csv", report_csv(report));
  for (std::size_t i = 0; i < report.ks.size(); ++i) {
    log << "K=" << report.ks[i] << " nDCG " << report.model.mean_ndcg[i] << " (untrained "
        << report.baseline.mean_ndcg[i] << ") label distance " << report.model.mean_label_distance[i]
        << " (oracle " << report.oracle.mean_label_distance[i] << ")\n";
  }
}

void cmd_compare(const RunConfig& config, std::ostream& log) {
  const CompareReport report = run_compare(config);
  const fs::path out = prepare_out(config);
  write_text(out / "compare.json", compare_json(report));
  if (config.get_bool("write_csv")) write_text(out / "compare.csv", compare_csv(report));
  for (const CompareRow& r : report.rows) {
    log << r.method << ":";
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
      log << " nDCG@" << report.ks[i] << "=" << r.mean_ndcg[i];
    }
    log << "\n";
  }
}

}  // namespace logratio
