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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logratio/checkpoint.h"
#include "logratio/commands.h"
#include "logratio/config.h"
#include "logratio/eval.h"
#include "logratio/losses.h"
#include "logratio/mining.h"
#include "logratio/synthdata.h"
#include "logratio/trainer.h"

namespace py = pybind11;
using namespace logratio;

namespace {

py::dict loss_dict(const TripletLossOutput& out) {
  py::dict d;
  d["value"] = out.value;
  d["grad_a"] = out.grad_a;
  d["grad_i"] = out.grad_i;
  d["grad_j"] = out.grad_j;
  d["active"] = out.active;
  return d;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw ValidationError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows[r].assign(m.row(r).begin(), m.row(r).end());
  return rows;
}

RunConfig config_from(const py::dict& overrides) {
  RunConfig cfg;
  for (const auto& [k, v] : overrides) cfg.set(py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_logratio, m) {
  m.doc() = "Log-ratio loss, dense triplet mining and retrieval evaluation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  m.def("squared_euclidean", [](const Vector& u, const Vector& v) { return squared_euclidean(u, v); });
  m.def("triplet_loss",
        [](const Vector& a, const Vector& p, const Vector& n, double margin) {
          return loss_dict(triplet_loss(a, p, n, margin));
        },
        py::arg("f_a"), py::arg("f_p"), py::arg("f_n"), py::arg("margin") = kTripletMargin);
  m.def("dense_triplet_loss",
        [](const Vector& a, const Vector& i, const Vector& j, double margin) {
          return loss_dict(dense_triplet_loss(a, i, j, margin));
        },
        py::arg("f_a"), py::arg("f_i"), py::arg("f_j"), py::arg("margin") = kDenseTripletMargin);
  m.def("log_ratio_loss",
        [](const Vector& a, const Vector& i, const Vector& j, double dai, double daj) {
          return loss_dict(log_ratio_loss(a, i, j, dai, daj));
        },
        py::arg("f_a"), py::arg("f_i"), py::arg("f_j"), py::arg("label_dist_ai"), py::arg("label_dist_aj"));

  m.def("mine_dense",
        [](std::size_t anchor, const std::vector<std::size_t>& members,
           const std::vector<std::vector<double>>& label_matrix) {
          const Minibatch b{anchor, members, 0};
          std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
          for (const Triplet& t : mine_dense(b, to_matrix(label_matrix))) out.emplace_back(t.a, t.i, t.j);
          return out;
        },
        py::arg("anchor"), py::arg("members"), py::arg("label_matrix"));
  m.def("nearest_neighbors",
        [](const std::vector<std::vector<double>>& L, std::size_t anchor, std::size_t k) {
          return nearest_neighbors(to_matrix(L), anchor, k);
        });

  m.def("relevance", &relevance);
  m.def("dcg_at_k", [](const Vector& d, std::size_t K) { return dcg_at_k(d, K); });
  m.def("ideal_dcg_at_k", [](const Vector& d, std::size_t K) { return ideal_dcg_at_k(d, K); });
  m.def("ndcg_at_k", [](const Vector& ranked, std::size_t K, double z) { return ndcg_at_k(ranked, K, z); });

  m.def("generate",
        [](const py::dict& overrides) {
          const Dataset d = generate(generator_spec(config_from(overrides)));
          py::list features, labels;
          for (const LabeledSample& s : d.samples()) {
            features.append(py::cast(s.features));
            labels.append(py::cast(s.label.values));
          }
          return py::make_tuple(features, labels);
        },
        py::arg("config") = py::dict(),
        "Generate a synthetic dataset; returns (features, labels) as lists of rows.");

  m.def("train_and_evaluate",
        [](const py::dict& overrides) {
          const RunConfig cfg = config_from(overrides);
          const ExperimentData data = prepare_data(cfg);
          const TrainConfig tc = train_config(cfg);
          TrainResult result;
          {
            py::gil_scoped_release release;
            result = train(data.parts.train, data.metric, tc);
          }
          const EmbeddingModel untrained = initial_model(data.parts.train.feature_dim(), tc);
          const EvaluationReport report = evaluate(result.model, data.parts.queries, data.parts.gallery,
                                                   data.metric, cfg.get_size_list("k_list"), &untrained);
          py::dict out;
          py::list losses;
          for (const EpochRecord& r : result.log) losses.append(r.mean_loss);
          out["losses"] = losses;
          out["ks"] = report.ks;
          out["ndcg"] = report.model.mean_ndcg;
          out["label_distance"] = report.model.mean_label_distance;
          out["untrained_ndcg"] = report.baseline.mean_ndcg;
          out["checksum"] = checkpoint_checksum(result.model);
          out["checkpoint"] = checkpoint_to_json(result.model);
          return out;
        },
        py::arg("config") = py::dict(),
        "Train with config overrides (same keys as the CLI) and score the held-out split.");

  m.def("embed",
        [](const std::string& checkpoint_json, const std::vector<std::vector<double>>& features) {
          const EmbeddingModel model = checkpoint_from_json(checkpoint_json);
          std::vector<std::vector<double>> out;
          for (const auto& x : features) out.push_back(model.forward(x));
          return out;
        });

  m.def("gradcheck",
        [](const py::dict& overrides) {
          const GradcheckReport r = run_gradcheck(config_from(overrides));
          py::dict out;
          out["passed"] = r.passed;
          for (const GradcheckEntry& e : r.entries) out[py::str(e.name)] = e.max_relative_error;
          return out;
        },
        py::arg("config") = py::dict());
}
