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

#include "logratio/synthdata.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "logratio/rng.h"

namespace logratio {
namespace {

// d x r matrix with orthonormal columns (modified Gram-Schmidt on a Gaussian draw).
Matrix random_isometry(std::size_t d, std::size_t r, Rng& rng) {
  Matrix q(d, r);
  for (std::size_t c = 0; c < r; ++c) {
    for (;;) {
      for (std::size_t i = 0; i < d; ++i) q(i, c) = rng.normal();
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += q(i, p) * q(i, c);
        for (std::size_t i = 0; i < d; ++i) q(i, c) -= dot * q(i, p);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) norm += q(i, c) * q(i, c);
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (std::size_t i = 0; i < d; ++i) q(i, c) /= norm;
        break;
      }
    }
  }
  return q;
}

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  for (double& v : m.data()) v = rng.normal() * scale;
  return m;
}

Vector transform(const Matrix& m, ConstVec x) {
  Vector out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * x[c];
  }
  return out;
}

void add_noise(Vector& v, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  for (double& x : v) x += rng.normal() * sigma;
}

LabeledSample make_sample(std::size_t id, Vector features, Vector label) {
  LabeledSample s;
  s.id = static_cast<std::int64_t>(id);
  s.features = std::move(features);
  s.label.values = std::move(label);
  return s;
}

std::vector<LabeledSample> ramp(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t r = std::min(spec.d_in, spec.d_lab);
  const Matrix to_features = random_isometry(spec.d_in, r, rng);
  const Matrix to_labels = random_isometry(spec.d_lab, r, rng);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Vector z(r);
    for (double& v : z) v = rng.uniform(-1.0, 1.0);
    Vector label = transform(to_labels, z);
    add_noise(label, spec.noise, rng);
    out.push_back(make_sample(i, transform(to_features, z), std::move(label)));
  }
  return out;
}

std::vector<LabeledSample> manifold(const GeneratorSpec& spec, Rng& rng) {
  Matrix freq(spec.d_in, spec.d_lab);
  Vector phase(spec.d_in);
  for (std::size_t k = 0; k < spec.d_in; ++k) {
    for (std::size_t m = 0; m < spec.d_lab; ++m) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      freq(k, m) = sign * rng.uniform(0.5, 2.0) * std::numbers::pi;
    }
    phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Vector t(spec.d_lab);
    for (double& v : t) v = rng.uniform();
    Vector x(spec.d_in);
    for (std::size_t k = 0; k < spec.d_in; ++k) {
      double arg = phase[k];
      for (std::size_t m = 0; m < spec.d_lab; ++m) arg += freq(k, m) * t[m];
      x[k] = std::sin(arg);
    }
    add_noise(x, spec.noise, rng);
    out.push_back(make_sample(i, std::move(x), std::move(t)));
  }
  return out;
}

std::vector<LabeledSample> imbalance(const GeneratorSpec& spec, Rng& rng) {
  const Matrix to_features = random_gaussian(spec.d_in, spec.d_lab, rng);
  const std::size_t cluster = imbalance_cluster_size(spec);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Vector pos(spec.d_lab);
    for (double& v : pos) {
      v = i < cluster ? rng.normal() * spec.cluster_spread : rng.uniform(-1.0, 1.0);
    }
    Vector x = transform(to_features, pos);
    add_noise(x, spec.noise, rng);
    out.push_back(make_sample(i, std::move(x), std::move(pos)));
  }
  return out;
}

std::vector<LabeledSample> toy_pose(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t joints = spec.d_lab / 2;
  Vector skeleton(spec.d_lab);
  for (double& v : skeleton) v = rng.uniform(-0.5, 0.5);
  const Matrix to_features = random_gaussian(spec.d_in, spec.d_lab, rng);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double angle = rng.uniform(-std::numbers::pi / 4, std::numbers::pi / 4);
    const double tx = rng.uniform(-0.2, 0.2);
    const double ty = rng.uniform(-0.2, 0.2);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Vector pose(spec.d_lab);
    for (std::size_t j = 0; j < joints; ++j) {
      const double x = skeleton[2 * j] + rng.normal() * 0.03;
      const double y = skeleton[2 * j + 1] + rng.normal() * 0.03;
      pose[2 * j] = c * x - s * y + tx;
      pose[2 * j + 1] = s * x + c * y + ty;
    }
    Vector x = transform(to_features, pose);
    add_noise(x, spec.noise, rng);
    out.push_back(make_sample(i, std::move(x), std::move(pose)));
  }
  return out;
}

std::vector<LabeledSample> toy_layout(const GeneratorSpec& spec, Rng& rng) {
  const int size = spec.mask_size;
  const Matrix to_features = random_gaussian(spec.d_in, 2, rng);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double top = rng.uniform(0.1, 0.9);
    const double bottom = rng.uniform(0.1, 0.9);
    Vector mask(static_cast<std::size_t>(size * size));
    for (int row = 0; row < size; ++row) {
      const double frac = size > 1 ? static_cast<double>(row) / (size - 1) : 0.0;
      const double wall = (top + (bottom - top) * frac) * size;
      for (int col = 0; col < size; ++col) {
        mask[static_cast<std::size_t>(row * size + col)] = col + 0.5 < wall ? 0.0 : 1.0;
      }
    }
    const double params[] = {top, bottom};
    Vector x = transform(to_features, params);
    add_noise(x, spec.noise, rng);
    out.push_back(make_sample(i, std::move(x), std::move(mask)));
  }
  return out;
}

}  // namespace

std::string_view generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kRamp: return "ramp";
    case GeneratorKind::kManifold: return "manifold";
    case GeneratorKind::kImbalance: return "imbalance";
    case GeneratorKind::kToyPose: return "toy_pose";
    case GeneratorKind::kToyLayout: return "toy_layout";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  for (GeneratorKind k : {GeneratorKind::kRamp, GeneratorKind::kManifold,
                          GeneratorKind::kImbalance, GeneratorKind::kToyPose,
                          GeneratorKind::kToyLayout}) {
    if (generator_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown generator kind '" + std::string(name) + "'");
}

void GeneratorSpec::validate() const {
  if (n < 2) throw ValidationError("generator: n must be >= 2");
  if (d_in == 0) throw ValidationError("generator: d_in must be positive");
  if (kind != GeneratorKind::kToyLayout && d_lab == 0) {
    throw ValidationError("generator: d_lab must be positive");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ValidationError("generator: noise must be >= 0");
  if (kind == GeneratorKind::kToyPose && d_lab % 2 != 0) {
    throw ValidationError("generator: toy_pose needs an even d_lab (x, y per joint)");
  }
  if (kind == GeneratorKind::kImbalance &&
      !(cluster_fraction > 0.0 && cluster_fraction < 1.0 && cluster_spread > 0.0)) {
    throw ValidationError("generator: cluster_fraction must be in (0, 1), spread positive");
  }
  if (kind == GeneratorKind::kToyLayout && mask_size < 2) {
    throw ValidationError("generator: mask_size must be >= 2");
  }
}

std::string GeneratorSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = generator_kind_name(kind);
  j["n"] = n;
  j["d_in"] = d_in;
  j["d_lab"] = kind == GeneratorKind::kToyLayout ? static_cast<std::size_t>(mask_size * mask_size)
                                                  : d_lab;
  j["noise"] = noise;
  j["seed"] = seed;
  if (kind == GeneratorKind::kImbalance) {
    j["cluster_fraction"] = cluster_fraction;
    j["cluster_spread"] = cluster_spread;
  }
  if (kind == GeneratorKind::kToyLayout) j["mask_size"] = mask_size;
  j["metric"] = natural_metric().name();
  return j.dump(2);
}

LabelMetric GeneratorSpec::natural_metric() const {
  switch (kind) {
    case GeneratorKind::kToyPose: return LabelMetric::joint_sum(d_lab / 2);
    case GeneratorKind::kToyLayout: return LabelMetric::mask_miou_complement(mask_size, mask_size, {0, 1});
    default: return LabelMetric::squared_euclidean();
  }
}

std::size_t imbalance_cluster_size(const GeneratorSpec& spec) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(spec.n) * spec.cluster_fraction));
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<LabeledSample> samples;
  switch (spec.kind) {
    case GeneratorKind::kRamp: samples = ramp(spec, rng); break;
    case GeneratorKind::kManifold: samples = manifold(spec, rng); break;
    case GeneratorKind::kImbalance: samples = imbalance(spec, rng); break;
    case GeneratorKind::kToyPose: samples = toy_pose(spec, rng); break;
    case GeneratorKind::kToyLayout: samples = toy_layout(spec, rng); break;
  }
  return Dataset(std::string(generator_kind_name(spec.kind)), std::move(samples));
}

Split split(const Dataset& dataset, double train_fraction, std::size_t query_count,
            std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ValidationError("split: train_fraction must be in (0, 1]");
  }
  const std::size_t n = dataset.size();
  const auto n_train =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  if (n_train == 0) throw ValidationError("split: training part would be empty");
  const std::size_t held_out = n - std::min(n_train, n);
  if (query_count == 0) throw ValidationError("split: query_count must be positive");
  if (query_count >= held_out) {
    throw ValidationError("split: " + std::to_string(query_count) + " queries need a gallery, but only " +
                          std::to_string(held_out) + " samples are held out");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::span<const std::size_t> all(order);
  return Split{
      dataset.subset(all.first(n_train), dataset.name() + "-train"),
      dataset.subset(all.subspan(n_train + query_count), dataset.name() + "-gallery"),
      dataset.subset(all.subspan(n_train, query_count), dataset.name() + "-queries"),
  };
}

}  // namespace logratio
