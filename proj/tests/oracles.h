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

// Independent reference implementations used only by tests.
#ifndef LOGRATIO_TESTS_ORACLES_H_
#define LOGRATIO_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "logratio/core.h"
#include "logratio/rng.h"

namespace oracle {

using logratio::Vector;

inline double sqdist(const Vector& u, const Vector& v) {
  long double s = 0;
  for (std::size_t k = 0; k < u.size(); ++k) s += (long double)(u[k] - v[k]) * (u[k] - v[k]);
  return static_cast<double>(s);
}

inline double hinge(const Vector& a, const Vector& p, const Vector& n, double margin) {
  return std::max(0.0, sqdist(a, p) - sqdist(a, n) + margin);
}

inline double log_ratio(const Vector& a, const Vector& i, const Vector& j, double dai, double daj) {
  const double t = std::log(sqdist(a, i)) - std::log(sqdist(a, j)) - std::log(dai) + std::log(daj);
  return t * t;
}

// Central differences of f with respect to v.
inline Vector numeric_gradient(const std::function<double()>& f, Vector& v, double h = 1e-6) {
  Vector g(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double saved = v[k];
    v[k] = saved + h;
    const double up = f();
    v[k] = saved - h;
    const double down = f();
    v[k] = saved;
    g[k] = (up - down) / (2 * h);
  }
  return g;
}

inline double relative_error(const Vector& a, const Vector& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += (a[k] - b[k]) * (a[k] - b[k]);
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return std::sqrt(d) / std::max({std::sqrt(na), std::sqrt(nb), 1e-10});
}

struct Tri {
  std::size_t a, i, j;
  bool operator==(const Tri&) const = default;
};

// Definition of the dense triplet set by double loop over member pairs.
inline std::vector<Tri> dense_set(std::size_t anchor, const std::vector<std::size_t>& members,
                                  const logratio::Matrix& L) {
  std::vector<Tri> out;
  for (std::size_t x : members) {
    for (std::size_t y : members) {
      if (L(anchor, x) < L(anchor, y)) out.push_back({anchor, x, y});
    }
  }
  std::sort(out.begin(), out.end(), [](const Tri& p, const Tri& q) {
    return std::tie(p.i, p.j) < std::tie(q.i, q.j);
  });
  return out;
}

inline std::vector<std::size_t> knn(const logratio::Matrix& L, std::size_t anchor, std::size_t k) {
  std::vector<std::size_t> idx;
  for (std::size_t s = 0; s < L.rows(); ++s) {
    if (s != anchor) idx.push_back(s);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t p, std::size_t q) { return L(anchor, p) < L(anchor, q); });
  idx.resize(k);
  return idx;
}

// DCG with the ranking-relevance used for retrieval scoring.
inline double dcg(const std::vector<double>& d) {
  double s = 0;
  for (std::size_t r = 0; r < d.size(); ++r) {
    s += std::pow(2.0, -std::log2(d[r] + 1.0)) / std::log2(r + 2.0);
  }
  return s;
}

// Best achievable DCG over every K-permutation of the gallery (small galleries).
inline double brute_ideal_dcg(std::vector<double> all, std::size_t K) {
  std::sort(all.begin(), all.end());
  double best = -1;
  std::vector<std::size_t> perm(all.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<double> top;
    for (std::size_t r = 0; r < K; ++r) top.push_back(all[perm[r]]);
    best = std::max(best, dcg(top));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Vector random_vector(std::size_t d, logratio::Rng& rng) {
  Vector v(d);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace oracle

#endif  // LOGRATIO_TESTS_ORACLES_H_
