// Copyright 2026 The wiso Authors
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

/**
 * @file random.hpp
 *
 * @brief Seeded samplers for points, measures and couplings.
 *
 * Every coordinate is drawn from the grid `k / grid`, and every mass is an
 * integer weight divided by the total weight, so a given seed produces the
 * same instance in float and rational mode.
 */

#ifndef WISO_RANDOM_HPP_
#define WISO_RANDOM_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "wiso/coupling.hpp"
#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"

namespace wiso {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial `trial` in a campaign seeded with `seed`.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed ^ splitmix64(trial + 1));
}

struct SamplerOptions {
  /// Coordinates live on the grid k / grid.
  std::int64_t grid = 1000;
  /// Euclidean coordinates are drawn from [-window, window].
  std::int64_t window = 1;
  /// Restricts Euclidean coordinates to [0, window].
  bool nonnegative = false;
  /// Atom weights are drawn from 1..max_weight before normalization.
  std::int64_t max_weight = 10;
};

template <Scalar T>
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed, SamplerOptions options = {})
      : rng_(seed), options_(options) {}

  std::mt19937_64& engine() { return rng_; }
  const SamplerOptions& options() const { return options_; }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  /// Uniform grid value in [0, 1].
  T unit() { return scalar::from_ratio<T>(integer(0, options_.grid), options_.grid); }

  /// Uniform grid value in (0, 1).
  T open_unit() { return scalar::from_ratio<T>(integer(1, options_.grid - 1), options_.grid); }

  Point<T> point(const MetricSpace<T>& space) {
    switch (space.kind()) {
      case SpaceKind::Interval: return Point<T>::interval(unit());
      case SpaceKind::Euclidean: {
        std::vector<T> coords;
        const std::int64_t span = options_.grid * options_.window;
        const std::int64_t lo = options_.nonnegative ? 0 : -span;
        for (std::size_t k = 0; k < space.dim(); ++k) {
          coords.push_back(scalar::from_ratio<T>(integer(lo, span), options_.grid));
        }
        return Point<T>::euclidean(std::move(coords));
      }
      case SpaceKind::Finite:
        return Point<T>::finite(static_cast<std::size_t>(
            integer(0, static_cast<std::int64_t>(space.size()) - 1)));
      case SpaceKind::Product: {
        T t = unit();
        return Point<T>::product(t, point(*space.base()));
      }
    }
    throw DomainError("Sampler::point: unknown space kind");
  }

  /// Normalized masses from integer weights in 1..max_weight.
  std::vector<T> masses(std::size_t n) {
    std::vector<std::int64_t> w(n);
    for (auto& x : w) x = integer(1, options_.max_weight);
    const std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
    std::vector<T> out;
    out.reserve(n);
    for (auto x : w) out.push_back(scalar::from_ratio<T>(x, total));
    return out;
  }

  /// `n` pairwise-distinct points; `distinct_t` and `distinct_base` add
  /// the corresponding coordinate constraints on product spaces.
  std::vector<Point<T>> points(const MetricSpace<T>& space, std::size_t n, bool distinct_t = false,
                               bool distinct_base = false) {
    std::vector<Point<T>> out;
    std::size_t attempts = 0;
    while (out.size() < n) {
      if (++attempts > 1000 * (n + 1)) {
        throw DomainError("Sampler::points: cannot draw " + std::to_string(n) +
                          " points with the requested constraints");
      }
      Point<T> p = point(space);
      bool ok = true;
      for (const auto& q : out) {
        if (q == p || (distinct_t && q.t() == p.t()) ||
            (distinct_base && q.base() == p.base())) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(std::move(p));
    }
    return out;
  }

  DiscreteMeasure<T> measure(SpacePtr<T> space, std::size_t n_atoms, bool distinct_t = false,
                             bool distinct_base = false) {
    auto pts = points(*space, n_atoms, distinct_t, distinct_base);
    auto ms = masses(n_atoms);
    std::vector<Atom<T>> atoms;
    for (std::size_t i = 0; i < n_atoms; ++i) atoms.push_back({std::move(pts[i]), ms[i]});
    return DiscreteMeasure<T>(std::move(space), std::move(atoms));
  }

  /// Measure whose atoms have pairwise-distinct base points.
  DiscreteMeasure<T> fiber_injective_measure(SpacePtr<T> space, std::size_t n_atoms) {
    return measure(std::move(space), n_atoms, false, true);
  }

  /**
   * A feasible coupling of `mu` and `nu`: a mixture of the product coupling
   * and the north-west corner plan under random row and column orders.
   */
  Coupling<T> coupling(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
    const std::size_t m = mu.size(), n = nu.size();
    std::vector<std::size_t> rows(m), cols(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::shuffle(rows.begin(), rows.end(), rng_);
    std::shuffle(cols.begin(), cols.end(), rng_);

    Matrix<T> nw(m, n);
    std::vector<T> a, b;
    for (std::size_t i : rows) a.push_back(mu[i].mass);
    for (std::size_t j : cols) b.push_back(nu[j].mass);
    std::size_t i = 0, j = 0;
    while (i < m && j < n) {
      T x = std::min<T>(a[i], b[j]);
      nw(rows[i], cols[j]) = x;
      a[i] -= x;
      b[j] -= x;
      if (i + 1 < m && (a[i] == T(0) || j + 1 == n)) {
        ++i;
      } else {
        ++j;
      }
    }
    const T theta = unit();
    Matrix<T> w(m, n);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        w(r, c) = theta * mu[r].mass * nu[c].mass + (T(1) - theta) * nw(r, c);
      }
    }
    return Coupling<T>(mu, nu, std::move(w));
  }

 private:
  std::mt19937_64 rng_;
  SamplerOptions options_;
};

}  // namespace wiso

#endif  // WISO_RANDOM_HPP_
