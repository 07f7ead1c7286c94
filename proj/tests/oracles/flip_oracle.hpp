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

// Brute-force flip: J(mu) is the law of F_mu(U) for U uniform on [0, 1].
// F is evaluated by summing masses on every gap between support points, with
// no use of the library's CDF or quantile code.

#ifndef WISO_TESTS_ORACLES_FLIP_ORACLE_HPP_
#define WISO_TESTS_ORACLES_FLIP_ORACLE_HPP_

#include <algorithm>
#include <map>
#include <vector>

#include "wiso/measure.hpp"

namespace oracle {

inline wiso::DiscreteMeasure<wiso::Rational> flip(const wiso::DiscreteMeasure<wiso::Rational>& mu) {
  using Q = wiso::Rational;
  std::vector<Q> cuts{Q(0), Q(1)};
  for (const auto& a : mu.atoms()) cuts.push_back(a.point.t());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::map<Q, Q> law;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    Q f(0);
    for (const auto& a : mu.atoms()) {
      if (a.point.t() <= cuts[k]) f += a.mass;
    }
    law[f] += cuts[k + 1] - cuts[k];
  }
  std::vector<wiso::Atom<Q>> atoms;
  for (const auto& [v, m] : law) atoms.push_back({wiso::Point<Q>::interval(v), m});
  return wiso::DiscreteMeasure<Q>(mu.space(), atoms);
}

}  // namespace oracle

#endif  // WISO_TESTS_ORACLES_FLIP_ORACLE_HPP_
