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

// Exhaustive vertex enumeration for small transportation problems.
//
// Every basic solution of the m x n transportation polytope is carried by a
// spanning tree of the complete bipartite graph K_{m,n}; the tree fixes the
// flow through leaf elimination. The optimum is the cheapest tree whose flow
// is nonnegative. Shares no code with the library solver.

#ifndef WISO_TESTS_ORACLES_VERTEX_ORACLE_HPP_
#define WISO_TESTS_ORACLES_VERTEX_ORACLE_HPP_

#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

struct Step {
  int row;
  int col;
  bool leaf_is_row;
};

using Tree = std::vector<Step>;

class TreeCatalog {
 public:
  /// Spanning trees of K_{m,n} as leaf-elimination schedules.
  const std::vector<Tree>& trees(int m, int n) {
    auto key = std::make_pair(m, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, build(m, n)).first->second;
  }

 private:
  static std::vector<Tree> build(int m, int n) {
    const int edges = m * n;
    const int need = m + n - 1;
    std::vector<Tree> out;
    std::vector<int> pick;
    auto find = [](std::vector<int>& parent, int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    // Enumerate subsets of size `need` in lexicographic order.
    std::vector<int> idx(need);
    std::iota(idx.begin(), idx.end(), 0);
    if (need > edges) return out;
    while (true) {
      std::vector<int> parent(m + n);
      std::iota(parent.begin(), parent.end(), 0);
      bool acyclic = true;
      for (int e : idx) {
        int a = find(parent, e / n), b = find(parent, m + e % n);
        if (a == b) {
          acyclic = false;
          break;
        }
        parent[a] = b;
      }
      if (acyclic) out.push_back(schedule(m, n, idx));
      int k = need - 1;
      while (k >= 0 && idx[k] == edges - need + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  }

  static Tree schedule(int m, int n, const std::vector<int>& idx) {
    std::vector<int> degree(m + n, 0);
    std::vector<bool> used(idx.size(), false);
    for (int e : idx) {
      ++degree[e / n];
      ++degree[m + e % n];
    }
    Tree tree;
    for (std::size_t round = 0; round < idx.size(); ++round) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (used[k]) continue;
        const int r = idx[k] / n, c = idx[k] % n;
        const bool row_leaf = degree[r] == 1;
        const bool col_leaf = degree[m + c] == 1;
        if (!row_leaf && !col_leaf) continue;
        used[k] = true;
        --degree[r];
        --degree[m + c];
        tree.push_back({r, c, row_leaf});
        break;
      }
    }
    return tree;
  }

  std::map<std::pair<int, int>, std::vector<Tree>> cache_;
};

/// Minimum of sum c_ij x_ij over all nonnegative basic solutions.
template <class T>
std::optional<T> min_cost(TreeCatalog& catalog, const std::vector<std::vector<T>>& cost,
                          const std::vector<T>& supply, const std::vector<T>& demand) {
  const int m = static_cast<int>(supply.size()), n = static_cast<int>(demand.size());
  std::optional<T> best;
  std::vector<T> a(m), b(n);
  for (const Tree& tree : catalog.trees(m, n)) {
    std::copy(supply.begin(), supply.end(), a.begin());
    std::copy(demand.begin(), demand.end(), b.begin());
    T total(0);
    bool feasible = true;
    for (const Step& s : tree) {
      T x = s.leaf_is_row ? a[s.row] : b[s.col];
      if (x < T(0)) {
        feasible = false;
        break;
      }
      a[s.row] -= x;
      b[s.col] -= x;
      total += x * cost[s.row][s.col];
    }
    if (!feasible) continue;
    for (const auto& r : a) feasible = feasible && r == T(0);
    for (const auto& r : b) feasible = feasible && r == T(0);
    if (feasible && (!best || total < *best)) best = total;
  }
  return best;
}

}  // namespace oracle

#endif  // WISO_TESTS_ORACLES_VERTEX_ORACLE_HPP_
