//
// Copyright 2026 The cpdnes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace cpdnes {

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 1.0;
};

struct Neighbor {
  std::size_t node = 0;
  double weight = 0.0;
};

struct LaplacianView {
  Eigen::MatrixXd L;
  double lambda2 = 0.0;  // algebraic connectivity
  double lambdaM = 0.0;  // largest eigenvalue magnitude
};

// Undirected weighted communication graph. Immutable once built; rejects
// disconnected graphs, self loops and non-positive weights.
class Topology {
 public:
  static Topology Ring(std::size_t nodes, double weight = 1.0);
  static Topology FromEdges(std::size_t nodes, std::span<const Edge> edges);

  std::size_t nodes() const { return static_cast<std::size_t>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const LaplacianView& laplacian() const { return laplacian_; }
  const std::vector<Neighbor>& neighbors(std::size_t i) const {
    return neighbors_[i];
  }
  double degree(std::size_t i) const { return laplacian_.L(i, i); }
  std::size_t edge_count() const;

 private:
  explicit Topology(Eigen::MatrixXd weights);

  Eigen::MatrixXd weights_;
  LaplacianView laplacian_;
  std::vector<std::vector<Neighbor>> neighbors_;
};

// A = I - beta L. Logs a warning when a diagonal entry goes negative, since
// A is then no longer entry-wise nonnegative.
Eigen::MatrixXd mixing_matrix(const Topology& topology, double beta);

}  // namespace cpdnes
