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

#include "cpdnes/network.hpp"

#include <fmt/core.h>

#include <iostream>
#include <string>

#include "cpdnes/error.hpp"

namespace cpdnes {

namespace {

bool connected(const Eigen::MatrixXd& w) {
  const auto n = w.rows();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  Eigen::Index visited = 0;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    ++visited;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (w(u, v) > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

}  // namespace

Topology::Topology(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  const auto n = weights_.rows();
  if (!connected(weights_)) {
    throw StructuralError("topology is not connected");
  }
  Eigen::MatrixXd degree = weights_.rowwise().sum().asDiagonal();
  laplacian_.L = degree - weights_;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian_.L,
                                                     Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  laplacian_.lambda2 = n > 1 ? ev(1) : 0.0;
  laplacian_.lambdaM = ev.cwiseAbs().maxCoeff();

  neighbors_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (weights_(i, j) > 0.0) {
        neighbors_[i].push_back({static_cast<std::size_t>(j), weights_(i, j)});
      }
    }
  }
}

Topology Topology::Ring(std::size_t nodes, double weight) {
  if (nodes < 3) {
    throw StructuralError("ring needs at least 3 nodes, got " +
                          std::to_string(nodes));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    edges.push_back({i, (i + 1) % nodes, weight});
  }
  return FromEdges(nodes, edges);
}

Topology Topology::FromEdges(std::size_t nodes, std::span<const Edge> edges) {
  const auto n = static_cast<Eigen::Index>(nodes);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.a >= nodes || e.b >= nodes) {
      throw StructuralError(fmt::format("edge ({}, {}) outside {} nodes", e.a,
                                        e.b, nodes));
    }
    if (e.a == e.b) {
      throw StructuralError(fmt::format("self loop at node {}", e.a));
    }
    if (!(e.weight > 0.0)) {
      throw StructuralError(
          fmt::format("edge ({}, {}) has non-positive weight", e.a, e.b));
    }
    w(e.a, e.b) = e.weight;
    w(e.b, e.a) = e.weight;
  }
  return Topology(std::move(w));
}

std::size_t Topology::edge_count() const {
  std::size_t count = 0;
  for (const auto& nb : neighbors_) count += nb.size();
  return count / 2;
}

Eigen::MatrixXd mixing_matrix(const Topology& topology, double beta) {
  const auto n = static_cast<Eigen::Index>(topology.nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - beta * topology.laplacian().L;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) < 0.0) {
      std::clog << fmt::format(
          "warning: mixing matrix diagonal {} is negative ({:.6g}) at beta={:.6g}; "
          "A is not entry-wise nonnegative\n",
          i, a(i, i), beta);
      break;
    }
  }
  return a;
}

}  // namespace cpdnes
