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

#include <cmath>
#include <numbers>
#include <sstream>

#include "cpdnes/error.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cpdnes {
namespace {

using ::testing::HasSubstr;

TEST(TopologyTest, RingSpectrumMatchesCirculantFormula) {
  for (std::size_t n : {3u, 5u, 8u, 11u}) {
    const auto ring = Topology::Ring(n, 0.5);
    // Circulant eigenvalues w (2 - 2 cos(2 pi j / n)).
    double lambda2 = 1e300, lambdaM = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      const double ev = 0.5 * (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * j / n));
      lambda2 = std::min(lambda2, ev);
      lambdaM = std::max(lambdaM, ev);
    }
    EXPECT_NEAR(ring.laplacian().lambda2, lambda2, 1e-10) << n;
    EXPECT_NEAR(ring.laplacian().lambdaM, lambdaM, 1e-10) << n;
    EXPECT_EQ(ring.edge_count(), n);
  }
}

TEST(TopologyTest, RingNeighbours) {
  const auto ring = Topology::Ring(5);
  const auto& nb = ring.neighbors(0);
  ASSERT_EQ(nb.size(), 2u);
  std::vector<std::size_t> ids = {nb[0].node, nb[1].node};
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<std::size_t>{1, 4}));
  EXPECT_DOUBLE_EQ(ring.degree(0), 2.0);
}

TEST(TopologyTest, LaplacianRowsSumToZero) {
  const std::vector<Edge> edges = {{0, 1, 0.3}, {1, 2, 1.5}, {2, 3, 0.7}, {0, 3, 2.0},
                                   {1, 3, 0.1}};
  const auto t = Topology::FromEdges(4, edges);
  const auto& L = t.laplacian().L;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(L.row(i).sum(), 0.0, 1e-12);
  EXPECT_TRUE(L.isApprox(L.transpose()));
  EXPECT_GT(t.laplacian().lambda2, 0.0);
}

TEST(TopologyTest, RejectsMalformedGraphs) {
  EXPECT_THROW(Topology::Ring(2), StructuralError);
  const std::vector<Edge> loop = {{0, 0, 1.0}, {0, 1, 1.0}};
  EXPECT_THROW(Topology::FromEdges(2, loop), StructuralError);
  const std::vector<Edge> negative = {{0, 1, -1.0}};
  EXPECT_THROW(Topology::FromEdges(2, negative), StructuralError);
  const std::vector<Edge> split = {{0, 1, 1.0}, {2, 3, 1.0}};
  EXPECT_THROW(Topology::FromEdges(4, split), StructuralError);
  const std::vector<Edge> outside = {{0, 7, 1.0}};
  EXPECT_THROW(Topology::FromEdges(3, outside), StructuralError);
}

TEST(MixingMatrixTest, DoublyStochastic) {
  const auto ring = Topology::Ring(5);
  for (double beta : {0.0, 0.1, 0.4}) {
    const auto A = mixing_matrix(ring, beta);
    for (int i = 0; i < 5; ++i) {
      EXPECT_NEAR(A.row(i).sum(), 1.0, 1e-12);
      EXPECT_NEAR(A.col(i).sum(), 1.0, 1e-12);
    }
  }
}

class ClogCapture {
 public:
  ClogCapture() : old_(std::clog.rdbuf(buffer_.rdbuf())) {}
  ~ClogCapture() { std::clog.rdbuf(old_); }
  std::string text() const { return buffer_.str(); }

 private:
  std::ostringstream buffer_;
  std::streambuf* old_;
};

TEST(MixingMatrixTest, WarnsOnNegativeDiagonal) {
  const auto ring = Topology::Ring(5);
  {
    ClogCapture capture;
    mixing_matrix(ring, 0.4);
    EXPECT_EQ(capture.text(), "");
  }
  {
    ClogCapture capture;
    const auto A = mixing_matrix(ring, 0.8);
    EXPECT_LT(A(0, 0), 0.0);
    EXPECT_THAT(capture.text(), HasSubstr("negative"));
  }
}

}  // namespace
}  // namespace cpdnes
