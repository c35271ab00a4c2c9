// Copyright 2026 The absorb Authors.
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

// Discounted values of the Big Match from value iteration and from the
// truncated exact solver. Both should sit near 1/2.

#include <cstdio>

#include "absorb/exact_oracle.hpp"
#include "absorb/value_engine.hpp"

int main() {
  const absorb::GameSpec bm = absorb::big_match();
  const absorb::FiniteBeliefGame G(bm, absorb::build_triangulation(1, 1), absorb::build_triangulation(1, 1));
  const absorb::ActionGrid gx(1, 2, 1), gy(1, 2, 1);
  for (double lambda : {0.5, 0.1, 0.01}) {
    const auto v = absorb::solve_discounted(G, lambda, gx, gy, 1e-6);
    const auto o = absorb::solve_truncated(bm, {1.0}, {1.0}, 0, lambda, 1e-3);
    std::printf("lambda %-5g  value iteration %.6f  exact %.6f +- %.1e\n", lambda, v.values[0], o.value,
                o.error_bound);
  }
}
