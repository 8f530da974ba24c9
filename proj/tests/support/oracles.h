// tests/support/oracles.h

// Copyright 2026  BeatForge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Independent reference implementations used to check the library. These
// deliberately avoid the production code paths: the DFT is the O(n^2)
// definition, the HMM decoder enumerates every path, the matcher solves the
// assignment by augmenting paths, and gradients come from central
// differences.

#ifndef BEATFORGE_TESTS_SUPPORT_ORACLES_H_
#define BEATFORGE_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "beatforge/hmm.h"
#include "beatforge/lstm.h"

namespace beatforge::testing {

// |DFT| of one frame by direct summation.
std::vector<double> BruteForceDftMagnitude(const std::vector<double>& frame);

struct EnumeratedPath {
  std::vector<int32_t> path;
  double score = 0.0;
};

// Exhaustive search over all state sequences. obs is a frames x states
// matrix of observation log-likelihoods. Ties pick the path whose reversed
// state sequence is lexicographically smallest, matching the decoder's
// lowest-index tie-break.
EnumeratedPath EnumerateBestPath(long frames, const StateSpace& space,
                                 const std::vector<std::vector<double>>& obs);

// Maximum one-to-one matching size between estimates and references within
// the tolerance window (Kuhn's augmenting-path algorithm).
long OptimalMatchingSize(const std::vector<double>& estimates,
                         const std::vector<double>& references,
                         double tolerance);

// Central-difference gradient of the network loss w.r.t. every parameter.
std::vector<double> NumericGradient(const NetworkParams<double>& params,
                                    const MatX<double>& input,
                                    const TargetSequence& targets, double h);

// Random sparse HMM with normalized outgoing rows (no bar-pointer metadata).
StateSpace RandomStateSpace(int num_states, uint64_t seed);

}  // namespace beatforge::testing

#endif  // BEATFORGE_TESTS_SUPPORT_ORACLES_H_
