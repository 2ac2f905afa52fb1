// Copyright 2026 The vnelab Authors.
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

// Batch kernels over lists of multipliers. Each has an OpenMP path and a plain
// serial loop; both call the same per-item function and write results by
// index, so their outputs are identical.

#pragma once

#include <vector>

#include "vnelab/induction.hpp"
#include "vnelab/multiplier.hpp"

namespace vnelab::batch {

std::vector<NormCertificate> b2_norms(const std::vector<GroupFunction>& fs,
                                      const NormOptions& opts, Execution exec);

std::vector<NormCertificate> q_norms(const std::vector<GroupFunction>& fs,
                                     const NormOptions& opts, Execution exec);

std::vector<GroupFunction> induce_all(const InductionKernel& k,
                                      const std::vector<GroupFunction>& fs,
                                      Execution exec);

std::vector<LemmaReport> verify_all(const InductionKernel& k,
                                    const std::vector<GroupFunction>& fs, double tol,
                                    const NormOptions& opts, Execution exec);

/// Threads OpenMP would use for the parallel path.
int max_threads();

}  // namespace vnelab::batch
