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

#include "vnelab/batch.hpp"

#include <exception>
#include <optional>

#include <omp.h>

namespace vnelab::batch {
namespace {

// out[i] = f(i). Exceptions may not cross the OpenMP region, so the first one
// (by index) is rethrown after the loop on both paths.
template <class T, class F>
std::vector<T> map_indexed(int n, Execution exec, F f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](int i) {
    try {
      slots[i].emplace(f(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

int count(const std::vector<GroupFunction>& fs) { return static_cast<int>(fs.size()); }

}  // namespace

std::vector<NormCertificate> b2_norms(const std::vector<GroupFunction>& fs,
                                      const NormOptions& opts, Execution exec) {
  return map_indexed<NormCertificate>(
      count(fs), exec, [&](int i) { return b2_norm_certified(fs[i], opts); });
}

std::vector<NormCertificate> q_norms(const std::vector<GroupFunction>& fs,
                                     const NormOptions& opts, Execution exec) {
  return map_indexed<NormCertificate>(
      count(fs), exec, [&](int i) { return q_norm_certified(fs[i], opts); });
}

std::vector<GroupFunction> induce_all(const InductionKernel& k,
                                      const std::vector<GroupFunction>& fs,
                                      Execution exec) {
  return map_indexed<GroupFunction>(count(fs), exec,
                                    [&](int i) { return induce_multiplier(k, fs[i]); });
}

std::vector<LemmaReport> verify_all(const InductionKernel& k,
                                    const std::vector<GroupFunction>& fs, double tol,
                                    const NormOptions& opts, Execution exec) {
  return map_indexed<LemmaReport>(
      count(fs), exec, [&](int i) { return verify_lemma(k, fs[i], tol, opts); });
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace vnelab::batch
