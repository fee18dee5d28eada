// Copyright 2026 The Lombard Flavor Authors. All Rights Reserved.
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

#include "lombard/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace lombard {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

std::mutex& PlanMutex() {
  static std::mutex mu;
  return mu;
}

// Plans live for the process lifetime.
const PlanPair& GetPlans(size_t n) {
  static auto* plans = new std::map<size_t, PlanPair>();
  std::lock_guard<std::mutex> lock(PlanMutex());
  auto it = plans->find(n);
  if (it != plans->end()) return it->second;
  const int size = static_cast<int>(n);
  double* real = fftw_alloc_real(n);
  fftw_complex* complex = fftw_alloc_complex(n / 2 + 1);
  PlanPair pair;
  pair.forward = fftw_plan_dft_r2c_1d(size, real, complex,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  pair.inverse = fftw_plan_dft_c2r_1d(
      size, complex, real,
      FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  fftw_free(real);
  fftw_free(complex);
  return plans->emplace(n, pair).first->second;
}

}  // namespace

std::vector<std::complex<double>> RealFft(std::span<const double> input,
                                          size_t n) {
  std::vector<double> buffer(n, 0.0);
  std::copy_n(input.begin(), std::min(n, input.size()), buffer.begin());
  std::vector<std::complex<double>> out(n / 2 + 1);
  const PlanPair& plans = GetPlans(n);
  fftw_execute_dft_r2c(plans.forward, buffer.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> InverseRealFft(
    std::span<const std::complex<double>> spectrum, size_t n) {
  // c2r destroys its input.
  std::vector<std::complex<double>> scratch(spectrum.begin(), spectrum.end());
  scratch.resize(n / 2 + 1);
  std::vector<double> out(n);
  const PlanPair& plans = GetPlans(n);
  fftw_execute_dft_c2r(plans.inverse,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

size_t NextFastFftSize(size_t n) {
  if (n <= 1) return 1;
  for (size_t m = n;; ++m) {
    size_t r = m;
    for (size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace lombard
