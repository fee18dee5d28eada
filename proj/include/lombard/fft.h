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

#ifndef LOMBARD_FFT_H_
#define LOMBARD_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lombard {

// Thin thread-safe wrapper over FFTW. Plans are created once per size
// under a lock and executed with the new-array interface.

// Forward real transform of `input` zero-padded (or truncated) to `n`.
// Returns n/2 + 1 bins, unnormalized.
std::vector<std::complex<double>> RealFft(std::span<const double> input,
                                          size_t n);

// Inverse of RealFft including the 1/n factor. `spectrum` must hold
// n/2 + 1 bins.
std::vector<double> InverseRealFft(
    std::span<const std::complex<double>> spectrum, size_t n);

// Smallest m >= n whose only prime factors are 2, 3, 5 and 7.
size_t NextFastFftSize(size_t n);

}  // namespace lombard

#endif  // LOMBARD_FFT_H_
