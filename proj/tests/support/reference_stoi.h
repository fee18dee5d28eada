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

#ifndef LOMBARD_TESTS_SUPPORT_REFERENCE_STOI_H_
#define LOMBARD_TESTS_SUPPORT_REFERENCE_STOI_H_

#include <vector>

namespace lombard::testing {

// Straightforward STOI for 10 kHz inputs of equal length: naive DFT, no
// shared code with the library. Returns NaN when fewer than 30 frames
// survive silence removal.
double ReferenceStoi(const std::vector<double>& clean,
                     const std::vector<double>& degraded);

}  // namespace lombard::testing

#endif  // LOMBARD_TESTS_SUPPORT_REFERENCE_STOI_H_
