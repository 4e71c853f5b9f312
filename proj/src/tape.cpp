/* Copyright 2026 The nphmc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nphmc/tape.hpp"

namespace nphmc {

// Header-only; this translation unit pins the template instantiations used
// everywhere so a build error here surfaces early.
template Var log_sum_exp<Var>(const std::vector<Var>&);
template double log_sum_exp<double>(const std::vector<double>&);

}  // namespace nphmc
