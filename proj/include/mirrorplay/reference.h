// Copyright 2026 The Mirrorplay Authors
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

// Serial reference implementations kept to cross-check the OpenMP kernels.

#ifndef MIRRORPLAY_REFERENCE_H_
#define MIRRORPLAY_REFERENCE_H_

#include "mirrorplay/stochastic.h"

namespace mirrorplay::reference {

// Plain per-path loop recomputing the volatility at every step.
Ensemble euler_maruyama_paths_serial(const MdgContext& ctx,
                                     const SdeConfig& cfg);

}  // namespace mirrorplay::reference

#endif  // MIRRORPLAY_REFERENCE_H_
