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

#include "mirrorplay/parallel.h"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace mirrorplay {

int worker_threads() {
  if (const char* env = std::getenv("MIRRORPLAY_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // Malformed values fall back to auto.
    }
  }
  return omp_get_max_threads();
}

void configure_threads_from_env() { omp_set_num_threads(worker_threads()); }

}  // namespace mirrorplay
