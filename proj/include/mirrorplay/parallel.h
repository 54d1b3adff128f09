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

#ifndef MIRRORPLAY_PARALLEL_H_
#define MIRRORPLAY_PARALLEL_H_

namespace mirrorplay {

// Worker count for OpenMP kernels: MIRRORPLAY_THREADS if set and positive,
// otherwise the OpenMP default (0 means auto).
int worker_threads();

// Applies worker_threads() to the OpenMP runtime.
void configure_threads_from_env();

}  // namespace mirrorplay

#endif  // MIRRORPLAY_PARALLEL_H_
