// Copyright 2026 The Flora Authors.
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

#ifndef FLORA_PARALLEL_H_
#define FLORA_PARALLEL_H_

#include <cstdint>

namespace flora {

// Kernels come in two flavors with identical results: a plain serial loop
// kept as the reference, and an OpenMP loop.
enum class Execution : uint8_t { kSerial, kParallel };

// Sets the OpenMP worker count. 0 keeps the runtime default.
void SetThreadCount(int threads);
int ThreadCount();

}  // namespace flora

#endif  // FLORA_PARALLEL_H_
