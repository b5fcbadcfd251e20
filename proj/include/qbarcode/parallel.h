// Copyright 2026 The qbarcode Authors
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

#ifndef QBARCODE_PARALLEL_H_
#define QBARCODE_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>

namespace qbarcode {

/// 0 means one worker per hardware thread.
int resolve_threads(int requested);

/// Splits [0, count) into `threads` contiguous blocks and runs `body(begin, end, worker)`
/// on each block. The first exception thrown by any worker is rethrown.
void parallel_for(size_t count, int threads, const std::function<void(size_t, size_t, int)> &body);

uint64_t splitmix64(uint64_t x);

/// Derives an independent stream seed from a root seed and a task path, so
/// that random draws depend only on the task and never on the schedule.
uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> path);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

}  // namespace qbarcode

#endif  // QBARCODE_PARALLEL_H_
