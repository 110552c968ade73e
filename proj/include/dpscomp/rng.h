// Copyright 2026 The dpscomp Authors
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

#ifndef DPSCOMP_RNG_H_
#define DPSCOMP_RNG_H_

#include <array>
#include <cstdint>

namespace dpscomp {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Counter-based random stream. The key is the user seed; the upper half of
// the counter selects an independent stream, the lower half counts blocks.
// The same (seed, stream) always yields the same sequence; the uniform and
// normal transforms are spelled out here instead of using <random>
// distributions, whose output differs between standard libraries.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream);

  uint32_t NextU32();
  uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double Uniform();
  // Standard normal via Box-Muller.
  double Normal();

  uint64_t seed() const { return seed_; }

 private:
  void Refill();

  uint64_t seed_;
  uint64_t stream_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace dpscomp

#endif  // DPSCOMP_RNG_H_
