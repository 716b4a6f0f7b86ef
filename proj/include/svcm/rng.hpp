// Copyright 2026 The svcm Authors
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

// Deterministic random streams.
//
// Every replicate in the library draws from its own stream whose seed is a
// pure function of (base seed, test tag, phase tag, replicate index), so
// results never depend on scheduling or thread count. The generator below is
// pinned: golden values in the test-suite and persisted calibration tables
// depend on it. Bump kGeneratorId if anything here changes.

#ifndef SVCM_RNG_HPP_
#define SVCM_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace svcm {

inline constexpr std::string_view kGeneratorId = "xoshiro256ss-splitmix64-as241/1";

// SplitMix64 finalizer applied after a golden-ratio increment.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Phase : std::uint64_t {
  kSample = 0,
  kCalibration = 1,
  kPower = 2,
  kRiskNull = 3,
  kOracle = 4,
};

constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t test_tag,
                                           Phase phase, std::uint64_t replicate) noexcept {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ (test_tag * 0xd6e8feb86659fd93ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(phase) * 0xa0761d6478bd642fULL));
  h = mix64(h ^ replicate);
  return h;
}

// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      word = mix64(s);
      s += 0x9e3779b97f4a7c15ULL;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1): (k + 1/2) 2^-53 for a 53-bit k.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace svcm

#endif  // SVCM_RNG_HPP_
