// Copyright 2026 The cvmbqc Authors.
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

#ifndef CVMBQC_RNG_HPP
#define CVMBQC_RNG_HPP

#include <cstdint>
#include <random>

namespace cvmbqc {

/// splitmix64 finaliser, used to derive independent per-shot stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the draws for (seed, shot) never depend on which
/// worker runs the shot or in what order.
class ShotRng {
   public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : engine_(mix64(mix64(seed) ^ mix64(shot + 0x632be59bd9b4e019ULL))) {}

    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cvmbqc

#endif  // CVMBQC_RNG_HPP
