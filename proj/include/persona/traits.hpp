// Copyright 2026 The persona Authors
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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace persona {

enum class Trait : std::size_t { o = 0, c, e, a, n };

inline constexpr std::size_t kNumTraits = 5;

inline constexpr std::array<Trait, kNumTraits> kTraits = {
    Trait::o, Trait::c, Trait::e, Trait::a, Trait::n};

/// Lowercase single-letter key used in every file format ("o", "c", ...).
constexpr std::string_view trait_key(Trait t) {
  constexpr std::array<std::string_view, kNumTraits> keys = {"o", "c", "e", "a",
                                                             "n"};
  return keys[static_cast<std::size_t>(t)];
}

constexpr std::string_view trait_name(Trait t) {
  constexpr std::array<std::string_view, kNumTraits> names = {
      "openness", "conscientiousness", "extraversion", "agreeableness",
      "neuroticism"};
  return names[static_cast<std::size_t>(t)];
}

constexpr std::optional<Trait> trait_from_key(std::string_view key) {
  for (Trait t : kTraits) {
    if (trait_key(t) == key) return t;
  }
  return std::nullopt;
}

/// Normalized Big-5 scores, each in [0,1] once validated.
struct TraitScores {
  std::array<double, kNumTraits> values{};

  double& operator[](Trait t) { return values[static_cast<std::size_t>(t)]; }
  double operator[](Trait t) const {
    return values[static_cast<std::size_t>(t)];
  }
  friend bool operator==(const TraitScores&, const TraitScores&) = default;
};

}  // namespace persona
