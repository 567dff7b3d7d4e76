// Copyright 2026 The taxeval Authors
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

// Brute-force reference implementations used to cross-check the library.
// They favour the most literal reading of each definition over speed.

#include <cstddef>
#include <string>
#include <vector>

#include "taxeval/corpus.hpp"

namespace taxeval::oracle {

/// Minimum unit-cost alignment cost found by enumerating every monotone
/// alignment. Exponential; keep inputs short.
std::size_t min_alignment_cost(const Tokens& a, const Tokens& b);

/// Applies edits one at a time from the right end of the sentence.
Tokens apply_right_to_left(const Tokens& source, const std::vector<Edit>& edits);

struct Item {
  std::string gold;
  std::vector<std::pair<std::string, double>> prediction;  // ranked; may be empty
};

std::size_t overlap(const std::vector<std::pair<std::string, double>>& prediction, double tau);
double exclusivity(const std::vector<Item>& items, double tau, int k);
double coverage(const std::vector<Item>& items);
double balance(const std::vector<Item>& items, const std::vector<std::string>& leaves);
double micro_f1(const std::vector<Item>& items);
double macro_f1(const std::vector<Item>& items, const std::vector<std::string>& leaves);
double kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace taxeval::oracle
