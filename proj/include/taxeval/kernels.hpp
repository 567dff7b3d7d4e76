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

// Dense inner loops of the metric engine. Every kernel has a scalar reference
// and, where the target supports it, an AVX2 variant chosen at runtime. The
// variants perform the same IEEE operations in the same order per element,
// so their results are bit-identical (the library is built with
// -ffp-contract=off to keep it that way).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace taxeval::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Sums feeding Exclusivity: instances with Overlap > 0, and the total of
/// (Overlap - 1) over those instances.
struct OverlapTally {
  std::uint64_t covered = 0;
  std::uint64_t excess = 0;

  bool operator==(const OverlapTally&) const = default;
};

struct KernelTable {
  Isa isa;
  /// counts[i] += (column[i] > tau) for i < n.
  void (*count_above)(const double* column, std::size_t n, double tau, std::uint32_t* counts);
  OverlapTally (*tally_overlaps)(const std::uint32_t* counts, std::size_t n);
  /// acc[i] += x[i].
  void (*add_into)(double* acc, const double* x, std::size_t n);
  /// x[i] /= divisor.
  void (*divide)(double* x, std::size_t n, double divisor);
  /// Per-class precision, recall and F1 = 2PR / (P + R); any undefined ratio
  /// is 0.
  void (*f1_from_counts)(const std::uint32_t* tp, const std::uint32_t* fp, const std::uint32_t* fn,
                         std::size_t n, double* precision, double* recall, double* f1);
};

/// Table for the best ISA of this CPU. TAXEVAL_FORCE_SCALAR=1 in the
/// environment pins the scalar reference.
const KernelTable& active();
const KernelTable& table(Isa isa);
/// ISAs compiled in and supported by this CPU; always includes Scalar.
std::vector<Isa> available();

/// Sum over counts of -p ln p with p = c / sum(counts); 0 for an empty or
/// all-zero vector. Scalar only: it is dominated by log.
double entropy_nats(std::span<const std::uint64_t> counts);

namespace scalar {
extern const KernelTable kTable;
}
#if defined(TAXEVAL_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace taxeval::kernels
