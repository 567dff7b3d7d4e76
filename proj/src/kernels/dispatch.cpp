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

#include <cstdlib>
#include <string>

#include "taxeval/kernels.hpp"

namespace taxeval::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(TAXEVAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

bool forced_scalar() {
  const char* v = std::getenv("TAXEVAL_FORCE_SCALAR");
  return v && std::string(v) != "0" && *v != '\0';
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::Scalar};
  if (cpu_has_avx2()) out.push_back(Isa::Avx2);
  return out;
}

const KernelTable& table(Isa isa) {
#if defined(TAXEVAL_HAVE_AVX2)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return avx2::kTable;
#endif
  (void)isa;
  return scalar::kTable;
}

const KernelTable& active() {
  static const KernelTable& chosen = (!forced_scalar() && cpu_has_avx2()) ? table(Isa::Avx2)
                                                                          : scalar::kTable;
  return chosen;
}

}  // namespace taxeval::kernels
