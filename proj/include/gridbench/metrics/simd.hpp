#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace gridbench::metrics::simd {

/// Sums for cosine similarity: dot(u, v), dot(u, u), dot(v, v).
struct Sums {
  double uv = 0, uu = 0, vv = 0;
};

using SumsFn = Sums (*)(const double* u, const double* v, std::size_t n);

struct Kernel {
  std::string_view name;
  SumsFn sums;
};

/// Reference implementation.
Kernel scalar_kernel();
/// Every kernel this build and CPU can run, scalar first.
std::vector<Kernel> available_kernels();
/// Fastest available kernel. GRIDBENCH_SIMD=scalar forces the reference.
const Kernel& active_kernel();

}  // namespace gridbench::metrics::simd
