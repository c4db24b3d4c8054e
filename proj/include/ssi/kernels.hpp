#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace ssi::kernels {

// Weighted cross-product accumulation over a CSR adjacency:
//   result = sum_i dev[i] * sum_{j in adj(i)} dev[j]
// This is the hot loop of both the direct statistic and the permutation
// sampler. The scalar path uses Neumaier compensated summation and is the
// reference the SIMD variants are equivalence-tested against.

using EdgeSumFn = double (*)(std::span<const std::uint32_t> offsets,
                             std::span<const std::uint32_t> neighbors,
                             std::span<const double> dev);

double edge_sum_scalar(std::span<const std::uint32_t> offsets,
                       std::span<const std::uint32_t> neighbors,
                       std::span<const double> dev);

#if defined(__x86_64__) || defined(_M_X64)
double edge_sum_avx2(std::span<const std::uint32_t> offsets,
                     std::span<const std::uint32_t> neighbors,
                     std::span<const double> dev);
#endif

// Runtime-selected best kernel for this CPU. Selection is fixed for the
// lifetime of the process; SSI_KERNEL=scalar forces the reference path.
EdgeSumFn select_edge_sum();
const std::string& active_kernel_name();

inline double edge_sum(std::span<const std::uint32_t> offsets,
                       std::span<const std::uint32_t> neighbors,
                       std::span<const double> dev) {
    static const EdgeSumFn fn = select_edge_sum();
    return fn(offsets, neighbors, dev);
}

} // namespace ssi::kernels
