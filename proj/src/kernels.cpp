#include "ssi/kernels.hpp"

#include <cstdlib>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace ssi::kernels {

double edge_sum_scalar(std::span<const std::uint32_t> offsets,
                       std::span<const std::uint32_t> neighbors,
                       std::span<const double> dev) {
    // Neumaier compensated sum; identities downstream demand 1e-9 relative
    // agreement at N=1600 against an independently ordered accumulation.
    double sum = 0.0, comp = 0.0;
    const std::size_t n = dev.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::uint32_t e = offsets[i]; e < offsets[i + 1]; ++e)
            row += dev[neighbors[e]];
        const double term = dev[i] * row;
        const double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

#if defined(__x86_64__) || defined(_M_X64)

__attribute__((target("avx2")))
double edge_sum_avx2(std::span<const std::uint32_t> offsets,
                     std::span<const std::uint32_t> neighbors,
                     std::span<const double> dev) {
    const std::size_t n = dev.size();
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t begin = offsets[i];
        const std::uint32_t end = offsets[i + 1];
        std::uint32_t e = begin;
        __m256d acc = _mm256_setzero_pd();
        for (; e + 4 <= end; e += 4) {
            const __m128i idx = _mm_loadu_si128(
                reinterpret_cast<const __m128i*>(neighbors.data() + e));
            acc = _mm256_add_pd(acc, _mm256_i32gather_pd(dev.data(), idx, 8));
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        lo = _mm_add_pd(lo, hi);
        double row = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
        for (; e < end; ++e)
            row += dev[neighbors[e]];
        const double term = dev[i] * row;
        const double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2");
}

#endif

namespace {
std::string g_kernel_name = "scalar";
}

EdgeSumFn select_edge_sum() {
    const char* forced = std::getenv("SSI_KERNEL");
    if (forced && std::string(forced) == "scalar") {
        g_kernel_name = "scalar";
        return edge_sum_scalar;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2() && !(forced && std::string(forced) != "avx2")) {
        g_kernel_name = "avx2";
        return edge_sum_avx2;
    }
#endif
    g_kernel_name = "scalar";
    return edge_sum_scalar;
}

const std::string& active_kernel_name() {
    kernels::edge_sum({}, {}, {}); // force selection
    return g_kernel_name;
}

} // namespace ssi::kernels
