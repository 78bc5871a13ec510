#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "gridmpc/kernels/cost_scan.hpp"

namespace gridmpc::kernels {

// AVX2 variant of cost_scan_scalar, vectorized over the innermost inverter's
// eight candidates (two 4-lane groups). Uses only mul/add/sub so every lane
// computes the exact expression tree of the scalar kernel.
CostScanResult cost_scan_avx2(const CostScanInput& in) {
    const int m = in.vsi_count;
    const double one_minus_lambda = 1.0 - in.lambda;

    const __m256d lambda_v = _mm256_set1_pd(in.lambda);
    const __m256d oml_v = _mm256_set1_pd(one_minus_lambda);
    const __m256d z_v = _mm256_set1_pd(in.z_ac);
    const __m256d vref_a_v = _mm256_set1_pd(in.vref_a);
    const __m256d vref_b_v = _mm256_set1_pd(in.vref_b);
    const __m256d lane_offsets = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

    __m256d best_cost_v = _mm256_set1_pd(__builtin_huge_val());
    __m256d best_idx_v = _mm256_set1_pd(0.0);

    std::uint32_t outer_total = 1;
    for (int j = 0; j < m - 1; ++j) outer_total *= 8;

    const VsiCandidateTable& last = in.tables[m - 1];
    int digits[8] = {0};

    for (std::uint32_t outer = 0; outer < outer_total; ++outer) {
        std::uint32_t rem = outer;
        for (int j = m - 2; j >= 0; --j) {
            digits[j] = static_cast<int>(rem & 7u);
            rem >>= 3;
        }

        double acc_a = 0.0;
        double acc_b = 0.0;
        for (int j = 0; j < m - 1; ++j) {
            acc_a += in.tables[j].it_a[digits[j]];
            acc_b += in.tables[j].it_b[digits[j]];
        }
        double share_acc = 0.0;
        for (int j = 0; j + 2 < m; ++j) {
            const double da = in.tables[j].if_a[digits[j]] -
                              in.betas[j] * in.tables[j + 1].if_a[digits[j + 1]];
            const double db = in.tables[j].if_b[digits[j]] -
                              in.betas[j] * in.tables[j + 1].if_b[digits[j + 1]];
            share_acc += da * da + db * db;
        }

        const __m256d acc_a_v = _mm256_set1_pd(acc_a);
        const __m256d acc_b_v = _mm256_set1_pd(acc_b);
        const __m256d share_acc_v = _mm256_set1_pd(share_acc);
        const __m256d last_if_a_v =
            _mm256_set1_pd(m >= 2 ? in.tables[m - 2].if_a[digits[m - 2]] : 0.0);
        const __m256d last_if_b_v =
            _mm256_set1_pd(m >= 2 ? in.tables[m - 2].if_b[digits[m - 2]] : 0.0);
        const __m256d beta_last_v = _mm256_set1_pd(m >= 2 ? in.betas[m - 2] : 0.0);
        const __m256d base_v = _mm256_set1_pd(static_cast<double>(outer * 8));

        for (int group = 0; group < 2; ++group) {
            const int n0 = group * 4;
            const __m256d it_a_v = _mm256_load_pd(last.it_a + n0);
            const __m256d it_b_v = _mm256_load_pd(last.it_b + n0);

            const __m256d s_a = _mm256_add_pd(acc_a_v, it_a_v);
            const __m256d s_b = _mm256_add_pd(acc_b_v, it_b_v);
            const __m256d e_a = _mm256_sub_pd(vref_a_v, _mm256_mul_pd(z_v, s_a));
            const __m256d e_b = _mm256_sub_pd(vref_b_v, _mm256_mul_pd(z_v, s_b));
            const __m256d track =
                _mm256_add_pd(_mm256_mul_pd(e_a, e_a), _mm256_mul_pd(e_b, e_b));

            __m256d share = share_acc_v;
            if (m >= 2) {
                const __m256d if_a_v = _mm256_load_pd(last.if_a + n0);
                const __m256d if_b_v = _mm256_load_pd(last.if_b + n0);
                const __m256d d_a = _mm256_sub_pd(last_if_a_v, _mm256_mul_pd(beta_last_v, if_a_v));
                const __m256d d_b = _mm256_sub_pd(last_if_b_v, _mm256_mul_pd(beta_last_v, if_b_v));
                share = _mm256_add_pd(
                    share_acc_v, _mm256_add_pd(_mm256_mul_pd(d_a, d_a), _mm256_mul_pd(d_b, d_b)));
            }
            const __m256d cost =
                _mm256_add_pd(_mm256_mul_pd(lambda_v, track), _mm256_mul_pd(oml_v, share));

            const __m256d idx = _mm256_add_pd(
                _mm256_add_pd(base_v, _mm256_set1_pd(static_cast<double>(n0))), lane_offsets);
            // Strict less-than keeps the earliest candidate within each lane.
            const __m256d lt = _mm256_cmp_pd(cost, best_cost_v, _CMP_LT_OQ);
            best_cost_v = _mm256_blendv_pd(best_cost_v, cost, lt);
            best_idx_v = _mm256_blendv_pd(best_idx_v, idx, lt);
        }
    }

    alignas(32) double costs[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(costs, best_cost_v);
    _mm256_store_pd(idxs, best_idx_v);

    // Cross-lane reduction: smallest cost, ties -> smallest index.
    double best_cost = costs[0];
    double best_idx = idxs[0];
    for (int l = 1; l < 4; ++l) {
        if (costs[l] < best_cost || (costs[l] == best_cost && idxs[l] < best_idx)) {
            best_cost = costs[l];
            best_idx = idxs[l];
        }
    }
    return {best_cost, static_cast<std::uint32_t>(best_idx)};
}

}  // namespace gridmpc::kernels

#endif  // x86
