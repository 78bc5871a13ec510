#include "gridmpc/kernels/cost_scan.hpp"

namespace gridmpc::kernels {

// Reference kernel. The AVX2 variant mirrors this operation-for-operation;
// any change here must be reflected there to keep the pair bit-identical.
CostScanResult cost_scan_scalar(const CostScanInput& in) {
    const int m = in.vsi_count;
    const double one_minus_lambda = 1.0 - in.lambda;

    double best_cost = 0.0;
    std::uint32_t best_index = 0;
    bool first = true;

    std::uint32_t outer_total = 1;
    for (int j = 0; j < m - 1; ++j) outer_total *= 8;

    int digits[8] = {0};
    for (std::uint32_t outer = 0; outer < outer_total; ++outer) {
        std::uint32_t rem = outer;
        for (int j = m - 2; j >= 0; --j) {
            digits[j] = static_cast<int>(rem & 7u);
            rem >>= 3;
        }

        // Candidate-independent partial sums over the leading m-1 inverters,
        // accumulated in ascending order to match vsi_cost exactly.
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

        const VsiCandidateTable& last = in.tables[m - 1];
        const double last_if_a = m >= 2 ? in.tables[m - 2].if_a[digits[m - 2]] : 0.0;
        const double last_if_b = m >= 2 ? in.tables[m - 2].if_b[digits[m - 2]] : 0.0;
        const double beta_last = m >= 2 ? in.betas[m - 2] : 0.0;
        const std::uint32_t base = outer * 8;

        for (int n = 0; n < 8; ++n) {
            const double s_a = acc_a + last.it_a[n];
            const double s_b = acc_b + last.it_b[n];
            const double e_a = in.vref_a - in.z_ac * s_a;
            const double e_b = in.vref_b - in.z_ac * s_b;
            const double track = e_a * e_a + e_b * e_b;

            double share = share_acc;
            if (m >= 2) {
                const double d_a = last_if_a - beta_last * last.if_a[n];
                const double d_b = last_if_b - beta_last * last.if_b[n];
                share = share_acc + (d_a * d_a + d_b * d_b);
            }
            const double cost = in.lambda * track + one_minus_lambda * share;

            const std::uint32_t index = base + static_cast<std::uint32_t>(n);
            if (first || cost < best_cost) {
                best_cost = cost;
                best_index = index;
                first = false;
            }
        }
    }
    return {best_cost, best_index};
}

}  // namespace gridmpc::kernels
