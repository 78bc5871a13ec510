#pragma once

// Exhaustive scan of the joint VSI vector set: for m inverters, evaluate the
// weighted tracking + sharing cost over all 8^m candidate tuples and return
// the argmin (ties -> lexicographically smallest tuple, i.e. smallest linear
// index).
//
// Two variants compiled from the same candidate tables: a scalar reference
// kernel and an AVX2 kernel vectorized over the innermost inverter's eight
// choices. Both are required to produce bit-identical costs and the identical
// argmin; the build keeps FP contraction off to guarantee it.

#include <cstdint>

namespace gridmpc::kernels {

/// Per-inverter candidate table: predicted filter current and tie-line current
/// for each of the eight vectors.
struct VsiCandidateTable {
    alignas(32) double if_a[8];
    alignas(32) double if_b[8];
    alignas(32) double it_a[8];
    alignas(32) double it_b[8];
};

struct CostScanInput {
    const VsiCandidateTable* tables;  // one per inverter
    int vsi_count;                    // m, 1..6 (8^m capped by the caller)
    const double* betas;              // m-1 sharing ratios
    double lambda;                    // tracking weight
    double z_ac;                      // PCC load, ohms
    double vref_a;
    double vref_b;
};

struct CostScanResult {
    double cost;
    std::uint32_t index;  // linear candidate index, inverter 1 most significant
};

using CostScanFn = CostScanResult (*)(const CostScanInput&);

CostScanResult cost_scan_scalar(const CostScanInput& in);
#if defined(__x86_64__) || defined(__i386__)
CostScanResult cost_scan_avx2(const CostScanInput& in);
#endif

/// Kernel selected at runtime: AVX2 when the CPU supports it, otherwise the
/// scalar reference. GRIDMPC_KERNEL=scalar|avx2|auto overrides.
CostScanFn active_cost_scan();
const char* active_cost_scan_name();

/// Test hook: force a specific variant ("auto", "scalar", "avx2"). Returns
/// false when the requested variant is unavailable on this machine.
bool force_cost_scan(const char* name);

/// True when an AVX2 kernel was compiled in and the CPU supports it.
bool avx2_kernel_available();

}  // namespace gridmpc::kernels
