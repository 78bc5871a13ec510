#include "gridmpc/kernels/cost_scan.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

namespace gridmpc::kernels {
namespace {

std::mutex g_mutex;
bool g_resolved = false;
CostScanFn g_active = nullptr;
const char* g_active_name = "scalar";

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(__i386__)) && defined(GRIDMPC_HAVE_AVX2_KERNEL)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

void resolve_auto() {
#if (defined(__x86_64__) || defined(__i386__)) && defined(GRIDMPC_HAVE_AVX2_KERNEL)
    if (cpu_has_avx2()) {
        g_active = cost_scan_avx2;
        g_active_name = "avx2";
        return;
    }
#endif
    g_active = cost_scan_scalar;
    g_active_name = "scalar";
}

void resolve_from_env() {
    const char* env = std::getenv("GRIDMPC_KERNEL");
    if (env && std::strcmp(env, "scalar") == 0) {
        g_active = cost_scan_scalar;
        g_active_name = "scalar";
        return;
    }
#if (defined(__x86_64__) || defined(__i386__)) && defined(GRIDMPC_HAVE_AVX2_KERNEL)
    if (env && std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) {
        g_active = cost_scan_avx2;
        g_active_name = "avx2";
        return;
    }
#endif
    resolve_auto();
}

}  // namespace

bool avx2_kernel_available() { return cpu_has_avx2(); }

CostScanFn active_cost_scan() {
    const std::lock_guard<std::mutex> lock(g_mutex);
    if (!g_resolved) {
        resolve_from_env();
        g_resolved = true;
    }
    return g_active;
}

const char* active_cost_scan_name() {
    const std::lock_guard<std::mutex> lock(g_mutex);
    if (!g_resolved) {
        resolve_from_env();
        g_resolved = true;
    }
    return g_active_name;
}

bool force_cost_scan(const char* name) {
    const std::lock_guard<std::mutex> lock(g_mutex);
    if (std::strcmp(name, "scalar") == 0) {
        g_active = cost_scan_scalar;
        g_active_name = "scalar";
        g_resolved = true;
        return true;
    }
#if (defined(__x86_64__) || defined(__i386__)) && defined(GRIDMPC_HAVE_AVX2_KERNEL)
    if (std::strcmp(name, "avx2") == 0 && cpu_has_avx2()) {
        g_active = cost_scan_avx2;
        g_active_name = "avx2";
        g_resolved = true;
        return true;
    }
#endif
    if (std::strcmp(name, "auto") == 0) {
        resolve_auto();
        g_resolved = true;
        return true;
    }
    return false;
}

}  // namespace gridmpc::kernels
