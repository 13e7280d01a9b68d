#include "wsc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace wsc::kernels {

#if defined(WSC_HAVE_AVX2_TU)
const Backend* avx2_backend_impl();
#endif

const Backend* avx2_backend() {
#if defined(WSC_HAVE_AVX2_TU)
    return avx2_backend_impl();
#else
    return nullptr;
#endif
}

const Backend& active() {
    static const Backend* selected = [] {
        const char* env = std::getenv("WSCOUNT_KERNEL");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_backend();
        if (env && std::strcmp(env, "avx2") == 0) {
            const Backend* b = avx2_backend();
            if (!b) throw std::runtime_error("WSCOUNT_KERNEL=avx2 but AVX2 is unavailable");
            return b;
        }
        const Backend* b = avx2_backend();
        return b ? b : &scalar_backend();
    }();
    return *selected;
}

}  // namespace wsc::kernels
