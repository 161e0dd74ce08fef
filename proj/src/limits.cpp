#include "gapscope/limits.hpp"

#include <cstdlib>
#include <string>

namespace gapscope {

int max_dense_qubits() {
    static const int cached = [] {
        if (const char* env = std::getenv("GAPSCOPE_MAX_DENSE_QUBITS")) {
            try {
                int v = std::stoi(env);
                if (v >= 1) return v;
            } catch (...) {
            }
        }
        return 12;
    }();
    return cached;
}

} // namespace gapscope
