#include "covertfas/parallel.hpp"

#include <cstdlib>
#include <string>

namespace covertfas {

unsigned worker_count() {
    if (const char* env = std::getenv("COVERTFAS_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // Unparseable value falls back to auto.
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace covertfas
