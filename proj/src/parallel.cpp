#include "ppdsim/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ppdsim {

int worker_count() {
    if (const char* env = std::getenv("PPDSIM_WORKERS")) {
        try {
            int w = std::stoi(env);
            if (w >= 1)
                return w;
        } catch (...) {
            // fall through to hardware default
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace ppdsim
