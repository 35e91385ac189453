#include "dusty/particles.hpp"

#include <algorithm>
#include <numeric>

namespace dusty {

void ParticleSet::resize(std::size_t n) {
    x.assign(n, 0.0);
    v.assign(n, 0.0);
    rho.assign(n, 0.0);
    if (is_gas()) {
        e.assign(n, 0.0);
        p.assign(n, 0.0);
        sound.assign(n, 0.0);
    } else {
        t_stop.assign(n, 0.0);
    }
    n_active = n;
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
}

void ParticleSet::sort_by_position() {
    order.resize(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [this](int a, int b) { return x[a] < x[b]; });
}

} // namespace dusty
