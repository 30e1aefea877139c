#include "cpq/model.hpp"

namespace cpq {

double angular_coupling_moment(const OscillatorPair& pair, int i, int ip,
                               Axis l, Axis lp, double kprime, bool with_phase,
                               double r) {
    if (l != lp) return 0.0;
    if (!with_phase) {
        if (i != ip) throw std::invalid_argument("same-site moment needs i == ip");
        double mu = pair.mu(i);
        return -(2.0 / (3.0 * M_PI)) * kprime * mu * mu;
    }
    if (i == ip) throw std::invalid_argument("cross moment needs i != ip");
    if (!(r > 0)) throw std::invalid_argument("cross moment needs r > 0");
    return -(kprime / M_PI) * h_kernel(l, kprime * r) * pair.mu1 * pair.mu2;
}

} // namespace cpq
