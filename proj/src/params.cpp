#include "maba/params.hpp"

#include <cmath>
#include <sstream>

namespace maba {

namespace {
double max_abs_theta(const ParamSet& theta) {
    double m = 0.0;
    for (cx t : theta) m = std::max(m, std::abs(t));
    return m;
}
}  // namespace

void ModelParams::validate() const {
    if (sites < 1) throw InvalidParams("sites must be >= 1");
    if (c == cx(0.0)) throw InvalidParams("crossing constant c must be nonzero");
    if (static_cast<int>(theta.size()) != sites)
        throw InvalidParams("theta must have exactly `sites` entries");

    cx gamma = kappa_tilde * kappa - kappa_plus * kappa_minus;
    if (std::abs(gamma) == 0.0)
        throw DegenerateTwist("twist not invertible: kappa_tilde*kappa - kappa_plus*kappa_minus = 0");
    if (kappa_plus == cx(0.0))
        throw DegenerateTwist("kappa_plus = 0: decomposition K = B D A undefined");
    if (kappa_minus == cx(0.0))
        throw DegenerateTwist("kappa_minus = 0: decomposition K = B D A undefined");

    double gap = theta_gap_rel * max_abs_theta(theta);
    for (std::size_t j = 0; j < theta.size(); ++j)
        for (std::size_t k = j + 1; k < theta.size(); ++k)
            if (std::abs(theta[j] - theta[k]) < gap) {
                std::ostringstream os;
                os << "inhomogeneities theta[" << j << "] and theta[" << k
                   << "] closer than configured gap " << gap;
                throw InvalidParams(os.str());
            }

    if (std::abs(rho1 - kappa_tilde) == 0.0)
        throw DegenerateTwist("rho1 = kappa_tilde: rho2 not solvable");
}

TwistDecomposition decompose_twist(const ModelParams& p) {
    p.validate();
    TwistDecomposition t;
    t.rho1 = p.rho1;
    t.rho2 = (p.rho1 * p.kappa - p.kappa_plus * p.kappa_minus) / (p.rho1 - p.kappa_tilde);

    cx kk = p.kappa_plus * p.kappa_minus;
    cx mu_den = 1.0 - t.rho1 * t.rho2 / kk;
    if (std::abs(mu_den) < 1e-14)
        throw DegenerateTwist("rho1*rho2 = kappa_plus*kappa_minus: mu has a pole");
    t.mu = 1.0 / mu_den;

    t.beta1 = t.rho1 / p.kappa_plus;
    t.beta2 = t.rho2 / p.kappa_plus;
    if (std::abs(t.rho2) == 0.0) throw DegenerateTwist("rho2 = 0: beta undefined");
    t.beta = t.rho1 / t.rho2;

    cx kt_r1 = p.kappa_tilde - t.rho1;
    cx k_r2 = p.kappa - t.rho2;
    if (std::abs(k_r2) == 0.0) throw DegenerateTwist("rho2 = kappa: alpha, eta degenerate");
    t.alpha = k_r2 / kt_r1;
    t.eta = ((t.mu - 1.0) / t.beta + t.mu) / t.alpha;
    t.xi = t.mu / t.beta * (t.beta + 1.0) * (t.beta + 1.0) * (t.mu - 1.0);

    cx disc = std::sqrt((p.kappa + p.kappa_tilde) * (p.kappa + p.kappa_tilde) -
                        4.0 * k_r2 * kt_r1);
    t.d_plus = (p.kappa + p.kappa_tilde + disc) / (2.0 * kt_r1);
    t.d_minus = (p.kappa + p.kappa_tilde - disc) / (2.0 * kt_r1);

    cx sq = std::sqrt(t.mu);
    t.a = {{{sq, sq * t.rho2 / p.kappa_minus}, {sq * t.rho1 / p.kappa_plus, sq}}};
    t.b = {{{sq, sq * t.rho1 / p.kappa_minus}, {sq * t.rho2 / p.kappa_plus, sq}}};
    t.d = {{{kt_r1, cx(0.0)}, {cx(0.0), k_r2}}};
    return t;
}

Model Model::make(ModelParams p) {
    TwistDecomposition t = decompose_twist(p);
    Rational r(p.c, p.pole_guard_rel);
    return Model{std::move(p), t, r};
}

}  // namespace maba
