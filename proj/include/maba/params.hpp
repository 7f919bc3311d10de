#pragma once

#include <array>

#include "maba/rational.hpp"

namespace maba {

// The global problem instance: chain length, crossing constant,
// inhomogeneities and the four twist matrix entries, plus the gauge
// parameter rho1 (the decomposition leaves one degree of freedom, which
// the caller fixes).
struct ModelParams {
    int sites = 0;  // N
    cx c{1.0, 0.0};
    ParamSet theta;
    cx kappa_tilde, kappa, kappa_plus, kappa_minus;
    cx rho1;
    double theta_gap_rel = 1e-3;   // min inhomogeneity separation, relative to max|theta|
    double pole_guard_rel = 1e-12;

    // Throws InvalidParams / DegenerateTwist naming the violated constraint.
    void validate() const;
};

using Mat2 = std::array<std::array<cx, 2>, 2>;

// Derived gauge quantities of the factorization K = B D A.
struct TwistDecomposition {
    cx rho1, rho2;
    cx mu;
    cx beta1, beta2;  // beta_i = rho_i / kappa_plus
    cx beta;          // rho1 / rho2
    cx alpha;         // (kappa - rho2) / (kappa_tilde - rho1)
    cx eta, xi;
    cx d_plus, d_minus;  // roots of (kt - rho1) d^2 - (k + kt) d + (k - rho2) = 0
    Mat2 a, b, d;        // the factors, for the brute-force construction
};

TwistDecomposition decompose_twist(const ModelParams& params);

// Validated parameters bundled with the decomposition and the kernel set;
// immutable after construction, safe to share across threads.
struct Model {
    ModelParams params;
    TwistDecomposition twist;
    Rational kern;

    static Model make(ModelParams p);

    int sites() const { return params.sites; }
    cx crossing() const { return params.c; }
    std::span<const cx> theta() const { return params.theta; }

    cx lam1(cx u) const { return lambda1(params.theta, params.c, u); }
    cx lam2(cx u) const { return lambda2(params.theta, params.c, u); }
    cx lam1_prime(cx u) const { return lambda1_prime(params.theta, params.c, u); }

    // Coefficients (kappa_tilde - rho1) and (kappa - rho2) appear in nearly
    // every formula; keep them short.
    cx kt_r1() const { return params.kappa_tilde - twist.rho1; }
    cx k_r2() const { return params.kappa - twist.rho2; }
    cx rho_sum() const { return twist.rho1 + twist.rho2; }
};

}  // namespace maba
