#pragma once

#include <Eigen/Dense>

#include "maba/bethe.hpp"
#include "maba/chain_oracle.hpp"
#include "maba/params.hpp"

namespace maba {

struct SpOptions {
    bool check_onshell = true;   // gate the on-shell-only formulas
    double onshell_tol = 1e-8;   // scaled Y-residual threshold
    int partition_cap = 6;       // per set, for the double partition sum
};

// Off-shell scalar product as the double sum over partitions of v and u.
// Valid for any cardinalities #v = m, #u = n; summation order is fixed by
// the partition codes (outer v, inner u) for bit-reproducible results.
cx sp_partition_sum(const Model& m, std::span<const cx> v, std::span<const cx> u,
                    const SpOptions& opt = {});

// Jacobian-style kernel matrix M(u_j, v_k); requires u on-shell (off-shell
// the entries have poles at v_k = u_j and the representation fails).
Eigen::MatrixXcd jacobian_matrix(const Model& m, std::span<const cx> u, std::span<const cx> v,
                                 const SpOptions& opt = {});

// Determinant representation built on det M (u on-shell, v arbitrary).
cx sp_det_jacobian(const Model& m, std::span<const cx> v, std::span<const cx> u,
                   const SpOptions& opt = {});

// Double-Izergin determinant representation of the same scalar product.
cx sp_det_izergin(const Model& m, std::span<const cx> v, std::span<const cx> u,
                  const SpOptions& opt = {});

// Square of the norm: the v -> u limit, with the Y-Jacobian determinant.
cx norm_squared(const Model& m, std::span<const cx> u, const SpOptions& opt = {});

// det M reduced to the product of two Izergin determinants (on-shell only).
cx jacobian_det_reduced(const Model& m, std::span<const cx> u, std::span<const cx> v);

struct OnshellIzerginReport {
    std::vector<cx> z_eigenvalues;   // eigenvalues of Z_jk
    std::vector<int> d_assignment;   // +1: d_plus, -1: d_minus per eigenvalue
    bool tie = false;                // an eigenvalue sat equidistant from both
    double max_eigenvalue_dist = 0.0;
    double max_product_err = 0.0;    // K^(z)(u|theta) = prod(d_i - z)
    double prod_f_err = 0.0;         // f(u,theta) = prod d_i
    double fin_id_err = 0.0;         // two-determinant product identity
};

// On-shell Izergin identities: the eigenvalues of
// Z_jk = f(theta_k, thetabar_k)/h(theta_k, theta_j) f(u, theta_k)
// realize {d_plus, d_minus}, K^(z)(u|theta) factorizes through them, and
// the z = 0 and determinant-product identities hold.
OnshellIzerginReport onshell_izergin_report(const Model& m, std::span<const cx> u,
                                            std::span<const cx> z_samples,
                                            const SpOptions& opt = {});

// On-shell reduction identities at a fixed theta partition (indices of part
// A): the factorization through K^(1/eta), the single-element partition sums
// (at seeded generic arguments and at the certified roots), and the det M
// reduction against the direct determinant.
IdentityReport onshell_reduction_checks(const Model& m, std::span<const cx> u,
                                        const std::vector<int>& a_part, std::uint64_t seed,
                                        const SpOptions& opt = {});

// Relative error of the closed form for v frozen at {theta_A + eps,
// theta_B - c} against the epsilon-limit of the double-Izergin
// representation (two-step Richardson in eps).
double frozen_point_check(const Model& m, std::span<const cx> u, const std::vector<int>& a_part,
                          double eps = 1e-5);

struct GramReport {
    Eigen::MatrixXcd gram;          // oracle <C(v)|B(u)> over solution pairs
    double max_offdiag_rel = 0.0;   // relative to sqrt(|G_aa G_bb|)
    double max_norm_err = 0.0;      // diagonal vs norm_squared
};

GramReport orthogonality_check(const Model& m, const ChainOracle& oracle,
                               const std::vector<BetheSolution>& solutions,
                               const SpOptions& opt = {});

}  // namespace maba
