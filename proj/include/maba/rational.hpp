#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "maba/errors.hpp"

namespace maba {

using cx = std::complex<double>;

// An ordered list of complex parameters with set semantics: every consumer
// must be symmetric under permutation of the values.
using ParamSet = std::vector<cx>;

// The rational kernels g, f, h together with the crossing constant and the
// pole guard. g and f have a simple pole at u = v; evaluations inside the
// guard raise PoleAtCoincidence instead of returning a huge value that
// would silently poison determinants downstream.
class Rational {
  public:
    explicit Rational(cx c, double pole_guard_rel = 1e-12);

    cx crossing() const { return c_; }
    double pole_guard() const { return guard_; }

    // g = c/(u-v), f = 1 + g, h = f/g = (u-v+c)/c.
    cx g(cx u, cx v) const;
    cx f(cx u, cx v) const;
    cx h(cx u, cx v) const { return (u - v + c_) / c_; }

    // Shorthand products over sets; a double product over two sets, and
    // the empty product is 1.
    cx g(cx u, std::span<const cx> v) const;
    cx g(std::span<const cx> u, cx v) const;
    cx g(std::span<const cx> u, std::span<const cx> v) const;
    cx f(cx u, std::span<const cx> v) const;
    cx f(std::span<const cx> u, cx v) const;
    cx f(std::span<const cx> u, std::span<const cx> v) const;
    cx h(cx u, std::span<const cx> v) const;
    cx h(std::span<const cx> u, cx v) const;
    cx h(std::span<const cx> u, std::span<const cx> v) const;

    // Complement-set products, e.g. f(u_j, ubar_j) = prod_{i != j} f(u_j, u_i).
    cx g_excl(cx u, std::span<const cx> set, std::size_t skip) const;
    cx f_excl(cx u, std::span<const cx> set, std::size_t skip) const;
    cx f_excl_rev(std::span<const cx> set, std::size_t skip, cx u) const;  // f(ubar_j, u_j)
    cx h_excl(cx u, std::span<const cx> set, std::size_t skip) const;
    cx h_excl_rev(std::span<const cx> set, std::size_t skip, cx u) const;

    // Delta(v) = prod_{j<k} g(v_k, v_j); Delta'(u) = prod_{j<k} g(u_j, u_k).
    cx delta(std::span<const cx> v) const;
    cx delta_prime(std::span<const cx> u) const;

    // With the sign flipped on the crossing constant (conjugated kernels).
    Rational conjugated() const { return Rational(-c_, guard_); }

  private:
    void guard_check(cx u, cx v) const;
    cx c_;
    double guard_;
};

// Vacuum eigenvalues lambda_1(u) = c^-N prod(u - theta_k + c) and
// lambda_2(u) = c^-N prod(u - theta_k), kept as explicit products so they
// stay finite (and exactly zero) at u = theta_k and u = theta_k - c.
cx lambda1(std::span<const cx> theta, cx c, cx u);
cx lambda2(std::span<const cx> theta, cx c, cx u);
cx lambda1_prime(std::span<const cx> theta, cx c, cx u);
cx lambda2_prime(std::span<const cx> theta, cx c, cx u);

// Ordered partition of {0,...,n-1} into `parts` possibly empty subsets.
struct PartitionSpec {
    std::vector<std::vector<int>> parts;
    std::uint64_t code = 0;  // base-`parts` membership code, the iteration order
};

// Inclusive per-part cardinality bounds; {-1, -1} leaves a part free.
using CardinalityBounds = std::vector<std::pair<int, int>>;

// Enumerates all parts^n ordered partitions exactly once, in increasing
// membership-code order. Element i belongs to subset (code / parts^i) % parts.
// With bounds, partitions violating any part's cardinality range are skipped
// (the order of the surviving ones is unchanged).
class PartitionEnumerator {
  public:
    // cap <= 0 selects the default cap: 14 elements for 2 parts,
    // 10 for 3..4 parts, 8 above.
    PartitionEnumerator(int n_elements, int n_parts, int cap = 0,
                        CardinalityBounds bounds = {});

    bool next(PartitionSpec& out);
    std::uint64_t total() const { return total_; }

  private:
    bool admitted(const PartitionSpec& p) const;
    int n_, parts_;
    std::uint64_t code_ = 0, total_ = 0;
    CardinalityBounds bounds_;
};

// Splits `set` by a 2-part partition of its index range: (part 0, part 1).
std::pair<ParamSet, ParamSet> split(std::span<const cx> set, const PartitionSpec& p);

// Omega(x)_{jk} = f(xbar_k, x_k) / h(x_j, x_k). Its inverse is the same
// matrix with c -> -c.
std::vector<cx> omega_matrix(const Rational& r, std::span<const cx> x);  // row-major n*n

struct IdentityReport {
    std::map<std::string, double> errors;  // per-identity max relative error
    double max_error = 0.0;
};

// ||Omega * Omega^-1 - I||_max and the row-sum identity sum_j Omega_ij = 1.
IdentityReport omega_inverse_check(const Rational& r, std::span<const cx> x);

// The three summation formulas with gamma_j = g(u_j, ubar_j)/g(u_j, v),
// plus the row sums of Omega(theta). Requires #u = #v.
IdentityReport verify_sum_identities(const Rational& r, std::span<const cx> u,
                                     std::span<const cx> v, std::span<const cx> theta);

// Value at `x` of the unique degree-(n-1) polynomial through (xs, ys).
cx lagrange_extrapolate(std::span<const cx> xs, std::span<const cx> ys, cx x);

}  // namespace maba
