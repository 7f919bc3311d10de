#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "maba/params.hpp"

namespace maba {

// Builds the monodromy matrix explicitly on the 2^N space and computes
// Bethe vectors, transfer matrices, spectra and scalar products by dense
// linear algebra. This is the independent ground truth every determinant
// formula is checked against. Cost is O(N 4^N) per spectral parameter, so
// the construction is capped (default N <= 10).
class ChainOracle {
  public:
    explicit ChainOracle(const Model& model, int site_cap = 10);

    int dim() const { return dim_; }
    const Model& model() const { return model_; }

    // 4x4 vertex weight R(u,v) = ((u-v)/c) I + P on C^2 (x) C^2.
    static Eigen::MatrixXcd r_matrix(cx u, cx v, cx c);

    // Monodromy matrix entry t_ij(u), i,j in {1,2}. Entries for one u are
    // built together and memoized on the exact bit pattern of u.
    Eigen::MatrixXcd monodromy_entry(int i, int j, cx u) const;

    // Gauge-rotated entry nu_ij(u) of A T(u) B.
    Eigen::MatrixXcd nu_entry(int i, int j, cx u) const;

    // Transfer matrix (kt - rho1) nu11(u) + (k - rho2) nu22(u).
    Eigen::MatrixXcd transfer_matrix(cx u) const;

    // Same operator assembled directly as tr(K T(u)) without the gauge
    // factorization; used to cross-check the decomposition.
    Eigen::MatrixXcd transfer_matrix_direct(cx u) const;

    Eigen::VectorXcd vacuum() const;

    // prod_i nu12(v_i)|0> and <0| prod_i nu21(v_i).
    Eigen::VectorXcd bethe_ket(std::span<const cx> v) const;
    Eigen::RowVectorXcd bethe_bra(std::span<const cx> v) const;

    // <0| nu21(v) ... nu12(u) ... |0>, a bilinear pairing (no conjugation).
    cx scalar_product(std::span<const cx> v, std::span<const cx> u) const;

    struct Eigenpair {
        cx value;
        Eigen::VectorXcd vector;
    };
    // All 2^N eigenpairs of the transfer matrix, ordered by (re, im).
    std::vector<Eigenpair> spectrum(cx u) const;

  private:
    struct Blocks {
        Eigen::MatrixXcd t[2][2];
    };
    const Blocks& blocks(cx u) const;

    Model model_;
    int dim_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::uint64_t, std::shared_ptr<const Blocks>> cache_;
};

}  // namespace maba
