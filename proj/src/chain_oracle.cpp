#include "maba/chain_oracle.hpp"

#include <algorithm>
#include <bit>

#include "maba/simd.hpp"

namespace maba {

namespace {

std::uint64_t key_of(cx u) {
    std::uint64_t re = std::bit_cast<std::uint64_t>(u.real());
    std::uint64_t im = std::bit_cast<std::uint64_t>(u.imag());
    return re ^ (im * 0x9e3779b97f4a7c15ull + 0x7f4a7c15ull);
}

}  // namespace

ChainOracle::ChainOracle(const Model& model, int site_cap) : model_(model) {
    if (model.sites() > site_cap)
        throw CapExceeded("chain oracle capped at " + std::to_string(site_cap) + " sites");
    dim_ = 1 << model.sites();
}

Eigen::MatrixXcd ChainOracle::r_matrix(cx u, cx v, cx c) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(4, 4);
    cx b = (u - v) / c;
    // P|a,b> = |b,a> in the basis {00, 01, 10, 11}
    r(0, 0) = b + 1.0;
    r(3, 3) = b + 1.0;
    r(1, 1) = b;
    r(2, 2) = b;
    r(1, 2) = 1.0;
    r(2, 1) = 1.0;
    return r;
}

// The product R_{0N}(u,theta_N) ... R_{01}(u,theta_1) is accumulated in a
// flat row-major matrix on the (auxiliary (x) quantum) space. Each factor
// touches the auxiliary bit and one site bit: rows with equal aux and site
// bits are scaled by (u-theta)/c + 1, the two mixed rows get a 2x2 rotation.
const ChainOracle::Blocks& ChainOracle::blocks(cx u) const {
    std::uint64_t key = key_of(u);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;
    }

    const int n = model_.sites();
    const std::size_t dim_a = std::size_t(1) << (n + 1);  // aux bit is the highest
    std::vector<cx> m(dim_a * dim_a, cx(0.0));
    for (std::size_t i = 0; i < dim_a; ++i) m[i * dim_a + i] = 1.0;

    const auto& ops = simd::active();
    const std::size_t aux_bit = std::size_t(1) << n;
    for (int k = 1; k <= n; ++k) {
        cx b = (u - model_.theta()[k - 1]) / model_.crossing();
        const std::size_t site_bit = std::size_t(1) << (n - k);
        for (std::size_t base = 0; base < dim_a; ++base) {
            if (base & aux_bit || base & site_bit) continue;
            cx* r00 = m.data() + base * dim_a;
            cx* r01 = m.data() + (base | site_bit) * dim_a;
            cx* r10 = m.data() + (base | aux_bit) * dim_a;
            cx* r11 = m.data() + (base | aux_bit | site_bit) * dim_a;
            ops.scale(b + 1.0, r00, dim_a);
            ops.scale(b + 1.0, r11, dim_a);
            ops.mix2(b, 1.0, 1.0, b, r01, r10, dim_a);
        }
    }

    auto blk = std::make_shared<Blocks>();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Eigen::MatrixXcd& t = blk->t[i][j];
            t.resize(dim_, dim_);
            for (int row = 0; row < dim_; ++row) {
                const cx* src = m.data() + (std::size_t(i) * dim_ + row) * dim_a +
                                std::size_t(j) * dim_;
                for (int col = 0; col < dim_; ++col) t(row, col) = src[col];
            }
        }

    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(blk));
    return *it->second;
}

Eigen::MatrixXcd ChainOracle::monodromy_entry(int i, int j, cx u) const {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw InvalidParams("monodromy indices must be 1 or 2");
    return blocks(u).t[i - 1][j - 1];
}

Eigen::MatrixXcd ChainOracle::nu_entry(int i, int j, cx u) const {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw InvalidParams("nu indices must be 1 or 2");
    const Blocks& blk = blocks(u);
    const Mat2& a = model_.twist.a;
    const Mat2& b = model_.twist.b;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim_, dim_);
    const auto& ops = simd::active();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            cx coeff = a[i - 1][p] * b[q][j - 1];
            ops.axpy(coeff, blk.t[p][q].data(), acc.data(), acc.size());
        }
    return acc;
}

Eigen::MatrixXcd ChainOracle::transfer_matrix(cx u) const {
    Eigen::MatrixXcd out = nu_entry(1, 1, u) * model_.kt_r1();
    out.noalias() += nu_entry(2, 2, u) * model_.k_r2();
    return out;
}

Eigen::MatrixXcd ChainOracle::transfer_matrix_direct(cx u) const {
    const Blocks& blk = blocks(u);
    const ModelParams& p = model_.params;
    return p.kappa_tilde * blk.t[0][0] + p.kappa_plus * blk.t[1][0] +
           p.kappa_minus * blk.t[0][1] + p.kappa * blk.t[1][1];
}

Eigen::VectorXcd ChainOracle::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v(0) = 1.0;  // all spins up
    return v;
}

Eigen::VectorXcd ChainOracle::bethe_ket(std::span<const cx> v) const {
    Eigen::VectorXcd state = vacuum();
    for (cx x : v) state = nu_entry(1, 2, x) * state;
    return state;
}

Eigen::RowVectorXcd ChainOracle::bethe_bra(std::span<const cx> v) const {
    Eigen::RowVectorXcd state = vacuum().transpose();
    for (auto it = v.rbegin(); it != v.rend(); ++it) state = state * nu_entry(2, 1, *it);
    return state;
}

cx ChainOracle::scalar_product(std::span<const cx> v, std::span<const cx> u) const {
    Eigen::RowVectorXcd bra = bethe_bra(v);
    Eigen::VectorXcd ket = bethe_ket(u);
    return simd::active().dotu(bra.data(), ket.data(), dim_);
}

std::vector<ChainOracle::Eigenpair> ChainOracle::spectrum(cx u) const {
    if (model_.sites() > 8) throw CapExceeded("dense eigendecomposition capped at 8 sites");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(transfer_matrix(u));
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    std::vector<Eigenpair> out(dim_);
    std::vector<int> order(dim_);
    for (int i = 0; i < dim_; ++i) order[i] = i;
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });
    for (int i = 0; i < dim_; ++i)
        out[i] = {vals(order[i]), solver.eigenvectors().col(order[i])};
    return out;
}

}  // namespace maba
