#pragma once

#include "nodalkit/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace nodalkit {

// LU factorization of a general tridiagonal matrix with partial pivoting
// (row interchanges introduce a second superdiagonal).
template <typename Scalar>
class TridiagonalLU {
public:
    typedef Eigen::Matrix<Scalar, Eigen::Dynamic, 1> Vec;

    // lower and upper have n-1 entries, diag has n.
    TridiagonalLU(Vec lower, Vec diag, Vec upper)
        : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper))
    {
        const Eigen::Index n = d_.size();
        if (n < 2 || dl_.size() != n - 1 || du_.size() != n - 1)
            throw DomainError("TridiagonalLU: inconsistent band sizes");
        du2_ = Vec::Zero(n > 2 ? n - 2 : 0);
        swapped_.assign(static_cast<std::size_t>(n - 1), false);
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] == Scalar(0))
                    throw ConvergenceError("TridiagonalLU: singular matrix");
                const Scalar f = dl_[i] / d_[i];
                dl_[i] = f;
                d_[i + 1] -= f * du_[i];
            } else {
                const Scalar f = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = f;
                const Scalar tmp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = tmp - f * d_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -f * du_[i + 1];
                }
                swapped_[static_cast<std::size_t>(i)] = true;
            }
        }
        if (d_[n - 1] == Scalar(0))
            throw ConvergenceError("TridiagonalLU: singular matrix");
    }

    Vec solve(Vec b) const
    {
        const Eigen::Index n = d_.size();
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            if (!swapped_[static_cast<std::size_t>(i)]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const Scalar tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl_[i] * b[i];
            }
        }
        b[n - 1] /= d_[n - 1];
        b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (Eigen::Index i = n - 3; i >= 0; --i)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
        return b;
    }

private:
    Vec dl_, d_, du_, du2_;
    std::vector<bool> swapped_;
};

} // namespace nodalkit
