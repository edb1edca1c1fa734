#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhc {

// Symmetric tridiagonal matrix. Only the upper off-diagonal is stored.
template <typename Scalar>
struct TridiagonalOperator {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Vector diag;
    Vector offdiag;

    TridiagonalOperator() = default;
    TridiagonalOperator(Vector d, Vector e) : diag(std::move(d)), offdiag(std::move(e)) {
        if (diag.size() == 0 || offdiag.size() != diag.size() - 1)
            throw std::invalid_argument("tridiagonal: offdiag must have length dim-1");
    }

    Eigen::Index dim() const { return diag.size(); }

    Matrix dense() const {
        const Eigen::Index n = dim();
        Matrix A = Matrix::Zero(n, n);
        A.diagonal() = diag;
        if (n > 1) {
            A.diagonal(1) = offdiag;
            A.diagonal(-1) = offdiag;
        }
        return A;
    }

    // y = (T - shift I) x
    template <typename Derived>
    Vector apply(const Eigen::MatrixBase<Derived>& x, Scalar shift = Scalar(0)) const {
        const Eigen::Index n = dim();
        Vector y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar s = (diag[i] - shift) * x[i];
            if (i > 0) s += offdiag[i - 1] * x[i - 1];
            if (i + 1 < n) s += offdiag[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    // Gershgorin interval containing the spectrum.
    std::pair<Scalar, Scalar> gershgorin() const {
        using std::abs;
        const Eigen::Index n = dim();
        Scalar lo = diag[0], hi = diag[0];
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar r = Scalar(0);
            if (i > 0) r += abs(offdiag[i - 1]);
            if (i + 1 < n) r += abs(offdiag[i]);
            lo = std::min(lo, diag[i] - r);
            hi = std::max(hi, diag[i] + r);
        }
        return {lo, hi};
    }

    // Infinity norm; bounds the 2-norm for symmetric matrices.
    Scalar norm_bound() const {
        auto [lo, hi] = gershgorin();
        using std::abs;
        return std::max(abs(lo), abs(hi));
    }

    TridiagonalOperator scaled(Scalar c) const { return {Vector(c * diag), Vector(c * offdiag)}; }

    template <typename NewScalar>
    TridiagonalOperator<NewScalar> cast() const {
        return {diag.template cast<NewScalar>(), offdiag.template cast<NewScalar>()};
    }
};

using Tridiag = TridiagonalOperator<double>;

}  // namespace qhc
