#pragma once

// Symmetric tridiagonal eigensolver: implicit-shift QL with eigenvector
// accumulation, and a bisection + inverse iteration fallback.

#include "qhchain/errors.hpp"
#include "qhchain/tridiagonal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace qhc {

template <typename Scalar>
struct TridiagonalEigen {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;                 // ascending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;   // columns
    bool used_fallback = false;
};

enum class EigenMethod { ql, bisection };

namespace detail {

// Largest-magnitude component positive (first one on ties).
template <typename Matrix>
void fix_signs(Matrix& V) {
    using std::abs;
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        Eigen::Index imax = 0;
        auto best = abs(V(0, j));
        for (Eigen::Index i = 1; i < V.rows(); ++i)
            if (abs(V(i, j)) > best) {
                best = abs(V(i, j));
                imax = i;
            }
        if (V(imax, j) < 0) V.col(j) = -V.col(j);
    }
}

template <typename Vector, typename Matrix>
void sort_ascending(Vector& d, Matrix& V) {
    const Eigen::Index n = d.size();
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), Eigen::Index(0));
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });
    bool sorted = true;
    for (Eigen::Index i = 0; i < n; ++i) sorted = sorted && idx[i] == i;
    if (sorted) return;
    Vector d2(n);
    Matrix V2(V.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d2[i] = d[idx[i]];
        V2.col(i) = V.col(idx[i]);
    }
    d = std::move(d2);
    V = std::move(V2);
}

// Returns the index of a non-converged eigenvalue, or -1 on success.
template <typename Scalar>
Eigen::Index tql2(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& e,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& V, int max_iter) {
    using std::abs;
    using std::hypot;
    const Eigen::Index n = d.size();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar f = 0, tst1 = 0;
    for (Eigen::Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, abs(d[l]) + abs(e[l]));
        Eigen::Index m = l;
        while (m < n) {
            if (abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > max_iter) return l;
                Scalar g = d[l];
                Scalar p = (d[l + 1] - g) / (2 * e[l]);
                Scalar r = hypot(p, Scalar(1));
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const Scalar dl1 = d[l + 1];
                Scalar h = g - d[l];
                for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                Scalar c = 1, c2 = 1, c3 = 1, s = 0, s2 = 0;
                const Scalar el1 = e[l + 1];
                for (Eigen::Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    Scalar* vi = V.col(i).data();
                    Scalar* vi1 = V.col(i + 1).data();
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Scalar t = vi1[k];
                        vi1[k] = s * vi[k] + c * t;
                        vi[k] = c * vi[k] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0;
    }
    return -1;
}

// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
template <typename Scalar>
Eigen::Index sturm_count(const TridiagonalOperator<Scalar>& T, Scalar x) {
    using std::abs;
    const Eigen::Index n = T.dim();
    const Scalar tiny = std::numeric_limits<Scalar>::min();
    Eigen::Index count = 0;
    Scalar q = T.diag[0] - x;
    if (q < 0) ++count;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (abs(q) < tiny) q = -tiny;
        q = T.diag[i] - x - T.offdiag[i - 1] * T.offdiag[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

// Solve (T - lambda I) x = b by Gaussian elimination with partial pivoting.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> shifted_solve(const TridiagonalOperator<Scalar>& T, Scalar lambda,
                                                       Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b,
                                                       Scalar pivot_floor) {
    using std::abs;
    const Eigen::Index n = T.dim();
    // Row i holds up to three nonzeros u0 (diag), u1, u2 after pivoting.
    std::vector<Scalar> u0(n), u1(n, Scalar(0)), u2(n, Scalar(0));
    for (Eigen::Index i = 0; i < n; ++i) {
        u0[i] = T.diag[i] - lambda;
        if (i + 1 < n) u1[i] = T.offdiag[i];
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        Scalar sub = T.offdiag[i];  // entry (i+1, i)
        Scalar a0 = T.diag[i + 1] - lambda, a1 = (i + 2 < n) ? T.offdiag[i + 1] : Scalar(0), a2 = 0;
        if (abs(sub) > abs(u0[i])) {
            std::swap(u0[i], sub);
            std::swap(u1[i], a0);
            std::swap(u2[i], a1);
            std::swap(b[i], b[i + 1]);
            // a2 stays zero: row i had no entry at i+3 before the swap
        }
        if (abs(u0[i]) < pivot_floor) u0[i] = pivot_floor;
        const Scalar mult = sub / u0[i];
        u0[i + 1] = a0 - mult * u1[i];
        u1[i + 1] = a1 - mult * u2[i];
        u2[i + 1] = a2;
        b[i + 1] -= mult * b[i];
    }
    if (abs(u0[n - 1]) < pivot_floor) u0[n - 1] = pivot_floor;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        Scalar s = b[i];
        if (i + 1 < n) s -= u1[i] * b[i + 1];
        if (i + 2 < n) s -= u2[i] * b[i + 2];
        b[i] = s / u0[i];
    }
    return b;
}

}  // namespace detail

// Eigenvalues by bisection, eigenvectors by inverse iteration with
// Gram-Schmidt inside groups of close eigenvalues.
template <typename Scalar>
TridiagonalEigen<Scalar> eigh_tridiagonal_bisection(const TridiagonalOperator<Scalar>& T,
                                                    Scalar cluster_tol = Scalar(1e-13)) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using std::abs;
    const Eigen::Index n = T.dim();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    auto [lo, hi] = T.gershgorin();
    const Scalar norm = std::max(Scalar(1), std::max(abs(lo), abs(hi)));
    lo -= eps * norm;
    hi += eps * norm;

    Vector lam(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Scalar a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 2 * eps * std::max(abs(a), abs(b)) + eps * eps * norm; ++it) {
            const Scalar mid = a + (b - a) / 2;
            if (mid == a || mid == b) break;
            if (detail::sturm_count(T, mid) > k)
                b = mid;
            else
                a = mid;
        }
        lam[k] = a + (b - a) / 2;
    }

    const Scalar sep = cluster_tol * norm;
    const Scalar group_gap = Scalar(1e-3) * norm;
    Matrix V(n, n);
    Vector shifted = lam;
    for (Eigen::Index k = 1; k < n; ++k)
        if (shifted[k] - shifted[k - 1] < sep) shifted[k] = shifted[k - 1] + sep;

    Eigen::Index group_start = 0;
    std::uint64_t lcg = 0x243F6A8885A308D3ULL;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k > 0 && lam[k] - lam[k - 1] > group_gap) group_start = k;
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
            x[i] = Scalar(static_cast<double>(lcg >> 11) * 0x1.0p-53 - 0.5);
        }
        x.normalize();
        bool ok = false;
        for (int it = 0; it < 8; ++it) {
            Vector y = detail::shifted_solve(T, shifted[k], x, eps * norm);
            for (Eigen::Index j = group_start; j < k; ++j) y -= V.col(j).dot(y) * V.col(j);
            const Scalar ny = y.norm();
            if (!(ny > 0) || !std::isfinite(static_cast<double>(ny))) break;
            x = y / ny;
            const Scalar res = (T.apply(x) - lam[k] * x).norm();
            if (res <= Scalar(100) * eps * norm * std::sqrt(Scalar(n)) && it >= 1) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            const Scalar res = (T.apply(x) - lam[k] * x).norm();
            if (!(res <= Scalar(1e-9) * norm))
                throw NumericalError("tridiagonal eigensolver: inverse iteration did not converge at index " +
                                     std::to_string(k));
        }
        V.col(k) = x;
    }
    detail::fix_signs(V);
    TridiagonalEigen<Scalar> out;
    out.eigenvalues = std::move(lam);
    out.eigenvectors = std::move(V);
    out.used_fallback = true;
    return out;
}

template <typename Scalar>
TridiagonalEigen<Scalar> eigh_tridiagonal(const TridiagonalOperator<Scalar>& T,
                                          EigenMethod method = EigenMethod::ql, int max_iter = 60) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (method == EigenMethod::bisection) return eigh_tridiagonal_bisection(T);
    const Eigen::Index n = T.dim();
    Vector d = T.diag;
    Vector e = Vector::Zero(n);
    e.head(n - 1) = T.offdiag;
    Matrix V = Matrix::Identity(n, n);
    const Eigen::Index bad = detail::tql2<Scalar>(d, e, V, max_iter);
    if (bad >= 0) {
        try {
            return eigh_tridiagonal_bisection(T);
        } catch (const NumericalError&) {
            throw NumericalError("tridiagonal eigensolver: QL iteration cap reached at index " +
                                 std::to_string(bad) + " and the bisection fallback failed");
        }
    }
    detail::sort_ascending(d, V);
    detail::fix_signs(V);
    TridiagonalEigen<Scalar> out;
    out.eigenvalues = std::move(d);
    out.eigenvectors = std::move(V);
    return out;
}

}  // namespace qhc
