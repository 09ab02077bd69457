#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corrkit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

/// Default numerical tolerance for all verification residuals.
inline constexpr double kDefaultTol = 1e-9;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat kron(const Mat& a, const Mat& b, const Mat& c) { return kron(kron(a, b), c); }

/// Largest singular value.
inline double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() > 16 || m.cols() > 16) {
        Eigen::BDCSVD<Mat> svd(m);
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

inline Vec flatten(const Mat& m) {
    Vec v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
    return v;
}

inline Mat unflatten(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw std::invalid_argument("unflatten: size mismatch");
    Mat m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(k++);
    return m;
}

/// Least-squares solver against a fixed set of column vectors, with residuals.
class SpanSolver {
public:
    SpanSolver() = default;
    explicit SpanSolver(Mat columns) : columns_(std::move(columns)) {
        if (columns_.size() > 0) cod_.compute(columns_);
    }

    [[nodiscard]] Eigen::Index dimension() const { return columns_.cols(); }

    [[nodiscard]] Eigen::Index rank(double tol = kDefaultTol) const {
        if (columns_.size() == 0) return 0;
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(columns_);
        cod.setThreshold(tol);
        return cod.rank();
    }

    /// Coordinates of v in the column span (least squares).
    [[nodiscard]] Vec solve(const Vec& v) const {
        if (columns_.size() == 0) return Vec::Zero(0);
        return cod_.solve(v);
    }

    /// Distance from v to the column span.
    [[nodiscard]] double residual(const Vec& v) const {
        if (columns_.size() == 0) return v.norm();
        Vec c = cod_.solve(v);
        return (columns_ * c - v).norm();
    }

    [[nodiscard]] const Mat& columns() const { return columns_; }

private:
    Mat columns_;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod_;
};

inline Eigen::Index span_rank(const Mat& columns, double tol = kDefaultTol) {
    if (columns.size() == 0) return 0;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(columns);
    cod.setThreshold(tol);
    return cod.rank();
}

/// Orthonormal basis of the null space of m, as columns.
inline Mat null_space(const Mat& m, double tol = kDefaultTol) {
    if (m.cols() == 0) return Mat::Zero(0, 0);
    if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * std::max(1.0, smax)) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

/// True when every column of `sub` lies in the column span of `amb`.
inline bool span_contains(const Mat& amb, const Mat& sub, double tol = kDefaultTol) {
    SpanSolver solver(amb);
    for (Eigen::Index j = 0; j < sub.cols(); ++j)
        if (solver.residual(sub.col(j)) > tol * std::max(1.0, sub.col(j).norm())) return false;
    return true;
}

inline bool spans_equal(const Mat& a, const Mat& b, double tol = kDefaultTol) {
    return span_contains(a, b, tol) && span_contains(b, a, tol);
}

/// One failed (or notable) identity instance inside a verification report.
struct Witness {
    std::string identity;
    std::string detail;
    double residual = 0.0;
};

/// Outcome of a verification routine: pass/fail plus the worst residual seen.
struct CheckReport {
    std::string name;
    bool passed = true;
    double max_residual = 0.0;
    double tolerance = kDefaultTol;
    std::vector<Witness> witnesses;

    void check(const std::string& identity, double residual, const std::string& detail = "") {
        max_residual = std::max(max_residual, residual);
        if (residual > tolerance) {
            passed = false;
            witnesses.push_back({identity, detail, residual});
        }
    }

    void require(const std::string& identity, bool ok, const std::string& detail = "") {
        if (!ok) {
            passed = false;
            witnesses.push_back({identity, detail, 0.0});
        }
    }

    void absorb(const CheckReport& other) {
        passed = passed && other.passed;
        max_residual = std::max(max_residual, other.max_residual);
        for (const auto& w : other.witnesses) {
            Witness tagged = w;
            if (!other.name.empty()) tagged.identity = other.name + ": " + w.identity;
            witnesses.push_back(std::move(tagged));
        }
    }

    [[nodiscard]] std::string summary() const {
        std::string out = name + ": " + (passed ? "pass" : "FAIL") + " (max residual " +
                          std::to_string(max_residual) + ", tolerance " + std::to_string(tolerance) + ")";
        for (const auto& w : witnesses) {
            out += "\n  " + w.identity;
            if (!w.detail.empty()) out += " [" + w.detail + "]";
            out += " residual " + std::to_string(w.residual);
        }
        return out;
    }
};

}  // namespace corrkit
