#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/common.hpp"

namespace corrkit {

/// Element of a direct sum of complex matrix blocks.
struct AlgElement {
    std::vector<Mat> blocks;

    AlgElement() = default;
    explicit AlgElement(std::vector<Mat> b) : blocks(std::move(b)) {}

    [[nodiscard]] bool same_shape(const AlgElement& o) const {
        if (blocks.size() != o.blocks.size()) return false;
        for (size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].rows() != o.blocks[i].rows() || blocks[i].cols() != o.blocks[i].cols()) return false;
        return true;
    }

    [[nodiscard]] AlgElement adjoint() const {
        AlgElement out;
        out.blocks.reserve(blocks.size());
        for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
        return out;
    }

    /// C*-norm: max spectral norm over blocks.
    [[nodiscard]] double norm() const {
        double n = 0.0;
        for (const auto& b : blocks) n = std::max(n, spectral_norm(b));
        return n;
    }

    /// Euclidean norm of the coefficient vector (distance measure).
    [[nodiscard]] double frobenius() const {
        double s = 0.0;
        for (const auto& b : blocks) s += b.squaredNorm();
        return std::sqrt(s);
    }

    [[nodiscard]] Vec vec() const {
        Eigen::Index total = 0;
        for (const auto& b : blocks) total += b.size();
        Vec v(total);
        Eigen::Index k = 0;
        for (const auto& b : blocks)
            for (Eigen::Index i = 0; i < b.rows(); ++i)
                for (Eigen::Index j = 0; j < b.cols(); ++j) v(k++) = b(i, j);
        return v;
    }

    AlgElement& operator+=(const AlgElement& o) {
        for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
        return *this;
    }
    AlgElement& operator-=(const AlgElement& o) {
        for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
        return *this;
    }
    AlgElement& operator*=(cplx c) {
        for (auto& b : blocks) b *= c;
        return *this;
    }

    friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
    friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
    friend AlgElement operator*(cplx c, AlgElement a) { return a *= c; }
    friend AlgElement operator*(AlgElement a, cplx c) { return a *= c; }

    friend AlgElement operator*(const AlgElement& a, const AlgElement& b) {
        AlgElement out;
        out.blocks.reserve(a.blocks.size());
        for (size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * b.blocks[i]);
        return out;
    }
};

/// Finite-dimensional C*-algebra: a direct sum of matrix blocks, optionally
/// restricted to a designated subalgebra via a spanning basis (e.g. the group
/// algebra span{u_s} inside M_{|G|}).
class FDAlgebra {
public:
    FDAlgebra() = default;

    /// Full block-sum algebra.
    explicit FDAlgebra(std::vector<int> block_dims, std::string name = "")
        : data_(std::make_shared<Data>()) {
        auto& d = *std::const_pointer_cast<Data>(data_);
        d.dims = std::move(block_dims);
        d.name = std::move(name);
        validate_dims(d.dims);
        d.full = true;
        d.basis = matrix_unit_basis(d.dims);
        finalize(d);
    }

    /// Subalgebra of the block sum spanned by `span_basis` (must be linearly
    /// independent and closed under product and involution).
    FDAlgebra(std::vector<int> block_dims, std::vector<AlgElement> span_basis, std::string name = "",
              double tol = kDefaultTol)
        : data_(std::make_shared<Data>()) {
        auto& d = *std::const_pointer_cast<Data>(data_);
        d.dims = std::move(block_dims);
        d.name = std::move(name);
        validate_dims(d.dims);
        d.full = false;
        d.basis = std::move(span_basis);
        if (d.basis.empty()) throw std::invalid_argument("FDAlgebra: empty span basis");
        finalize(d);
        verify_closure(tol);
    }

    [[nodiscard]] const std::vector<int>& block_dims() const { return data_->dims; }
    [[nodiscard]] const std::string& name() const { return data_->name; }
    [[nodiscard]] bool is_full() const { return data_->full; }

    /// Linear dimension of the (sub)algebra.
    [[nodiscard]] int dim() const { return static_cast<int>(data_->basis.size()); }

    /// Total matrix size of the ambient block sum.
    [[nodiscard]] int ambient_size() const { return data_->ambient; }

    [[nodiscard]] const std::vector<AlgElement>& basis() const { return data_->basis; }

    [[nodiscard]] AlgElement zero() const {
        AlgElement z;
        z.blocks.reserve(data_->dims.size());
        for (int n : data_->dims) z.blocks.push_back(Mat::Zero(n, n));
        return z;
    }

    /// Ambient identity; a member of the subalgebra for all algebras built here.
    [[nodiscard]] AlgElement one() const {
        AlgElement e;
        e.blocks.reserve(data_->dims.size());
        for (int n : data_->dims) e.blocks.push_back(Mat::Identity(n, n));
        return e;
    }

    [[nodiscard]] AlgElement matrix_unit(int block, int row, int col) const {
        AlgElement z = zero();
        z.blocks[static_cast<size_t>(block)](row, col) = 1.0;
        return z;
    }

    [[nodiscard]] bool shape_matches(const AlgElement& a) const {
        if (a.blocks.size() != data_->dims.size()) return false;
        for (size_t i = 0; i < a.blocks.size(); ++i)
            if (a.blocks[i].rows() != data_->dims[i] || a.blocks[i].cols() != data_->dims[i]) return false;
        return true;
    }

    /// Coordinates in the designated basis (least squares).
    [[nodiscard]] Vec coords(const AlgElement& a) const { return data_->solver.solve(a.vec()); }

    /// Distance from `a` to the algebra's linear span.
    [[nodiscard]] double span_residual(const AlgElement& a) const { return data_->solver.residual(a.vec()); }

    [[nodiscard]] bool contains(const AlgElement& a, double tol = kDefaultTol) const {
        return span_residual(a) <= tol * std::max(1.0, a.frobenius());
    }

    [[nodiscard]] AlgElement from_coords(const Vec& c) const {
        if (c.size() != dim()) throw std::invalid_argument("from_coords: dimension mismatch");
        AlgElement out = zero();
        for (int k = 0; k < dim(); ++k)
            if (c(k) != cplx(0.0, 0.0)) out += c(k) * data_->basis[static_cast<size_t>(k)];
        return out;
    }

    /// Single block-diagonal matrix realizing the element in M_{ambient_size}.
    [[nodiscard]] Mat ambient(const AlgElement& a) const {
        Mat m = Mat::Zero(data_->ambient, data_->ambient);
        int off = 0;
        for (size_t i = 0; i < a.blocks.size(); ++i) {
            const int n = data_->dims[i];
            m.block(off, off, n, n) = a.blocks[i];
            off += n;
        }
        return m;
    }

    [[nodiscard]] AlgElement from_ambient(const Mat& m) const {
        AlgElement out = zero();
        int off = 0;
        for (size_t i = 0; i < out.blocks.size(); ++i) {
            const int n = data_->dims[i];
            out.blocks[i] = m.block(off, off, n, n);
            off += n;
        }
        return out;
    }

    [[nodiscard]] static std::vector<AlgElement> matrix_unit_basis(const std::vector<int>& dims) {
        std::vector<AlgElement> basis;
        for (size_t b = 0; b < dims.size(); ++b)
            for (int i = 0; i < dims[b]; ++i)
                for (int j = 0; j < dims[b]; ++j) {
                    AlgElement e;
                    for (size_t k = 0; k < dims.size(); ++k) e.blocks.push_back(Mat::Zero(dims[k], dims[k]));
                    e.blocks[b](i, j) = 1.0;
                    basis.push_back(std::move(e));
                }
        return basis;
    }

private:
    struct Data {
        std::vector<int> dims;
        std::string name;
        std::vector<AlgElement> basis;
        SpanSolver solver;
        bool full = true;
        int ambient = 0;
    };

    static void validate_dims(const std::vector<int>& dims) {
        if (dims.empty()) throw std::invalid_argument("FDAlgebra: no blocks");
        for (int n : dims)
            if (n < 1) throw std::invalid_argument("FDAlgebra: block dimension must be >= 1");
    }

    void finalize(Data& d) {
        d.ambient = std::accumulate(d.dims.begin(), d.dims.end(), 0);
        Eigen::Index len = 0;
        for (int n : d.dims) len += static_cast<Eigen::Index>(n) * n;
        Mat cols(len, static_cast<Eigen::Index>(d.basis.size()));
        for (size_t k = 0; k < d.basis.size(); ++k) {
            if (static_cast<int>(d.basis[k].blocks.size()) != static_cast<int>(d.dims.size()))
                throw std::invalid_argument("FDAlgebra: basis element block count mismatch");
            cols.col(static_cast<Eigen::Index>(k)) = d.basis[k].vec();
        }
        d.solver = SpanSolver(cols);
        if (d.solver.rank() != static_cast<Eigen::Index>(d.basis.size()))
            throw std::invalid_argument("FDAlgebra: span basis is linearly dependent");
    }

    void verify_closure(double tol) const {
        for (const auto& a : data_->basis) {
            if (!contains(a.adjoint(), tol))
                throw std::invalid_argument("FDAlgebra: span basis not closed under involution");
            for (const auto& b : data_->basis)
                if (!contains(a * b, tol))
                    throw std::invalid_argument("FDAlgebra: span basis not closed under multiplication");
        }
    }

    std::shared_ptr<const Data> data_;
};

inline AlgElement multiply(const FDAlgebra& alg, const AlgElement& a, const AlgElement& b) {
    if (!alg.shape_matches(a) || !alg.shape_matches(b))
        throw std::invalid_argument("multiply: element shape does not match algebra");
    return a * b;
}

inline AlgElement involution(const FDAlgebra& alg, const AlgElement& a) {
    if (!alg.shape_matches(a)) throw std::invalid_argument("involution: element shape does not match algebra");
    return a.adjoint();
}

inline double operator_norm(const FDAlgebra& alg, const AlgElement& a) {
    if (!alg.shape_matches(a)) throw std::invalid_argument("operator_norm: element shape does not match algebra");
    return a.norm();
}

/// Spatial tensor product with blocks ordered (i,j) lexicographically; the
/// designated basis is the elementary tensor basis of the factor bases.
inline FDAlgebra tensor_product(const FDAlgebra& a, const FDAlgebra& b) {
    std::vector<int> dims;
    for (int na : a.block_dims())
        for (int nb : b.block_dims()) dims.push_back(na * nb);
    auto elem_kron = [&](const AlgElement& x, const AlgElement& y) {
        AlgElement out;
        for (const auto& xb : x.blocks)
            for (const auto& yb : y.blocks) out.blocks.push_back(kron(xb, yb));
        return out;
    };
    if (a.is_full() && b.is_full()) return FDAlgebra(dims, a.name() + "(x)" + b.name());
    std::vector<AlgElement> basis;
    basis.reserve(static_cast<size_t>(a.dim()) * static_cast<size_t>(b.dim()));
    for (const auto& x : a.basis())
        for (const auto& y : b.basis()) basis.push_back(elem_kron(x, y));
    return FDAlgebra(dims, std::move(basis), a.name() + "(x)" + b.name());
}

/// Elementary tensor of elements of `a` and `b` inside tensor_product(a,b).
inline AlgElement tensor_element(const AlgElement& x, const AlgElement& y) {
    AlgElement out;
    for (const auto& xb : x.blocks)
        for (const auto& yb : y.blocks) out.blocks.push_back(kron(xb, yb));
    return out;
}

/// Same ambient shape and the same designated basis, elementwise.
inline bool same_algebra(const FDAlgebra& a, const FDAlgebra& b, double tol = kDefaultTol) {
    if (a.block_dims() != b.block_dims() || a.dim() != b.dim()) return false;
    for (int k = 0; k < a.dim(); ++k)
        if ((a.basis()[static_cast<size_t>(k)].vec() - b.basis()[static_cast<size_t>(k)].vec()).norm() > tol)
            return false;
    return true;
}

}  // namespace corrkit
