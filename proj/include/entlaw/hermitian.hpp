#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "entlaw/complex_matrix.hpp"

namespace entlaw {

// Matrices whose Hermiticity deviation is at most this are symmetrized on
// construction; anything worse is rejected as a usage error.
inline constexpr double hermiticity_tol = 1e-12;

// Square Hermitian matrix, optionally carrying a bipartite tensor split
// dim = dim_a * dim_b with the flat index convention i = a * dim_b + b.
// Construction symmetrizes (M + M^dag)/2 so downstream code can rely on exact
// entrywise Hermiticity.
class HermitianOperator {
public:
    HermitianOperator() : dim_(0), dim_a_(0), dim_b_(0) {}

    explicit HermitianOperator(const ComplexMatrix& m) : HermitianOperator(m, 0, 0, true) {}

    HermitianOperator(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b)
        : HermitianOperator(m, dim_a, dim_b, false) {}

    std::size_t dim() const { return dim_; }
    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    bool has_bipartition() const { return dim_a_ != 0; }

    const ComplexMatrix& matrix() const { return mat_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

    double trace() const { return mat_.trace().real(); }
    double frobenius_norm() const { return mat_.frobenius_norm(); }

    // Same matrix reinterpreted with an explicit tensor split.
    HermitianOperator with_bipartition(std::size_t dim_a, std::size_t dim_b) const {
        return HermitianOperator(mat_, dim_a, dim_b);
    }

    HermitianOperator& operator+=(const HermitianOperator& other) {
        require_same_dim(other, "operator+=");
        mat_ += other.mat_;
        return *this;
    }

    HermitianOperator& operator-=(const HermitianOperator& other) {
        require_same_dim(other, "operator-=");
        mat_ -= other.mat_;
        return *this;
    }

    HermitianOperator& operator*=(double scale) {
        mat_ *= Complex(scale, 0.0);
        return *this;
    }

    friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
    friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
    friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
    friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

private:
    HermitianOperator(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, bool unipartite)
        : dim_(m.rows()), dim_a_(dim_a), dim_b_(dim_b), mat_(m) {
        if (m.rows() != m.cols())
            throw std::invalid_argument("HermitianOperator: matrix is not square");
        if (!m.all_finite())
            throw std::invalid_argument("HermitianOperator: matrix has non-finite entries");
        if (!unipartite) {
            if (dim_a_ == 0 || dim_b_ == 0 || dim_a_ * dim_b_ != dim_)
                throw std::invalid_argument("HermitianOperator: bipartition " + std::to_string(dim_a_) +
                                            " x " + std::to_string(dim_b_) + " does not match dim " +
                                            std::to_string(dim_));
        }
        const double dev = mat_.hermiticity_deviation();
        if (dev > hermiticity_tol)
            throw std::invalid_argument("HermitianOperator: Hermiticity deviation " + std::to_string(dev) +
                                        " exceeds tolerance");
        // Symmetrize so the stored matrix is exactly Hermitian.
        for (std::size_t i = 0; i < dim_; ++i) {
            mat_(i, i) = Complex(mat_(i, i).real(), 0.0);
            for (std::size_t j = i + 1; j < dim_; ++j) {
                const Complex avg = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
                mat_(i, j) = avg;
                mat_(j, i) = std::conj(avg);
            }
        }
    }

    void require_same_dim(const HermitianOperator& other, const char* what) const {
        if (dim_ != other.dim_)
            throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }

    std::size_t dim_, dim_a_, dim_b_;
    ComplexMatrix mat_;
};

inline void require_bipartite(const HermitianOperator& x, const char* what) {
    if (!x.has_bipartition())
        throw std::invalid_argument(std::string(what) + ": operator has no declared bipartition");
}

// Tensor product.  When both factors are bipartite the result groups the A
// factors before the B factors -- the split (A1 A2 : B1 B2) with flat indices
// a = a1*da2 + a2, b = b1*db2 + b2 -- which is the layout shared-state copies
// use.  Otherwise it is the plain Kronecker product with no declared split.
inline HermitianOperator tensor_product(const HermitianOperator& x, const HermitianOperator& y) {
    if (!(x.has_bipartition() && y.has_bipartition()))
        return HermitianOperator(kron(x.matrix(), y.matrix()));
    const std::size_t da1 = x.dim_a(), db1 = x.dim_b();
    const std::size_t da2 = y.dim_a(), db2 = y.dim_b();
    const std::size_t da = da1 * da2, db = db1 * db2;
    if (da * db > max_tensor_dim)
        throw std::invalid_argument("tensor_product: result dimension exceeds " +
                                    std::to_string(max_tensor_dim));
    const std::size_t dim = da * db;
    ComplexMatrix out(dim, dim);
    for (std::size_t a1 = 0; a1 < da1; ++a1)
      for (std::size_t a2 = 0; a2 < da2; ++a2)
        for (std::size_t b1 = 0; b1 < db1; ++b1)
          for (std::size_t b2 = 0; b2 < db2; ++b2) {
            const std::size_t r = (a1 * da2 + a2) * db + (b1 * db2 + b2);
            for (std::size_t c1 = 0; c1 < da1; ++c1)
              for (std::size_t c2 = 0; c2 < da2; ++c2)
                for (std::size_t d1 = 0; d1 < db1; ++d1)
                  for (std::size_t d2 = 0; d2 < db2; ++d2) {
                    const Complex v = x.matrix()(a1 * db1 + b1, c1 * db1 + d1) *
                                      y.matrix()(a2 * db2 + b2, c2 * db2 + d2);
                    if (v == Complex(0.0, 0.0)) continue;
                    out(r, (c1 * da2 + c2) * db + (d1 * db2 + d2)) = v;
                  }
          }
    return HermitianOperator(out, da, db);
}

// n-fold tensor power with the grouped bipartite layout.
inline HermitianOperator tensor_power(const HermitianOperator& x, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("tensor_power: n must be >= 1");
    HermitianOperator out = x;
    for (std::size_t k = 1; k < n; ++k) out = tensor_product(out, x);
    return out;
}

// Partial transpose on the B factor: X[(a,b),(a',b')] -> X[(a,b'),(a',b)].
inline HermitianOperator partial_transpose_b(const HermitianOperator& x) {
    require_bipartite(x, "partial_transpose_b");
    const std::size_t da = x.dim_a(), db = x.dim_b();
    ComplexMatrix out(x.dim(), x.dim());
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t ap = 0; ap < da; ++ap)
            for (std::size_t b = 0; b < db; ++b)
                for (std::size_t bp = 0; bp < db; ++bp)
                    out(a * db + b, ap * db + bp) = x.matrix()(a * db + bp, ap * db + b);
    return HermitianOperator(out, da, db);
}

// Trace out the A factor, leaving an operator on B.
inline HermitianOperator partial_trace_a(const HermitianOperator& x) {
    require_bipartite(x, "partial_trace_a");
    const std::size_t da = x.dim_a(), db = x.dim_b();
    ComplexMatrix out(db, db);
    for (std::size_t b = 0; b < db; ++b)
        for (std::size_t bp = 0; bp < db; ++bp) {
            Complex s(0.0, 0.0);
            for (std::size_t a = 0; a < da; ++a) s += x.matrix()(a * db + b, a * db + bp);
            out(b, bp) = s;
        }
    return HermitianOperator(out);
}

// Trace out the B factor, leaving an operator on A.
inline HermitianOperator partial_trace_b(const HermitianOperator& x) {
    require_bipartite(x, "partial_trace_b");
    const std::size_t da = x.dim_a(), db = x.dim_b();
    ComplexMatrix out(da, da);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t ap = 0; ap < da; ++ap) {
            Complex s(0.0, 0.0);
            for (std::size_t b = 0; b < db; ++b) s += x.matrix()(a * db + b, ap * db + b);
            out(a, ap) = s;
        }
    return HermitianOperator(out);
}

// Tr[X Y] for Hermitian X, Y; the result is real up to roundoff.
inline double hermitian_inner(const HermitianOperator& x, const HermitianOperator& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("hermitian_inner: dimension mismatch");
    return inner_product(x.matrix(), y.matrix()).real();
}

} // namespace entlaw
