#ifndef TORIX_LINALG_HPP
#define TORIX_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "torix/errors.hpp"
#include "torix/rational.hpp"

namespace torix {

// Small dense matrix over exact rationals, row-major.
class Mat {
public:
    Mat() = default;

    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    Mat(std::initializer_list<std::initializer_list<Scalar>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) {
                throw validation_error("BadShape", "ragged matrix initializer");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const Mat&) const = default;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) {
            std::swap((*this)(i, c), (*this)(j, c));
        }
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& rhs) const {
        if (cols_ != rhs.rows_) {
            throw validation_error("BadShape", "matrix product shape mismatch");
        }
        Mat out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Scalar& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    Mat select_rows(const std::vector<std::size_t>& idx) const {
        Mat out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
        return out;
    }

    Mat select_cols(const std::vector<std::size_t>& idx) const {
        Mat out(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
        return out;
    }

    bool is_zero() const {
        for (const auto& e : entries_) {
            if (e != 0) return false;
        }
        return true;
    }

    std::vector<Scalar> column(std::size_t j) const {
        std::vector<Scalar> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> entries_;
};

// In-place reduced row echelon form. Returns the pivot columns, left to
// right; pivots are scaled to 1 and cleared above and below.
inline std::vector<std::size_t> reduced_row_echelon(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pr = row;
        while (pr < m.rows() && m(pr, col) == 0) ++pr;
        if (pr == m.rows()) continue;
        m.swap_rows(row, pr);
        const Scalar pivot = m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) /= pivot;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            const Scalar factor = m(r, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(r, j) -= factor * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(const Mat& m) {
    Mat r = m;
    return reduced_row_echelon(r).size();
}

// Canonical kernel basis: one column per free column of the echelon form,
// free columns taken left to right, each column scaled so its first nonzero
// entry is 1. Satisfies m * kernel_basis(m) = 0 exactly.
inline Mat kernel_basis(const Mat& m) {
    Mat r = m;
    const std::vector<std::size_t> pivots = reduced_row_echelon(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;

    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }

    Mat k(m.cols(), free_cols.size());
    for (std::size_t fc = 0; fc < free_cols.size(); ++fc) {
        const std::size_t f = free_cols[fc];
        k(f, fc) = 1;
        for (std::size_t p = 0; p < pivots.size(); ++p) {
            k(pivots[p], fc) = -r(p, f);
        }
        std::size_t first = 0;
        while (first < m.cols() && k(first, fc) == 0) ++first;
        const Scalar lead = k(first, fc);
        for (std::size_t i = first; i < m.cols(); ++i) k(i, fc) /= lead;
    }
    return k;
}

inline Scalar det(const Mat& m) {
    if (m.rows() != m.cols()) {
        throw validation_error("BadShape", "determinant of a non-square matrix");
    }
    Mat a = m;
    const std::size_t n = a.rows();
    Scalar d = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = col;
        while (pr < n && a(pr, col) == 0) ++pr;
        if (pr == n) return Scalar(0);
        if (pr != col) {
            a.swap_rows(col, pr);
            d = -d;
        }
        const Scalar pivot = a(col, col);
        d *= pivot;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const Scalar factor = a(r, col) / pivot;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
        }
    }
    return d;
}

// Scales a homogeneous coordinate vector so its first nonzero entry is 1.
inline void normalize_homogeneous(std::vector<Scalar>& v) {
    std::size_t first = 0;
    while (first < v.size() && v[first] == 0) ++first;
    if (first == v.size()) {
        throw validation_error("ZeroPoint", "homogeneous coordinates are all zero");
    }
    const Scalar lead = v[first];
    for (std::size_t i = first; i < v.size(); ++i) v[i] /= lead;
}

// A point of the projective line in canonical coordinates: the homogeneous
// pair (a : b) with the first nonzero coordinate scaled to 1. Two points are
// equal exactly when their canonical pairs coincide.
class ProjectiveLinePoint {
public:
    ProjectiveLinePoint(Scalar a, Scalar b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_ == 0 && b_ == 0) {
            throw validation_error("ZeroPoint", "projective point (0, 0)");
        }
        if (a_ != 0) {
            b_ /= a_;
            a_ = 1;
        } else {
            b_ = 1;
        }
    }

    const Scalar& a() const noexcept { return a_; }
    const Scalar& b() const noexcept { return b_; }

    bool operator==(const ProjectiveLinePoint&) const = default;

private:
    Scalar a_;
    Scalar b_;
};

// Coincidence of two points of the projective line; equivalent to the 2x2
// determinant of their homogeneous pairs vanishing.
inline bool columns_proportional(const ProjectiveLinePoint& p, const ProjectiveLinePoint& q) {
    return p == q;
}

inline bool pairs_proportional(const Scalar& a0, const Scalar& b0, const Scalar& a1,
                               const Scalar& b1) {
    return a0 * b1 - b0 * a1 == 0;
}

// The unique projective transform taking three pairwise distinct points
// to three others is built from p3 = lambda p1 + mu p2, which fixes the
// column scales of [p1 | p2].
inline Mat projective_transform_through(const ProjectiveLinePoint& p1,
                                        const ProjectiveLinePoint& p2,
                                        const ProjectiveLinePoint& p3) {
    const Scalar d = p1.a() * p2.b() - p1.b() * p2.a();
    const Scalar lambda = (p3.a() * p2.b() - p3.b() * p2.a()) / d;
    const Scalar mu = (p1.a() * p3.b() - p1.b() * p3.a()) / d;
    Mat h(2, 2);
    h(0, 0) = lambda * p1.a();
    h(1, 0) = lambda * p1.b();
    h(0, 1) = mu * p2.a();
    h(1, 1) = mu * p2.b();
    return h;
}

inline Mat inverse2(const Mat& m) {
    const Scalar d = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (d == 0) {
        throw validation_error("RankDeficient", "singular 2 x 2 matrix");
    }
    Mat inv(2, 2);
    inv(0, 0) = m(1, 1) / d;
    inv(0, 1) = -m(0, 1) / d;
    inv(1, 0) = -m(1, 0) / d;
    inv(1, 1) = m(0, 0) / d;
    return inv;
}

inline ProjectiveLinePoint apply_transform(const Mat& g, const ProjectiveLinePoint& p) {
    return ProjectiveLinePoint(g(0, 0) * p.a() + g(0, 1) * p.b(),
                               g(1, 0) * p.a() + g(1, 1) * p.b());
}

} // namespace torix

#endif
