#pragma once

// Dense exact linear algebra over FieldElement. Module dimensions in this
// library stay below a few hundred, so dense storage with zero-skipping
// products is adequate; inverses split into connected blocks first.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "uqr/error.hpp"
#include "uqr/qscalar.hpp"

namespace uqr {

using Vector = std::vector<FieldElement>;

inline bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const FieldElement& x) { return x.is_zero(); });
}

inline Vector operator+(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
    return r;
}
inline Vector operator-(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}
inline Vector operator*(const FieldElement& c, const Vector& v) {
    Vector r(v.size());
    if (c.is_zero()) return r;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) r[k] = c * v[k];
    return r;
}
inline Vector bar(const Vector& v) {
    Vector r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].bar();
    return r;
}
inline Vector unit_vector(std::size_t n, std::size_t k) {
    Vector r(n);
    r[k] = FieldElement::one();
    return r;
}

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = FieldElement::one();
        return m;
    }
    static Matrix diagonal(const Vector& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
        return m;
    }
    /// Columns given as vectors of equal length.
    static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const FieldElement& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector column(std::size_t c) const {
        Vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }
    void set_column(std::size_t c, const Vector& v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }
    Vector row(std::size_t r) const { return Vector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const FieldElement& x) { return x.is_zero(); });
    }
    std::size_t nonzeros() const {
        return static_cast<std::size_t>(
            std::count_if(data_.begin(), data_.end(), [](const FieldElement& x) { return !x.is_zero(); }));
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        std::vector<std::vector<std::size_t>> nz(b.rows_);
        for (std::size_t k = 0; k < b.rows_; ++k)
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!b(k, j).is_zero()) nz[k].push_back(j);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& x = a(i, k);
                if (x.is_zero()) continue;
                for (auto j : nz[k]) r(i, j) += x * b(k, j);
            }
        return r;
    }
    friend Vector operator*(const Matrix& a, const Vector& v) {
        if (a.cols_ != v.size()) throw DomainError("matrix-vector shape mismatch");
        Vector r(a.rows_);
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (v[k].is_zero()) continue;
            for (std::size_t i = 0; i < a.rows_; ++i)
                if (!a(i, k).is_zero()) r[i] += a(i, k) * v[k];
        }
        return r;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k)
            if (!b.data_[k].is_zero()) r.data_[k] += b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k)
            if (!b.data_[k].is_zero()) r.data_[k] -= b.data_[k];
        return r;
    }
    friend Matrix operator*(const FieldElement& c, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < r.data_.size(); ++k)
            if (!a.data_[k].is_zero()) r.data_[k] = c * a.data_[k];
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    /// Entrywise q -> q^{-1}.
    Matrix bar() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].bar();
        return r;
    }
    Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        Matrix r(rs.size(), cs.size());
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
        return r;
    }

private:
    void require_same_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw DomainError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FieldElement> data_;
};

/// A (x) B with A's index major.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto& x = a(i, j);
            if (x.is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_zero()) r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
    return r;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t k = 0; k < b.size(); ++k)
            if (!b[k].is_zero()) r[i * b.size() + k] = a[i] * b[k];
    }
    return r;
}

/// Permutation matrix of v (x) w -> w (x) v for dim v = m, dim w = n.
inline Matrix flip_matrix(std::size_t m, std::size_t n) {
    Matrix r(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < n; ++k) r(k * m + i, i * n + k) = FieldElement::one();
    return r;
}

namespace detail {

// Gauss-Jordan on a square block; returns nullopt if singular.
inline std::optional<Matrix> invert_dense(Matrix a) {
    const std::size_t n = a.rows();
    Matrix inv = Matrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r)
            if (!a(r, c).is_zero() && (piv == n || a(r, c).weight() < a(piv, c).weight())) piv = r;
        if (piv == n) return std::nullopt;
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        const FieldElement p = a(c, c).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            if (!a(c, j).is_zero()) a(c, j) *= p;
            if (!inv(c, j).is_zero()) inv(c, j) *= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            const FieldElement f = a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                if (!a(c, j).is_zero()) a(r, j) -= f * a(c, j);
                if (!inv(c, j).is_zero()) inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

} // namespace detail

/// Exact inverse. Rows and columns are grouped into connected blocks of the
/// sparsity graph and each block is inverted separately.
inline std::optional<Matrix> try_inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw DomainError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    // union-find over rows (0..n-1) and columns (n..2n-1)
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!a(i, j).is_zero()) parent[find(i)] = find(n + j);
    std::vector<std::vector<std::size_t>> block_rows(2 * n), block_cols(2 * n);
    for (std::size_t i = 0; i < n; ++i) block_rows[find(i)].push_back(i);
    for (std::size_t j = 0; j < n; ++j) block_cols[find(n + j)].push_back(j);
    Matrix inv(n, n);
    for (std::size_t b = 0; b < 2 * n; ++b) {
        const auto& rs = block_rows[b];
        const auto& cs = block_cols[b];
        if (rs.size() != cs.size()) return std::nullopt;
        if (rs.empty()) continue;
        auto blk = detail::invert_dense(a.submatrix(rs, cs));
        if (!blk) return std::nullopt;
        // inverse maps row-space indices back to column indices
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = 0; j < rs.size(); ++j) inv(cs[i], rs[j]) = (*blk)(i, j);
    }
    return inv;
}

inline Matrix inverse(const Matrix& a) {
    auto r = try_inverse(a);
    if (!r) throw DomainError("matrix is singular");
    return *r;
}

/// Incremental row-echelon basis of a growing set of vectors. Tracks, for
/// every reduced row, its expression in terms of the accepted inputs, so
/// coordinates of any vector in the span can be recovered.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

    /// Adds v if independent of the accepted vectors; returns whether it was added.
    bool add(const Vector& v) {
        auto [rem, combo] = reduce(v);
        const auto piv = first_nonzero(rem);
        if (!piv) return false;
        const std::size_t k = rows_.size();
        // rem = v - sum combo_j * accepted_j  (combo over accepted indices)
        Vector expr(k + 1);
        for (std::size_t j = 0; j < k; ++j) expr[j] = -combo[j];
        expr[k] = FieldElement::one();
        const FieldElement inv = rem[*piv].inverse();
        rows_.push_back(inv * rem);
        exprs_.push_back(inv * expr);
        pivots_.push_back(*piv);
        for (auto& e : exprs_) e.resize(k + 1);
        return true;
    }

    /// Coefficients c with v = sum c_j accepted_j, or nullopt if v is outside the span.
    std::optional<Vector> coordinates(const Vector& v) const {
        auto [rem, combo] = reduce(v);
        if (first_nonzero(rem)) return std::nullopt;
        return combo;
    }

    bool contains(const Vector& v) const { return !first_nonzero(reduce(v).first); }

private:
    static std::optional<std::size_t> first_nonzero(const Vector& v) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!v[k].is_zero()) return k;
        return std::nullopt;
    }

    // Returns (remainder, coefficients over accepted vectors).
    std::pair<Vector, Vector> reduce(const Vector& v) const {
        Vector rem = v;
        Vector combo(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const FieldElement f = rem[pivots_[r]];
            if (f.is_zero()) continue;
            for (std::size_t k = 0; k < dim_; ++k)
                if (!rows_[r][k].is_zero()) rem[k] -= f * rows_[r][k];
            for (std::size_t j = 0; j < exprs_[r].size(); ++j)
                if (!exprs_[r][j].is_zero()) combo[j] += f * exprs_[r][j];
        }
        return {std::move(rem), std::move(combo)};
    }

    std::size_t dim_;
    std::vector<Vector> rows_;  // reduced rows, pivot entry 1
    std::vector<Vector> exprs_; // row_r = sum exprs_[r][j] * accepted_j
    std::vector<std::size_t> pivots_;
};

/// Basis of {x : A x = 0}.
inline std::vector<Vector> nullspace(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Matrix r = a;
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t piv = m;
        for (std::size_t i = row; i < m; ++i)
            if (!r(i, c).is_zero() && (piv == m || r(i, c).weight() < r(piv, c).weight())) piv = i;
        if (piv == m) continue;
        if (piv != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(r(piv, j), r(row, j));
        const FieldElement p = r(row, c).inverse();
        for (std::size_t j = c; j < n; ++j)
            if (!r(row, j).is_zero()) r(row, j) *= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || r(i, c).is_zero()) continue;
            const FieldElement f = r(i, c);
            for (std::size_t j = c; j < n; ++j)
                if (!r(row, j).is_zero()) r(i, j) -= f * r(row, j);
        }
        pivot_cols.push_back(c);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vector x(n);
        x[f] = FieldElement::one();
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) x[pivot_cols[k]] = -r(k, f);
        basis.push_back(std::move(x));
    }
    return basis;
}

inline std::size_t rank(const Matrix& a) { return a.cols() - nullspace(a).size(); }

/// Sparse linear system sum_j A_ij x_j = b_i given as rows of (column, coefficient).
/// solution is set only when the system is consistent with a unique solution;
/// otherwise consistent / free_dims say what went wrong.
struct SparseSystemResult {
    std::optional<Vector> solution;
    std::size_t free_dims = 0;
    bool consistent = true;
};

inline SparseSystemResult solve_sparse_system(std::vector<std::vector<std::pair<std::size_t, FieldElement>>> rows,
                                              std::vector<FieldElement> rhs, std::size_t unknowns) {
    // Gaussian elimination with rows stored sparsely as sorted (col, value) lists.
    using Row = std::vector<std::pair<std::size_t, FieldElement>>;
    auto axpy = [](const Row& a, const FieldElement& f, const Row& b) {
        // a - f * b
        Row out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                out.push_back({b[j].first, -(f * b[j].second)});
                ++j;
            } else {
                FieldElement v = a[i].second - f * b[j].second;
                if (!v.is_zero()) out.push_back({a[i].first, std::move(v)});
                ++i;
                ++j;
            }
        }
        return out;
    };
    for (auto& r : rows) {
        std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        Row merged;
        for (auto& e : r) {
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(e);
            if (merged.back().second.is_zero()) merged.pop_back();
        }
        r = std::move(merged);
    }
    // pivot rows by column
    std::vector<std::optional<std::size_t>> pivot_row(unknowns);
    std::vector<Row> prow;
    std::vector<FieldElement> prhs;
    SparseSystemResult res;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Row r = std::move(rows[k]);
        FieldElement b = rhs[k];
        // reduce against existing pivots (pivot rows are normalized, pivot = first entry)
        bool changed = true;
        while (changed && !r.empty()) {
            changed = false;
            for (std::size_t idx = 0; idx < r.size(); ++idx) {
                const auto col = r[idx].first;
                if (!pivot_row[col]) continue;
                const auto p = *pivot_row[col];
                const FieldElement f = r[idx].second;
                r = axpy(r, f, prow[p]);
                b -= f * prhs[p];
                changed = true;
                break;
            }
        }
        if (r.empty()) {
            if (!b.is_zero()) res.consistent = false;
            continue;
        }
        // choose the cheapest entry as pivot
        std::size_t best = 0;
        for (std::size_t idx = 1; idx < r.size(); ++idx)
            if (r[idx].second.weight() < r[best].second.weight()) best = idx;
        const auto col = r[best].first;
        const FieldElement inv = r[best].second.inverse();
        for (auto& e : r) e.second *= inv;
        b *= inv;
        // eliminate this column from existing pivot rows to keep them reduced
        for (std::size_t p = 0; p < prow.size(); ++p) {
            auto it = std::find_if(prow[p].begin(), prow[p].end(), [&](const auto& e) { return e.first == col; });
            if (it == prow[p].end()) continue;
            const FieldElement f = it->second;
            prow[p] = axpy(prow[p], f, r);
            prhs[p] -= f * b;
        }
        pivot_row[col] = prow.size();
        prow.push_back(std::move(r));
        prhs.push_back(std::move(b));
    }
    res.free_dims = unknowns - prow.size();
    if (!res.consistent || res.free_dims != 0) return res;
    Vector x(unknowns);
    for (std::size_t col = 0; col < unknowns; ++col) {
        const auto p = *pivot_row[col];
        // fully reduced: row p = x_col + (no other pivot columns) ; all columns are pivots here
        x[col] = prhs[p];
    }
    res.solution = std::move(x);
    return res;
}

} // namespace uqr
