#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace daen {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& storage() const noexcept { return data_; }

    Matrix transpose() const;
    std::string shape_string() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// a * b^T; both operands walked along contiguous rows.
Matrix matmul_bt(const Matrix& a, const Matrix& b);
// a^T * b
Matrix matmul_at(const Matrix& a, const Matrix& b);
// m * v
Vector matvec(const Matrix& m, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);

// Adds `bias` to every row of `m` in place.
void add_row_bias(Matrix& m, std::span<const double> bias);
// Column sums (sum over rows).
Vector column_sums(const Matrix& m);

// Saturates at the doubles adjacent to 0 and 1, never reaching either.
double sigmoid(double x) noexcept;
Vector sigmoid(std::span<const double> v);
void sigmoid_inplace(std::span<double> v) noexcept;

bool all_finite(std::span<const double> v) noexcept;

// Stacks equally sized vectors as the rows of a matrix.
Matrix stack_rows(std::span<const Vector> rows);

// xoshiro256** seeded through splitmix64. Identical seed gives an identical
// stream on every platform; doubles are built from the top 53 bits.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() noexcept;
    // Uniform on [0, 1).
    double uniform() noexcept;
    // Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    // Standard normal via Box-Muller (no cached second variate).
    double normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
};

// Entries i.i.d. uniform on +-4*sqrt(6/(rows+cols)) (sigmoid-scaled Glorot).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, SeededRng& rng);
double glorot_bound(std::size_t rows, std::size_t cols) noexcept;

using ScalarFunction = std::function<double(std::span<const double>)>;

// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h for every coordinate.
// Throws std::domain_error if any evaluation is non-finite.
Vector finite_diff_gradient(const ScalarFunction& f, std::span<const double> at, double h);

}  // namespace daen
