#pragma once

// Dense linear algebra over Scalar: elimination, kernels, pseudo-reflection
// recognition, centralizer dimensions and spectrum verification against
// caller-supplied eigenvalues. There is no eigensolver; every spectral claim
// is checked, never computed.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rigmon/scalar.hpp"

namespace rigmon {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

class SingularMatrix : public LinalgError {
 public:
  SingularMatrix() : LinalgError("matrix is singular") {}
};

using Vector = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(ScalarField field, std::size_t rows, std::size_t cols);

  static Matrix zero(ScalarField field, std::size_t n) { return Matrix(field, n, n); }
  static Matrix identity(ScalarField field, std::size_t n);
  static Matrix scalar(ScalarField field, std::size_t n, const Scalar& value);
  static Matrix diagonal(ScalarField field, const Vector& entries);
  static Matrix from_rows(ScalarField field, const std::vector<Vector>& rows);
  static Matrix from_columns(ScalarField field, const std::vector<Vector>& columns);
  static Matrix parse(ScalarField field, const std::vector<std::vector<std::string>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_; }  // for square matrices
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  ScalarField field() const { return field_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_column(std::size_t j, const Vector& v);

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend Vector operator*(const Matrix& a, const Vector& v);
  Matrix operator-() const;

  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const;
  Matrix inverse() const;  // throws SingularMatrix
  Matrix pow(long exponent) const;
  Scalar trace() const;
  Scalar determinant() const;
  // Sub-block copy.
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;

  bool is_zero() const;
  bool is_identity() const;
  // The c with M == c*I, if any.
  std::optional<Scalar> as_scalar() const;

  std::vector<std::vector<std::string>> render() const;
  std::string to_string() const;

 private:
  ScalarField field_ = ScalarField::exact(1);
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

// Reduced row echelon form and its pivot columns.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};
Echelon row_reduce(const Matrix& m);

std::size_t rank(const Matrix& m);
std::vector<Vector> kernel_basis(const Matrix& m);
// Solve A x = b; nullopt if inconsistent. Returns one solution.
std::optional<Vector> solve(const Matrix& a, const Vector& b);
// Vertical concatenation of equally wide matrices.
Matrix stack(const std::vector<Matrix>& blocks);

// M = I - u v^T. For the standard form v = e_e (selector) is set and the
// general row vector is empty; otherwise `row` holds v.
struct RankOneDecomposition {
  Vector u;
  std::optional<std::size_t> selector;  // 0-based index e of the standard row
  Vector row;                           // general v when no selector applies
  Scalar special_eigenvalue;

  Matrix reconstruct() const;
};

// Pseudo-reflection with special eigenvalue det(M) != 1; nullopt otherwise.
// Throws SingularMatrix for singular input.
std::optional<RankOneDecomposition> is_pseudo_reflection(const Matrix& m);

// Dimension of {B : MB = BM}, via the rank of the m^2 x m^2 Sylvester matrix.
std::size_t centralizer_dim(const Matrix& m);

struct SpectrumClaim {
  Scalar value;
  std::size_t multiplicity;
};

struct SpectrumReport {
  bool ok = false;
  bool annihilated = false;  // prod (M - lambda I) == 0
  std::vector<std::size_t> kernel_dims;
  std::string detail;
};

// True iff prod_lambda (M - lambda I) = 0 and dim ker(M - lambda I) equals
// each claimed multiplicity. Throws LinalgError if multiplicities do not sum
// to the dimension or the listed eigenvalues are not distinct.
SpectrumReport verify_semisimple_spectrum(const Matrix& m, const std::vector<SpectrumClaim>& spectrum);

// Kernel of M - lambda I, each vector scaled so its first nonzero entry is 1,
// ordered by that position.
std::vector<Vector> eigenspace_basis(const Matrix& m, const Scalar& lambda);

// Block layout entries: a zero block, c*I (square blocks only), or a matrix.
struct ZeroBlock {};
struct ScalarBlock {
  Scalar value;
};
using Block = std::variant<ZeroBlock, ScalarBlock, Matrix>;

Matrix block_assemble(ScalarField field, const std::vector<std::size_t>& row_sizes,
                      const std::vector<std::size_t>& col_sizes, const std::vector<std::vector<Block>>& grid);
Matrix direct_sum(const std::vector<Matrix>& blocks);

// Solve A = X_1 ... X_l with X_i = I - v_i e_{c_i}^T, c_i = directions[i]
// (0-based, pairwise distinct); each X_i is checked to be a pseudo-reflection
// with special eigenvalue eigenvalues[i]. Throws LinalgError on failure.
std::vector<RankOneDecomposition> factor_pseudo_reflections(const Matrix& a,
                                                            const std::vector<std::size_t>& directions,
                                                            const Vector& eigenvalues);

// Product of a list of square matrices (identity of size n when empty).
Matrix product(ScalarField field, std::size_t n, const std::vector<Matrix>& factors);

}  // namespace rigmon
